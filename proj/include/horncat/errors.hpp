#pragma once

#include <stdexcept>
#include <string>

namespace horncat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSymbol : Error { using Error::Error; };
struct ArityMismatch : Error { using Error::Error; };
struct ForeignElement : Error { using Error::Error; };
struct EqualityAxiomPresent : Error { using Error::Error; };
struct VariableConditionViolated : Error { using Error::Error; };
struct NotAModel : Error { using Error::Error; };
struct NotVCat : Error { using Error::Error; };
struct TrivialUnit : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace horncat
