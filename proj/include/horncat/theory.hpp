#pragma once

// Horn formulas and theories, satisfaction, the coproduct-compatibility
// variable condition, and equality stripping.

#include <optional>
#include <vector>

#include "horncat/core.hpp"

namespace horncat {

using VariableId = std::string;

// Premises and conclusions reuse Edge with variables as arguments.
struct Formula {
    EdgeSet premises;  // edges over variables; symbols from the signature
    Edge conclusion;   // symbol from the signature, or "=" with two arguments

    auto operator<=>(const Formula&) const = default;
};

struct Theory {
    Signature signature;
    std::vector<Formula> axioms;

    bool operator==(const Theory&) const = default;
};

std::set<VariableId> vars_of(const Edge& varEdge);
std::set<VariableId> vars_of_set(const EdgeSet& varEdges);

// Formula well-formedness against the theory's signature.
std::vector<std::string> validate_theory(const Theory& t);
void require_valid(const Theory& t);

struct ConditionViolation {
    std::size_t axiom_index;
    int clause; // 1: premises share no variable; 2: conclusion variables escape
    std::string message;
};

// The syntactic condition under which coproduct edge sets need no closure pass:
// (1) any two distinct premises share a variable, and
// (2) conclusion variables are covered by the premises (a single variable if
//     there are no premises).
std::vector<ConditionViolation> check_variable_condition(const Theory& t);

bool satisfies(const Signature& sig, const Structure& x, const Formula& ax);
bool is_model(const Theory& t, const Structure& x);

bool uses_equality(const Theory& t);
// Drops every axiom whose conclusion is the equality symbol.
Theory strip_equality(const Theory& t);

// Alpha-renames variables to v0, v1, ... in order of first occurrence
// (premises in set order, then the conclusion).
Formula normalize_formula(const Formula& f);
std::set<Formula> normalized_axioms(const Theory& t);

// Renames relation symbols throughout signature and axioms.
Theory rename_symbols(const Theory& t, const std::map<SymbolId, SymbolId>& renaming);

} // namespace horncat
