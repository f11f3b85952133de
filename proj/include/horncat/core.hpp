#pragma once

// Relational signatures, edges, finite structures and their morphisms,
// together with the edge transport operations h.e, h.E and h^-1[E'].

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "horncat/errors.hpp"

namespace horncat {

using SymbolId = std::string;
using ElementId = std::string;
using Carrier = std::set<ElementId>;

// The reserved equality symbol. Never a signature key; only valid as the
// conclusion symbol of a Horn formula.
inline const SymbolId kEquals = "=";

struct Signature {
    std::map<SymbolId, int> symbols; // symbol -> arity (>= 1)

    bool contains(const SymbolId& s) const { return symbols.count(s) > 0; }
    int arity(const SymbolId& s) const;

    bool operator==(const Signature&) const = default;
};

struct Edge {
    SymbolId symbol;
    std::vector<ElementId> args;

    auto operator<=>(const Edge&) const = default;
};

using EdgeSet = std::set<Edge>;

struct Structure {
    Carrier carrier;
    EdgeSet edges;

    bool operator==(const Structure&) const = default;
};

// Total function between carriers, as a finite table.
using FnMap = std::map<ElementId, ElementId>;

struct Morphism {
    Structure dom;
    Structure cod;
    FnMap map;

    bool operator==(const Morphism&) const = default;
};

struct ValidationIssue {
    enum class Kind { UnknownSymbol, ArityMismatch, ForeignElement };
    Kind kind;
    Edge edge;
    std::string message;
};

// Checks the Structure invariants against a signature; empty result means ok.
std::vector<ValidationIssue> validate_structure(const Signature& sig, const Structure& x);

// Throws the issue-specific error for the first violation, if any.
void require_valid(const Signature& sig, const Structure& x);

// Throws Error/ForeignElement unless `map` is total on `dom` with values in `cod`.
void require_function(const FnMap& map, const Carrier& dom, const Carrier& cod);

Edge transport_edge(const FnMap& fn, const Edge& e);
EdgeSet transport_edge_set(const FnMap& fn, const EdgeSet& edges);

// All edges over `carrier` formable from `sig` (the full relation).
EdgeSet enumerate_edges(const Signature& sig, const Carrier& carrier);

// Largest edge set over `dom` whose forward image lies in `codEdges`.
EdgeSet preimage_edge_set(const Signature& sig, const FnMap& fn, const Carrier& dom,
                          const EdgeSet& codEdges);

bool is_pi_morphism(const Signature& sig, const Morphism& h);
bool reflects_relations(const Signature& sig, const Morphism& h);

Morphism identity(const Structure& x);
// g after f; requires cod(f) == dom(g) as structures.
Morphism compose(const Morphism& g, const Morphism& f);

bool is_injective(const Morphism& h);
bool is_surjective(const Morphism& h);
bool is_bijective(const Morphism& h);

namespace detail {

// Advances a fixed-base counter; returns false once it wraps around.
inline bool next_odometer(std::vector<std::size_t>& digits, std::size_t base) {
    for (std::size_t p = digits.size(); p > 0; --p) {
        if (++digits[p - 1] < base) return true;
        digits[p - 1] = 0;
    }
    return false;
}

} // namespace detail

} // namespace horncat
