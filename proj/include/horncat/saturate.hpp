#pragma once

// Deductive closure of edge sets under a Horn theory without equality
// (semi-naive saturation with an optional OpenMP-parallel match loop, and a
// plain naive-iteration reference), free models, and reflection into models
// of theories with equality by merge-and-resaturate.

#include <optional>

#include "horncat/theory.hpp"

namespace horncat {

struct TraceStep {
    std::size_t axiom_index;
    std::map<VariableId, ElementId> valuation;
    Edge produced;
};

struct SaturationTrace {
    std::vector<TraceStep> steps;
    EdgeSet final_edges;
};

struct ClosureOptions {
    bool parallel = true; // the result is identical either way
};

// True iff every axiom instance with premises inside `edges` has its
// conclusion inside `edges`. Throws EqualityAxiomPresent.
bool is_T_relation(const Theory& tminus, const Carrier& s, const EdgeSet& edges);

// First failing axiom instance of is_T_relation, if any, in deterministic
// scan order. The produced Edge is the missing conclusion.
std::optional<TraceStep> find_closure_violation(const Theory& tminus, const Carrier& s,
                                                const EdgeSet& edges);

// Least T-relation on `s` containing `seed`. Tracing forces the serial path.
EdgeSet closure(const Theory& tminus, const Carrier& s, const EdgeSet& seed,
                const ClosureOptions& opts = {}, SaturationTrace* trace = nullptr);

// Serial reference implementation: repeatedly scans every axiom under every
// valuation and adds missing conclusions until nothing changes. Kept as the
// oracle the saturation engine is tested against (and benchmarked against).
EdgeSet closure_naive(const Theory& tminus, const Carrier& s, const EdgeSet& seed);

// Same carrier, closed edges; the identity function is the reflection of X
// into the models of tminus.
Structure free_model(const Theory& tminus, const Structure& x, const ClosureOptions& opts = {});

struct ReflectionResult {
    Morphism quotient; // from the input structure onto the reflected model
    Structure model;
};

// Reflection into the models of a theory that may use equality: saturate
// under the stripped theory, merge every pair forced equal (union-find,
// lexicographically least representative), quotient, and repeat until no
// merges occur.
ReflectionResult reflect_with_equality(const Theory& t, const Structure& x,
                                       const ClosureOptions& opts = {});

} // namespace horncat
