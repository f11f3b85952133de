#include "horncat/saturate.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace horncat {

namespace {

// ---------------------------------------------------------------------------
// Interned representation. An edge is a flat int vector [symbol, arg...];
// elements and symbols are indices into sorted name tables.

using IEdge = std::vector<std::int32_t>;

struct IEdgeHash {
    std::size_t operator()(const IEdge& e) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int32_t v : e) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using IEdgeSet = std::unordered_set<IEdge, IEdgeHash>;

struct Pattern {
    std::int32_t sym = -1; // -1 marks the equality conclusion
    std::vector<std::int32_t> vars;
};

struct CompiledAxiom {
    std::size_t index = 0; // position in the theory
    bool equality = false;
    std::vector<Pattern> premises; // in premise-set order
    Pattern conclusion;
    std::vector<std::string> var_names;       // variable index -> name
    std::vector<std::int32_t> unbound_concl;  // conclusion vars not in any premise
    // match_order[j]: premise visit order when premise j is the frontier slot,
    // chosen greedily by overlap with already-bound variables.
    std::vector<std::vector<std::size_t>> match_order;
};

struct Kernel {
    std::vector<ElementId> elems;  // sorted carrier
    std::map<ElementId, std::int32_t> elemIndex;
    std::vector<SymbolId> syms;    // sorted signature symbols
    std::map<SymbolId, std::int32_t> symIndex;
    std::vector<CompiledAxiom> axioms;

    Kernel(const Theory& t, const Carrier& s) {
        elems.assign(s.begin(), s.end());
        for (std::size_t i = 0; i < elems.size(); ++i)
            elemIndex[elems[i]] = static_cast<std::int32_t>(i);
        for (const auto& [sym, arity] : t.signature.symbols) {
            (void)arity;
            symIndex[sym] = static_cast<std::int32_t>(syms.size());
            syms.push_back(sym);
        }
        for (std::size_t i = 0; i < t.axioms.size(); ++i) compile(t.axioms[i], i);
    }

    void compile(const Formula& ax, std::size_t index) {
        CompiledAxiom ca;
        ca.index = index;
        ca.equality = (ax.conclusion.symbol == kEquals);
        std::map<VariableId, std::int32_t> varIndex;
        auto var = [&](const VariableId& v) {
            auto it = varIndex.find(v);
            if (it != varIndex.end()) return it->second;
            std::int32_t idx = static_cast<std::int32_t>(ca.var_names.size());
            varIndex.emplace(v, idx);
            ca.var_names.push_back(v);
            return idx;
        };
        for (const Edge& p : ax.premises) {
            Pattern pat;
            pat.sym = symIndex.at(p.symbol);
            for (const VariableId& v : p.args) pat.vars.push_back(var(v));
            ca.premises.push_back(std::move(pat));
        }
        std::vector<bool> inPremise(ca.var_names.size(), false);
        for (const Pattern& p : ca.premises)
            for (std::int32_t v : p.vars) inPremise[static_cast<std::size_t>(v)] = true;
        ca.conclusion.sym = ca.equality ? -1 : symIndex.at(ax.conclusion.symbol);
        for (const VariableId& v : ax.conclusion.args) {
            std::int32_t idx = var(v);
            ca.conclusion.vars.push_back(idx);
            if (static_cast<std::size_t>(idx) >= inPremise.size() ||
                !inPremise[static_cast<std::size_t>(idx)]) {
                if (std::find(ca.unbound_concl.begin(), ca.unbound_concl.end(), idx) ==
                    ca.unbound_concl.end())
                    ca.unbound_concl.push_back(idx);
            }
        }
        // Per-slot join orders.
        for (std::size_t j = 0; j < ca.premises.size(); ++j) {
            std::vector<std::size_t> order{j};
            std::set<std::int32_t> bound(ca.premises[j].vars.begin(), ca.premises[j].vars.end());
            std::vector<bool> used(ca.premises.size(), false);
            used[j] = true;
            while (order.size() < ca.premises.size()) {
                std::size_t best = ca.premises.size();
                int bestShared = -1;
                for (std::size_t p = 0; p < ca.premises.size(); ++p) {
                    if (used[p]) continue;
                    int shared = 0;
                    for (std::int32_t v : ca.premises[p].vars)
                        if (bound.count(v)) ++shared;
                    if (shared > bestShared) {
                        bestShared = shared;
                        best = p;
                    }
                }
                used[best] = true;
                order.push_back(best);
                for (std::int32_t v : ca.premises[best].vars) bound.insert(v);
            }
            ca.match_order.push_back(std::move(order));
        }
        axioms.push_back(std::move(ca));
    }

    IEdge intern(const Edge& e) const {
        IEdge out;
        out.reserve(e.args.size() + 1);
        out.push_back(symIndex.at(e.symbol));
        for (const ElementId& a : e.args) out.push_back(elemIndex.at(a));
        return out;
    }

    Edge extern_edge(const IEdge& e) const {
        Edge out;
        out.symbol = syms[static_cast<std::size_t>(e[0])];
        for (std::size_t i = 1; i < e.size(); ++i)
            out.args.push_back(elems[static_cast<std::size_t>(e[i])]);
        return out;
    }
};

// Edge lists indexed by symbol, for premise matching.
struct SymbolIndex {
    std::vector<std::vector<IEdge>> bySym;

    explicit SymbolIndex(std::size_t nsyms) : bySym(nsyms) {}
    void add(const IEdge& e) { bySym[static_cast<std::size_t>(e[0])].push_back(e); }
    const std::vector<IEdge>& of(std::int32_t sym) const {
        return bySym[static_cast<std::size_t>(sym)];
    }
};

// Binds `pat` against `edge`, recording newly bound variables in `touched`.
bool unify(const Pattern& pat, const IEdge& edge, std::vector<std::int32_t>& binding,
           std::vector<std::int32_t>& touched) {
    std::size_t before = touched.size();
    for (std::size_t i = 0; i < pat.vars.size(); ++i) {
        std::int32_t v = pat.vars[i];
        std::int32_t val = edge[i + 1];
        std::int32_t& slot = binding[static_cast<std::size_t>(v)];
        if (slot < 0) {
            slot = val;
            touched.push_back(v);
        } else if (slot != val) {
            while (touched.size() > before) {
                binding[static_cast<std::size_t>(touched.back())] = -1;
                touched.pop_back();
            }
            return false;
        }
    }
    return true;
}

void undo(std::vector<std::int32_t>& binding, std::vector<std::int32_t>& touched,
          std::size_t mark) {
    while (touched.size() > mark) {
        binding[static_cast<std::size_t>(touched.back())] = -1;
        touched.pop_back();
    }
}

// Emits every grounding of the conclusion consistent with `binding`,
// enumerating unbound conclusion variables over the whole carrier.
template <typename Emit>
void emit_conclusions(const CompiledAxiom& ax, std::vector<std::int32_t>& binding,
                      std::size_t nelems, Emit&& emit) {
    const auto& unbound = ax.unbound_concl;
    if (unbound.empty()) {
        emit(binding);
        return;
    }
    if (nelems == 0) return;
    std::vector<std::size_t> digits(unbound.size(), 0);
    do {
        for (std::size_t i = 0; i < unbound.size(); ++i)
            binding[static_cast<std::size_t>(unbound[i])] = static_cast<std::int32_t>(digits[i]);
        emit(binding);
    } while (detail::next_odometer(digits, nelems));
    for (std::int32_t v : unbound) binding[static_cast<std::size_t>(v)] = -1;
}

IEdge ground_conclusion(const CompiledAxiom& ax, const std::vector<std::int32_t>& binding) {
    IEdge e;
    e.reserve(ax.conclusion.vars.size() + 1);
    e.push_back(ax.conclusion.sym);
    for (std::int32_t v : ax.conclusion.vars) e.push_back(binding[static_cast<std::size_t>(v)]);
    return e;
}

// Joins the remaining premises (in `order`, from position `pos`) against
// `total`, then emits conclusion groundings.
template <typename Emit>
void join_rest(const Kernel& k, const CompiledAxiom& ax, const std::vector<std::size_t>& order,
               std::size_t pos, const SymbolIndex& total, std::vector<std::int32_t>& binding,
               Emit&& emit) {
    if (pos == order.size()) {
        emit_conclusions(ax, binding, k.elems.size(), emit);
        return;
    }
    const Pattern& pat = ax.premises[order[pos]];
    std::vector<std::int32_t> touched;
    for (const IEdge& e : total.of(pat.sym)) {
        if (unify(pat, e, binding, touched)) {
            join_rest(k, ax, order, pos + 1, total, binding, emit);
            undo(binding, touched, 0);
        }
    }
}

std::map<VariableId, ElementId> externalize_valuation(const Kernel& k, const CompiledAxiom& ax,
                                                      const std::vector<std::int32_t>& binding) {
    std::map<VariableId, ElementId> out;
    for (std::size_t v = 0; v < ax.var_names.size(); ++v) {
        if (binding[v] >= 0) out[ax.var_names[v]] = k.elems[static_cast<std::size_t>(binding[v])];
    }
    return out;
}

void require_no_equality(const Theory& t) {
    if (uses_equality(t))
        throw EqualityAxiomPresent("theory has equality axioms; strip them first");
}

void require_edges_over(const Theory& t, const Carrier& s, const EdgeSet& edges) {
    Structure tmp{s, edges};
    require_valid(t.signature, tmp);
}

// One frontier task of a semi-naive round: premise `slot` of axiom
// `axiom` is matched against a single delta edge.
struct MatchTask {
    std::size_t axiom;
    std::size_t slot;
    const IEdge* frontier;
};

template <typename Emit>
void run_task(const Kernel& k, const MatchTask& task, const SymbolIndex& total, Emit&& emit) {
    const CompiledAxiom& ax = k.axioms[task.axiom];
    const auto& order = ax.match_order[task.slot];
    std::vector<std::int32_t> binding(ax.var_names.size(), -1);
    std::vector<std::int32_t> touched;
    if (!unify(ax.premises[task.slot], *task.frontier, binding, touched)) return;
    join_rest(k, ax, order, 1, total, binding,
              [&](std::vector<std::int32_t>& b) { emit(ax, b); });
}

} // namespace

std::optional<TraceStep> find_closure_violation(const Theory& tminus, const Carrier& s,
                                                const EdgeSet& edges) {
    require_no_equality(tminus);
    require_edges_over(tminus, s, edges);
    Kernel k(tminus, s);
    IEdgeSet total;
    SymbolIndex index(k.syms.size());
    for (const Edge& e : edges) {
        IEdge ie = k.intern(e);
        if (total.insert(ie).second) index.add(ie);
    }
    std::optional<TraceStep> found;
    for (const CompiledAxiom& ax : k.axioms) {
        std::vector<std::int32_t> binding(ax.var_names.size(), -1);
        auto check = [&](std::vector<std::int32_t>& b) {
            if (found) return;
            IEdge concl = ground_conclusion(ax, b);
            if (!total.count(concl)) {
                found = TraceStep{ax.index, externalize_valuation(k, ax, b),
                                  k.extern_edge(concl)};
            }
        };
        if (ax.premises.empty()) {
            emit_conclusions(ax, binding, k.elems.size(), check);
        } else {
            // Use slot-0 order against the full edge set.
            join_rest(k, ax, ax.match_order[0], 0, index, binding, check);
        }
        if (found) return found;
    }
    return std::nullopt;
}

bool is_T_relation(const Theory& tminus, const Carrier& s, const EdgeSet& edges) {
    return !find_closure_violation(tminus, s, edges).has_value();
}

EdgeSet closure(const Theory& tminus, const Carrier& s, const EdgeSet& seed,
                const ClosureOptions& opts, SaturationTrace* trace) {
    require_no_equality(tminus);
    require_edges_over(tminus, s, seed);
    Kernel k(tminus, s);

    IEdgeSet total;
    SymbolIndex totalIndex(k.syms.size());
    std::vector<IEdge> delta;
    auto insert_new = [&](const IEdge& e) {
        if (total.insert(e).second) {
            totalIndex.add(e);
            delta.push_back(e);
            return true;
        }
        return false;
    };

    for (const Edge& e : seed) insert_new(k.intern(e));
    // Premise-free axioms contribute once, up front.
    for (const CompiledAxiom& ax : k.axioms) {
        if (!ax.premises.empty()) continue;
        std::vector<std::int32_t> binding(ax.var_names.size(), -1);
        emit_conclusions(ax, binding, k.elems.size(), [&](std::vector<std::int32_t>& b) {
            IEdge concl = ground_conclusion(ax, b);
            if (insert_new(concl) && trace)
                trace->steps.push_back(
                    {ax.index, externalize_valuation(k, ax, b), k.extern_edge(concl)});
        });
    }

    const bool serial = trace != nullptr || !opts.parallel;
    while (!delta.empty()) {
        SymbolIndex deltaIndex(k.syms.size());
        for (const IEdge& e : delta) deltaIndex.add(e);
        delta.clear();

        std::vector<MatchTask> tasks;
        for (std::size_t a = 0; a < k.axioms.size(); ++a) {
            const CompiledAxiom& ax = k.axioms[a];
            for (std::size_t j = 0; j < ax.premises.size(); ++j) {
                for (const IEdge& e : deltaIndex.of(ax.premises[j].sym))
                    tasks.push_back({a, j, &e});
            }
        }

#ifdef _OPENMP
        if (!serial && tasks.size() >= 128) {
            int nthreads = omp_get_max_threads();
            std::vector<std::vector<IEdge>> buffers(static_cast<std::size_t>(nthreads));
#pragma omp parallel for schedule(dynamic, 16)
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                auto& buf = buffers[static_cast<std::size_t>(omp_get_thread_num())];
                run_task(k, tasks[t], totalIndex,
                         [&](const CompiledAxiom& ax, std::vector<std::int32_t>& b) {
                             IEdge concl = ground_conclusion(ax, b);
                             if (!total.count(concl)) buf.push_back(std::move(concl));
                         });
            }
            for (const auto& buf : buffers)
                for (const IEdge& e : buf) insert_new(e);
            continue;
        }
#endif
        for (const MatchTask& task : tasks) {
            run_task(k, task, totalIndex,
                     [&](const CompiledAxiom& ax, std::vector<std::int32_t>& b) {
                         IEdge concl = ground_conclusion(ax, b);
                         if (insert_new(concl) && trace)
                             trace->steps.push_back({ax.index, externalize_valuation(k, ax, b),
                                                     k.extern_edge(concl)});
                     });
        }
    }

    EdgeSet out;
    for (const IEdge& e : total) out.insert(k.extern_edge(e));
    if (trace) trace->final_edges = out;
    return out;
}

EdgeSet closure_naive(const Theory& tminus, const Carrier& s, const EdgeSet& seed) {
    require_no_equality(tminus);
    require_edges_over(tminus, s, seed);
    std::vector<ElementId> elems(s.begin(), s.end());
    EdgeSet cur = seed;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Formula& ax : tminus.axioms) {
            std::set<VariableId> varSet = vars_of_set(ax.premises);
            auto cv = vars_of(ax.conclusion);
            varSet.insert(cv.begin(), cv.end());
            std::vector<VariableId> vars(varSet.begin(), varSet.end());
            if (elems.empty()) continue;
            std::vector<std::size_t> idx(vars.size(), 0);
            do {
                std::map<VariableId, ElementId> kappa;
                for (std::size_t i = 0; i < vars.size(); ++i) kappa[vars[i]] = elems[idx[i]];
                bool hold = true;
                for (const Edge& p : ax.premises) {
                    Edge g;
                    g.symbol = p.symbol;
                    for (const VariableId& v : p.args) g.args.push_back(kappa.at(v));
                    if (!cur.count(g)) {
                        hold = false;
                        break;
                    }
                }
                if (!hold) continue;
                Edge c;
                c.symbol = ax.conclusion.symbol;
                for (const VariableId& v : ax.conclusion.args) c.args.push_back(kappa.at(v));
                if (cur.insert(c).second) changed = true;
            } while (detail::next_odometer(idx, elems.size()));
        }
    }
    return cur;
}

Structure free_model(const Theory& tminus, const Structure& x, const ClosureOptions& opts) {
    return Structure{x.carrier, closure(tminus, x.carrier, x.edges, opts)};
}

namespace {

// Union-find over carrier indices, collapsing to the lexicographically least
// element of each class.
struct ElementPartition {
    std::vector<std::int32_t> parent;

    explicit ElementPartition(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void merge(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Elements are indexed in sorted order, so the smaller index is the
        // lexicographically least candidate.
        if (a < b)
            parent[static_cast<std::size_t>(b)] = a;
        else
            parent[static_cast<std::size_t>(a)] = b;
    }
};

} // namespace

ReflectionResult reflect_with_equality(const Theory& t, const Structure& x,
                                       const ClosureOptions& opts) {
    require_valid(t.signature, x);
    Theory tminus = strip_equality(t);

    Structure cur = x;
    FnMap totalMap;
    for (const ElementId& e : x.carrier) totalMap[e] = e;

    while (true) {
        EdgeSet sat = closure(tminus, cur.carrier, cur.edges, opts);

        // Match equality axioms against the saturated edges and collect every
        // pair of distinct elements forced equal.
        Kernel k(t, cur.carrier);
        IEdgeSet total;
        SymbolIndex index(k.syms.size());
        for (const Edge& e : sat) {
            IEdge ie = k.intern(e);
            if (total.insert(ie).second) index.add(ie);
        }
        std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
        for (const CompiledAxiom& ax : k.axioms) {
            if (!ax.equality) continue;
            std::vector<std::int32_t> binding(ax.var_names.size(), -1);
            auto collect = [&](std::vector<std::int32_t>& b) {
                std::int32_t u = b[static_cast<std::size_t>(ax.conclusion.vars[0])];
                std::int32_t v = b[static_cast<std::size_t>(ax.conclusion.vars[1])];
                if (u != v) pairs.emplace_back(u, v);
            };
            if (ax.premises.empty()) {
                emit_conclusions(ax, binding, k.elems.size(), collect);
            } else {
                join_rest(k, ax, ax.match_order[0], 0, index, binding, collect);
            }
        }

        if (pairs.empty()) {
            Structure model{cur.carrier, sat};
            return ReflectionResult{Morphism{x, model, totalMap}, model};
        }

        ElementPartition part(k.elems.size());
        for (auto [u, v] : pairs) part.merge(u, v);
        FnMap q;
        Carrier newCarrier;
        for (std::size_t i = 0; i < k.elems.size(); ++i) {
            const ElementId& rep = k.elems[static_cast<std::size_t>(
                part.find(static_cast<std::int32_t>(i)))];
            q[k.elems[i]] = rep;
            newCarrier.insert(rep);
        }
        cur = Structure{newCarrier, transport_edge_set(q, sat)};
        for (auto& [src, dst] : totalMap) dst = q.at(dst);
        (void)src;
    }
}

} // namespace horncat
