#include "horncat/theory.hpp"

#include <algorithm>

namespace horncat {

std::set<VariableId> vars_of(const Edge& varEdge) {
    return {varEdge.args.begin(), varEdge.args.end()};
}

std::set<VariableId> vars_of_set(const EdgeSet& varEdges) {
    std::set<VariableId> out;
    for (const Edge& e : varEdges) out.insert(e.args.begin(), e.args.end());
    return out;
}

std::vector<std::string> validate_theory(const Theory& t) {
    std::vector<std::string> issues;
    for (const auto& [sym, arity] : t.signature.symbols) {
        if (arity < 1) issues.push_back("symbol '" + sym + "' has non-positive arity");
        if (sym == kEquals) issues.push_back("the equality symbol may not appear in a signature");
    }
    for (std::size_t i = 0; i < t.axioms.size(); ++i) {
        const Formula& ax = t.axioms[i];
        auto where = [&] { return "axiom " + std::to_string(i) + ": "; };
        for (const Edge& p : ax.premises) {
            if (p.symbol == kEquals) {
                issues.push_back(where() + "equality may not appear in a premise");
            } else if (!t.signature.contains(p.symbol)) {
                issues.push_back(where() + "premise uses unknown symbol '" + p.symbol + "'");
            } else if (static_cast<int>(p.args.size()) != t.signature.symbols.at(p.symbol)) {
                issues.push_back(where() + "premise arity mismatch for '" + p.symbol + "'");
            }
        }
        const Edge& c = ax.conclusion;
        if (c.symbol == kEquals) {
            if (c.args.size() != 2) issues.push_back(where() + "equality conclusion must be binary");
        } else if (!t.signature.contains(c.symbol)) {
            issues.push_back(where() + "conclusion uses unknown symbol '" + c.symbol + "'");
        } else if (static_cast<int>(c.args.size()) != t.signature.symbols.at(c.symbol)) {
            issues.push_back(where() + "conclusion arity mismatch for '" + c.symbol + "'");
        }
    }
    return issues;
}

void require_valid(const Theory& t) {
    auto issues = validate_theory(t);
    if (!issues.empty()) throw Error("invalid theory: " + issues.front());
}

std::vector<ConditionViolation> check_variable_condition(const Theory& t) {
    std::vector<ConditionViolation> out;
    for (std::size_t i = 0; i < t.axioms.size(); ++i) {
        const Formula& ax = t.axioms[i];
        std::vector<const Edge*> prem;
        for (const Edge& p : ax.premises) prem.push_back(&p);
        for (std::size_t a = 0; a < prem.size(); ++a) {
            for (std::size_t b = a + 1; b < prem.size(); ++b) {
                auto va = vars_of(*prem[a]);
                auto vb = vars_of(*prem[b]);
                bool share = std::any_of(va.begin(), va.end(),
                                         [&](const VariableId& v) { return vb.count(v) > 0; });
                if (!share)
                    out.push_back({i, 1, "axiom " + std::to_string(i) +
                                             ": two premises share no variable"});
            }
        }
        auto cv = vars_of(ax.conclusion);
        if (ax.premises.empty()) {
            if (cv.size() != 1)
                out.push_back({i, 2, "axiom " + std::to_string(i) +
                                         ": empty premises require a single conclusion variable"});
        } else {
            auto pv = vars_of_set(ax.premises);
            for (const VariableId& v : cv) {
                if (!pv.count(v)) {
                    out.push_back({i, 2, "axiom " + std::to_string(i) + ": conclusion variable '" +
                                             v + "' does not occur in the premises"});
                    break;
                }
            }
        }
    }
    return out;
}

namespace {

Edge substitute(const Edge& varEdge, const std::map<VariableId, ElementId>& kappa) {
    Edge out;
    out.symbol = varEdge.symbol;
    out.args.reserve(varEdge.args.size());
    for (const VariableId& v : varEdge.args) out.args.push_back(kappa.at(v));
    return out;
}

} // namespace

bool satisfies(const Signature& sig, const Structure& x, const Formula& ax) {
    (void)sig;
    std::set<VariableId> varSet = vars_of_set(ax.premises);
    auto cv = vars_of(ax.conclusion);
    varSet.insert(cv.begin(), cv.end());
    std::vector<VariableId> vars(varSet.begin(), varSet.end());
    std::vector<ElementId> elems(x.carrier.begin(), x.carrier.end());

    if (elems.empty()) return true; // no valuations exist

    std::vector<std::size_t> idx(vars.size(), 0);
    do {
        std::map<VariableId, ElementId> kappa;
        for (std::size_t i = 0; i < vars.size(); ++i) kappa[vars[i]] = elems[idx[i]];
        bool premisesHold = true;
        for (const Edge& p : ax.premises) {
            if (!x.edges.count(substitute(p, kappa))) {
                premisesHold = false;
                break;
            }
        }
        if (!premisesHold) continue;
        if (ax.conclusion.symbol == kEquals) {
            if (kappa.at(ax.conclusion.args[0]) != kappa.at(ax.conclusion.args[1])) return false;
        } else {
            if (!x.edges.count(substitute(ax.conclusion, kappa))) return false;
        }
    } while (detail::next_odometer(idx, elems.size()));
    return true;
}

bool is_model(const Theory& t, const Structure& x) {
    for (const Formula& ax : t.axioms) {
        if (!satisfies(t.signature, x, ax)) return false;
    }
    return true;
}

bool uses_equality(const Theory& t) {
    return std::any_of(t.axioms.begin(), t.axioms.end(),
                       [](const Formula& ax) { return ax.conclusion.symbol == kEquals; });
}

Theory strip_equality(const Theory& t) {
    Theory out;
    out.signature = t.signature;
    for (const Formula& ax : t.axioms) {
        if (ax.conclusion.symbol != kEquals) out.axioms.push_back(ax);
    }
    return out;
}

Formula normalize_formula(const Formula& f) {
    std::map<VariableId, VariableId> renaming;
    auto canon = [&](const VariableId& v) -> VariableId {
        auto it = renaming.find(v);
        if (it != renaming.end()) return it->second;
        VariableId fresh = "v" + std::to_string(renaming.size());
        renaming.emplace(v, fresh);
        return fresh;
    };
    Formula out;
    for (const Edge& p : f.premises) {
        Edge e;
        e.symbol = p.symbol;
        for (const VariableId& v : p.args) e.args.push_back(canon(v));
        out.premises.insert(std::move(e));
    }
    out.conclusion.symbol = f.conclusion.symbol;
    for (const VariableId& v : f.conclusion.args) out.conclusion.args.push_back(canon(v));
    return out;
}

std::set<Formula> normalized_axioms(const Theory& t) {
    std::set<Formula> out;
    for (const Formula& ax : t.axioms) out.insert(normalize_formula(ax));
    return out;
}

Theory rename_symbols(const Theory& t, const std::map<SymbolId, SymbolId>& renaming) {
    auto rename = [&](const SymbolId& s) -> SymbolId {
        auto it = renaming.find(s);
        return it == renaming.end() ? s : it->second;
    };
    Theory out;
    for (const auto& [sym, arity] : t.signature.symbols) out.signature.symbols[rename(sym)] = arity;
    for (const Formula& ax : t.axioms) {
        Formula f;
        for (Edge p : ax.premises) {
            p.symbol = rename(p.symbol);
            f.premises.insert(std::move(p));
        }
        f.conclusion = ax.conclusion;
        if (f.conclusion.symbol != kEquals) f.conclusion.symbol = rename(f.conclusion.symbol);
        out.axioms.push_back(std::move(f));
    }
    return out;
}

} // namespace horncat
