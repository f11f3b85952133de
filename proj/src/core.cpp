#include "horncat/core.hpp"

#include <algorithm>
#include <sstream>

namespace horncat {

namespace {

std::string edge_to_string(const Edge& e) {
    std::ostringstream os;
    os << e.symbol << "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ",";
        os << e.args[i];
    }
    os << ")";
    return os.str();
}

} // namespace

int Signature::arity(const SymbolId& s) const {
    auto it = symbols.find(s);
    if (it == symbols.end()) throw UnknownSymbol("unknown relation symbol: " + s);
    return it->second;
}

std::vector<ValidationIssue> validate_structure(const Signature& sig, const Structure& x) {
    std::vector<ValidationIssue> issues;
    for (const Edge& e : x.edges) {
        auto it = sig.symbols.find(e.symbol);
        if (it == sig.symbols.end()) {
            issues.push_back({ValidationIssue::Kind::UnknownSymbol, e,
                              "unknown symbol in edge " + edge_to_string(e)});
            continue;
        }
        if (static_cast<int>(e.args.size()) != it->second) {
            issues.push_back({ValidationIssue::Kind::ArityMismatch, e,
                              "edge " + edge_to_string(e) + " has " +
                                  std::to_string(e.args.size()) + " arguments, symbol arity is " +
                                  std::to_string(it->second)});
            continue;
        }
        for (const ElementId& a : e.args) {
            if (!x.carrier.count(a)) {
                issues.push_back({ValidationIssue::Kind::ForeignElement, e,
                                  "edge " + edge_to_string(e) + " uses element '" + a +
                                      "' outside the carrier"});
                break;
            }
        }
    }
    return issues;
}

void require_valid(const Signature& sig, const Structure& x) {
    auto issues = validate_structure(sig, x);
    if (issues.empty()) return;
    const ValidationIssue& v = issues.front();
    switch (v.kind) {
        case ValidationIssue::Kind::UnknownSymbol: throw UnknownSymbol(v.message);
        case ValidationIssue::Kind::ArityMismatch: throw ArityMismatch(v.message);
        case ValidationIssue::Kind::ForeignElement: throw ForeignElement(v.message);
    }
}

void require_function(const FnMap& map, const Carrier& dom, const Carrier& cod) {
    if (map.size() != dom.size())
        throw Error("function table has " + std::to_string(map.size()) +
                    " entries, domain has " + std::to_string(dom.size()));
    for (const auto& [k, v] : map) {
        if (!dom.count(k)) throw ForeignElement("function defined on '" + k + "' outside domain");
        if (!cod.count(v)) throw ForeignElement("function maps '" + k + "' to '" + v + "' outside codomain");
    }
}

Edge transport_edge(const FnMap& fn, const Edge& e) {
    Edge out;
    out.symbol = e.symbol;
    out.args.reserve(e.args.size());
    for (const ElementId& a : e.args) {
        auto it = fn.find(a);
        if (it == fn.end())
            throw ForeignElement("edge argument '" + a + "' outside the function domain");
        out.args.push_back(it->second);
    }
    return out;
}

EdgeSet transport_edge_set(const FnMap& fn, const EdgeSet& edges) {
    EdgeSet out;
    for (const Edge& e : edges) out.insert(transport_edge(fn, e));
    return out;
}

EdgeSet enumerate_edges(const Signature& sig, const Carrier& carrier) {
    EdgeSet out;
    std::vector<ElementId> elems(carrier.begin(), carrier.end());
    for (const auto& [sym, arity] : sig.symbols) {
        if (elems.empty()) continue; // no tuples of positive arity
        std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
        do {
            Edge e;
            e.symbol = sym;
            e.args.reserve(idx.size());
            for (std::size_t i : idx) e.args.push_back(elems[i]);
            out.insert(std::move(e));
        } while (detail::next_odometer(idx, elems.size()));
    }
    return out;
}

EdgeSet preimage_edge_set(const Signature& sig, const FnMap& fn, const Carrier& dom,
                          const EdgeSet& codEdges) {
    EdgeSet out;
    for (const Edge& e : enumerate_edges(sig, dom)) {
        if (codEdges.count(transport_edge(fn, e))) out.insert(e);
    }
    return out;
}

bool is_pi_morphism(const Signature& sig, const Morphism& h) {
    require_valid(sig, h.dom);
    require_valid(sig, h.cod);
    require_function(h.map, h.dom.carrier, h.cod.carrier);
    for (const Edge& e : h.dom.edges) {
        if (!h.cod.edges.count(transport_edge(h.map, e))) return false;
    }
    return true;
}

bool reflects_relations(const Signature& sig, const Morphism& h) {
    require_valid(sig, h.dom);
    require_valid(sig, h.cod);
    require_function(h.map, h.dom.carrier, h.cod.carrier);
    for (const Edge& e : enumerate_edges(sig, h.dom.carrier)) {
        if (h.cod.edges.count(transport_edge(h.map, e)) && !h.dom.edges.count(e)) return false;
    }
    return true;
}

Morphism identity(const Structure& x) {
    Morphism m;
    m.dom = x;
    m.cod = x;
    for (const ElementId& e : x.carrier) m.map[e] = e;
    return m;
}

Morphism compose(const Morphism& g, const Morphism& f) {
    if (!(f.cod == g.dom))
        throw Error("compose: codomain of first morphism differs from domain of second");
    Morphism m;
    m.dom = f.dom;
    m.cod = g.cod;
    for (const auto& [x, y] : f.map) {
        auto it = g.map.find(y);
        if (it == g.map.end()) throw ForeignElement("compose: '" + y + "' missing from second map");
        m.map[x] = it->second;
    }
    return m;
}

bool is_injective(const Morphism& h) {
    std::set<ElementId> seen;
    for (const auto& [k, v] : h.map) {
        (void)k;
        if (!seen.insert(v).second) return false;
    }
    return true;
}

bool is_surjective(const Morphism& h) {
    std::set<ElementId> image;
    for (const auto& [k, v] : h.map) {
        (void)k;
        image.insert(v);
    }
    return image.size() == h.cod.carrier.size();
}

bool is_bijective(const Morphism& h) { return is_injective(h) && is_surjective(h); }

} // namespace horncat
