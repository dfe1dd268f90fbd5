#ifndef VCSNDP_CONNECTIVITY_HPP
#define VCSNDP_CONNECTIVITY_HPP

#include "vcsndp/instance.hpp"
#include "vcsndp/max_flow.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcsndp {

/// Removable objects separating a pair: edges F and (non-terminal) vertices X.
struct MixedCut {
    std::vector<EdgeId> edges;
    std::vector<Vertex> vertices;
};

struct ConnectivityResult {
    int value = 0;
    MixedCut cut;
};

struct FractionalCut {
    double value = 0.0;
    MixedCut cut;
};

/// True iff s and t lie in different components once the given vertices and
/// edges are deleted from the graph restricted to `mask`.
inline bool separates(const Instance& g, const EdgeMask& mask, const std::vector<bool>& removed_vertex,
                      const EdgeMask& removed_edge, Vertex s, Vertex t) {
    std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(g.n()));
    for (EdgeId e = 0; e < g.m(); ++e) {
        if (!mask[static_cast<std::size_t>(e)] || removed_edge[static_cast<std::size_t>(e)]) continue;
        const Edge& ed = g.edge(e);
        if (removed_vertex[static_cast<std::size_t>(ed.u)] || removed_vertex[static_cast<std::size_t>(ed.v)]) continue;
        adj[static_cast<std::size_t>(ed.u)].push_back(ed.v);
        adj[static_cast<std::size_t>(ed.v)].push_back(ed.u);
    }
    std::vector<bool> seen(static_cast<std::size_t>(g.n()), false);
    std::vector<Vertex> stack{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        if (x == t) return false;
        for (Vertex y : adj[static_cast<std::size_t>(x)]) {
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = true;
                stack.push_back(y);
            }
        }
    }
    return true;
}

inline bool separates(const Instance& g, const EdgeMask& mask, const MixedCut& cut, Vertex s, Vertex t) {
    std::vector<bool> rv(static_cast<std::size_t>(g.n()), false);
    EdgeMask re(static_cast<std::size_t>(g.m()), false);
    for (Vertex v : cut.vertices) rv[static_cast<std::size_t>(v)] = true;
    for (EdgeId e : cut.edges) re[static_cast<std::size_t>(e)] = true;
    return separates(g, mask, rv, re, s, t);
}

namespace detail {

/// Flow network in which selected vertices are split into an in/out pair joined
/// by a capacity arc, and each undirected edge becomes two opposing arcs.
template <class Cap>
struct SplitNetwork {
    FlowNetwork<Cap> net;
    std::vector<int> in;
    std::vector<int> out;
    std::vector<int> vertex_arc;             // forward arc id of split vertices, else -1
    std::vector<std::pair<int, EdgeId>> edge_arcs;

    explicit SplitNetwork(int nodes) : net(nodes) {}

    MixedCut extract_cut() const {
        auto side = net.source_side();
        auto crosses = [&](int arc) {
            return side[static_cast<std::size_t>(net.tail(arc))] && !side[static_cast<std::size_t>(net.head(arc))];
        };
        MixedCut cut;
        for (std::size_t v = 0; v < vertex_arc.size(); ++v)
            if (vertex_arc[v] >= 0 && crosses(vertex_arc[v])) cut.vertices.push_back(static_cast<Vertex>(v));
        for (const auto& [arc, e] : edge_arcs)
            if (crosses(arc) && (cut.edges.empty() || cut.edges.back() != e)) cut.edges.push_back(e);
        return cut;
    }
};

template <class Cap, class SplitFn, class EdgeCapFn, class VertexCapFn>
SplitNetwork<Cap> build_split_network(const Instance& g, const EdgeMask& mask, SplitFn split, EdgeCapFn edge_cap,
                                      VertexCapFn vertex_cap) {
    const int n = g.n();
    int nodes = n;
    for (Vertex v = 0; v < n; ++v)
        if (split(v)) ++nodes;
    SplitNetwork<Cap> sn(nodes);
    sn.in.resize(static_cast<std::size_t>(n));
    sn.out.resize(static_cast<std::size_t>(n));
    sn.vertex_arc.assign(static_cast<std::size_t>(n), -1);
    int next = n;
    for (Vertex v = 0; v < n; ++v) {
        sn.in[static_cast<std::size_t>(v)] = v;
        if (split(v)) {
            sn.out[static_cast<std::size_t>(v)] = next++;
            sn.vertex_arc[static_cast<std::size_t>(v)] = sn.net.add_arc(v, sn.out[static_cast<std::size_t>(v)], vertex_cap(v));
        } else {
            sn.out[static_cast<std::size_t>(v)] = v;
        }
    }
    for (EdgeId e = 0; e < g.m(); ++e) {
        if (!mask[static_cast<std::size_t>(e)]) continue;
        const Edge& ed = g.edge(e);
        Cap c = edge_cap(e);
        sn.edge_arcs.emplace_back(sn.net.add_arc(sn.out[static_cast<std::size_t>(ed.u)], sn.in[static_cast<std::size_t>(ed.v)], c), e);
        sn.edge_arcs.emplace_back(sn.net.add_arc(sn.out[static_cast<std::size_t>(ed.v)], sn.in[static_cast<std::size_t>(ed.u)], c), e);
    }
    return sn;
}

inline void check_pair(const Instance& g, Vertex s, Vertex t) {
    if (s < 0 || s >= g.n() || t < 0 || t >= g.n()) throw std::invalid_argument("query vertex out of range");
    if (s == t) throw std::invalid_argument("connectivity query needs two distinct vertices");
}

} // namespace detail

/// Maximum number of internally vertex-disjoint s-t paths in the graph restricted
/// to `mask`. Each direct s-t edge counts as one path. The witness cut holds
/// vertices only, plus the direct s-t edges.
inline ConnectivityResult vertex_connectivity_pair(const Instance& g, const EdgeMask& mask, Vertex s, Vertex t) {
    detail::check_pair(g, s, t);
    const std::int64_t big = static_cast<std::int64_t>(g.n()) + g.m() + 1;
    auto sn = detail::build_split_network<std::int64_t>(
        g, mask, [&](Vertex v) { return v != s && v != t; },
        [&](EdgeId e) {
            const Edge& ed = g.edge(e);
            bool direct = (ed.u == s && ed.v == t) || (ed.u == t && ed.v == s);
            return direct ? std::int64_t{1} : big;
        },
        [](Vertex) { return std::int64_t{1}; });
    ConnectivityResult res;
    res.value = static_cast<int>(sn.net.max_flow(s, t));
    res.cut = sn.extract_cut();
    return res;
}

inline ConnectivityResult vertex_connectivity_pair(const Instance& g, Vertex s, Vertex t) {
    return vertex_connectivity_pair(g, g.all_edges(), s, t);
}

/// Maximum number of element-disjoint s-t paths, where elements are edges and
/// non-terminal vertices. Terminals are never split, so paths may share them.
inline ConnectivityResult element_connectivity_pair(const Instance& g, const EdgeMask& mask,
                                                    const TerminalSet& terminals, Vertex s, Vertex t) {
    detail::check_pair(g, s, t);
    if (!terminals.contains(s) || !terminals.contains(t))
        throw std::invalid_argument("element connectivity is defined between terminals only");
    auto sn = detail::build_split_network<std::int64_t>(
        g, mask, [&](Vertex v) { return !terminals.contains(v); }, [](EdgeId) { return std::int64_t{1}; },
        [](Vertex) { return std::int64_t{1}; });
    ConnectivityResult res;
    res.value = static_cast<int>(sn.net.max_flow(s, t));
    res.cut = sn.extract_cut();
    return res;
}

/// Maximum number of edge-disjoint s-t paths.
inline int edge_connectivity_pair(const Instance& g, const EdgeMask& mask, Vertex s, Vertex t) {
    detail::check_pair(g, s, t);
    auto sn = detail::build_split_network<std::int64_t>(
        g, mask, [](Vertex) { return false; }, [](EdgeId) { return std::int64_t{1}; },
        [](Vertex) { return std::int64_t{1}; });
    return static_cast<int>(sn.net.max_flow(s, t));
}

/// Minimum over mixed cuts (F, X) of sum_{e in F} cap(e) + |X|, with X ranging
/// over non-terminal vertices. Edges in `fixed` enter at capacity 1 regardless
/// of `capacities`. F reports every edge crossing the cut, including zero-capacity ones.
inline FractionalCut fractional_element_mincut(const Instance& g, const EdgeMask& mask, const TerminalSet& terminals,
                                               Vertex s, Vertex t, std::span<const double> capacities,
                                               const EdgeMask& fixed) {
    detail::check_pair(g, s, t);
    if (!terminals.contains(s) || !terminals.contains(t))
        throw std::invalid_argument("element connectivity is defined between terminals only");
    if (capacities.size() != static_cast<std::size_t>(g.m()))
        throw std::invalid_argument("capacity vector does not match edge count");
    auto sn = detail::build_split_network<double>(
        g, mask, [&](Vertex v) { return !terminals.contains(v); },
        [&](EdgeId e) {
            if (!fixed.empty() && fixed[static_cast<std::size_t>(e)]) return 1.0;
            double c = capacities[static_cast<std::size_t>(e)];
            if (c < 0.0 || c > 1.0 + 1e-9) throw std::invalid_argument("edge capacity outside [0,1]");
            return std::max(0.0, c);
        },
        [](Vertex) { return 1.0; });
    FractionalCut res;
    res.value = sn.net.max_flow(s, t);
    res.cut = sn.extract_cut();
    return res;
}

struct PairCheck {
    Vertex u = 0;
    Vertex v = 0;
    int required = 0;
    int achieved = 0;
};

struct VerificationReport {
    std::vector<PairCheck> pairs;
    bool feasible = true;

    std::vector<PairCheck> violations() const {
        std::vector<PairCheck> out;
        for (const PairCheck& p : pairs)
            if (p.achieved < p.required) out.push_back(p);
        return out;
    }
};

/// Achieved vertex connectivity of every requirement pair in the subgraph formed by `sol`.
inline VerificationReport verify_vc_solution(const Instance& inst, const EdgeSolution& sol) {
    VerificationReport report;
    EdgeMask mask = sol.mask(inst);
    for (const Requirement& q : inst.requirements()) {
        int achieved = vertex_connectivity_pair(inst, mask, q.u, q.v).value;
        report.pairs.push_back({q.u, q.v, q.r, achieved});
        if (achieved < q.r) report.feasible = false;
    }
    return report;
}

} // namespace vcsndp

#endif // VCSNDP_CONNECTIVITY_HPP
