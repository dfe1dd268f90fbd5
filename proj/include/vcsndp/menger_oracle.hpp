#ifndef VCSNDP_MENGER_ORACLE_HPP
#define VCSNDP_MENGER_ORACLE_HPP

#include "vcsndp/connectivity.hpp"
#include "vcsndp/errors.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

// Deletion-enumeration connectivity oracles. They apply the removal-set
// definitions literally and share no code with the flow formulations, so the
// flow-based queries can be tested against them.

namespace vcsndp {

namespace detail {

/// Calls `visit` on every size-`size` subset of {0..count-1} (as index list) until it returns true.
inline bool for_each_subset(int count, int size, std::uint64_t& budget,
                            const std::function<bool(const std::vector<int>&)>& visit) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
    if (size > count) return false;
    while (true) {
        if (budget == 0) throw BudgetExceeded("removal-set enumeration budget exhausted");
        --budget;
        if (visit(pick)) return true;
        int i = size - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == count - size + i) --i;
        if (i < 0) return false;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < size; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
}

} // namespace detail

inline constexpr std::uint64_t default_oracle_budget = std::uint64_t{1} << 22;

/// Smallest number of vertices (other than s,t) whose deletion separates s and t,
/// plus the number of direct s-t edges, which no vertex deletion can break.
inline int brute_force_menger_vertex(const Instance& g, const EdgeMask& mask, Vertex s, Vertex t,
                                     std::uint64_t budget = default_oracle_budget) {
    if (s == t) throw std::invalid_argument("oracle needs two distinct vertices");
    EdgeMask rest = mask;
    int direct = 0;
    for (EdgeId e = 0; e < g.m(); ++e) {
        const Edge& ed = g.edge(e);
        if (mask[static_cast<std::size_t>(e)] && ((ed.u == s && ed.v == t) || (ed.u == t && ed.v == s))) {
            rest[static_cast<std::size_t>(e)] = false;
            ++direct;
        }
    }
    std::vector<Vertex> candidates;
    for (Vertex v = 0; v < g.n(); ++v)
        if (v != s && v != t) candidates.push_back(v);
    const EdgeMask no_edges(static_cast<std::size_t>(g.m()), false);
    for (int size = 0; size <= static_cast<int>(candidates.size()); ++size) {
        bool found = detail::for_each_subset(static_cast<int>(candidates.size()), size, budget, [&](const std::vector<int>& pick) {
            std::vector<bool> removed(static_cast<std::size_t>(g.n()), false);
            for (int i : pick) removed[static_cast<std::size_t>(candidates[static_cast<std::size_t>(i)])] = true;
            return separates(g, rest, removed, no_edges, s, t);
        });
        if (found) return size + direct;
    }
    // Unreachable: deleting every other vertex always separates s from t once direct edges are gone.
    throw std::logic_error("vertex oracle found no separating set");
}

/// Smallest number of elements (edges and non-terminal vertices) whose deletion separates s and t.
inline int brute_force_menger_element(const Instance& g, const EdgeMask& mask, const TerminalSet& terminals, Vertex s,
                                      Vertex t, std::uint64_t budget = default_oracle_budget) {
    if (s == t) throw std::invalid_argument("oracle needs two distinct vertices");
    if (!terminals.contains(s) || !terminals.contains(t))
        throw std::invalid_argument("element connectivity is defined between terminals only");
    // Element indices: [0, edges.size()) are edges, the rest are non-terminal vertices.
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < g.m(); ++e)
        if (mask[static_cast<std::size_t>(e)]) edges.push_back(e);
    std::vector<Vertex> vertices;
    for (Vertex v = 0; v < g.n(); ++v)
        if (!terminals.contains(v)) vertices.push_back(v);
    const int count = static_cast<int>(edges.size() + vertices.size());
    for (int size = 0; size <= count; ++size) {
        bool found = detail::for_each_subset(count, size, budget, [&](const std::vector<int>& pick) {
            std::vector<bool> rv(static_cast<std::size_t>(g.n()), false);
            EdgeMask re(static_cast<std::size_t>(g.m()), false);
            for (int i : pick) {
                if (i < static_cast<int>(edges.size()))
                    re[static_cast<std::size_t>(edges[static_cast<std::size_t>(i)])] = true;
                else
                    rv[static_cast<std::size_t>(vertices[static_cast<std::size_t>(i) - edges.size()])] = true;
            }
            return separates(g, mask, rv, re, s, t);
        });
        if (found) return size;
    }
    throw std::logic_error("element oracle found no separating set");
}

} // namespace vcsndp

#endif // VCSNDP_MENGER_ORACLE_HPP
