#ifndef VCSNDP_SUBSET_SEARCH_HPP
#define VCSNDP_SUBSET_SEARCH_HPP

#include "vcsndp/errors.hpp"
#include "vcsndp/instance.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace vcsndp {

inline constexpr std::uint64_t default_exact_budget = std::uint64_t{1} << 22;

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t feasibility_checks = 0;
};

/// Minimum-cost edge subset accepted by a monotone feasibility predicate.
///
/// Branches on edges in nonincreasing cost order, excluding before including.
/// A branch is cut when the chosen edges plus the undecided ones are already
/// infeasible, or when its cost plus a degree bound reaches the incumbent. The
/// degree bound uses the fact that a vertex with demand r needs r incident
/// edges in any solution (disjoint paths leave it on distinct edges).
///
/// `Feasible` is called as feasible(const EdgeMask&) -> bool and must be
/// monotone under adding edges.
template <class Feasible>
class SubsetSearch {
public:
    SubsetSearch(const Instance& g, const std::vector<Requirement>& demands, Feasible feasible,
                 std::uint64_t budget = default_exact_budget)
        : g_(g), feasible_(std::move(feasible)), budget_(budget), need_(static_cast<std::size_t>(g.n()), 0) {
        for (const Requirement& q : demands) {
            need_[static_cast<std::size_t>(q.u)] = std::max(need_[static_cast<std::size_t>(q.u)], q.r);
            need_[static_cast<std::size_t>(q.v)] = std::max(need_[static_cast<std::size_t>(q.v)], q.r);
        }
        order_.resize(static_cast<std::size_t>(g.m()));
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](EdgeId a, EdgeId b) { return g.edge(b).cost < g.edge(a).cost; });
    }

    EdgeSolution run() {
        included_.assign(static_cast<std::size_t>(g_.m()), false);
        available_ = g_.all_edges();
        decided_.assign(static_cast<std::size_t>(g_.m()), false);
        if (!check(available_)) throw InfeasibleError("requirements unmet even with every edge bought");
        best_.reset();
        dfs(0, Cost{}, true);
        // The full edge set is feasible, so the search always records an incumbent.
        return make_solution(g_, *best_);
    }

    const SearchStats& stats() const { return stats_; }

private:
    bool check(const EdgeMask& mask) {
        ++stats_.feasibility_checks;
        return feasible_(mask);
    }

    std::int64_t degree_bound() const {
        std::int64_t largest = 0;
        std::int64_t total = 0;
        std::vector<std::int64_t> costs;
        for (Vertex v = 0; v < g_.n(); ++v) {
            int deficit = need_[static_cast<std::size_t>(v)];
            if (deficit == 0) continue;
            costs.clear();
            for (EdgeId e = 0; e < g_.m(); ++e) {
                const Edge& ed = g_.edge(e);
                if (ed.u != v && ed.v != v) continue;
                if (included_[static_cast<std::size_t>(e)])
                    --deficit;
                else if (!decided_[static_cast<std::size_t>(e)])
                    costs.push_back(ed.cost.micros());
            }
            if (deficit <= 0) continue;
            std::sort(costs.begin(), costs.end());
            std::int64_t b = 0;
            for (std::size_t i = 0; i < costs.size() && static_cast<int>(i) < deficit; ++i) b += costs[i];
            largest = std::max(largest, b);
            total += b;
        }
        // Each edge touches two demand vertices at most.
        return std::max(largest, (total + 1) / 2);
    }

    void dfs(std::size_t pos, Cost cost, bool included_changed) {
        if (++stats_.nodes > budget_) throw BudgetExceeded("exact search exceeded node budget");
        if (best_ && cost >= best_cost_) return;
        if (best_ && cost.micros() + degree_bound() >= best_cost_.micros()) return;
        if (included_changed && check(included_)) {
            best_ = included_;
            best_cost_ = cost;
            return;
        }
        if (pos == order_.size()) return;
        const auto e = static_cast<std::size_t>(order_[pos]);
        decided_[e] = true;

        available_[e] = false;
        if (check(available_)) dfs(pos + 1, cost, false);
        available_[e] = true;

        included_[e] = true;
        dfs(pos + 1, cost + g_.edge(static_cast<EdgeId>(e)).cost, true);
        included_[e] = false;

        decided_[e] = false;
    }

    const Instance& g_;
    Feasible feasible_;
    std::uint64_t budget_;
    std::vector<int> need_;
    std::vector<EdgeId> order_;
    EdgeMask included_;
    EdgeMask available_;
    EdgeMask decided_;
    std::optional<EdgeMask> best_;
    Cost best_cost_;
    SearchStats stats_;
};

template <class Feasible>
EdgeSolution min_cost_feasible_subset(const Instance& g, const std::vector<Requirement>& demands, Feasible feasible,
                                      std::uint64_t budget = default_exact_budget) {
    SubsetSearch<Feasible> search(g, demands, std::move(feasible), budget);
    return search.run();
}

} // namespace vcsndp

#endif // VCSNDP_SUBSET_SEARCH_HPP
