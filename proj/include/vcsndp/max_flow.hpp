#ifndef VCSNDP_MAX_FLOW_HPP
#define VCSNDP_MAX_FLOW_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace vcsndp {

/// Slack below which a residual capacity counts as saturated. Zero for exact types.
template <class Cap>
constexpr Cap flow_epsilon() {
    if constexpr (std::is_floating_point_v<Cap>)
        return Cap(1e-12);
    else
        return Cap(0);
}

/// Directed network with nonnegative arc capacities, solved by Dinic's algorithm.
///
/// Arcs are stored in pairs (forward at even index, residual twin at odd index),
/// so arc `a` and `a ^ 1` are mates. `add_arc` returns the forward index, which
/// callers keep to map cut arcs back to graph objects.
template <class Cap>
class FlowNetwork {
public:
    struct Arc {
        int head;
        Cap residual;
        Cap capacity;
    };

    explicit FlowNetwork(int nodes) : adjacency_(static_cast<std::size_t>(nodes)) {}

    int node_count() const { return static_cast<int>(adjacency_.size()); }
    int add_node() {
        adjacency_.emplace_back();
        return node_count() - 1;
    }

    int add_arc(int tail, int head, Cap capacity) {
        if (capacity < Cap(0)) throw std::invalid_argument("negative arc capacity");
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({head, capacity, capacity});
        tails_.push_back(tail);
        arcs_.push_back({tail, Cap(0), Cap(0)});
        tails_.push_back(head);
        adjacency_[static_cast<std::size_t>(tail)].push_back(id);
        adjacency_[static_cast<std::size_t>(head)].push_back(id + 1);
        return id;
    }

    int tail(int arc) const { return tails_[static_cast<std::size_t>(arc)]; }
    int head(int arc) const { return arcs_[static_cast<std::size_t>(arc)].head; }
    Cap capacity(int arc) const { return arcs_[static_cast<std::size_t>(arc)].capacity; }
    Cap flow(int arc) const {
        const Arc& a = arcs_[static_cast<std::size_t>(arc)];
        return a.capacity - a.residual;
    }
    int arc_count() const { return static_cast<int>(arcs_.size() / 2); }

    /// Computes a maximum flow from `source` to `sink`. Callable once per network.
    Cap max_flow(int source, int sink) {
        if (source == sink) throw std::invalid_argument("source equals sink");
        source_ = source;
        Cap total(0);
        level_.assign(adjacency_.size(), -1);
        cursor_.assign(adjacency_.size(), 0);
        while (build_levels(source, sink)) {
            std::fill(cursor_.begin(), cursor_.end(), 0);
            while (true) {
                Cap pushed = augment(source, sink, std::numeric_limits<Cap>::max());
                if (!(pushed > flow_epsilon<Cap>())) break;
                total += pushed;
            }
        }
        value_ = total;
        return total;
    }

    Cap value() const { return value_; }

    /// Source side of the minimum cut: nodes reachable from the source in the final residual graph.
    std::vector<bool> source_side() const {
        std::vector<bool> seen(adjacency_.size(), false);
        std::vector<int> stack{source_};
        seen[static_cast<std::size_t>(source_)] = true;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int a : adjacency_[static_cast<std::size_t>(x)]) {
                const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.residual > flow_epsilon<Cap>() && !seen[static_cast<std::size_t>(arc.head)]) {
                    seen[static_cast<std::size_t>(arc.head)] = true;
                    stack.push_back(arc.head);
                }
            }
        }
        return seen;
    }

    /// Forward arcs leaving the source side; their capacities sum to the flow value.
    std::vector<int> min_cut_arcs() const {
        auto side = source_side();
        std::vector<int> cut;
        for (std::size_t a = 0; a < arcs_.size(); a += 2) {
            if (side[static_cast<std::size_t>(tails_[a])] && !side[static_cast<std::size_t>(arcs_[a].head)])
                cut.push_back(static_cast<int>(a));
        }
        return cut;
    }

private:
    bool build_levels(int source, int sink) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> queue;
        level_[static_cast<std::size_t>(source)] = 0;
        queue.push(source);
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop();
            for (int a : adjacency_[static_cast<std::size_t>(x)]) {
                const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.residual > flow_epsilon<Cap>() && level_[static_cast<std::size_t>(arc.head)] < 0) {
                    level_[static_cast<std::size_t>(arc.head)] = level_[static_cast<std::size_t>(x)] + 1;
                    queue.push(arc.head);
                }
            }
        }
        return level_[static_cast<std::size_t>(sink)] >= 0;
    }

    Cap augment(int x, int sink, Cap limit) {
        if (x == sink) return limit;
        auto& adj = adjacency_[static_cast<std::size_t>(x)];
        for (std::size_t& i = cursor_[static_cast<std::size_t>(x)]; i < adj.size(); ++i) {
            int a = adj[i];
            Arc& arc = arcs_[static_cast<std::size_t>(a)];
            if (!(arc.residual > flow_epsilon<Cap>())) continue;
            if (level_[static_cast<std::size_t>(arc.head)] != level_[static_cast<std::size_t>(x)] + 1) continue;
            Cap pushed = augment(arc.head, sink, std::min(limit, arc.residual));
            if (pushed > flow_epsilon<Cap>()) {
                arc.residual -= pushed;
                arcs_[static_cast<std::size_t>(a ^ 1)].residual += pushed;
                return pushed;
            }
        }
        return Cap(0);
    }

    std::vector<Arc> arcs_;
    std::vector<int> tails_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    int source_ = 0;
    Cap value_{0};
};

} // namespace vcsndp

#endif // VCSNDP_MAX_FLOW_HPP
