#ifndef VCSNDP_GENERATE_HPP
#define VCSNDP_GENERATE_HPP

#include "vcsndp/connectivity.hpp"
#include "vcsndp/instance.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vcsndp {

enum class GraphModel { erdos_renyi, grid, wheel };

inline std::optional<GraphModel> parse_graph_model(std::string_view name) {
    if (name == "erdos-renyi") return GraphModel::erdos_renyi;
    if (name == "grid") return GraphModel::grid;
    if (name == "wheel") return GraphModel::wheel;
    return std::nullopt;
}

inline const char* to_string(GraphModel model) {
    switch (model) {
    case GraphModel::erdos_renyi: return "erdos-renyi";
    case GraphModel::grid: return "grid";
    case GraphModel::wheel: return "wheel";
    }
    return "?";
}

/// The generated graph admits no requirement pair; draw again with another seed or denser parameters.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments of generate_instance.
///   erdos-renyi: edge_param = independent edge probability in [0,1]
///   grid:        edge_param = row width (columns); vertices laid out row-major
///   wheel:       edge_param unused; vertex 0 is the hub, 1..n-1 the rim cycle
struct GeneratorSpec {
    GraphModel model = GraphModel::erdos_renyi;
    int n = 2;
    double edge_param = 0.5;
    int k = 1;
    int num_pairs = 1;
    std::int64_t cost_min = 1;
    std::int64_t cost_max = 10;
    std::uint64_t seed = 0;
};

/// Random instance whose every requirement r(u,v) is drawn from 1..k and then
/// clamped to the vertex connectivity of (u,v) in the generated graph. Pairs are
/// visited in random order without replacement; pairs with connectivity 0 are
/// skipped, so fewer than num_pairs requirements may be emitted.
inline Instance generate_instance(const GeneratorSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("generator needs n >= 2");
    if (spec.k < 1) throw std::invalid_argument("generator needs k >= 1");
    if (spec.num_pairs < 0) throw std::invalid_argument("negative pair count");
    if (spec.cost_min < 0 || spec.cost_max < spec.cost_min) throw std::invalid_argument("bad cost range");

    std::mt19937_64 rng(spec.seed);
    std::vector<std::pair<Vertex, Vertex>> links;
    switch (spec.model) {
    case GraphModel::erdos_renyi: {
        if (spec.edge_param < 0.0 || spec.edge_param > 1.0)
            throw std::invalid_argument("edge probability must lie in [0,1]");
        std::bernoulli_distribution coin(spec.edge_param);
        for (Vertex u = 0; u < spec.n; ++u)
            for (Vertex v = u + 1; v < spec.n; ++v)
                if (coin(rng)) links.emplace_back(u, v);
        break;
    }
    case GraphModel::grid: {
        const int width = static_cast<int>(spec.edge_param);
        if (width < 1 || static_cast<double>(width) != spec.edge_param)
            throw std::invalid_argument("grid width must be a positive integer");
        for (Vertex v = 0; v < spec.n; ++v) {
            if ((v + 1) % width != 0 && v + 1 < spec.n) links.emplace_back(v, v + 1);
            if (v + width < spec.n) links.emplace_back(v, v + width);
        }
        break;
    }
    case GraphModel::wheel: {
        if (spec.n < 4) throw std::invalid_argument("wheel needs n >= 4");
        for (Vertex v = 1; v < spec.n; ++v) links.emplace_back(0, v);
        for (Vertex v = 1; v < spec.n; ++v) links.emplace_back(v, v + 1 < spec.n ? v + 1 : 1);
        break;
    }
    }

    std::uniform_int_distribution<std::int64_t> cost_draw(spec.cost_min, spec.cost_max);
    std::vector<Edge> edges;
    edges.reserve(links.size());
    for (auto [u, v] : links) edges.push_back({u, v, Cost::from_units(cost_draw(rng))});
    Instance graph(spec.n, edges, {});

    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < spec.n; ++u)
        for (Vertex v = u + 1; v < spec.n; ++v) pairs.emplace_back(u, v);
    std::shuffle(pairs.begin(), pairs.end(), rng);

    std::uniform_int_distribution<int> req_draw(1, spec.k);
    std::vector<Requirement> reqs;
    const EdgeMask all = graph.all_edges();
    for (auto [u, v] : pairs) {
        if (static_cast<int>(reqs.size()) >= spec.num_pairs) break;
        int r = req_draw(rng);
        int kappa = vertex_connectivity_pair(graph, all, u, v).value;
        r = std::min(r, kappa);
        if (r >= 1) reqs.push_back({u, v, r});
    }
    if (reqs.empty() && spec.num_pairs > 0)
        throw GenerationError("generated graph has no connected vertex pair; regenerate with another seed");
    return Instance(spec.n, std::move(edges), std::move(reqs));
}

} // namespace vcsndp

#endif // VCSNDP_GENERATE_HPP
