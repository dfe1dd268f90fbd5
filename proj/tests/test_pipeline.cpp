#include "test_support.hpp"

#include <gtest/gtest.h>

#include <queue>

using namespace vcsndp;
using namespace vcsndp::testing;

namespace {

PipelineConfig checked(std::uint64_t seed, Backend backend = Backend::iterative) {
    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.backend = backend;
    cfg.verify_family = true;
    cfg.verify_solution = true;
    return cfg;
}

std::int64_t dijkstra_micros(const Instance& g, Vertex s, Vertex t) {
    std::vector<std::int64_t> dist(static_cast<std::size_t>(g.n()), INT64_MAX);
    using Item = std::pair<std::int64_t, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(s)] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d != dist[static_cast<std::size_t>(x)]) continue;
        for (const Edge& e : g.edges()) {
            Vertex y = e.u == x ? e.v : e.v == x ? e.u : -1;
            if (y < 0) continue;
            std::int64_t nd = d + e.cost.micros();
            if (nd < dist[static_cast<std::size_t>(y)]) {
                dist[static_cast<std::size_t>(y)] = nd;
                pq.push({nd, y});
            }
        }
    }
    return dist[static_cast<std::size_t>(t)];
}

// Cheapest subset meeting every requirement, by 2^m enumeration with the
// deletion-based vertex connectivity oracle.
Cost brute_force_vc_opt(const Instance& inst) {
    const int m = inst.m();
    std::optional<Cost> best;
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        EdgeMask mask(static_cast<std::size_t>(m));
        Cost c;
        for (int e = 0; e < m; ++e)
            if (bits >> e & 1u) {
                mask[static_cast<std::size_t>(e)] = true;
                c = c + inst.edge(e).cost;
            }
        if (best && c >= *best) continue;
        bool ok = true;
        for (const Requirement& q : inst.requirements())
            if (brute_force_menger_vertex(inst, mask, q.u, q.v) < q.r) {
                ok = false;
                break;
            }
        if (ok) best = c;
    }
    return *best;
}

Instance star_with_sinks(int leaves) {
    std::vector<Edge> edges;
    std::vector<Requirement> reqs;
    for (Vertex v = 1; v <= leaves; ++v) {
        edges.push_back(priced(0, v, v));
        reqs.push_back({0, v, 1});
    }
    return Instance(leaves + 1, edges, reqs);
}

} // namespace

TEST(Pipeline, SinglePairWithTrivialFamily) {
    Instance inst = cycle_graph(5, {{0, 2, 1}});
    PipelineConfig cfg = checked(3);
    cfg.params_override = std::pair{1, 1};
    cfg.allow_unsafe_params = true; // p = 2kq would be 2
    PipelineResult res = solve_vcsndp(inst, cfg);
    EXPECT_TRUE(res.goodness->good);
    ASSERT_EQ(res.solves.size(), 1u);
    EXPECT_EQ(res.solves[0].subset, (std::vector<Vertex>{0, 2}));
    EXPECT_EQ(res.solution.cost, Cost::from_units(2));
    EXPECT_TRUE(res.verification->feasible);
}

TEST(Pipeline, CycleOppositeCornersExactBackend) {
    Instance inst = parse_instance("graph 4 4\nedge 0 1 1\nedge 1 2 1\nedge 2 3 1\nedge 3 0 1\nreq 0 2 2\n");
    PipelineResult res = solve_vcsndp(inst, checked(11, Backend::exact));
    EXPECT_EQ(res.solution.cost, Cost::from_units(4));
    EXPECT_TRUE(res.verification->feasible);
    EXPECT_EQ(res.params.k, 2);
    EXPECT_EQ(res.tau, 2);
}

TEST(Pipeline, SingleSourceStarBuysEveryEdge) {
    Instance inst = star_with_sinks(4);
    PipelineConfig cfg = checked(5);
    cfg.mode = FamilyMode::single_source;
    cfg.params_override = std::pair{1, 1};
    cfg.allow_unsafe_params = true;
    PipelineResult res = solve(inst, cfg);
    EXPECT_EQ(res.source, 0);
    ASSERT_EQ(res.solves.size(), 1u);
    EXPECT_EQ(res.solves[0].subset, (std::vector<Vertex>{0, 1, 2, 3, 4}));
    EXPECT_EQ(res.solution.edge_ids, (std::vector<EdgeId>{0, 1, 2, 3}));
    EXPECT_TRUE(res.verification->feasible);
}

TEST(Pipeline, WheelHubSingleSource) {
    // W5: hub 0, rim 1-2-3-4-1. Hub to rim vertex 1 has connectivity 3.
    Instance inst = parse_instance(
        "graph 5 8\nedge 0 1 1\nedge 0 2 1\nedge 0 3 1\nedge 0 4 1\n"
        "edge 1 2 1\nedge 2 3 1\nedge 3 4 1\nedge 4 1 1\nreq 0 1 3\nreq 0 3 2\n");
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PipelineConfig cfg = checked(seed);
        cfg.mode = FamilyMode::single_source;
        PipelineResult res = solve(inst, cfg);
        EXPECT_EQ(res.source, 0);
        EXPECT_TRUE(res.goodness->good);
        EXPECT_TRUE(res.verification->feasible);
    }
}

TEST(Pipeline, SingleSourceNeedsACommonVertex) {
    Instance inst = complete_graph(4, {{0, 1, 1}, {2, 3, 1}});
    PipelineConfig cfg;
    cfg.mode = FamilyMode::single_source;
    EXPECT_THROW(solve(inst, cfg), std::invalid_argument);
    EXPECT_FALSE(common_source(inst).has_value());
    EXPECT_EQ(common_source(complete_graph(4, {{2, 1, 1}, {3, 2, 1}})), 2);
}

TEST(Pipeline, InfeasibleInstanceIsReported) {
    Instance inst = path_graph(3, {{0, 2, 2}});
    EXPECT_THROW(solve_vcsndp(inst, checked(1)), InfeasibleError);
    EXPECT_THROW(solve_exact_vcsndp(inst), InfeasibleError);
}

TEST(Pipeline, BadFamilyExhaustsResamples) {
    // p = 2, q = 1 and one pair: the family is good only if both ends draw the same index.
    Instance inst = cycle_graph(4, {{0, 2, 1}});
    PipelineConfig cfg = checked(0);
    cfg.params_override = std::pair{2, 1};
    cfg.max_resamples = 1;
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        try {
            solve_vcsndp(inst, cfg);
        } catch (const FamilyNotGoodError& e) {
            EXPECT_EQ(e.witness().covered, (std::vector<Vertex>{0, 2}));
            ++failures;
        }
    }
    EXPECT_GT(failures, 0);
    EXPECT_LT(failures, 20);
}

TEST(Pipeline, UnsafeOverrideIsGated) {
    Instance inst = cycle_graph(4, {{0, 2, 1}});
    PipelineConfig cfg;
    cfg.params_override = std::pair{3, 1};
    EXPECT_THROW(solve_vcsndp(inst, cfg), std::invalid_argument);
    cfg.allow_unsafe_params = true;
    EXPECT_NO_THROW(solve_vcsndp(inst, cfg));
}

TEST(Pipeline, SolutionIsUnionOfCopies) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        auto inst = random_feasible_instance(9, 0.45, 2, 4, 6, 300 + seed);
        if (!inst) continue;
        PipelineResult res = solve_vcsndp(*inst, checked(seed));
        EdgeMask uni(static_cast<std::size_t>(inst->m()), false);
        Cost sum;
        for (const CopyRecord& c : res.copies) {
            const ElementSolve& s = res.copy_solve(c);
            for (EdgeId e : s.edges.edge_ids) uni[static_cast<std::size_t>(e)] = true;
        }
        for (const ElementSolve& s : res.solves) sum = sum + s.edges.cost;
        EXPECT_EQ(res.solution.edge_ids, make_solution(*inst, uni).edge_ids);
        EXPECT_LE(res.solution.cost, sum);
        for (const CopyRecord& c : res.copies) {
            const auto& subset = res.family.subset(c.index);
            EXPECT_EQ(res.copy_solve(c).subset, subset);
        }
    }
}

// Subsets without an active pair contribute nothing, and solving them anyway
// (as empty element instances) cannot change the union.
TEST(Pipeline, SkippedSubsetsHaveNoActivePairs) {
    auto inst = random_feasible_instance(10, 0.4, 2, 3, 5, 77);
    ASSERT_TRUE(inst);
    PipelineResult res = solve_vcsndp(*inst, checked(9));
    std::vector<bool> present(static_cast<std::size_t>(res.params.p) + 1, false);
    for (const CopyRecord& c : res.copies) present[static_cast<std::size_t>(c.index)] = true;
    const TerminalSet terminals = derive_terminals(*inst);
    for (int i = 1; i <= res.params.p; ++i) {
        if (present[static_cast<std::size_t>(i)]) continue;
        ElementInstance ei = induce_element_instance(*inst, terminals, res.family.subset(i));
        EXPECT_TRUE(ei.active_pairs().empty());
        EXPECT_TRUE(solve_iterative_rounding(ei).first.edge_ids.empty());
    }
}

TEST(Pipeline, DeterministicAcrossJobCounts) {
    auto inst = random_feasible_instance(11, 0.4, 3, 5, 9, 1234);
    ASSERT_TRUE(inst);
    PipelineConfig cfg = checked(42);
    PipelineResult a = solve_vcsndp(*inst, cfg);
    PipelineResult b = solve_vcsndp(*inst, cfg);
    cfg.jobs = 4;
    PipelineResult c = solve_vcsndp(*inst, cfg);
    EXPECT_EQ(a.solution.edge_ids, b.solution.edge_ids);
    EXPECT_EQ(a.solution.edge_ids, c.solution.edge_ids);
    EXPECT_EQ(a.lower_bound, c.lower_bound);
    EXPECT_EQ(a.family.subsets(), c.family.subsets());
}

TEST(Pipeline, ParallelForRethrowsFirstError) {
    std::vector<int> hits(10, 0);
    EXPECT_THROW(detail::parallel_for(10, 3,
                                      [&](std::size_t i) {
                                          hits[i] = 1;
                                          if (i == 4) throw std::runtime_error("boom");
                                      }),
                 std::runtime_error);
    EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 10);
}

TEST(Pipeline, CostWithinTwoPTimesOpt) {
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        auto inst = random_feasible_instance(8, 0.5, 2, 3, 8, 500 + seed);
        if (!inst) continue;
        PipelineResult res = solve_vcsndp(*inst, checked(seed));
        const double opt = solve_exact_vcsndp(*inst).cost.to_double();
        EXPECT_TRUE(res.verification->feasible);
        EXPECT_LE(res.lower_bound, opt + 1e-6);
        EXPECT_LE(res.solution.cost.to_double(), 2.0 * res.params.p * opt + 1e-6);
        ++compared;
    }
    EXPECT_GT(compared, 15);
}

TEST(ExactVc, CycleOppositeCorners) {
    EXPECT_EQ(solve_exact_vcsndp(cycle_graph(4, {{0, 2, 2}})).cost, Cost::from_units(4));
}

TEST(ExactVc, SinglePairIsShortestPath) {
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Instance g = random_graph(8, 0.35, 900 + seed, 9);
        if (vertex_connectivity_pair(g, 0, 7).value == 0) continue;
        Instance inst = with_requirements(g, {{0, 7, 1}});
        EXPECT_EQ(solve_exact_vcsndp(inst).cost.micros(), dijkstra_micros(g, 0, 7)) << "seed " << seed;
        ++compared;
    }
    EXPECT_GT(compared, 10);
}

TEST(ExactVc, MatchesSubsetEnumeration) {
    int compared = 0;
    for (std::uint64_t seed = 0; compared < 25 && seed < 400; ++seed) {
        auto inst = random_feasible_instance(6, 0.6, 3, 3, 7, 2000 + seed);
        if (!inst || inst->m() > 12) continue;
        EdgeSolution sol = solve_exact_vcsndp(*inst);
        EXPECT_EQ(sol.cost, brute_force_vc_opt(*inst)) << "seed " << seed;
        EXPECT_TRUE(verify_vc_solution(*inst, sol).feasible);
        ++compared;
    }
    EXPECT_EQ(compared, 25);
}

TEST(ExactVc, NoRequirementsIsEmpty) {
    EXPECT_TRUE(solve_exact_vcsndp(complete_graph(4)).edge_ids.empty());
}

TEST(Benchmark, EmptyCorpus) {
    BenchmarkReport r = benchmark({}, PipelineConfig{});
    EXPECT_TRUE(r.records.empty());
    EXPECT_FALSE(r.mean_ratio.has_value());
}

TEST(Benchmark, DeterministicReportWithinBound) {
    std::vector<std::pair<std::string, Instance>> corpus;
    for (std::uint64_t seed = 0; corpus.size() < 10; ++seed) {
        GeneratorSpec spec;
        spec.n = 8;
        spec.edge_param = 0.5;
        spec.k = 2;
        spec.num_pairs = 3;
        spec.seed = seed;
        try {
            corpus.emplace_back("g" + std::to_string(seed), generate_instance(spec));
        } catch (const GenerationError&) {
        }
    }
    PipelineConfig cfg = checked(7);
    std::string a = benchmark_json(benchmark(corpus, cfg)).dump();
    BenchmarkReport rep = benchmark(corpus, cfg);
    EXPECT_EQ(a, benchmark_json(rep).dump());
    ASSERT_EQ(rep.records.size(), 10u);
    for (const BenchmarkRecord& r : rep.records) {
        EXPECT_TRUE(r.error.empty()) << r.error;
        ASSERT_TRUE(r.empirical_ratio.has_value());
        EXPECT_GE(*r.empirical_ratio, 1.0 - 1e-9);
        EXPECT_LE(*r.empirical_ratio, 2.0 * r.p);
        EXPECT_EQ(r.feasible, true);
    }
    ASSERT_TRUE(rep.max_ratio.has_value());
    EXPECT_LE(*rep.mean_ratio, *rep.max_ratio);
}

TEST(Benchmark, ErrorsStayPerInstance) {
    std::vector<std::pair<std::string, Instance>> corpus{{"bad", path_graph(3, {{0, 2, 2}})},
                                                         {"good", cycle_graph(4, {{0, 2, 2}})}};
    BenchmarkReport rep = benchmark(corpus, PipelineConfig{});
    ASSERT_EQ(rep.records.size(), 2u);
    EXPECT_FALSE(rep.records[0].error.empty());
    EXPECT_TRUE(rep.records[1].error.empty());
    EXPECT_EQ(rep.records[1].cost, Cost::from_units(4));
}
