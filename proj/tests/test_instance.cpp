#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace vcsndp;
using namespace vcsndp::testing;

namespace {

int error_line(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST(Cost, ParsesDecimals) {
    EXPECT_EQ(Cost::parse("12")->micros(), 12'000'000);
    EXPECT_EQ(Cost::parse("0.5")->micros(), 500'000);
    EXPECT_EQ(Cost::parse("3.250")->micros(), 3'250'000);
    EXPECT_EQ(Cost::parse(".25")->micros(), 250'000);
    EXPECT_EQ(Cost::parse("0.000001")->micros(), 1);
}

TEST(Cost, RejectsMalformed) {
    for (const char* bad : {"", "-1", "1.", ".", "1e3", "1.0000001", "abc", "1..2", "+3"})
        EXPECT_FALSE(Cost::parse(bad).has_value()) << bad;
}

TEST(Cost, ShortestTextRoundTrips) {
    EXPECT_EQ(Cost::from_units(7).to_string(), "7");
    EXPECT_EQ(Cost::parse("3.250")->to_string(), "3.25");
    EXPECT_EQ(Cost::from_micros(1).to_string(), "0.000001");
    for (std::int64_t micros : {0LL, 1LL, 10LL, 999'999LL, 1'000'000LL, 123'456'789LL})
        EXPECT_EQ(Cost::parse(Cost::from_micros(micros).to_string())->micros(), micros);
}

TEST(ParseInstance, SingleEdge) {
    Instance inst = parse_instance("graph 2 1\nedge 0 1 5\nreq 0 1 1\n");
    EXPECT_EQ(inst.n(), 2);
    ASSERT_EQ(inst.m(), 1);
    EXPECT_EQ(inst.edge(0).cost, Cost::from_units(5));
    EXPECT_EQ(inst.requirement(1, 0), 1);
    EXPECT_EQ(inst.k(), 1);
}

TEST(ParseInstance, EmptyGraph) {
    Instance inst = parse_instance("graph 3 0\n");
    EXPECT_EQ(inst.n(), 3);
    EXPECT_EQ(inst.m(), 0);
    EXPECT_TRUE(inst.requirements().empty());
    EXPECT_EQ(inst.k(), 0);
}

TEST(ParseInstance, CommentsAndBlankLinesIgnored) {
    Instance inst = parse_instance("# header\n\ngraph 2 1  # trailing\n  edge 0 1 2.5\n\nreq 1 0 1\n");
    EXPECT_EQ(inst.edge(0).cost, *Cost::parse("2.5"));
    EXPECT_EQ(inst.requirements()[0], (Requirement{0, 1, 1}));
}

TEST(ParseInstance, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("graph 2 1\nedge 0 0 1\n"), 2);                     // self-loop
    EXPECT_EQ(error_line("graph 2 1\nedge 0 1 -1\n"), 2);                    // negative cost
    EXPECT_EQ(error_line("graph 2 1\n# note\nedge 0 2 1\n"), 3);             // out of range
    EXPECT_EQ(error_line("graph 3 1\nedge 0 1 1\nreq 0 1 1\nreq 1 0 2\n"), 4); // duplicate pair
    EXPECT_EQ(error_line("graph 3 1\nedge 0 1 1\nreq 0 1 0\n"), 3);          // non-positive r
    EXPECT_EQ(error_line("graph 3 2\nedge 0 1 1\nreq 0 1 1\n"), 3);          // too few edges
    EXPECT_EQ(error_line("graph 3 1\nedge 0 1 x\n"), 2);                     // malformed cost
    EXPECT_EQ(error_line("grph 3 1\n"), 1);
    EXPECT_EQ(error_line(""), 1);
    EXPECT_EQ(error_line("graph 3 1\nedge 0 1 1\nedge 1 2 1\n"), 3); // surplus edge line
}

TEST(ParseInstance, InfeasibleRequirementsAreAccepted) {
    Instance inst = parse_instance("graph 3 1\nedge 0 1 1\nreq 0 2 5\n");
    EXPECT_EQ(inst.requirement(0, 2), 5);
}

TEST(ParseInstance, ParallelEdgesKeepDistinctIds) {
    Instance inst = parse_instance("graph 2 2\nedge 0 1 1\nedge 1 0 3\n");
    EXPECT_EQ(inst.m(), 2);
    EXPECT_EQ(inst.edge(1).cost, Cost::from_units(3));
}

TEST(Instance, RejectsBadConstruction) {
    EXPECT_THROW(Instance(2, {unit(0, 0)}, {}), InstanceError);
    EXPECT_THROW(Instance(2, {unit(0, 2)}, {}), InstanceError);
    EXPECT_THROW(Instance(3, {}, {{0, 1, 1}, {1, 0, 1}}), InstanceError);
    EXPECT_THROW(Instance(3, {}, {{0, 1, 0}}), InstanceError);
}

TEST(WriteInstance, RoundTripsExamples) {
    for (const char* text : {"graph 2 1\nedge 0 1 5\nreq 0 1 1\n", "graph 3 0\n",
                             "graph 4 2\nedge 0 1 0.5\nedge 2 3 7.125\nreq 0 3 2\nreq 1 2 1\n"}) {
        EXPECT_EQ(write_instance(parse_instance(text)), text);
    }
}

TEST(WriteInstance, RoundTripsGeneratedInstances) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GeneratorSpec spec;
        spec.n = 6 + static_cast<int>(seed % 5);
        spec.edge_param = 0.6;
        spec.k = 3;
        spec.num_pairs = 4;
        spec.seed = seed;
        Instance inst;
        try {
            inst = generate_instance(spec);
        } catch (const GenerationError&) {
            continue;
        }
        std::string text = write_instance(inst);
        Instance back = parse_instance(text);
        EXPECT_EQ(back, inst);
        EXPECT_EQ(write_instance(back), text);
    }
}

TEST(DeriveTerminals, Definition) {
    EXPECT_EQ(derive_terminals(Instance(3, {}, {{0, 1, 2}})).members(), (std::vector<Vertex>{0, 1}));
    EXPECT_EQ(derive_terminals(Instance(3, {}, {})).size(), 0);
    Instance inst(3, {}, {{0, 1, 1}, {1, 2, 3}});
    EXPECT_EQ(derive_terminals(inst).members(), (std::vector<Vertex>{0, 1, 2}));
    EXPECT_EQ(inst.k(), 3);
}

TEST(TerminalSet, SortedUniqueMembers) {
    TerminalSet ts({4, 1, 4, 2});
    EXPECT_EQ(ts.members(), (std::vector<Vertex>{1, 2, 4}));
    EXPECT_TRUE(ts.contains(4));
    EXPECT_FALSE(ts.contains(3));
    EXPECT_EQ(ts.index_of(4), 2);
}

TEST(Solution, RoundTripAndCostCheck) {
    Instance inst = parse_instance("graph 3 3\nedge 0 1 1\nedge 1 2 2.5\nedge 0 2 4\n");
    EdgeSolution sol = make_solution(inst, std::vector<EdgeId>{2, 1});
    EXPECT_EQ(sol.edge_ids, (std::vector<EdgeId>{1, 2}));
    EXPECT_EQ(sol.cost, *Cost::parse("6.5"));
    std::string text = write_solution(sol);
    EXPECT_EQ(text, "solution 2 6.5\n1\n2\n");
    EdgeSolution back = parse_solution(text, inst);
    EXPECT_EQ(back.edge_ids, sol.edge_ids);
    EXPECT_EQ(back.cost, sol.cost);

    EXPECT_THROW(parse_solution("solution 2 6\n1\n2\n", inst), ParseError);   // wrong stated cost
    EXPECT_THROW(parse_solution("solution 3 6.5\n1\n2\n", inst), ParseError); // wrong count
    EXPECT_THROW(parse_solution("solution 1 0\n7\n", inst), ParseError);      // bad id
    EXPECT_THROW(parse_solution("solution 2 2\n0\n0\n", inst), ParseError);   // duplicate id
}

TEST(Solution, MaskRoundTrip) {
    Instance inst = cycle_graph(5);
    EdgeMask mask{true, false, true, true, false};
    EdgeSolution sol = make_solution(inst, mask);
    EXPECT_EQ(sol.mask(inst), mask);
    EXPECT_EQ(sol.cost, Cost::from_units(3));
}

TEST(Generate, Deterministic) {
    GeneratorSpec spec;
    spec.n = 10;
    spec.edge_param = 0.4;
    spec.k = 3;
    spec.num_pairs = 5;
    spec.seed = 42;
    EXPECT_EQ(generate_instance(spec), generate_instance(spec));
    GeneratorSpec other = spec;
    other.seed = 43;
    EXPECT_NE(write_instance(generate_instance(spec)), write_instance(generate_instance(other)));
}

TEST(Generate, WheelClampsToConnectivity) {
    GeneratorSpec spec;
    spec.model = GraphModel::wheel;
    spec.n = 5;
    spec.k = 3;
    spec.num_pairs = 1;
    spec.seed = 7;
    Instance inst = generate_instance(spec);
    EXPECT_EQ(inst.m(), 8);
    ASSERT_EQ(inst.requirements().size(), 1u);
    const Requirement& q = inst.requirements()[0];
    EXPECT_LE(q.r, brute_force_menger_vertex(inst, inst.all_edges(), q.u, q.v));
}

TEST(Generate, GridShape) {
    GeneratorSpec spec;
    spec.model = GraphModel::grid;
    spec.n = 6;
    spec.edge_param = 3;
    spec.num_pairs = 2;
    Instance inst = generate_instance(spec);
    EXPECT_EQ(inst.m(), 7); // 2 rows of 3: 4 horizontal + 3 vertical
    spec.edge_param = 2.5;
    EXPECT_THROW(generate_instance(spec), std::invalid_argument);
}

TEST(Generate, EmptyGraphReportsNoPairs) {
    GeneratorSpec spec;
    spec.n = 6;
    spec.edge_param = 0.0;
    spec.num_pairs = 3;
    EXPECT_THROW(generate_instance(spec), GenerationError);
}

TEST(Generate, SparseGraphMayDropPairs) {
    int short_count = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GeneratorSpec spec;
        spec.n = 10;
        spec.edge_param = 0.12;
        spec.k = 2;
        spec.num_pairs = 45;
        spec.seed = seed;
        try {
            Instance inst = generate_instance(spec);
            if (inst.requirements().size() < 45u) ++short_count;
        } catch (const GenerationError&) {
            ++short_count;
        }
    }
    EXPECT_GT(short_count, 0);
}

TEST(Generate, RequirementsNeverExceedConnectivity) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        GeneratorSpec spec;
        spec.model = seed % 3 == 0 ? GraphModel::erdos_renyi : seed % 3 == 1 ? GraphModel::grid : GraphModel::wheel;
        spec.n = 8;
        spec.edge_param = spec.model == GraphModel::grid ? 3.0 : 0.5;
        spec.k = 4;
        spec.num_pairs = 6;
        spec.cost_min = 0;
        spec.cost_max = 9;
        spec.seed = seed;
        Instance inst;
        try {
            inst = generate_instance(spec);
        } catch (const GenerationError&) {
            continue;
        }
        EXPECT_LE(inst.requirements().size(), 6u);
        for (const Requirement& q : inst.requirements()) {
            EXPECT_GE(q.r, 1);
            EXPECT_LE(q.r, 4);
            EXPECT_LE(q.r, brute_force_menger_vertex(inst, inst.all_edges(), q.u, q.v));
        }
        for (const Edge& e : inst.edges()) EXPECT_LE(e.cost, Cost::from_units(9));
    }
}

TEST(Generate, ModelNames) {
    EXPECT_EQ(parse_graph_model("erdos-renyi"), GraphModel::erdos_renyi);
    EXPECT_EQ(parse_graph_model("grid"), GraphModel::grid);
    EXPECT_EQ(parse_graph_model("wheel"), GraphModel::wheel);
    EXPECT_FALSE(parse_graph_model("star").has_value());
}
