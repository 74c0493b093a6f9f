#include "generators.hpp"

#include "gasflow/error.hpp"
#include "gasflow/network.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace gasflow;

namespace {

ErrorCode parse_error(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed: " << text;
    return ErrorCode::Io;
}

const char* kTwoNode = R"({
  "units": "si",
  "nodes": [{"id": "1", "slack_pressure_pa": 4.3e6}, {"id": "2", "injection_kg_s": -275.0}],
  "pipes": [{"id": "p", "from": "1", "to": "2", "length_m": 70000.0, "diameter_m": 0.9144, "friction_factor": 0.01}]
})";

Network chain(std::vector<Junction> js, std::vector<Compressor> comps, std::vector<Pipe> pipes = {}) {
    return Network::build(std::move(js), std::move(pipes), std::move(comps), {}, {});
}

}  // namespace

TEST(Parse, MinimalTwoNodeDocument) {
    const auto net = parse_instance(kTwoNode);
    ASSERT_EQ(net.junctions().size(), 2u);
    ASSERT_EQ(net.pipes().size(), 1u);
    EXPECT_TRUE(net.junctions()[0].is_slack());
    EXPECT_EQ(*net.junctions()[0].slack_pressure, 4.3e6);
    EXPECT_EQ(*net.junctions()[1].injection, -275.0);
    EXPECT_EQ(net.pipes()[0].length, 70000.0);
    EXPECT_EQ(net.eos().kind, EosKind::Ideal);
}

TEST(Parse, Errors) {
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": []})"), ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": 1e6, "injection_kg_s": 1}]})"),
              ErrorCode::InconsistentBoundary);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [)"), ErrorCode::MalformedInput);
    EXPECT_EQ(parse_error(R"({"units": "imperial", "nodes": [{"id": "a", "slack_pressure_pa": 1e6}]})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": 1e6}], "extra": 1})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": 1e6},
                                                       {"id": "a", "injection_kg_s": -1}]})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": 1e6}],
              "pipes": [{"id": "p", "from": "a", "to": "b", "length_m": 1, "diameter_m": 1, "friction_factor": 0.01}]})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": 1e6}, {"id": "b", "injection_kg_s": 0}],
              "pipes": [{"id": "p", "from": "a", "to": "b", "length_m": -1, "diameter_m": 1, "friction_factor": 0.01}]})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": 1e6}, {"id": "b", "injection_kg_s": 0}],
              "compressors": [{"id": "c", "from": "a", "to": "b", "ratio": 0.9}]})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a", "slack_pressure_pa": -1e6}]})"),
              ErrorCode::SchemaViolation);
    EXPECT_EQ(parse_error(R"({"units": "si", "nodes": [{"id": "a"}]})"), ErrorCode::SchemaViolation);
}

TEST(Parse, ClosedValvesLeaveTheEdgeSet) {
    const auto net = support::load_fixture("desk40.json");
    ASSERT_EQ(net.pass_throughs().size(), 2u);
    EXPECT_EQ(net.edges().size(), net.pipes().size() + net.compressors().size() + 1);
    for (const auto& e : net.edges()) EXPECT_NE(net.edge_id(e), "V1");
}

TEST(Parse, WriteInstanceRoundTrips) {
    const auto net = support::load_fixture("desk40.json");
    const auto again = parse_instance(write_instance(net));
    EXPECT_EQ(write_instance(again), write_instance(net));
    EXPECT_EQ(again.edges().size(), net.edges().size());
}

TEST(Parse, MissingFileIsIoError) {
    try {
        load_instance("/nonexistent/instance.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
}

TEST(Validate, NoSlackViolatesA1) {
    const auto net = chain({Junction::non_slack("a", 0), Junction::non_slack("b", 0)}, {},
                           {Pipe{"p", "a", "b", 1000, 0.5, 0.01}});
    const auto r = validate(net);
    EXPECT_FALSE(r.a1_slack_present.ok);
    EXPECT_FALSE(r.ok());
}

TEST(Validate, SlacksJoinedByCompressorViolateA3) {
    const auto net = chain({Junction::slack("a", 5e6), Junction::slack("b", 5e6)}, {Compressor{"c", "a", "b", 1.2}});
    const auto r = validate(net);
    EXPECT_TRUE(r.a1_slack_present.ok);
    EXPECT_FALSE(r.a3_slack_paths.ok);
    EXPECT_TRUE(r.a4_non_pipe_cycles.ok);
}

TEST(Validate, CompressorTriangleViolatesA4) {
    const auto r = validate(support::load_fixture("compressor_cycle.json"));
    EXPECT_FALSE(r.a4_non_pipe_cycles.ok);
    EXPECT_TRUE(r.a3_slack_paths.ok);
    ASSERT_FALSE(r.a4_non_pipe_cycles.offenders.empty());
}

TEST(Validate, FixturesSatisfyAssumptions) {
    for (const char* name : {"single_pipe.json", "three_slack.json", "desk40.json", "negative_compressor_flow.json"}) {
        EXPECT_TRUE(validate(support::load_fixture(name)).ok()) << name;
    }
}

// A random non-pipe forest passes A4; closing a compressor path flips the verdict.
TEST(Validate, ClosingANonPipeCycleFlipsA4) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = std::uniform_int_distribution<int>(3, 30)(rng);
        std::vector<Junction> js{Junction::slack("j0", 5e6)};
        for (int i = 1; i < n; ++i) js.push_back(Junction::non_slack("j" + std::to_string(i), -1.0));
        std::vector<Compressor> comps;
        std::vector<Pipe> pipes;
        for (int i = 1; i < n; ++i) {
            const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
            const auto from = "j" + std::to_string(parent), to = "j" + std::to_string(i);
            if (rng() % 3 == 0) {
                pipes.push_back({"p" + std::to_string(i), from, to, 1000, 0.5, 0.01});
            } else {
                comps.push_back({"c" + std::to_string(i), from, to, 1.1});
            }
        }
        EXPECT_TRUE(validate(chain(js, comps, pipes)).a4_non_pipe_cycles.ok);
        if (comps.size() < 2) continue;
        // A reversed twin of any compressor closes a two-edge non-pipe cycle.
        const auto& c0 = comps.front();
        std::vector<Compressor> closed = comps;
        closed.push_back({"close", c0.to, c0.from, 1.0});
        EXPECT_FALSE(validate(chain(js, closed, pipes)).a4_non_pipe_cycles.ok);
    }
}

TEST(Incidence, SinglePipe) {
    const auto inc = incidence(support::load_fixture("single_pipe.json"));
    ASSERT_EQ(inc.full.rows(), 2);
    ASSERT_EQ(inc.full.cols(), 1);
    EXPECT_EQ(inc.full.coeff(0, 0), -1.0);
    EXPECT_EQ(inc.full.coeff(1, 0), 1.0);
    ASSERT_EQ(inc.reduced.rows(), 1);
    EXPECT_EQ(inc.reduced.coeff(0, 0), 1.0);
}

TEST(Incidence, Path) {
    const auto net = Network::build({Junction::slack("1", 5e6), Junction::non_slack("2", -1), Junction::non_slack("3", -1)},
                                    {Pipe{"a", "1", "2", 1000, 0.5, 0.01}, Pipe{"b", "2", "3", 1000, 0.5, 0.01}}, {}, {},
                                    {});
    const auto inc = incidence(net);
    ASSERT_EQ(inc.reduced.rows(), 2);
    ASSERT_EQ(inc.reduced.cols(), 2);
    EXPECT_EQ(inc.reduced.coeff(0, 0), 1.0);
    EXPECT_EQ(inc.reduced.coeff(0, 1), -1.0);
    EXPECT_EQ(inc.reduced.coeff(1, 0), 0.0);
    EXPECT_EQ(inc.reduced.coeff(1, 1), 1.0);
}

TEST(Incidence, ColumnsBalanceAndRowsMatchNonSlacks) {
    for (const char* name : {"desk40.json", "three_slack.json", "compressor_cycle.json"}) {
        const auto net = support::load_fixture(name);
        const auto inc = incidence(net);
        for (int k = 0; k < inc.full.outerSize(); ++k) {
            double sum = 0.0;
            int minus = 0, plus = 0;
            for (Eigen::SparseMatrix<double>::InnerIterator it(inc.full, k); it; ++it) {
                sum += it.value();
                minus += it.value() == -1.0;
                plus += it.value() == 1.0;
            }
            EXPECT_EQ(sum, 0.0);
            EXPECT_EQ(minus, 1);
            EXPECT_EQ(plus, 1);
        }
        EXPECT_EQ(static_cast<std::size_t>(inc.reduced.rows()), net.junctions().size() - net.slack_count());
    }
}

TEST(Perturb, DegenerateIntervalsOnlyOverwriteRatios) {
    const auto base = support::load_fixture("desk40.json");
    const auto out = perturb_instance(base, 99, {1.0, 1.0}, {1.25, 1.25});
    for (std::size_t i = 0; i < base.junctions().size(); ++i) {
        EXPECT_EQ(out.junctions()[i].injection, base.junctions()[i].injection);
        EXPECT_EQ(out.junctions()[i].slack_pressure, base.junctions()[i].slack_pressure);
    }
    for (const auto& c : out.compressors()) EXPECT_EQ(c.ratio, 1.25);
}

TEST(Perturb, DeterministicAndWithinRange) {
    const auto base = support::load_fixture("desk40.json");
    const auto a = perturb_instance(base, 5, {0.9, 1.1}, {1.1, 1.4});
    const auto b = perturb_instance(base, 5, {0.9, 1.1}, {1.1, 1.4});
    const auto c = perturb_instance(base, 6, {0.9, 1.1}, {1.1, 1.4});
    EXPECT_EQ(write_instance(a), write_instance(b));
    EXPECT_NE(write_instance(a), write_instance(c));
    for (std::size_t i = 0; i < base.junctions().size(); ++i) {
        if (base.junctions()[i].is_slack()) continue;
        const double factor = *a.junctions()[i].injection / *base.junctions()[i].injection;
        EXPECT_GE(factor, 0.9);
        EXPECT_LE(factor, 1.1);
    }
    for (const auto& comp : a.compressors()) {
        EXPECT_GE(comp.ratio, 1.1);
        EXPECT_LE(comp.ratio, 1.4);
    }
}

TEST(Perturb, IndependentOfElementOrder) {
    const auto base = support::load_fixture("desk40.json");
    auto js = base.junctions();
    std::reverse(js.begin(), js.end());
    auto comps = base.compressors();
    std::reverse(comps.begin(), comps.end());
    const auto reversed = Network::build(js, base.pipes(), comps, base.pass_throughs(), base.eos());
    const auto a = perturb_instance(base, 42, {0.75, 1.25}, {1.1, 1.4});
    const auto b = perturb_instance(reversed, 42, {0.75, 1.25}, {1.1, 1.4});
    for (const auto& j : a.junctions()) {
        EXPECT_EQ(j.injection, b.junctions()[b.junction_index(j.id)].injection) << j.id;
    }
    for (const auto& c : a.compressors()) {
        const auto it = std::find_if(b.compressors().begin(), b.compressors().end(),
                                     [&](const Compressor& x) { return x.id == c.id; });
        ASSERT_NE(it, b.compressors().end());
        EXPECT_EQ(it->ratio, c.ratio);
    }
}

TEST(Perturb, RejectsInvalidIntervals) {
    const auto base = support::load_fixture("desk40.json");
    EXPECT_THROW(perturb_instance(base, 1, {1.1, 0.9}, {1.1, 1.4}), Error);
    EXPECT_THROW(perturb_instance(base, 1, {0.0, 1.0}, {1.1, 1.4}), Error);
}

TEST(Random, UnitUniformRange) {
    EXPECT_EQ(unit_uniform(0), 0.0);
    EXPECT_LT(unit_uniform(~0ULL), 1.0);
    EXPECT_NE(splitmix64(1), splitmix64(2));
}
