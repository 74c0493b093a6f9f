// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "generators.hpp"

#include "gasflow/error.hpp"
#include "gasflow/oracle.hpp"
#include "gasflow/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gasflow;
namespace tst = gasflow::support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Worst balance defect over every E1 solution produced by any criterion.
struct BalanceLedger {
    double worst = 0.0;
    int solutions = 0;

    void record(const Outcome& out) {
        if (out.classification != Classification::ConvergedInDomain || !out.solution) return;
        worst = std::max(worst, oracle::balance_check(*out.solution));
        ++solutions;
    }
} balance;

struct Result {
    bool pass;
    std::string detail;
};

ScaledNetwork scaled(const Network& net) { return nondimensionalize(net, choose_nominals(net)); }

// Agreement criteria compare solutions, not residuals; a residual of 1e-8
// only bounds the solution error up to the system's conditioning.
constexpr double kTightTolerance = 1e-12;

SolverConfig tight(std::uint64_t seed) {
    SolverConfig cfg;
    cfg.tolerance = kTightTolerance;
    cfg.seed = seed;
    return cfg;
}

Outcome solve_recorded(const ScaledNetwork& snet, const SolverConfig& cfg = {}) {
    auto out = solve(snet, cfg);
    balance.record(out);
    return out;
}

struct PipeDraw {
    double p1, withdrawal, length, diameter, friction;
};

PipeDraw draw_pipe(std::mt19937_64& rng) {
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    return {u(2e6, 8e6), u(10.0, 500.0), u(1e3, 100e3), u(0.3, 1.2), u(0.005, 0.02)};
}

// Criteria 1 and 2: random single pipes, feasible according to the oracle.
Result single_pipe_suite(EosKind kind, std::uint64_t seed, double* elapsed) {
    std::mt19937_64 rng(seed);
    int cases = 0, draws = 0;
    double worst = 0.0, solve_time = 0.0;
    std::string bad;
    while (cases < 100 && draws < 100000) {
        ++draws;
        const auto d = draw_pipe(rng);
        const auto snet = scaled(tst::single_pipe(d.p1, d.withdrawal, d.length, d.diameter, d.friction, kind));
        const oracle::SinglePipeCase c{snet.slack_p_bar[0], -snet.q_bar[1], snet.edges[0].beta, snet.coeffs};
        const auto expected = kind == EosKind::Ideal ? oracle::single_pipe_ideal(c) : oracle::single_pipe_cnga(c);
        if (!expected) continue;
        ++cases;
        const auto cfg = tight(static_cast<std::uint64_t>(cases));
        const auto t0 = Clock::now();
        const auto out = solve_recorded(snet, cfg);
        solve_time += seconds_since(t0);
        if (out.classification != Classification::ConvergedInDomain || out.feasibility != Feasibility::Feasible) {
            bad = "case " + std::to_string(cases) + " classified " + to_string(out.classification);
            worst = INFINITY;
            continue;
        }
        worst = std::max(worst, std::abs(out.solution->p[1] - *expected) / *expected);
    }
    if (elapsed) *elapsed = solve_time;
    std::ostringstream s;
    s << cases << " cases, tol " << kTightTolerance << ", max rel err " << worst;
    if (!bad.empty()) s << ", " << bad;
    return {cases == 100 && worst <= 1e-8, s.str()};
}

Result criterion1() {
    double elapsed = 0.0;
    auto r = single_pipe_suite(EosKind::Ideal, 101, &elapsed);
    r.detail += ", solve time " + std::to_string(elapsed * 1e3) + " ms";
    r.pass = r.pass && elapsed < 0.05;
    return r;
}

Result criterion2() { return single_pipe_suite(EosKind::Cnga, 202, nullptr); }

Result criterion3() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    int compressors = 0, failed = 0;
    for (int i = 0; i < 50; ++i) {
        tst::TreeOptions opt;
        opt.kind = i % 2 ? EosKind::Cnga : EosKind::Ideal;
        const auto net = tst::random_tree(rng, opt);
        compressors += static_cast<int>(net.compressors().size());
        const auto snet = scaled(net);
        const auto ref = oracle::tree_solve(snet);
        const auto out = solve_recorded(snet, tight(static_cast<std::uint64_t>(i)));
        if (out.classification != Classification::ConvergedInDomain) {
            ++failed;
            continue;
        }
        worst = std::max({worst, tst::max_rel_diff(out.solution->p, ref.solution.p),
                          tst::max_rel_diff(out.solution->f, ref.solution.f),
                          tst::max_rel_diff(out.solution->q_full, ref.solution.q_full)});
    }
    std::ostringstream s;
    s << "50 trees (" << compressors << " compressors), tol " << kTightTolerance << ", " << failed << " not E1, max rel diff " << worst;
    return {failed == 0 && worst <= 1e-6, s.str()};
}

Result criterion4() {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    int e1 = 0, instances_without_e1 = 0;
    for (int i = 0; i < 20; ++i) {
        const auto net = tst::random_cyclic(rng, 40, i % 2 ? EosKind::Cnga : EosKind::Ideal);
        const auto snet = scaled(net);
        std::optional<Solution> ref;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto out = solve_recorded(snet, tight(seed * 7919 + static_cast<std::uint64_t>(i)));
            if (out.classification != Classification::ConvergedInDomain) continue;
            ++e1;
            if (!ref) {
                ref = out.solution;
                continue;
            }
            worst = std::max({worst, tst::vector_rel_diff(out.solution->p, ref->p),
                              tst::vector_rel_diff(out.solution->f, ref->f)});
        }
        if (!ref) ++instances_without_e1;
    }
    std::ostringstream s;
    s << "20 cyclic networks x 10 seeds, tol " << kTightTolerance << ", " << e1 << " E1 solves, max rel diff " << worst;
    if (instances_without_e1) s << ", " << instances_without_e1 << " instances without any E1";
    return {instances_without_e1 == 0 && worst <= 1e-6, s.str()};
}

Result criterion5() {
    const auto base = tst::load_fixture("desk40.json");
    int e1 = 0;
    long iterations = 0;
    double slowest = 0.0;
    for (int k = 0; k < 500; ++k) {
        const auto net = perturb_instance(base, static_cast<std::uint64_t>(k), {0.9, 1.1}, {1.1, 1.4});
        SolveOptions opts;
        opts.solver.seed = static_cast<std::uint64_t>(k);
        const auto t0 = Clock::now();
        const auto run = solve_network(net, opts);
        slowest = std::max(slowest, seconds_since(t0));
        balance.record(run.outcome);
        e1 += run.outcome.classification == Classification::ConvergedInDomain;
        iterations += run.outcome.iterations;
    }
    const double mean = static_cast<double>(iterations) / 500.0;
    std::ostringstream s;
    s << e1 << "/500 E1 on " << base.junctions().size() << "-junction base, mean iterations " << mean
      << ", slowest solve " << slowest << " s";
    return {e1 >= 495 && mean <= 30.0 && slowest < 1.0, s.str()};
}

Result criterion6() {
    bool ok = true;
    std::ostringstream s;
    for (const char* name : {"single_pipe_70km.json", "single_pipe_infeasible_cnga.json"}) {
        const auto snet = scaled(tst::load_fixture(name));
        const double margin = potential(snet.slack_p_bar[0], snet.coeffs) - snet.edges[0].beta * snet.q_bar[1] * snet.q_bar[1];
        int feasible = 0;
        Outcome last;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            SolverConfig cfg;
            cfg.seed = seed;
            last = solve_recorded(snet, cfg);
            feasible += last.feasibility == Feasibility::Feasible;
        }
        ok = ok && margin < 0.0 && feasible == 0;
        s << name << ": margin " << margin << ", " << to_string(last.classification) << "/"
          << to_string(last.feasibility) << ", feasible " << feasible << "/10; ";
    }
    const auto out = solve_recorded(scaled(tst::load_fixture("negative_compressor_flow.json")));
    const bool named = out.feasibility == Feasibility::Infeasible &&
                       std::any_of(out.certificate.begin(), out.certificate.end(), [](const CertificateEntry& c) {
                           return c.element_id == "c_BC" && c.reason == CertificateReason::NegativeCompressorFlow;
                       });
    s << "negative compressor flow: " << to_string(out.feasibility) << (named ? " naming c_BC" : " without c_BC");
    return {ok && named, s.str()};
}

// Runs last so that it covers every other suite's E1 solutions.
Result criterion7() {
    std::ostringstream s;
    s << balance.solutions << " E1 solutions, worst defect " << balance.worst;
    return {balance.solutions > 0 && balance.worst <= 1e-10, s.str()};
}

Result criterion8() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> pd(0.2, 2.0), fd(-2.0, 2.0);
    const double h = 1e-6;
    double worst = 0.0;
    long entries = 0;
    const char* fixtures[] = {"single_pipe.json", "three_slack.json", "desk40.json", "negative_compressor_flow.json",
                              "single_pipe_infeasible_cnga.json"};
    for (const char* name : fixtures) {
        const auto snet = scaled(tst::load_fixture(name));
        const std::size_t np = snet.junction_count(), n = snet.unknown_count();
        for (int trial = 0; trial < 20; ++trial) {
            SolverState s;
            for (std::size_t i = 0; i < np; ++i) s.p.push_back(pd(rng));
            for (std::size_t k = 0; k < snet.edge_count(); ++k) s.f.push_back(fd(rng));
            const Eigen::MatrixXd J(jacobian(snet, s).matrix());
            for (std::size_t col = 0; col < n; ++col) {
                auto plus = s, minus = s;
                (col < np ? plus.p[col] : plus.f[col - np]) += h;
                (col < np ? minus.p[col] : minus.f[col - np]) -= h;
                const auto rp = residual_vector(snet, plus), rm = residual_vector(snet, minus);
                for (std::size_t row = 0; row < n; ++row) {
                    const double fdv = (rp[row] - rm[row]) / (2 * h);
                    worst = std::max(worst, std::abs(J(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) - fdv));
                    ++entries;
                }
            }
        }
    }
    std::ostringstream s;
    s << "5 fixtures x 20 states, " << entries << " entries, max abs err " << worst;
    return {worst <= 1e-6, s.str()};
}

Result criterion9() {
    const auto snet = scaled(tst::load_fixture("compressor_cycle.json"));
    int singular = 0;
    std::string diagnostic;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SolverConfig cfg;
        cfg.seed = seed;
        const auto out = solve_recorded(snet, cfg);
        if (out.failure == FailureKind::SingularJacobian && out.classification == Classification::Failed &&
            !out.solution) {
            ++singular;
            diagnostic = out.diagnostic;
        }
    }
    return {singular == 10, std::to_string(singular) + "/10 seeds singular: " + diagnostic.substr(0, 60)};
}

// Criterion 10 as stated: the ideal outlet pressure should exceed the CNGA one,
// and the relative deviation should grow from 7 km to 70 km.
Result criterion10() {
    std::mt19937_64 rng(1010);
    int feasible = 0, ideal_higher = 0;
    for (int draws = 0; feasible < 100 && draws < 100000; ++draws) {
        const auto d = draw_pipe(rng);
        const auto ideal = solve_network(tst::single_pipe(d.p1, d.withdrawal, d.length, d.diameter, d.friction, EosKind::Ideal), {});
        const auto cnga = solve_network(tst::single_pipe(d.p1, d.withdrawal, d.length, d.diameter, d.friction, EosKind::Cnga), {});
        if (ideal.outcome.feasibility != Feasibility::Feasible || cnga.outcome.feasibility != Feasibility::Feasible) continue;
        balance.record(ideal.outcome);
        balance.record(cnga.outcome);
        ++feasible;
        ideal_higher += ideal.physical->p[1] > cnga.physical->p[1];
    }

    auto deviation = [](double length) -> std::optional<double> {
        const auto ideal = solve_network(tst::single_pipe(4.3e6, 275.0, length, 0.9144, 0.01, EosKind::Ideal), {});
        const auto cnga = solve_network(tst::single_pipe(4.3e6, 275.0, length, 0.9144, 0.01, EosKind::Cnga), {});
        if (ideal.outcome.feasibility != Feasibility::Feasible || cnga.outcome.feasibility != Feasibility::Feasible) {
            return std::nullopt;
        }
        return std::abs(ideal.physical->p[1] - cnga.physical->p[1]) / cnga.physical->p[1];
    };
    const auto near = deviation(7000.0);
    const auto far = deviation(70000.0);

    std::ostringstream s;
    s << "p2_ideal > p2_cnga in " << ideal_higher << "/" << feasible << " feasible cases; deviation 7 km "
      << (near ? std::to_string(*near) : std::string("n/a (infeasible)")) << ", 70 km "
      << (far ? std::to_string(*far) : std::string("n/a (infeasible)"));
    // Informational: the same trend below the 70 km feasibility limit.
    s << "; below the limit: 30 km ";
    const auto mid = deviation(30000.0), long_ = deviation(60000.0);
    s << (mid ? std::to_string(*mid) : std::string("n/a")) << ", 60 km "
      << (long_ ? std::to_string(*long_) : std::string("n/a"));
    const bool ordering = feasible > 0 && ideal_higher == feasible;
    const bool monotone = near && far && *far > *near;
    return {ordering && monotone, s.str()};
}

Result criterion11() {
    const auto net = tst::load_fixture("three_slack.json");
    const auto snet = scaled(net);
    std::optional<std::vector<double>> ref;
    double worst = 0.0;
    int e1 = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SolveOptions opts;
        opts.solver = tight(seed);
        const auto run = solve_network(net, opts);
        balance.record(run.outcome);
        if (run.outcome.classification != Classification::ConvergedInDomain) continue;
        ++e1;
        std::vector<double> q;
        for (std::size_t i = 0; i < snet.junction_count(); ++i) {
            if (snet.is_slack[i]) q.push_back(run.physical->q_full[i]);
        }
        if (!ref) ref = q;
        for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(q[i] - (*ref)[i]));
    }
    std::ostringstream s;
    s << e1 << "/10 seeds E1, tol " << kTightTolerance << ", 3 slack injections, max spread " << worst << " kg/s";
    return {e1 == 10 && worst <= 1e-8, s.str()};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Result()> run;
    };
    // Criterion 7 aggregates the others, so it is evaluated last and printed in place.
    const std::vector<Criterion> order = {
        {1, "single-pipe ideal closed form", criterion1},
        {2, "single-pipe CNGA oracle", criterion2},
        {3, "tree equivalence", criterion3},
        {4, "uniqueness across initializations", criterion4},
        {5, "convergence robustness", criterion5},
        {6, "infeasibility certification", criterion6},
        {8, "Jacobian correctness", criterion8},
        {9, "A4 singularity", criterion9},
        {10, "ideal underestimates drop", criterion10},
        {11, "multiple-slack support", criterion11},
        {7, "balance property", criterion7},
    };
    std::vector<std::pair<int, std::string>> lines;
    int failures = 0;
    for (const auto& c : order) {
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failures += !r.pass;
        lines.emplace_back(c.id, std::string(r.pass ? "PASS" : "FAIL") + "  criterion " + std::to_string(c.id) + ": " +
                                     c.name + " | " + r.detail);
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failures, lines.size());
    return failures == 0 ? 0 : 1;
}
