#include "gasflow/solver.hpp"

#include "gasflow/error.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <Eigen/SparseQR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace gasflow {

namespace {

// Relative tolerance for compressor compatibility after potential inversion.
constexpr double kCompatibilityTol = 1e-6;

}  // namespace

const char* to_string(Classification c) noexcept {
    switch (c) {
        case Classification::ConvergedInDomain: return "E1";
        case Classification::ConvergedOutOfDomain: return "E2";
        case Classification::Failed: return "E3";
    }
    return "?";
}

const char* to_string(Feasibility f) noexcept {
    switch (f) {
        case Feasibility::Feasible: return "feasible";
        case Feasibility::Infeasible: return "infeasible";
        case Feasibility::Indeterminate: return "indeterminate";
    }
    return "?";
}

const char* to_string(CertificateReason r) noexcept {
    switch (r) {
        case CertificateReason::NegativeCompressorFlow: return "negative_compressor_flow";
        case CertificateReason::NegativePotential: return "negative_potential";
    }
    return "?";
}

const char* to_string(FailureKind f) noexcept {
    switch (f) {
        case FailureKind::None: return "none";
        case FailureKind::MaxIterations: return "max_iterations";
        case FailureKind::NonFinite: return "non_finite";
        case FailureKind::SingularJacobian: return "singular_jacobian";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
}

Eigen::SparseMatrix<double> Jacobian::matrix() const {
    Eigen::SparseMatrix<double> m(size, size);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

SolverState initial_guess(const ScaledNetwork& snet, const SolverConfig& cfg) {
    std::mt19937_64 rng(splitmix64(cfg.seed));
    SolverState s;
    s.p.resize(snet.junction_count());
    for (std::size_t i = 0; i < s.p.size(); ++i) {
        const double u = 0.5 + unit_uniform(rng());
        s.p[i] = snet.is_slack[i] ? snet.slack_p_bar[i] : u;
    }
    s.f.resize(snet.edge_count());
    for (auto& f : s.f) f = 0.5 + unit_uniform(rng());
    return s;
}

namespace {

void check_dimensions(const ScaledNetwork& snet, const SolverState& state) {
    if (state.p.size() != snet.junction_count() || state.f.size() != snet.edge_count()) {
        throw Error(ErrorCode::InvalidArgument, "solver state dimensions do not match the network");
    }
}

// Infinity norm; any non-finite entry makes the norm infinite.
double inf_norm(const std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return INFINITY;
        norm = std::max(norm, std::abs(x));
    }
    return norm;
}

double pipe_residual(const ScaledNetwork& snet, const ScaledEdge& e, const SolverState& s, double f) {
    return potential(s.p[e.from], snet.coeffs) - potential(s.p[e.to], snet.coeffs) - e.beta * f * std::abs(f);
}

// A f + q for the non-slack junctions.
std::vector<double> node_residuals(const ScaledNetwork& snet, const SolverState& s) {
    const auto& rows = snet.incidence.reduced_row_of_junction;
    std::vector<double> r(snet.incidence.row_order.size(), 0.0);
    for (std::size_t k = 0; k < snet.edges.size(); ++k) {
        const auto& e = snet.edges[k];
        if (rows[e.from] >= 0) r[static_cast<std::size_t>(rows[e.from])] -= s.f[k];
        if (rows[e.to] >= 0) r[static_cast<std::size_t>(rows[e.to])] += s.f[k];
    }
    for (std::size_t row = 0; row < r.size(); ++row) r[row] += snet.q_bar[snet.incidence.row_order[row]];
    return r;
}

}  // namespace

Residuals residuals(const ScaledNetwork& snet, const SolverState& state) {
    check_dimensions(snet, state);
    Residuals r;
    for (std::size_t k = 0; k < snet.edges.size(); ++k) {
        const auto& e = snet.edges[k];
        if (e.kind == ScaledEdgeKind::Pipe) {
            r.pipe.push_back(pipe_residual(snet, e, state, state.f[k]));
        } else {
            r.comp.push_back(state.p[e.to] - e.alpha * state.p[e.from]);
        }
    }
    r.node = node_residuals(snet, state);

    r.norm_inf = std::max({inf_norm(r.pipe), inf_norm(r.comp), inf_norm(r.node)});
    return r;
}

std::vector<double> residual_vector(const ScaledNetwork& snet, const SolverState& state) {
    check_dimensions(snet, state);
    std::vector<double> r;
    r.reserve(snet.unknown_count());
    for (std::size_t k = 0; k < snet.edges.size(); ++k) {
        const auto& e = snet.edges[k];
        r.push_back(e.kind == ScaledEdgeKind::Pipe ? pipe_residual(snet, e, state, state.f[k])
                                                   : state.p[e.to] - e.alpha * state.p[e.from]);
    }
    for (double x : node_residuals(snet, state)) r.push_back(x);
    for (std::size_t i = 0; i < snet.junction_count(); ++i) {
        if (snet.is_slack[i]) r.push_back(state.p[i] - snet.slack_p_bar[i]);
    }
    return r;
}

Jacobian jacobian(const ScaledNetwork& snet, const SolverState& state) {
    check_dimensions(snet, state);
    const auto n_nodes = static_cast<int>(snet.junction_count());
    const auto n_edges = static_cast<int>(snet.edge_count());

    Jacobian J;
    J.size = n_nodes + n_edges;
    auto& t = J.triplets;
    t.reserve(static_cast<std::size_t>(4 * n_edges + n_nodes));

    for (int k = 0; k < n_edges; ++k) {
        const auto& e = snet.edges[static_cast<std::size_t>(k)];
        const int from = static_cast<int>(e.from);
        const int to = static_cast<int>(e.to);
        if (e.kind == ScaledEdgeKind::Pipe) {
            const double f = state.f[static_cast<std::size_t>(k)];
            t.emplace_back(k, from, potential_derivative(state.p[e.from], snet.coeffs));
            t.emplace_back(k, to, -potential_derivative(state.p[e.to], snet.coeffs));
            t.emplace_back(k, n_nodes + k, -2.0 * e.beta * std::abs(f));
        } else {
            t.emplace_back(k, from, -e.alpha);
            t.emplace_back(k, to, 1.0);
        }
    }

    int row = n_edges;
    const auto& reduced = snet.incidence.reduced;
    for (int col = 0; col < reduced.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(reduced, col); it; ++it) {
            t.emplace_back(row + static_cast<int>(it.row()), n_nodes + col, it.value());
        }
    }
    row += static_cast<int>(reduced.rows());

    for (int i = 0; i < n_nodes; ++i) {
        if (snet.is_slack[static_cast<std::size_t>(i)]) t.emplace_back(row++, i, 1.0);
    }
    return J;
}

namespace {

[[noreturn]] void throw_singular(const Eigen::SparseMatrix<double>& A, const std::string& detail) {
    Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr;
    qr.compute(A);
    std::ostringstream msg;
    msg << "SingularJacobian: numerical rank ";
    if (qr.info() == Eigen::Success) {
        msg << qr.rank();
    } else {
        msg << "unknown";
    }
    msg << " of " << A.rows();
    if (!detail.empty()) msg << " (" << detail << ")";
    throw Error(ErrorCode::SingularJacobian, msg.str());
}

}  // namespace

NewtonStep newton_step(const ScaledNetwork& snet, const SolverState& state) {
    const auto r = residual_vector(snet, state);
    const double norm = inf_norm(r);

    const auto A = jacobian(snet, state).matrix();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw_singular(A, lu.lastErrorMessage());

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = -r[i];
    const Eigen::VectorXd delta = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !delta.allFinite()) throw_singular(A, "non-finite Newton increment");

    NewtonStep step{state, norm};
    const auto n_nodes = snet.junction_count();
    for (std::size_t i = 0; i < n_nodes; ++i) {
        if (!snet.is_slack[i]) step.next.p[i] += delta[static_cast<Eigen::Index>(i)];
    }
    for (std::size_t k = 0; k < snet.edge_count(); ++k) {
        step.next.f[k] += delta[static_cast<Eigen::Index>(n_nodes + k)];
    }
    step.next.iteration = state.iteration + 1;
    return step;
}

namespace {

// Representative of a junction's potential inside the generalized domain.
std::optional<double> recover_pressure(double p, const PotentialCoeffs& c) {
    if (in_generalized_domain(p, c)) return p;
    const double pi = potential(p, c);
    if (pi > 0.0) return potential_inverse(pi, c);
    if (c.is_ideal()) return std::nullopt;
    // CNGA band point with zero potential (p == 0) maps onto the band edge.
    return -1.5 * c.b1_bar / c.b2_bar;
}

Solution make_solution(const ScaledNetwork& snet, std::vector<double> p, const std::vector<double>& f) {
    Solution sol;
    sol.p = std::move(p);
    sol.f = f;
    sol.rho.reserve(sol.p.size());
    for (double x : sol.p) sol.rho.push_back(density(x, snet.coeffs));
    // q_full = -A_full f.
    sol.q_full.assign(snet.junction_count(), 0.0);
    for (std::size_t k = 0; k < snet.edges.size(); ++k) {
        sol.q_full[snet.edges[k].from] += f[k];
        sol.q_full[snet.edges[k].to] -= f[k];
    }
    sol.units = Units::Dimensionless;
    return sol;
}

void classify(const ScaledNetwork& snet, const SolverConfig& cfg, Outcome& out) {
    const auto& state = out.final_state;
    const auto& c = snet.coeffs;

    std::vector<double> recovered(state.p.size());
    bool representable = true;
    for (std::size_t i = 0; i < state.p.size(); ++i) {
        const auto p = recover_pressure(state.p[i], c);
        if (!p) {
            representable = false;
            out.diagnostic = "junction '" + snet.junction_ids[i] + "' has no pressure in the monotone domain";
            break;
        }
        recovered[i] = *p;
    }

    bool compatible = representable;
    for (std::size_t k = 0; compatible && k < snet.edges.size(); ++k) {
        const auto& e = snet.edges[k];
        if (e.kind != ScaledEdgeKind::Ratio) continue;
        const double pj = recovered[e.to];
        const double gap = std::abs(pj - e.alpha * recovered[e.from]);
        if (gap > kCompatibilityTol * std::max(1.0, std::abs(pj))) {
            compatible = false;
            out.diagnostic = "potentials at '" + e.id + "' are not compatible with its ratio";
        }
    }

    if (!compatible) {
        out.classification = Classification::ConvergedOutOfDomain;
        out.feasibility = Feasibility::Indeterminate;
        out.solution = make_solution(snet, state.p, state.f);
        return;
    }

    out.classification = Classification::ConvergedInDomain;
    for (std::size_t i = 0; i < recovered.size(); ++i) {
        if (!(recovered[i] > 0.0)) {
            out.certificate.push_back({snet.junction_ids[i], CertificateReason::NegativePotential});
        }
    }
    for (std::size_t k = 0; k < snet.edges.size(); ++k) {
        const auto& e = snet.edges[k];
        if (e.is_compressor && state.f[k] < -cfg.tolerance) {
            out.certificate.push_back({e.id, CertificateReason::NegativeCompressorFlow});
        }
    }
    out.feasibility = out.certificate.empty() ? Feasibility::Feasible : Feasibility::Infeasible;
    out.solution = make_solution(snet, std::move(recovered), state.f);
}

}  // namespace

Outcome solve(const ScaledNetwork& snet, const SolverConfig& cfg) {
    cfg.validate();
    SolverState state = cfg.warm_start ? *cfg.warm_start : initial_guess(snet, cfg);
    check_dimensions(snet, state);
    for (std::size_t i = 0; i < snet.junction_count(); ++i) {
        if (snet.is_slack[i]) state.p[i] = snet.slack_p_bar[i];
    }
    state.iteration = 0;

    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    for (;;) {
        const double norm = residuals(snet, state).norm_inf;
        out.residual_history.push_back(norm);
        out.residual_final = norm;
        out.iterations = state.iteration;
        if (!std::isfinite(norm)) {
            out.failure = FailureKind::NonFinite;
            out.diagnostic = "residual became non-finite";
            break;
        }
        if (norm <= cfg.tolerance) break;
        if (state.iteration >= cfg.max_iterations) {
            out.failure = FailureKind::MaxIterations;
            out.diagnostic = "no convergence after " + std::to_string(cfg.max_iterations) + " iterations";
            break;
        }
        try {
            state = newton_step(snet, state).next;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularJacobian) throw;
            out.failure = FailureKind::SingularJacobian;
            out.diagnostic = e.what();
            break;
        }
    }
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.final_state = state;

    if (out.failure != FailureKind::None) {
        out.classification = Classification::Failed;
        out.feasibility = Feasibility::Indeterminate;
        return out;
    }
    classify(snet, cfg, out);
    return out;
}

Outcome pressure_correction_rerun(const ScaledNetwork& snet, const SolverConfig& cfg, const Outcome& outcome) {
    if (!outcome.converged()) return outcome;
    const auto& p = outcome.final_state.p;
    if (std::none_of(p.begin(), p.end(), [](double x) { return x < 0.0; })) return outcome;

    SolverState warm = outcome.final_state;
    for (auto& x : warm.p) x = std::abs(x);

    SolverConfig rerun_cfg = cfg;
    rerun_cfg.warm_start = std::move(warm);
    Outcome rerun = solve(snet, rerun_cfg);

    const auto& q = rerun.final_state.p;
    if (!rerun.converged() || std::any_of(q.begin(), q.end(), [](double x) { return !(x > 0.0); })) {
        return outcome;
    }
    rerun.pressure_corrected = true;
    rerun.iterations += outcome.iterations;
    rerun.wall_time_s += outcome.wall_time_s;
    rerun.residual_history.insert(rerun.residual_history.begin(), outcome.residual_history.begin(),
                                  outcome.residual_history.end());
    return rerun;
}

NetworkRun solve_network(const Network& net, const SolveOptions& options) {
    const auto nominals = options.dimensional ? NominalValues::dimensional() : choose_nominals(net, options.nominals);
    NetworkRun run{nondimensionalize(net, nominals), {}, std::nullopt};
    run.outcome = solve(run.scaled, options.solver);
    if (options.pressure_correction) {
        run.outcome = pressure_correction_rerun(run.scaled, options.solver, run.outcome);
    }
    if (run.outcome.solution) run.physical = redimensionalize(*run.outcome.solution, nominals);
    return run;
}

}  // namespace gasflow
