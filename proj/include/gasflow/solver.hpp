#pragma once

// Newton-Raphson solver for the non-dimensional steady-state network equations
//
//   Pi(p_i) - Pi(p_j) - beta f |f| = 0   for every pipe (i, j)
//   p_j - alpha p_i              = 0   for every compressor / pass-through
//   A f + q                      = 0   at every non-slack junction
//   p_s                          = given at every slack junction
//
// with unknowns ordered [p (all junctions); f (all active edges)] and
// equations ordered [edge rows; non-slack balance rows; slack rows].

#include "gasflow/scaling.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gasflow {

struct SolverState {
    std::vector<double> p;  // per junction
    std::vector<double> f;  // per active edge
    int iteration = 0;
};

struct SolverConfig {
    double tolerance = 1e-8;  // bound on the infinity norm of the residual
    int max_iterations = 2000;
    std::uint64_t seed = 0;
    std::optional<SolverState> warm_start;  // empty: random positive start

    void validate() const;
};

struct Residuals {
    std::vector<double> pipe;  // per pipe edge, in edge order
    std::vector<double> comp;  // per compressor / pass-through edge, in edge order
    std::vector<double> node;  // per non-slack junction, in reduced-row order
    double norm_inf = 0.0;
};

struct Jacobian {
    Eigen::Index size = 0;
    std::vector<Eigen::Triplet<double>> triplets;

    Eigen::SparseMatrix<double> matrix() const;
};

enum class Classification { ConvergedInDomain, ConvergedOutOfDomain, Failed };
enum class Feasibility { Feasible, Infeasible, Indeterminate };
enum class CertificateReason { NegativeCompressorFlow, NegativePotential };
enum class FailureKind { None, MaxIterations, NonFinite, SingularJacobian };

const char* to_string(Classification c) noexcept;  // "E1" / "E2" / "E3"
const char* to_string(Feasibility f) noexcept;
const char* to_string(CertificateReason r) noexcept;
const char* to_string(FailureKind f) noexcept;

struct CertificateEntry {
    std::string element_id;
    CertificateReason reason;
};

struct Outcome {
    Classification classification = Classification::Failed;
    Feasibility feasibility = Feasibility::Indeterminate;
    std::optional<Solution> solution;  // E1: recovered pressures; E2: raw iterate
    std::vector<CertificateEntry> certificate;
    int iterations = 0;
    double residual_final = 0.0;
    std::vector<double> residual_history;
    FailureKind failure = FailureKind::None;
    std::string diagnostic;
    SolverState final_state;  // raw Newton iterate at termination
    bool pressure_corrected = false;
    double wall_time_s = 0.0;  // Newton loop only

    bool converged() const { return classification != Classification::Failed; }
};

/// Random start with every non-slack pressure and every flow drawn from
/// U[0.5, 1.5]: positive density at each junction and non-zero pipe flows,
/// which keeps the first Jacobian invertible.
SolverState initial_guess(const ScaledNetwork& snet, const SolverConfig& cfg);

Residuals residuals(const ScaledNetwork& snet, const SolverState& state);

/// Residuals flattened in equation order; slack rows hold p_s - p_s_given.
std::vector<double> residual_vector(const ScaledNetwork& snet, const SolverState& state);

Jacobian jacobian(const ScaledNetwork& snet, const SolverState& state);

struct NewtonStep {
    SolverState next;
    double residual_norm;  // infinity norm at the input state
};

/// One undamped Newton update through a sparse LU factorization. Slack
/// pressures are copied, never incremented. Throws Error(SingularJacobian)
/// with the numerical rank when the factorization fails.
NewtonStep newton_step(const ScaledNetwork& snet, const SolverState& state);

/// Iterates to convergence, classifies the terminal point (E1/E2/E3) and
/// certifies feasibility for E1. The returned solution is dimensionless.
Outcome solve(const ScaledNetwork& snet, const SolverConfig& cfg);

/// Warm-started re-solve with every negative non-slack pressure replaced by
/// its absolute value. The rerun is adopted only if it converges with all
/// pressures positive; otherwise `outcome` is returned unchanged.
Outcome pressure_correction_rerun(const ScaledNetwork& snet, const SolverConfig& cfg, const Outcome& outcome);

struct SolveOptions {
    SolverConfig solver;
    NominalOverrides nominals;
    bool dimensional = false;  // all nominal values set to one
    bool pressure_correction = true;
};

struct NetworkRun {
    ScaledNetwork scaled;
    Outcome outcome;                  // dimensionless
    std::optional<Solution> physical; // outcome.solution in SI units
};

/// Choose nominals, non-dimensionalize, solve, optionally rerun with
/// corrected pressures, and convert the solution back to SI units.
NetworkRun solve_network(const Network& net, const SolveOptions& options);

}  // namespace gasflow
