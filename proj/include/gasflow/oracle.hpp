#pragma once

// Reference solutions that do not go through the Newton solver.

#include "gasflow/eos.hpp"
#include "gasflow/network.hpp"
#include "gasflow/scaling.hpp"

#include <optional>
#include <string>

namespace gasflow::oracle {

/// Pipe (1, 2) with slack pressure p1 at junction 1 and flow f from 1 to 2.
struct SinglePipeCase {
    double p1;
    double f;
    double beta;
    PotentialCoeffs coeffs;
};

/// p2 = sqrt(p1^2 - (2 beta / b1) f|f|); nullopt (infeasible) when the radicand is not positive.
std::optional<double> single_pipe_ideal(const SinglePipeCase& c);

/// p2 = Pi^{-1}(Pi(p1) - beta f|f|); nullopt when the target potential is not positive.
std::optional<double> single_pipe_cnga(const SinglePipeCase& c);

struct TreeSolution {
    Solution solution;            // dimensionless; valid when feasible
    bool feasible = true;
    std::string infeasible_at;    // first junction whose potential was <= 0
};

/// Forward substitution on a tree with one slack: flows from leaf-to-root
/// accumulation of injections, then potentials/pressures propagated from the
/// slack along a deterministic DFS. Throws NotATree or MultipleSlacks.
TreeSolution tree_solve(const ScaledNetwork& snet);

/// Convenience overload: scales with automatically chosen nominals and returns
/// the solution in SI units.
TreeSolution tree_solve(const Network& net);

/// |sum q_full| / max(1, max|q_full|).
double balance_check(const Solution& sol);

}  // namespace gasflow::oracle
