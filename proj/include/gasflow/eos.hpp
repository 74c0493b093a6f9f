#pragma once

// Equations of state for isothermal natural gas.
//
// Both supported models share the dimensionless form
//
//     rho(p) = b1 * p + b2 * p^2
//     Pi(p)  = b1 * p^2 / 2 + b2 * p^3 / 3        (Pi(0) = 0)
//
// where Pi is the antiderivative of density with respect to pressure. The
// ideal gas is the special case b2 = 0.

namespace gasflow {

enum class EosKind { Ideal, Cnga };

const char* to_string(EosKind kind) noexcept;

/// Physical gas parameters. Defaults describe a methane-dominant pipeline gas.
struct EosParams {
    EosKind kind = EosKind::Ideal;
    double temperature = 288.706;           // [K]
    double specific_gravity = 0.6;          // [-]
    double gas_constant = 518.28;           // [J/(kg K)]
    double atmospheric_pressure = 101350.0; // [Pa]

    /// Isothermal sound speed a = sqrt(R_g T) [m/s].
    double sound_speed() const;

    /// Throws Error(InvalidArgument) when any parameter is non-positive or non-finite.
    void validate() const;
};

/// Dimensional CNGA coefficients: Z = 1 / (b1 + b2 p).
struct CngaCoefficients {
    double b1;  // [-]
    double b2;  // [1/Pa]
};

/// Coefficients of the dimensionless density polynomial.
struct PotentialCoeffs {
    double b1_bar = 1.0;
    double b2_bar = 0.0;

    static constexpr PotentialCoeffs ideal() { return {1.0, 0.0}; }
    bool is_ideal() const { return b2_bar == 0.0; }
};

/// CNGA fit constants.
inline constexpr double kCngaA1 = 344400.0;
inline constexpr double kCngaA2 = 1.785;
inline constexpr double kCngaA3 = 3.825;
inline constexpr double kPsiToPa = 6894.75729;

/// Evaluates the CNGA b1, b2 fit. Requires params.kind == Cnga.
/// Throws OverflowingCoefficient if 10^(a2 G) or (1.8 T)^a3 is not a finite double.
CngaCoefficients cnga_b_coefficients(const EosParams& params);

/// Dimensionless coefficients (C b1, C p0 b2) for Euler-like group C and
/// nominal pressure p0. The ideal gas uses b1 = 1, b2 = 0, so under the
/// standard nominal choice (C = 1) it yields exactly (1, 0).
PotentialCoeffs dimensionless_coeffs(const EosParams& params, double euler, double p0);

double density(double p, const PotentialCoeffs& c) noexcept;
double potential(double p, const PotentialCoeffs& c) noexcept;

/// dPi/dp; equal to density() but named for its role in Jacobian assembly.
double potential_derivative(double p, const PotentialCoeffs& c) noexcept;

/// Unique p > 0 with potential(p) == pi. Throws NonPositivePotential when pi <= 0.
/// The CNGA branch converges to a relative tolerance of 1e-12.
double potential_inverse(double pi, const PotentialCoeffs& c);

/// Membership in the maximal monotone pressure domain that contains p > 0:
/// {p > 0} for the ideal gas, {p > 0} U {p <= -3/2 b1/b2} for CNGA.
bool in_generalized_domain(double p, const PotentialCoeffs& c) noexcept;

}  // namespace gasflow
