#include "gasflow/eos.hpp"

#include "gasflow/error.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace gasflow {

const char* to_string(EosKind kind) noexcept {
    switch (kind) {
        case EosKind::Ideal: return "ideal";
        case EosKind::Cnga: return "cnga";
    }
    return "unknown";
}

double EosParams::sound_speed() const { return std::sqrt(gas_constant * temperature); }

void EosParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string("eos parameter '") + name + "' must be finite and positive");
        }
    };
    check(temperature, "temperature_k");
    check(specific_gravity, "specific_gravity");
    check(gas_constant, "gas_constant_j_per_kg_k");
    check(atmospheric_pressure, "atmospheric_pressure_pa");
}

CngaCoefficients cnga_b_coefficients(const EosParams& params) {
    if (params.kind != EosKind::Cnga) {
        throw Error(ErrorCode::InvalidArgument, "cnga_b_coefficients requires the CNGA equation of state");
    }
    params.validate();

    const double gravity_term = std::pow(10.0, kCngaA2 * params.specific_gravity);
    const double temperature_term = std::pow(1.8 * params.temperature, kCngaA3);
    if (!std::isfinite(gravity_term) || !std::isfinite(temperature_term) || temperature_term == 0.0) {
        throw Error(ErrorCode::OverflowingCoefficient,
                    "CNGA coefficient 10^(a2*G)/(1.8T)^a3 is not representable (G = " +
                        std::to_string(params.specific_gravity) + ")");
    }
    const double k = kCngaA1 * gravity_term / temperature_term;
    const CngaCoefficients out{1.0 + (params.atmospheric_pressure / kPsiToPa) * k, k / kPsiToPa};
    if (!std::isfinite(out.b1) || !std::isfinite(out.b2)) {
        throw Error(ErrorCode::OverflowingCoefficient, "CNGA coefficients overflow");
    }
    return out;
}

PotentialCoeffs dimensionless_coeffs(const EosParams& params, double euler, double p0) {
    if (!(euler > 0.0) || !(p0 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dimensionless_coeffs requires C > 0 and p0 > 0");
    }
    if (params.kind == EosKind::Ideal) {
        return {euler * 1.0, 0.0};
    }
    const auto b = cnga_b_coefficients(params);
    return {euler * b.b1, euler * p0 * b.b2};
}

double density(double p, const PotentialCoeffs& c) noexcept {
    return c.b1_bar * p + c.b2_bar * p * p;
}

double potential(double p, const PotentialCoeffs& c) noexcept {
    return c.b1_bar * p * p / 2.0 + c.b2_bar * p * p * p / 3.0;
}

double potential_derivative(double p, const PotentialCoeffs& c) noexcept { return density(p, c); }

double potential_inverse(double pi, const PotentialCoeffs& c) {
    if (!(pi > 0.0)) {
        throw Error(ErrorCode::NonPositivePotential, "potential_inverse requires a positive potential");
    }
    if (c.is_ideal()) {
        return std::sqrt(2.0 * pi / c.b1_bar);
    }

    // Pi is strictly increasing on (0, inf) with Pi(0) = 0, so doubling the
    // upper end yields a sign-changing bracket.
    double hi = std::max(1.0, std::sqrt(2.0 * pi / c.b1_bar));
    while (potential(hi, c) < pi) {
        hi *= 2.0;
    }
    const auto f = [&](double p) { return potential(p, c) - pi; };
    std::uintmax_t max_iter = 200;
    const auto [lo_end, hi_end] = boost::math::tools::toms748_solve(
        f, 0.0, hi, -pi, potential(hi, c) - pi, boost::math::tools::eps_tolerance<double>(45), max_iter);
    return 0.5 * (lo_end + hi_end);
}

bool in_generalized_domain(double p, const PotentialCoeffs& c) noexcept {
    if (c.is_ideal()) {
        return p > 0.0;
    }
    return p > 0.0 || p <= -1.5 * (c.b1_bar / c.b2_bar);
}

}  // namespace gasflow
