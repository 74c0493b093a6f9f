#include "gasflow/scaling.hpp"

#include "gasflow/error.hpp"

#include <algorithm>
#include <cmath>

namespace gasflow {

NominalValues NominalValues::from_base(double l0, double p0, double v0, double sound_speed) {
    NominalValues nv;
    nv.l0 = l0;
    nv.p0 = p0;
    nv.v0 = v0;
    nv.rho0 = p0 / (sound_speed * sound_speed);
    nv.phi0 = nv.rho0 * v0;
    nv.A0 = 1.0;
    nv.f0 = nv.phi0 * nv.A0;
    nv.validate();
    return nv;
}

NominalValues NominalValues::dimensional() { return {}; }

void NominalValues::validate() const {
    for (double v : {l0, p0, v0, rho0, phi0, f0, A0}) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "nominal values must be finite and positive");
        }
    }
}

DimensionlessGroups groups(const NominalValues& nv, double sound_speed) {
    return {nv.v0 / sound_speed, nv.p0 / (nv.rho0 * sound_speed * sound_speed)};
}

NominalValues choose_nominals(const Network& net, const NominalOverrides& overrides) {
    const auto& pipes = net.pipes();
    if (pipes.empty() && !overrides.l0) {
        throw Error(ErrorCode::NoPipes, "cannot choose a nominal length for a network without pipes");
    }
    const double a = net.eos().sound_speed();

    double l0 = 0.0;
    if (overrides.l0) {
        l0 = *overrides.l0;
    } else {
        double log_sum = 0.0;
        for (const auto& p : pipes) log_sum += std::log(p.length);
        l0 = std::clamp(std::exp(log_sum / static_cast<double>(pipes.size())), 1000.0, 10000.0);
    }

    double p0 = 0.0;
    if (overrides.p0) {
        p0 = *overrides.p0;
    } else {
        const auto& js = net.junctions();
        auto it = std::find_if(js.begin(), js.end(), [](const Junction& j) { return j.is_slack(); });
        if (it == js.end()) throw Error(ErrorCode::InvalidArgument, "network has no slack junction");
        p0 = *it->slack_pressure;
    }

    double v0 = a;
    if (overrides.v0) {
        v0 = *overrides.v0;
    } else {
        std::vector<double> magnitudes;
        for (const auto& j : net.junctions()) {
            if (!j.is_slack() && *j.injection != 0.0) magnitudes.push_back(std::abs(*j.injection));
        }
        if (!magnitudes.empty()) {
            std::sort(magnitudes.begin(), magnitudes.end());
            const auto n = magnitudes.size();
            const double median =
                n % 2 ? magnitudes[n / 2] : 0.5 * (magnitudes[n / 2 - 1] + magnitudes[n / 2]);
            const double rho0 = p0 / (a * a);
            v0 = std::ldexp(a, -10);
            for (int k = 0; k < 2000 && rho0 * v0 < median / 2.0; ++k) v0 *= 2.0;
        }
    }
    return NominalValues::from_base(l0, p0, v0, a);
}

double effective_resistance(const Pipe& pipe, const NominalValues& nv, const DimensionlessGroups& g) {
    const double length = pipe.length / nv.l0;
    const double diameter = pipe.diameter / nv.l0;
    const double area = pipe.area() / nv.A0;
    return (g.mach * g.mach / g.euler) * pipe.friction_factor * length / (2.0 * diameter * area * area);
}

ScaledNetwork nondimensionalize(const Network& net, const NominalValues& nv) {
    nv.validate();
    const double a = net.eos().sound_speed();

    ScaledNetwork s;
    s.nominals = nv;
    s.dimensionless = groups(nv, a);
    s.coeffs = dimensionless_coeffs(net.eos(), s.dimensionless.euler, nv.p0);

    for (const auto& j : net.junctions()) {
        s.junction_ids.push_back(j.id);
        s.is_slack.push_back(j.is_slack());
        s.slack_p_bar.push_back(j.is_slack() ? *j.slack_pressure / nv.p0 : 0.0);
        s.q_bar.push_back(j.is_slack() ? 0.0 : *j.injection / nv.f0);
    }
    for (const auto& e : net.edges()) {
        ScaledEdge se;
        se.id = net.edge_id(e);
        se.from = e.from;
        se.to = e.to;
        if (net.edge_is_pipe(e)) {
            se.kind = ScaledEdgeKind::Pipe;
            se.beta = effective_resistance(net.pipes()[e.index], nv, s.dimensionless);
        } else {
            se.kind = ScaledEdgeKind::Ratio;
            se.alpha = net.edge_ratio(e);
            se.is_compressor = e.kind == EdgeKind::Compressor;
        }
        s.edges.push_back(std::move(se));
    }
    s.incidence = incidence(net);
    return s;
}

Solution redimensionalize(const Solution& sol, const NominalValues& nv) {
    if (sol.units == Units::Physical) return sol;
    Solution out = sol;
    for (auto& v : out.p) v *= nv.p0;
    for (auto& v : out.rho) v *= nv.rho0;
    for (auto& v : out.f) v *= nv.f0;
    for (auto& v : out.q_full) v *= nv.f0;
    out.units = Units::Physical;
    return out;
}

}  // namespace gasflow
