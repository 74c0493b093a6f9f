#pragma once

#include "gasflow/eos.hpp"
#include "gasflow/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gasflow {

/// Reference scales used to non-dimensionalize the network. The nominal
/// density, mass flux and mass flow follow from (l0, p0, v0) and the sound
/// speed: rho0 = p0 / a^2, phi0 = rho0 v0, f0 = phi0 A0 with A0 = 1.
struct NominalValues {
    double l0 = 1.0;    // [m]
    double p0 = 1.0;    // [Pa]
    double v0 = 1.0;    // [m/s]
    double rho0 = 1.0;  // [kg/m^3]
    double phi0 = 1.0;  // [kg/(m^2 s)]
    double f0 = 1.0;    // [kg/s]
    double A0 = 1.0;    // [m^2]

    /// Derives rho0, phi0 and f0 from (l0, p0, v0) and the sound speed.
    static NominalValues from_base(double l0, double p0, double v0, double sound_speed);

    /// Every nominal equal to one: solves the equations in SI units.
    static NominalValues dimensional();

    void validate() const;
};

struct DimensionlessGroups {
    double mach = 1.0;   // M = v0 / a
    double euler = 1.0;  // C = p0 / (rho0 a^2)
};

DimensionlessGroups groups(const NominalValues& nv, double sound_speed);

/// Optional user overrides; unset members are chosen automatically.
struct NominalOverrides {
    std::optional<double> l0;
    std::optional<double> p0;
    std::optional<double> v0;
};

/// Picks nominal values from the network data:
///   l0: geometric mean of pipe lengths, clamped to [1000, 10000] m;
///   p0: first slack pressure in input order;
///   v0: smallest a 2^(k-10), k >= 0, with rho0 v0 >= median|q| / 2 over the
///       non-zero non-slack injections (v0 = a when there are none).
/// Throws NoPipes when the network has no pipes.
NominalValues choose_nominals(const Network& net, const NominalOverrides& overrides = {});

enum class ScaledEdgeKind { Pipe, Ratio };

struct ScaledEdge {
    std::string id;
    ScaledEdgeKind kind;
    std::size_t from;
    std::size_t to;
    double beta = 0.0;   // pipes: effective resistance
    double alpha = 1.0;  // compressors / pass-throughs: pressure ratio
    bool is_compressor = false;
};

/// Non-dimensional form of a network. Junction and edge order match
/// `Network::junctions()` and `Network::edges()`.
struct ScaledNetwork {
    std::vector<std::string> junction_ids;
    std::vector<bool> is_slack;
    std::vector<double> slack_p_bar;  // per junction; 0 for non-slack
    std::vector<double> q_bar;        // per junction; 0 for slack
    std::vector<ScaledEdge> edges;
    IncidenceMatrices incidence;
    PotentialCoeffs coeffs;
    NominalValues nominals;
    DimensionlessGroups dimensionless;

    std::size_t junction_count() const { return junction_ids.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t unknown_count() const { return junction_ids.size() + edges.size(); }
};

/// Effective resistance (M^2/C) lambda L_bar / (2 D_bar A_bar^2).
double effective_resistance(const Pipe& pipe, const NominalValues& nv, const DimensionlessGroups& g);

ScaledNetwork nondimensionalize(const Network& net, const NominalValues& nv);

enum class Units { Dimensionless, Physical };

/// Per-junction pressure, density and injection (slack injections recovered)
/// plus per-edge mass flow.
struct Solution {
    std::vector<double> p;
    std::vector<double> rho;
    std::vector<double> f;
    std::vector<double> q_full;
    Units units = Units::Dimensionless;
};

/// Multiplies pressures by p0, flows and injections by f0 and densities by rho0.
/// A solution already in physical units is returned unchanged.
Solution redimensionalize(const Solution& sol, const NominalValues& nv);

}  // namespace gasflow
