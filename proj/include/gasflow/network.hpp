#pragma once

#include "gasflow/eos.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gasflow {

enum class JunctionKind { Slack, NonSlack };

struct Junction {
    std::string id;
    JunctionKind kind = JunctionKind::NonSlack;
    std::optional<double> slack_pressure;  // [Pa], present iff Slack
    std::optional<double> injection;       // [kg/s], present iff NonSlack; negative = withdrawal

    bool is_slack() const { return kind == JunctionKind::Slack; }

    static Junction slack(std::string id, double pressure_pa);
    static Junction non_slack(std::string id, double injection_kg_s);
};

struct Pipe {
    std::string id;
    std::string from;
    std::string to;
    double length = 0.0;           // [m]
    double diameter = 0.0;         // [m]
    double friction_factor = 0.0;  // [-]

    double area() const;  // pi D^2 / 4
};

struct Compressor {
    std::string id;
    std::string from;
    std::string to;
    double ratio = 1.0;
};

enum class PassThroughKind { ShortPipe, Valve, Regulator, Resistor, LossResistor };

const char* to_string(PassThroughKind kind) noexcept;

struct PassThrough {
    std::string id;
    std::string from;
    std::string to;
    PassThroughKind kind = PassThroughKind::ShortPipe;
    double ratio = 1.0;
    bool open = true;
};

enum class EdgeKind { Pipe, Compressor, PassThrough };

/// One column of the incidence matrix: a pipe, a compressor or an open pass-through.
struct EdgeRef {
    EdgeKind kind;
    std::size_t index;  // into the per-kind collection
    std::size_t from;   // junction index
    std::size_t to;     // junction index
};

/// Immutable pipeline network. Construct through `Network::build` (or the
/// instance parser); every structural and parameter invariant is checked there.
class Network {
public:
    static Network build(std::vector<Junction> junctions,
                         std::vector<Pipe> pipes,
                         std::vector<Compressor> compressors,
                         std::vector<PassThrough> pass_throughs,
                         EosParams eos);

    const std::vector<Junction>& junctions() const { return junctions_; }
    const std::vector<Pipe>& pipes() const { return pipes_; }
    const std::vector<Compressor>& compressors() const { return compressors_; }
    const std::vector<PassThrough>& pass_throughs() const { return pass_throughs_; }
    const EosParams& eos() const { return eos_; }

    /// Active edges in column order: pipes, compressors, then open pass-throughs.
    /// Closed pass-throughs are excluded.
    const std::vector<EdgeRef>& edges() const { return edges_; }

    std::size_t junction_index(std::string_view id) const;
    const std::string& edge_id(const EdgeRef& e) const;
    bool edge_is_pipe(const EdgeRef& e) const { return e.kind == EdgeKind::Pipe; }
    double edge_ratio(const EdgeRef& e) const;

    std::size_t slack_count() const;

    /// Copy with a different equation of state.
    Network with_eos(const EosParams& eos) const;
    /// Copy with replaced injections / compressor ratios; used by the perturbation routine.
    Network with_boundary(std::vector<Junction> junctions, std::vector<Compressor> compressors) const;

private:
    Network() = default;
    void index();

    std::vector<Junction> junctions_;
    std::vector<Pipe> pipes_;
    std::vector<Compressor> compressors_;
    std::vector<PassThrough> pass_throughs_;
    EosParams eos_;
    std::vector<EdgeRef> edges_;
    std::unordered_map<std::string, std::size_t> junction_lookup_;
};

/// Parses the JSON instance format. Errors: MalformedInput, SchemaViolation,
/// InconsistentBoundary.
Network parse_instance(std::string_view text);
Network load_instance(const std::string& path);

/// Serializes a network back into the instance format.
std::string write_instance(const Network& net);

struct AssumptionCheck {
    bool ok = true;
    std::vector<std::string> offenders;  // element ids
};

struct ValidationReport {
    AssumptionCheck a1_slack_present;
    AssumptionCheck a2_compressor_ratios;
    AssumptionCheck a3_slack_paths;
    AssumptionCheck a4_non_pipe_cycles;

    bool ok() const {
        return a1_slack_present.ok && a2_compressor_ratios.ok && a3_slack_paths.ok && a4_non_pipe_cycles.ok;
    }
    std::string summary() const;
};

/// Checks the structural assumptions:
///   A1 at least one slack junction;
///   A2 every compressor ratio is known (finite, >= 1);
///   A3 no two slacks joined by a path of non-pipe edges only;
///   A4 the non-pipe subgraph is acyclic.
ValidationReport validate(const Network& net);

struct IncidenceMatrices {
    Eigen::SparseMatrix<double> full;     // |N| x |E|
    Eigen::SparseMatrix<double> reduced;  // |N_ns| x |E|
    std::vector<std::size_t> row_order;   // reduced row -> junction index
    std::vector<std::size_t> column_order;  // column -> position in Network::edges()
    std::vector<std::ptrdiff_t> reduced_row_of_junction;  // -1 for slack junctions
};

/// Column j has -1 at the tail junction and +1 at the head junction of edge j.
IncidenceMatrices incidence(const Network& net);

struct Interval {
    double lo;
    double hi;
};

/// Scales each non-slack injection by an independent U[withdrawal] factor and
/// redraws each compressor ratio from U[ratio]. Each element draws from its
/// own mt19937_64 stream seeded from (seed, element id), so the result does not
/// depend on element order.
Network perturb_instance(const Network& net, std::uint64_t seed, Interval withdrawal, Interval ratio);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::uint64_t bits) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace gasflow
