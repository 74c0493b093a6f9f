#include "gasflow/gasflow.h"

#include "gasflow/error.hpp"
#include "gasflow/network.hpp"
#include "gasflow/solver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

struct gf_network {
    gasflow::Network net;
    std::string validation_summary;
};

struct gf_result {
    gasflow::Outcome outcome;
    std::optional<gasflow::Solution> physical;
    std::string json;
};

namespace {

thread_local std::string last_error;

gf_status map_code(gasflow::ErrorCode code) {
    using gasflow::ErrorCode;
    switch (code) {
        case ErrorCode::Io: return GF_ERR_IO;
        case ErrorCode::MalformedInput: return GF_ERR_MALFORMED_INPUT;
        case ErrorCode::SchemaViolation: return GF_ERR_SCHEMA_VIOLATION;
        case ErrorCode::InconsistentBoundary: return GF_ERR_INCONSISTENT_BOUNDARY;
        case ErrorCode::InvalidArgument: return GF_ERR_INVALID_ARGUMENT;
        case ErrorCode::OverflowingCoefficient: return GF_ERR_OVERFLOWING_COEFFICIENT;
        case ErrorCode::NoPipes: return GF_ERR_NO_PIPES;
        case ErrorCode::NotATree: return GF_ERR_NOT_A_TREE;
        case ErrorCode::MultipleSlacks: return GF_ERR_MULTIPLE_SLACKS;
        case ErrorCode::NonPositivePotential:
        case ErrorCode::SingularJacobian: break;
    }
    return GF_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes and the thread-local message.
template <class Fn>
gf_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        fn();
        return GF_OK;
    } catch (const gasflow::Error& e) {
        last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    }
    return GF_ERR_INTERNAL;
}

gf_status null_argument(const char* what) {
    last_error = std::string("null argument: ") + what;
    return GF_ERR_INVALID_ARGUMENT;
}

const char* edge_kind_name(gasflow::EdgeKind kind) {
    switch (kind) {
        case gasflow::EdgeKind::Pipe: return "pipe";
        case gasflow::EdgeKind::Compressor: return "compressor";
        case gasflow::EdgeKind::PassThrough: break;
    }
    return "pass_through";
}

std::string solution_json(const gasflow::Network& net, const gasflow::NetworkRun& run) {
    using nlohmann::json;
    const auto& o = run.outcome;
    json doc;
    doc["format_version"] = 1;
    doc["units"] = "si";
    doc["eos"] = gasflow::to_string(net.eos().kind);
    doc["classification"] = gasflow::to_string(o.classification);
    doc["feasibility"] = gasflow::to_string(o.feasibility);
    doc["failure"] = gasflow::to_string(o.failure);
    doc["diagnostic"] = o.diagnostic;
    doc["iterations"] = o.iterations;
    doc["residual"] = o.residual_final;
    doc["pressure_corrected"] = o.pressure_corrected;
    doc["certificate"] = json::array();
    for (const auto& c : o.certificate) {
        doc["certificate"].push_back({{"element", c.element_id}, {"reason", gasflow::to_string(c.reason)}});
    }
    const auto& nv = run.scaled.nominals;
    doc["nominals"] = {{"l0_m", nv.l0},     {"p0_pa", nv.p0},         {"v0_m_s", nv.v0},
                       {"rho0_kg_m3", nv.rho0}, {"phi0_kg_m2_s", nv.phi0}, {"f0_kg_s", nv.f0}};
    doc["nodes"] = json::array();
    doc["edges"] = json::array();
    if (run.physical) {
        const auto& s = *run.physical;
        const auto& js = net.junctions();
        for (std::size_t i = 0; i < js.size(); ++i) {
            doc["nodes"].push_back({{"id", js[i].id},
                                    {"slack", js[i].is_slack()},
                                    {"pressure_pa", s.p[i]},
                                    {"density_kg_m3", s.rho[i]},
                                    {"injection_kg_s", s.q_full[i]}});
        }
        const auto& es = net.edges();
        for (std::size_t k = 0; k < es.size(); ++k) {
            doc["edges"].push_back(
                {{"id", net.edge_id(es[k])}, {"kind", edge_kind_name(es[k].kind)}, {"flow_kg_s", s.f[k]}});
        }
    }
    return doc.dump(2);
}

size_t copy_out(const std::optional<gasflow::Solution>& sol, std::vector<double> gasflow::Solution::*member,
                double* buffer, size_t capacity) {
    if (!sol) return 0;
    const auto& v = (*sol).*member;
    if (buffer) std::copy_n(v.begin(), std::min(capacity, v.size()), buffer);
    return v.size();
}

}  // namespace

extern "C" {

const char* gf_version(void) { return "1.0.0"; }

const char* gf_last_error(void) { return last_error.c_str(); }

const char* gf_status_string(gf_status status) {
    switch (status) {
        case GF_OK: return "ok";
        case GF_ERR_IO: return "io error";
        case GF_ERR_MALFORMED_INPUT: return "malformed input";
        case GF_ERR_SCHEMA_VIOLATION: return "schema violation";
        case GF_ERR_INCONSISTENT_BOUNDARY: return "inconsistent boundary";
        case GF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case GF_ERR_OVERFLOWING_COEFFICIENT: return "overflowing coefficient";
        case GF_ERR_NO_PIPES: return "no pipes";
        case GF_ERR_NOT_A_TREE: return "not a tree";
        case GF_ERR_MULTIPLE_SLACKS: return "multiple slacks";
        case GF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

gf_status gf_network_parse(const char* text, size_t length, gf_network** out) {
    if (!text || !out) return null_argument("text/out");
    *out = nullptr;
    return guarded([&] { *out = new gf_network{gasflow::parse_instance(std::string_view(text, length)), {}}; });
}

gf_status gf_network_load(const char* path, gf_network** out) {
    if (!path || !out) return null_argument("path/out");
    *out = nullptr;
    return guarded([&] { *out = new gf_network{gasflow::load_instance(path), {}}; });
}

void gf_network_free(gf_network* net) { delete net; }

gf_status gf_network_with_eos(const gf_network* net, gf_eos_kind kind, gf_network** out) {
    if (!net || !out) return null_argument("net/out");
    *out = nullptr;
    return guarded([&] {
        auto eos = net->net.eos();
        eos.kind = kind == GF_EOS_CNGA ? gasflow::EosKind::Cnga : gasflow::EosKind::Ideal;
        *out = new gf_network{net->net.with_eos(eos), {}};
    });
}

gf_status gf_network_perturb(const gf_network* net, uint64_t seed, double withdrawal_lo, double withdrawal_hi,
                             double ratio_lo, double ratio_hi, gf_network** out) {
    if (!net || !out) return null_argument("net/out");
    *out = nullptr;
    return guarded([&] {
        *out = new gf_network{
            gasflow::perturb_instance(net->net, seed, {withdrawal_lo, withdrawal_hi}, {ratio_lo, ratio_hi}), {}};
    });
}

gf_status gf_network_validate(const gf_network* net, gf_validation* out, const char** summary) {
    if (!net || !out) return null_argument("net/out");
    return guarded([&] {
        const auto report = gasflow::validate(net->net);
        out->a1_slack_present = report.a1_slack_present.ok;
        out->a2_compressor_ratios = report.a2_compressor_ratios.ok;
        out->a3_slack_paths = report.a3_slack_paths.ok;
        out->a4_non_pipe_cycles = report.a4_non_pipe_cycles.ok;
        auto* mutable_net = const_cast<gf_network*>(net);
        mutable_net->validation_summary = report.summary();
        if (summary) *summary = net->validation_summary.c_str();
    });
}

size_t gf_network_junction_count(const gf_network* net) { return net ? net->net.junctions().size() : 0; }

size_t gf_network_edge_count(const gf_network* net) { return net ? net->net.edges().size() : 0; }

const char* gf_network_junction_id(const gf_network* net, size_t index) {
    if (!net || index >= net->net.junctions().size()) return nullptr;
    return net->net.junctions()[index].id.c_str();
}

int gf_network_junction_is_slack(const gf_network* net, size_t index) {
    if (!net || index >= net->net.junctions().size()) return 0;
    return net->net.junctions()[index].is_slack() ? 1 : 0;
}

const char* gf_network_edge_id(const gf_network* net, size_t index) {
    if (!net || index >= net->net.edges().size()) return nullptr;
    return net->net.edge_id(net->net.edges()[index]).c_str();
}

gf_eos_kind gf_network_eos_kind(const gf_network* net) {
    return net && net->net.eos().kind == gasflow::EosKind::Cnga ? GF_EOS_CNGA : GF_EOS_IDEAL;
}

void gf_solve_options_init(gf_solve_options* options) {
    if (!options) return;
    const gasflow::SolverConfig defaults;
    options->tolerance = defaults.tolerance;
    options->max_iterations = defaults.max_iterations;
    options->seed = defaults.seed;
    options->dimensional = 0;
    options->pressure_correction = 1;
    options->nominal_l0 = 0.0;
    options->nominal_p0 = 0.0;
    options->nominal_v0 = 0.0;
}

gf_status gf_solve(const gf_network* net, const gf_solve_options* options, gf_result** out) {
    if (!net || !out) return null_argument("net/out");
    *out = nullptr;
    gf_solve_options opts;
    gf_solve_options_init(&opts);
    if (options) opts = *options;
    return guarded([&] {
        gasflow::SolveOptions so;
        so.solver.tolerance = opts.tolerance;
        so.solver.max_iterations = opts.max_iterations;
        so.solver.seed = opts.seed;
        so.dimensional = opts.dimensional != 0;
        so.pressure_correction = opts.pressure_correction != 0;
        if (opts.nominal_l0 > 0.0) so.nominals.l0 = opts.nominal_l0;
        if (opts.nominal_p0 > 0.0) so.nominals.p0 = opts.nominal_p0;
        if (opts.nominal_v0 > 0.0) so.nominals.v0 = opts.nominal_v0;
        auto run = gasflow::solve_network(net->net, so);
        auto json = solution_json(net->net, run);
        *out = new gf_result{std::move(run.outcome), std::move(run.physical), std::move(json)};
    });
}

void gf_result_free(gf_result* result) { delete result; }

gf_classification gf_result_classification(const gf_result* r) {
    if (!r) return GF_E3_FAILED;
    switch (r->outcome.classification) {
        case gasflow::Classification::ConvergedInDomain: return GF_E1_CONVERGED_IN_DOMAIN;
        case gasflow::Classification::ConvergedOutOfDomain: return GF_E2_CONVERGED_OUT_OF_DOMAIN;
        case gasflow::Classification::Failed: break;
    }
    return GF_E3_FAILED;
}

gf_feasibility gf_result_feasibility(const gf_result* r) {
    if (!r) return GF_INDETERMINATE;
    switch (r->outcome.feasibility) {
        case gasflow::Feasibility::Feasible: return GF_FEASIBLE;
        case gasflow::Feasibility::Infeasible: return GF_INFEASIBLE;
        case gasflow::Feasibility::Indeterminate: break;
    }
    return GF_INDETERMINATE;
}

gf_failure gf_result_failure(const gf_result* r) {
    if (!r) return GF_FAILURE_NONE;
    switch (r->outcome.failure) {
        case gasflow::FailureKind::None: return GF_FAILURE_NONE;
        case gasflow::FailureKind::MaxIterations: return GF_FAILURE_MAX_ITERATIONS;
        case gasflow::FailureKind::NonFinite: return GF_FAILURE_NON_FINITE;
        case gasflow::FailureKind::SingularJacobian: break;
    }
    return GF_FAILURE_SINGULAR_JACOBIAN;
}

const char* gf_result_diagnostic(const gf_result* r) { return r ? r->outcome.diagnostic.c_str() : ""; }
int gf_result_iterations(const gf_result* r) { return r ? r->outcome.iterations : 0; }
double gf_result_residual(const gf_result* r) { return r ? r->outcome.residual_final : 0.0; }
double gf_result_wall_time(const gf_result* r) { return r ? r->outcome.wall_time_s : 0.0; }
int gf_result_pressure_corrected(const gf_result* r) { return r && r->outcome.pressure_corrected ? 1 : 0; }

size_t gf_result_residual_history(const gf_result* r, double* buffer, size_t capacity) {
    if (!r) return 0;
    const auto& h = r->outcome.residual_history;
    if (buffer) std::copy_n(h.begin(), std::min(capacity, h.size()), buffer);
    return h.size();
}

size_t gf_result_certificate_count(const gf_result* r) { return r ? r->outcome.certificate.size() : 0; }

const char* gf_result_certificate_element(const gf_result* r, size_t index) {
    if (!r || index >= r->outcome.certificate.size()) return nullptr;
    return r->outcome.certificate[index].element_id.c_str();
}

gf_certificate_reason gf_result_certificate_reason(const gf_result* r, size_t index) {
    if (r && index < r->outcome.certificate.size() &&
        r->outcome.certificate[index].reason == gasflow::CertificateReason::NegativePotential) {
        return GF_CERT_NEGATIVE_POTENTIAL;
    }
    return GF_CERT_NEGATIVE_COMPRESSOR_FLOW;
}

int gf_result_has_solution(const gf_result* r) { return r && r->physical ? 1 : 0; }

size_t gf_result_pressures(const gf_result* r, double* buffer, size_t capacity) {
    return r ? copy_out(r->physical, &gasflow::Solution::p, buffer, capacity) : 0;
}

size_t gf_result_densities(const gf_result* r, double* buffer, size_t capacity) {
    return r ? copy_out(r->physical, &gasflow::Solution::rho, buffer, capacity) : 0;
}

size_t gf_result_injections(const gf_result* r, double* buffer, size_t capacity) {
    return r ? copy_out(r->physical, &gasflow::Solution::q_full, buffer, capacity) : 0;
}

size_t gf_result_flows(const gf_result* r, double* buffer, size_t capacity) {
    return r ? copy_out(r->physical, &gasflow::Solution::f, buffer, capacity) : 0;
}

const char* gf_result_json(const gf_result* r) { return r ? r->json.c_str() : nullptr; }

}  // extern "C"
