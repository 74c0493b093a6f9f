// gasflow command-line front end. Talks to the solver only through gasflow.h.

#include "gasflow/gasflow.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr const char* kCsvVersion = "gasflow-csv 1";

enum Exit { kFeasible = 0, kUsage = 1, kInfeasible = 2, kUnresolved = 3 };

struct NetworkDeleter {
    void operator()(gf_network* n) const { gf_network_free(n); }
};
struct ResultDeleter {
    void operator()(gf_result* r) const { gf_result_free(r); }
};
using NetworkPtr = std::unique_ptr<gf_network, NetworkDeleter>;
using ResultPtr = std::unique_ptr<gf_result, ResultDeleter>;

struct Failure {
    std::string message;
};

void check(gf_status s, const std::string& what) {
    if (s != GF_OK) throw Failure{what + ": " + gf_status_string(s) + ": " + gf_last_error()};
}

struct RunSpec {
    std::string instance_path;
    std::string eos;  // empty: as in the instance
    int n = 500;
    bool n_given = false;
    std::uint64_t seed = 0;
    double withdraw_lo = 0.9, withdraw_hi = 1.1;
    double ratio_lo = 1.1, ratio_hi = 1.4;
    double l0 = 0.0, p0 = 0.0, v0 = 0.0;
    std::string out;
    std::string format = "json";
    double tol = 1e-8;
    int max_iter = 2000;
    bool dimensional = false;
};

struct Report {
    std::string instance_id;
    gf_classification classification = GF_E3_FAILED;
    gf_feasibility feasibility = GF_INDETERMINATE;
    std::string certificate;  // "element:reason;..."
    int iterations = 0;
    double residual = 0.0;
    double wall_time = 0.0;
    std::string diagnostic;
};

const char* classification_name(gf_classification c) {
    switch (c) {
        case GF_E1_CONVERGED_IN_DOMAIN: return "E1";
        case GF_E2_CONVERGED_OUT_OF_DOMAIN: return "E2";
        case GF_E3_FAILED: break;
    }
    return "E3";
}

const char* feasibility_name(gf_feasibility f) {
    switch (f) {
        case GF_FEASIBLE: return "feasible";
        case GF_INFEASIBLE: return "infeasible";
        case GF_INDETERMINATE: break;
    }
    return "indeterminate";
}

int exit_code(const Report& r) {
    if (r.classification != GF_E1_CONVERGED_IN_DOMAIN) return kUnresolved;
    return r.feasibility == GF_FEASIBLE ? kFeasible : kInfeasible;
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

NetworkPtr load(const RunSpec& spec) {
    gf_network* raw = nullptr;
    check(gf_network_load(spec.instance_path.c_str(), &raw), spec.instance_path);
    NetworkPtr net(raw);
    if (!spec.eos.empty()) {
        gf_network* swapped = nullptr;
        check(gf_network_with_eos(net.get(), spec.eos == "cnga" ? GF_EOS_CNGA : GF_EOS_IDEAL, &swapped), "eos");
        net.reset(swapped);
    }
    gf_validation v;
    const char* summary = nullptr;
    check(gf_network_validate(net.get(), &v, &summary), "validate");
    if (!v.a1_slack_present) throw Failure{std::string("instance violates A1\n") + summary};
    if (!(v.a2_compressor_ratios && v.a3_slack_paths && v.a4_non_pipe_cycles)) {
        std::cerr << "warning: structural assumptions violated\n" << summary;
    }
    return net;
}

NetworkPtr with_eos(const gf_network* net, gf_eos_kind kind) {
    gf_network* raw = nullptr;
    check(gf_network_with_eos(net, kind, &raw), "eos");
    return NetworkPtr(raw);
}

gf_solve_options options(const RunSpec& spec, std::uint64_t seed, bool dimensional) {
    gf_solve_options o;
    gf_solve_options_init(&o);
    o.tolerance = spec.tol;
    o.max_iterations = spec.max_iter;
    o.seed = seed;
    o.dimensional = dimensional ? 1 : 0;
    o.nominal_l0 = spec.l0;
    o.nominal_p0 = spec.p0;
    o.nominal_v0 = spec.v0;
    return o;
}

ResultPtr solve(const gf_network* net, const gf_solve_options& o) {
    gf_result* raw = nullptr;
    check(gf_solve(net, &o, &raw), "solve");
    return ResultPtr(raw);
}

Report report_of(const std::string& id, const gf_result* r) {
    Report rep;
    rep.instance_id = id;
    rep.classification = gf_result_classification(r);
    rep.feasibility = gf_result_feasibility(r);
    for (size_t i = 0; i < gf_result_certificate_count(r); ++i) {
        if (i) rep.certificate += ';';
        rep.certificate += gf_result_certificate_element(r, i);
        rep.certificate += gf_result_certificate_reason(r, i) == GF_CERT_NEGATIVE_POTENTIAL
                               ? ":negative_potential"
                               : ":negative_compressor_flow";
    }
    rep.iterations = gf_result_iterations(r);
    rep.residual = gf_result_residual(r);
    rep.wall_time = gf_result_wall_time(r);
    rep.diagnostic = gf_result_diagnostic(r);
    return rep;
}

nlohmann::json report_json(const Report& r) {
    return {{"instance_id", r.instance_id},
            {"classification", classification_name(r.classification)},
            {"feasibility", feasibility_name(r.feasibility)},
            {"certificate", r.certificate},
            {"iterations", r.iterations},
            {"residual_final", r.residual},
            {"wall_time_s", r.wall_time},
            {"diagnostic", r.diagnostic}};
}

const char* kReportColumns = "instance_id,classification,feasibility,certificate,iterations,residual_final,wall_time_s";

std::string report_csv(const Report& r) {
    return csv_field(r.instance_id) + ',' + classification_name(r.classification) + ',' +
           feasibility_name(r.feasibility) + ',' + csv_field(r.certificate) + ',' + std::to_string(r.iterations) +
           ',' + fmt(r.residual) + ',' + fmt(r.wall_time);
}

void emit(const RunSpec& spec, const std::string& text) {
    if (spec.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(spec.out, std::ios::binary);
    if (!f) throw Failure{"cannot write " + spec.out};
    f << text;
    if (!f) throw Failure{"cannot write " + spec.out};
}

std::vector<double> values(const gf_result* r, size_t (*get)(const gf_result*, double*, size_t)) {
    std::vector<double> v(get(r, nullptr, 0));
    get(r, v.data(), v.size());
    return v;
}

// Runs `count` jobs over at most GASFLOW_THREADS workers; results land by index.
template <class Job>
void parallel_for(int count, Job job) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("GASFLOW_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) workers = std::min<unsigned>(workers, static_cast<unsigned>(v));
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    std::atomic<int> next{0};
    std::vector<std::string> errors(static_cast<std::size_t>(count));
    auto run = [&] {
        for (int k = next++; k < count; k = next++) {
            try {
                job(k);
            } catch (const Failure& e) {
                errors[static_cast<std::size_t>(k)] = e.message;
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(k)] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (!e.empty()) throw Failure{e};
    }
}

NetworkPtr generate(const gf_network* base, const RunSpec& spec, std::uint64_t seed) {
    gf_network* raw = nullptr;
    check(gf_network_perturb(base, seed, spec.withdraw_lo, spec.withdraw_hi, spec.ratio_lo, spec.ratio_hi, &raw),
          "perturb");
    return NetworkPtr(raw);
}

std::uint64_t instance_seed(const RunSpec& spec, int k) { return spec.seed + static_cast<std::uint64_t>(k); }

// ---------------------------------------------------------------- solve

int run_solve(const RunSpec& spec) {
    const auto net = load(spec);
    const auto result = solve(net.get(), options(spec, spec.seed, spec.dimensional));
    const auto rep = report_of(spec.instance_path, result.get());
    if (spec.format == "csv") {
        emit(spec, std::string("# ") + kCsvVersion + " solve\n" + kReportColumns + "\n" + report_csv(rep) + "\n");
    } else {
        auto doc = nlohmann::json::parse(gf_result_json(result.get()));
        doc["report"] = report_json(rep);
        emit(spec, doc.dump(2) + "\n");
    }
    if (!rep.diagnostic.empty()) std::cerr << rep.diagnostic << "\n";
    return exit_code(rep);
}

// ---------------------------------------------------------------- batch

struct Summary {
    int count = 0, converged = 0, feasible = 0, max_iterations = 0;
    double mean_iterations = 0.0, mean_wall = 0.0;

    explicit Summary(const std::vector<Report>& reports) {
        count = static_cast<int>(reports.size());
        long total = 0;
        for (const auto& r : reports) {
            if (r.classification == GF_E1_CONVERGED_IN_DOMAIN) ++converged;
            if (r.feasibility == GF_FEASIBLE) ++feasible;
            total += r.iterations;
            max_iterations = std::max(max_iterations, r.iterations);
            mean_wall += r.wall_time;
        }
        if (count) {
            mean_iterations = static_cast<double>(total) / count;
            mean_wall /= count;
        }
    }
};

int worst_exit(const std::vector<Report>& reports) {
    int code = kFeasible;
    for (const auto& r : reports) {
        const int c = exit_code(r);
        if (c == kUnresolved || (c == kInfeasible && code == kFeasible)) code = c;
    }
    return code;
}

int run_batch(const RunSpec& spec) {
    const auto base = load(spec);
    std::vector<Report> reports(static_cast<std::size_t>(spec.n));
    parallel_for(spec.n, [&](int k) {
        const auto seed = instance_seed(spec, k);
        const auto net = generate(base.get(), spec, seed);
        const auto result = solve(net.get(), options(spec, seed, spec.dimensional));
        reports[static_cast<std::size_t>(k)] = report_of(std::to_string(k), result.get());
    });
    const Summary s(reports);
    if (spec.format == "csv") {
        std::string text = std::string("# ") + kCsvVersion + " batch\n" + kReportColumns + "\n";
        for (const auto& r : reports) text += report_csv(r) + "\n";
        text += "# summary: count,converged,feasible,mean_iterations,max_iterations,mean_wall_time_s\n";
        text += "summary," + std::to_string(s.count) + ',' + std::to_string(s.converged) + ',' +
                std::to_string(s.feasible) + ',' + fmt(s.mean_iterations) + ',' + std::to_string(s.max_iterations) +
                ',' + fmt(s.mean_wall) + "\n";
        emit(spec, text);
    } else {
        nlohmann::json doc;
        doc["format_version"] = 1;
        doc["instances"] = nlohmann::json::array();
        for (const auto& r : reports) doc["instances"].push_back(report_json(r));
        doc["summary"] = {{"count", s.count},
                          {"converged", s.converged},
                          {"feasible", s.feasible},
                          {"mean_iterations", s.mean_iterations},
                          {"max_iterations", s.max_iterations},
                          {"mean_wall_time_s", s.mean_wall}};
        emit(spec, doc.dump(2) + "\n");
    }
    return worst_exit(reports);
}

// ---------------------------------------------------------------- compare-eos

struct EosComparison {
    Report ideal, cnga;
    bool determinate = false;
    double max_p_dev = NAN, max_rho_dev = NAN;
    std::vector<double> p_ideal, p_cnga, rho_ideal, rho_cnga;
};

EosComparison compare_eos(const gf_network* net, const RunSpec& spec, const std::string& id, std::uint64_t seed) {
    EosComparison c;
    const auto ideal_net = with_eos(net, GF_EOS_IDEAL);
    const auto cnga_net = with_eos(net, GF_EOS_CNGA);
    const auto ri = solve(ideal_net.get(), options(spec, seed, spec.dimensional));
    const auto rc = solve(cnga_net.get(), options(spec, seed, spec.dimensional));
    c.ideal = report_of(id, ri.get());
    c.cnga = report_of(id, rc.get());
    c.determinate = c.ideal.classification == GF_E1_CONVERGED_IN_DOMAIN &&
                    c.cnga.classification == GF_E1_CONVERGED_IN_DOMAIN;
    if (!c.determinate) return c;
    c.p_ideal = values(ri.get(), gf_result_pressures);
    c.p_cnga = values(rc.get(), gf_result_pressures);
    c.rho_ideal = values(ri.get(), gf_result_densities);
    c.rho_cnga = values(rc.get(), gf_result_densities);
    c.max_p_dev = c.max_rho_dev = 0.0;
    for (std::size_t i = 0; i < c.p_cnga.size(); ++i) {
        c.max_p_dev = std::max(c.max_p_dev, std::abs(c.p_ideal[i] - c.p_cnga[i]) / std::abs(c.p_cnga[i]));
        c.max_rho_dev = std::max(c.max_rho_dev, std::abs(c.rho_ideal[i] - c.rho_cnga[i]) / std::abs(c.rho_cnga[i]));
    }
    return c;
}

nlohmann::json dev_json(double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); }
std::string dev_csv(double x) { return std::isnan(x) ? std::string() : fmt(x); }

int comparison_exit(const EosComparison& c) {
    return worst_exit({c.ideal, c.cnga});
}

int run_compare_eos(const RunSpec& spec) {
    const auto base = load(spec);
    if (!spec.n_given) {
        const auto c = compare_eos(base.get(), spec, spec.instance_path, spec.seed);
        std::vector<std::string> ids;
        for (size_t i = 0; i < gf_network_junction_count(base.get()); ++i) ids.emplace_back(gf_network_junction_id(base.get(), i));
        if (spec.format == "csv") {
            std::string text = std::string("# ") + kCsvVersion + " compare-eos profile\n";
            text += "# max_rel_pressure_dev=" + dev_csv(c.max_p_dev) + " max_rel_density_dev=" + dev_csv(c.max_rho_dev) +
                    " ideal=" + classification_name(c.ideal.classification) +
                    " cnga=" + classification_name(c.cnga.classification) + "\n";
            text += "node_id,p_ideal_pa,p_cnga_pa,rel_pressure_dev,rho_ideal_kg_m3,rho_cnga_kg_m3,rel_density_dev\n";
            for (std::size_t i = 0; c.determinate && i < ids.size(); ++i) {
                text += csv_field(ids[i]) + ',' + fmt(c.p_ideal[i]) + ',' + fmt(c.p_cnga[i]) + ',' +
                        fmt(std::abs(c.p_ideal[i] - c.p_cnga[i]) / c.p_cnga[i]) + ',' + fmt(c.rho_ideal[i]) + ',' +
                        fmt(c.rho_cnga[i]) + ',' + fmt(std::abs(c.rho_ideal[i] - c.rho_cnga[i]) / c.rho_cnga[i]) + "\n";
            }
            emit(spec, text);
        } else {
            nlohmann::json doc;
            doc["format_version"] = 1;
            doc["ideal"] = report_json(c.ideal);
            doc["cnga"] = report_json(c.cnga);
            doc["feasibility"] = c.determinate ? "determinate" : "indeterminate";
            doc["max_rel_pressure_dev"] = dev_json(c.max_p_dev);
            doc["max_rel_density_dev"] = dev_json(c.max_rho_dev);
            doc["nodes"] = nlohmann::json::array();
            for (std::size_t i = 0; c.determinate && i < ids.size(); ++i) {
                doc["nodes"].push_back({{"id", ids[i]},
                                        {"p_ideal_pa", c.p_ideal[i]},
                                        {"p_cnga_pa", c.p_cnga[i]},
                                        {"rel_pressure_dev", std::abs(c.p_ideal[i] - c.p_cnga[i]) / c.p_cnga[i]},
                                        {"rho_ideal_kg_m3", c.rho_ideal[i]},
                                        {"rho_cnga_kg_m3", c.rho_cnga[i]},
                                        {"rel_density_dev", std::abs(c.rho_ideal[i] - c.rho_cnga[i]) / c.rho_cnga[i]}});
            }
            emit(spec, doc.dump(2) + "\n");
        }
        return comparison_exit(c);
    }

    std::vector<EosComparison> rows(static_cast<std::size_t>(spec.n));
    parallel_for(spec.n, [&](int k) {
        const auto seed = instance_seed(spec, k);
        const auto net = generate(base.get(), spec, seed);
        auto c = compare_eos(net.get(), spec, std::to_string(k), seed);
        c.p_ideal.clear(), c.p_cnga.clear(), c.rho_ideal.clear(), c.rho_cnga.clear();
        rows[static_cast<std::size_t>(k)] = std::move(c);
    });
    int code = kFeasible;
    if (spec.format == "csv") {
        std::string text = std::string("# ") + kCsvVersion + " compare-eos\n";
        text += "instance_id,ideal_classification,cnga_classification,ideal_feasibility,cnga_feasibility,"
                "ideal_iterations,cnga_iterations,max_rel_pressure_dev,max_rel_density_dev,ideal_wall_time_s,"
                "cnga_wall_time_s\n";
        for (const auto& c : rows) {
            text += csv_field(c.ideal.instance_id) + ',' + classification_name(c.ideal.classification) + ',' +
                    classification_name(c.cnga.classification) + ',' + feasibility_name(c.ideal.feasibility) + ',' +
                    feasibility_name(c.cnga.feasibility) + ',' + std::to_string(c.ideal.iterations) + ',' +
                    std::to_string(c.cnga.iterations) + ',' + dev_csv(c.max_p_dev) + ',' + dev_csv(c.max_rho_dev) +
                    ',' + fmt(c.ideal.wall_time) + ',' + fmt(c.cnga.wall_time) + "\n";
        }
        emit(spec, text);
    } else {
        nlohmann::json doc;
        doc["format_version"] = 1;
        doc["instances"] = nlohmann::json::array();
        for (const auto& c : rows) {
            doc["instances"].push_back({{"instance_id", c.ideal.instance_id},
                                        {"ideal", report_json(c.ideal)},
                                        {"cnga", report_json(c.cnga)},
                                        {"max_rel_pressure_dev", dev_json(c.max_p_dev)},
                                        {"max_rel_density_dev", dev_json(c.max_rho_dev)}});
        }
        emit(spec, doc.dump(2) + "\n");
    }
    for (const auto& c : rows) {
        const int e = comparison_exit(c);
        if (e == kUnresolved || (e == kInfeasible && code == kFeasible)) code = e;
    }
    return code;
}

// ---------------------------------------------------------------- compare-scaling

struct ScalingComparison {
    Report nondim, dim;
    double max_rel_diff = NAN;
};

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-12));
    return m;
}

int run_compare_scaling(const RunSpec& spec) {
    const auto base = load(spec);
    std::vector<ScalingComparison> rows(static_cast<std::size_t>(spec.n));
    parallel_for(spec.n, [&](int k) {
        const auto seed = instance_seed(spec, k);
        const auto net = generate(base.get(), spec, seed);
        const auto rn = solve(net.get(), options(spec, seed, false));
        const auto rd = solve(net.get(), options(spec, seed, true));
        ScalingComparison c{report_of(std::to_string(k), rn.get()), report_of(std::to_string(k), rd.get()), NAN};
        if (gf_result_has_solution(rn.get()) && gf_result_has_solution(rd.get()) &&
            c.nondim.classification == GF_E1_CONVERGED_IN_DOMAIN && c.dim.classification == GF_E1_CONVERGED_IN_DOMAIN) {
            c.max_rel_diff = std::max(
                max_rel(values(rd.get(), gf_result_pressures), values(rn.get(), gf_result_pressures)),
                max_rel(values(rd.get(), gf_result_flows), values(rn.get(), gf_result_flows)));
        }
        rows[static_cast<std::size_t>(k)] = std::move(c);
    });
    int nondim_ok = 0, dim_ok = 0;
    for (const auto& c : rows) {
        nondim_ok += c.nondim.classification == GF_E1_CONVERGED_IN_DOMAIN;
        dim_ok += c.dim.classification == GF_E1_CONVERGED_IN_DOMAIN;
    }
    if (spec.format == "csv") {
        std::string text = std::string("# ") + kCsvVersion + " compare-scaling\n";
        text += "instance_id,nondim_classification,dim_classification,nondim_iterations,dim_iterations,"
                "max_rel_solution_diff,nondim_wall_time_s,dim_wall_time_s\n";
        for (const auto& c : rows) {
            text += csv_field(c.nondim.instance_id) + ',' + classification_name(c.nondim.classification) + ',' +
                    classification_name(c.dim.classification) + ',' + std::to_string(c.nondim.iterations) + ',' +
                    std::to_string(c.dim.iterations) + ',' + dev_csv(c.max_rel_diff) + ',' +
                    fmt(c.nondim.wall_time) + ',' + fmt(c.dim.wall_time) + "\n";
        }
        text += "# summary: count,nondim_converged,dim_converged\n";
        text += "summary," + std::to_string(rows.size()) + ',' + std::to_string(nondim_ok) + ',' +
                std::to_string(dim_ok) + "\n";
        emit(spec, text);
    } else {
        nlohmann::json doc;
        doc["format_version"] = 1;
        doc["instances"] = nlohmann::json::array();
        for (const auto& c : rows) {
            doc["instances"].push_back({{"instance_id", c.nondim.instance_id},
                                        {"nondimensional", report_json(c.nondim)},
                                        {"dimensional", report_json(c.dim)},
                                        {"max_rel_solution_diff", dev_json(c.max_rel_diff)}});
        }
        doc["summary"] = {{"count", rows.size()}, {"nondim_converged", nondim_ok}, {"dim_converged", dim_ok}};
        emit(spec, doc.dump(2) + "\n");
    }
    std::vector<Report> nd;
    for (const auto& c : rows) nd.push_back(c.nondim);
    return worst_exit(nd);
}

void add_common(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("instance", spec.instance_path, "Instance JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--eos", spec.eos, "Override the equation of state")->check(CLI::IsMember({"ideal", "cnga"}));
    cmd->add_option("--seed", spec.seed, "Random seed");
    cmd->add_option("--withdraw-lo", spec.withdraw_lo, "Lower withdrawal scaling factor")->check(CLI::PositiveNumber);
    cmd->add_option("--withdraw-hi", spec.withdraw_hi, "Upper withdrawal scaling factor")->check(CLI::PositiveNumber);
    cmd->add_option("--ratio-lo", spec.ratio_lo, "Lower compressor ratio")->check(CLI::PositiveNumber);
    cmd->add_option("--ratio-hi", spec.ratio_hi, "Upper compressor ratio")->check(CLI::PositiveNumber);
    cmd->add_option("--nominal-l0", spec.l0, "Nominal length [m]")->check(CLI::PositiveNumber);
    cmd->add_option("--nominal-p0", spec.p0, "Nominal pressure [Pa]")->check(CLI::PositiveNumber);
    cmd->add_option("--nominal-v0", spec.v0, "Nominal velocity [m/s]")->check(CLI::PositiveNumber);
    cmd->add_option("--out", spec.out, "Output file (default: standard output)");
    cmd->add_option("--format", spec.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", spec.tol, "Residual tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", spec.max_iter, "Newton iteration cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--dimensional", spec.dimensional, "Solve with all nominal values set to one");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state gas network solver"};
    app.set_version_flag("--version", std::string(gf_version()));
    app.require_subcommand(1);

    RunSpec spec;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
    auto* batch_cmd = app.add_subcommand("batch", "Solve randomly perturbed copies of an instance");
    auto* eos_cmd = app.add_subcommand("compare-eos", "Compare ideal and CNGA solutions");
    auto* scaling_cmd = app.add_subcommand("compare-scaling", "Compare non-dimensional and dimensional solves");
    for (auto* cmd : {solve_cmd, batch_cmd, eos_cmd, scaling_cmd}) {
        add_common(cmd, spec);
        if (cmd != solve_cmd) {
            cmd->add_option("--n", spec.n, "Number of generated instances")->check(CLI::PositiveNumber);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }
    if (auto* opt = eos_cmd->get_option_no_throw("--n")) spec.n_given = opt->count() > 0;

    try {
        if (spec.withdraw_lo > spec.withdraw_hi || spec.ratio_lo > spec.ratio_hi) {
            throw Failure{"empty perturbation interval"};
        }
        if (solve_cmd->parsed()) return run_solve(spec);
        if (batch_cmd->parsed()) return run_batch(spec);
        if (eos_cmd->parsed()) return run_compare_eos(spec);
        return run_compare_scaling(spec);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.message << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kUsage;
}
