#include "gasflow/network.hpp"

#include "gasflow/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace gasflow {

using json = nlohmann::json;

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::InconsistentBoundary: return "InconsistentBoundary";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OverflowingCoefficient: return "OverflowingCoefficient";
        case ErrorCode::NonPositivePotential: return "NonPositivePotential";
        case ErrorCode::NoPipes: return "NoPipes";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::NotATree: return "NotATree";
        case ErrorCode::MultipleSlacks: return "MultipleSlacks";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

const char* to_string(PassThroughKind kind) noexcept {
    switch (kind) {
        case PassThroughKind::ShortPipe: return "short_pipe";
        case PassThroughKind::Valve: return "valve";
        case PassThroughKind::Regulator: return "regulator";
        case PassThroughKind::Resistor: return "resistor";
        case PassThroughKind::LossResistor: return "loss_resistor";
    }
    return "unknown";
}

Junction Junction::slack(std::string id, double pressure_pa) {
    return {std::move(id), JunctionKind::Slack, pressure_pa, std::nullopt};
}

Junction Junction::non_slack(std::string id, double injection_kg_s) {
    return {std::move(id), JunctionKind::NonSlack, std::nullopt, injection_kg_s};
}

double Pipe::area() const { return M_PI * diameter * diameter / 4.0; }

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::SchemaViolation, msg); }

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Network Network::build(std::vector<Junction> junctions,
                       std::vector<Pipe> pipes,
                       std::vector<Compressor> compressors,
                       std::vector<PassThrough> pass_throughs,
                       EosParams eos) {
    if (junctions.empty()) schema("network has no junctions");

    Network net;
    net.junctions_ = std::move(junctions);
    net.pipes_ = std::move(pipes);
    net.compressors_ = std::move(compressors);
    net.pass_throughs_ = std::move(pass_throughs);
    net.eos_ = eos;

    try {
        net.eos_.validate();
    } catch (const Error& e) {
        schema(e.what());
    }

    for (std::size_t i = 0; i < net.junctions_.size(); ++i) {
        const auto& j = net.junctions_[i];
        if (j.id.empty()) schema("junction with empty id");
        if (!net.junction_lookup_.emplace(j.id, i).second) schema("duplicate junction id '" + j.id + "'");
        if (j.slack_pressure && j.injection) {
            throw Error(ErrorCode::InconsistentBoundary,
                        "junction '" + j.id + "' has both a slack pressure and an injection");
        }
        if (j.is_slack()) {
            if (!j.slack_pressure) schema("slack junction '" + j.id + "' has no pressure");
            if (!positive(*j.slack_pressure)) schema("slack pressure of '" + j.id + "' must be positive");
        } else {
            if (!j.injection) schema("junction '" + j.id + "' has neither slack pressure nor injection");
            if (!std::isfinite(*j.injection)) schema("injection of '" + j.id + "' is not finite");
        }
    }

    std::unordered_set<std::string> edge_ids;
    auto check_edge = [&](const std::string& id, const std::string& from, const std::string& to) {
        if (id.empty()) schema("edge with empty id");
        if (!edge_ids.insert(id).second) schema("duplicate edge id '" + id + "'");
        if (!net.junction_lookup_.count(from)) schema("edge '" + id + "' references unknown junction '" + from + "'");
        if (!net.junction_lookup_.count(to)) schema("edge '" + id + "' references unknown junction '" + to + "'");
        if (from == to) schema("edge '" + id + "' is a self-loop");
    };
    for (const auto& p : net.pipes_) {
        check_edge(p.id, p.from, p.to);
        if (!positive(p.length) || !positive(p.diameter) || !positive(p.friction_factor)) {
            schema("pipe '" + p.id + "' needs positive length, diameter and friction factor");
        }
    }
    for (const auto& c : net.compressors_) {
        check_edge(c.id, c.from, c.to);
        if (!std::isfinite(c.ratio) || c.ratio < 1.0) schema("compressor '" + c.id + "' needs ratio >= 1");
    }
    for (const auto& t : net.pass_throughs_) {
        check_edge(t.id, t.from, t.to);
        if (!positive(t.ratio)) schema("pass-through '" + t.id + "' needs ratio > 0");
    }

    net.index();
    return net;
}

void Network::index() {
    edges_.clear();
    for (std::size_t i = 0; i < pipes_.size(); ++i) {
        edges_.push_back({EdgeKind::Pipe, i, junction_index(pipes_[i].from), junction_index(pipes_[i].to)});
    }
    for (std::size_t i = 0; i < compressors_.size(); ++i) {
        edges_.push_back(
            {EdgeKind::Compressor, i, junction_index(compressors_[i].from), junction_index(compressors_[i].to)});
    }
    for (std::size_t i = 0; i < pass_throughs_.size(); ++i) {
        if (!pass_throughs_[i].open) continue;
        edges_.push_back(
            {EdgeKind::PassThrough, i, junction_index(pass_throughs_[i].from), junction_index(pass_throughs_[i].to)});
    }
}

std::size_t Network::junction_index(std::string_view id) const {
    auto it = junction_lookup_.find(std::string(id));
    if (it == junction_lookup_.end()) {
        throw Error(ErrorCode::InvalidArgument, "unknown junction '" + std::string(id) + "'");
    }
    return it->second;
}

const std::string& Network::edge_id(const EdgeRef& e) const {
    switch (e.kind) {
        case EdgeKind::Pipe: return pipes_[e.index].id;
        case EdgeKind::Compressor: return compressors_[e.index].id;
        case EdgeKind::PassThrough: break;
    }
    return pass_throughs_[e.index].id;
}

double Network::edge_ratio(const EdgeRef& e) const {
    switch (e.kind) {
        case EdgeKind::Pipe: return 1.0;
        case EdgeKind::Compressor: return compressors_[e.index].ratio;
        case EdgeKind::PassThrough: break;
    }
    return pass_throughs_[e.index].ratio;
}

std::size_t Network::slack_count() const {
    return static_cast<std::size_t>(
        std::count_if(junctions_.begin(), junctions_.end(), [](const Junction& j) { return j.is_slack(); }));
}

Network Network::with_eos(const EosParams& eos) const {
    return build(junctions_, pipes_, compressors_, pass_throughs_, eos);
}

Network Network::with_boundary(std::vector<Junction> junctions, std::vector<Compressor> compressors) const {
    return build(std::move(junctions), pipes_, std::move(compressors), pass_throughs_, eos_);
}

// ---------------------------------------------------------------------------
// Instance format

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
        if (!known) schema("unknown key '" + it.key() + "' in " + where);
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema(std::string("missing key '") + key + "' in " + where);
    return *it;
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) schema(what + " must be a number");
    return v.get<double>();
}

std::string text(const json& v, const std::string& what) {
    if (!v.is_string()) schema(what + " must be a string");
    return v.get<std::string>();
}

const json& array_or_empty(const json& doc, const char* key) {
    static const json empty = json::array();
    auto it = doc.find(key);
    if (it == doc.end()) return empty;
    if (!it->is_array()) schema(std::string("'") + key + "' must be an array");
    return *it;
}

PassThroughKind parse_pass_kind(const std::string& s) {
    if (s == "short_pipe") return PassThroughKind::ShortPipe;
    if (s == "valve") return PassThroughKind::Valve;
    if (s == "regulator") return PassThroughKind::Regulator;
    if (s == "resistor") return PassThroughKind::Resistor;
    if (s == "loss_resistor") return PassThroughKind::LossResistor;
    schema("unknown pass-through kind '" + s + "'");
}

EosParams parse_eos(const json& e) {
    if (!e.is_object()) schema("'eos' must be an object");
    reject_unknown(e, {"kind", "temperature_k", "specific_gravity", "gas_constant_j_per_kg_k", "atmospheric_pressure_pa"},
                   "eos");
    EosParams p;
    if (auto it = e.find("kind"); it != e.end()) {
        const auto kind = text(*it, "eos.kind");
        if (kind == "ideal") {
            p.kind = EosKind::Ideal;
        } else if (kind == "cnga") {
            p.kind = EosKind::Cnga;
        } else {
            schema("unknown eos kind '" + kind + "'");
        }
    }
    if (auto it = e.find("temperature_k"); it != e.end()) p.temperature = number(*it, "eos.temperature_k");
    if (auto it = e.find("specific_gravity"); it != e.end()) p.specific_gravity = number(*it, "eos.specific_gravity");
    if (auto it = e.find("gas_constant_j_per_kg_k"); it != e.end()) {
        p.gas_constant = number(*it, "eos.gas_constant_j_per_kg_k");
    }
    if (auto it = e.find("atmospheric_pressure_pa"); it != e.end()) {
        p.atmospheric_pressure = number(*it, "eos.atmospheric_pressure_pa");
    }
    return p;
}

}  // namespace

Network parse_instance(std::string_view input) {
    json doc;
    try {
        doc = json::parse(input.begin(), input.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
    }
    if (!doc.is_object()) schema("instance must be a JSON object");
    reject_unknown(doc, {"units", "nodes", "pipes", "compressors", "pass_throughs", "eos"}, "instance");

    if (text(require(doc, "units", "instance"), "units") != "si") schema("units must be \"si\"");

    const auto& nodes = require(doc, "nodes", "instance");
    if (!nodes.is_array()) schema("'nodes' must be an array");

    std::vector<Junction> junctions;
    for (const auto& n : nodes) {
        if (!n.is_object()) schema("node entries must be objects");
        reject_unknown(n, {"id", "slack_pressure_pa", "injection_kg_s"}, "node");
        const auto id = text(require(n, "id", "node"), "node id");
        const bool has_p = n.contains("slack_pressure_pa");
        const bool has_q = n.contains("injection_kg_s");
        if (has_p && has_q) {
            throw Error(ErrorCode::InconsistentBoundary,
                        "node '" + id + "' has both slack_pressure_pa and injection_kg_s");
        }
        if (has_p) {
            junctions.push_back(Junction::slack(id, number(n["slack_pressure_pa"], "slack_pressure_pa")));
        } else if (has_q) {
            junctions.push_back(Junction::non_slack(id, number(n["injection_kg_s"], "injection_kg_s")));
        } else {
            schema("node '" + id + "' needs slack_pressure_pa or injection_kg_s");
        }
    }

    std::vector<Pipe> pipes;
    for (const auto& p : array_or_empty(doc, "pipes")) {
        if (!p.is_object()) schema("pipe entries must be objects");
        reject_unknown(p, {"id", "from", "to", "length_m", "diameter_m", "friction_factor"}, "pipe");
        pipes.push_back({text(require(p, "id", "pipe"), "pipe id"), text(require(p, "from", "pipe"), "pipe from"),
                         text(require(p, "to", "pipe"), "pipe to"), number(require(p, "length_m", "pipe"), "length_m"),
                         number(require(p, "diameter_m", "pipe"), "diameter_m"),
                         number(require(p, "friction_factor", "pipe"), "friction_factor")});
    }

    std::vector<Compressor> compressors;
    for (const auto& c : array_or_empty(doc, "compressors")) {
        if (!c.is_object()) schema("compressor entries must be objects");
        reject_unknown(c, {"id", "from", "to", "ratio"}, "compressor");
        compressors.push_back({text(require(c, "id", "compressor"), "compressor id"),
                               text(require(c, "from", "compressor"), "compressor from"),
                               text(require(c, "to", "compressor"), "compressor to"),
                               number(require(c, "ratio", "compressor"), "compressor ratio")});
    }

    std::vector<PassThrough> pass_throughs;
    for (const auto& t : array_or_empty(doc, "pass_throughs")) {
        if (!t.is_object()) schema("pass_through entries must be objects");
        reject_unknown(t, {"id", "from", "to", "kind", "ratio", "open"}, "pass_through");
        PassThrough pt;
        pt.id = text(require(t, "id", "pass_through"), "pass_through id");
        pt.from = text(require(t, "from", "pass_through"), "pass_through from");
        pt.to = text(require(t, "to", "pass_through"), "pass_through to");
        pt.kind = parse_pass_kind(text(require(t, "kind", "pass_through"), "pass_through kind"));
        if (auto it = t.find("ratio"); it != t.end()) pt.ratio = number(*it, "pass_through ratio");
        // Valves are closed unless the instance says otherwise.
        pt.open = pt.kind != PassThroughKind::Valve;
        if (auto it = t.find("open"); it != t.end()) {
            if (!it->is_boolean()) schema("pass_through open must be a boolean");
            pt.open = it->get<bool>();
        }
        pass_throughs.push_back(std::move(pt));
    }

    EosParams eos;
    if (auto it = doc.find("eos"); it != doc.end()) eos = parse_eos(*it);

    return Network::build(std::move(junctions), std::move(pipes), std::move(compressors), std::move(pass_throughs),
                          eos);
}

Network load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string write_instance(const Network& net) {
    json doc;
    doc["units"] = "si";
    doc["nodes"] = json::array();
    for (const auto& j : net.junctions()) {
        if (j.is_slack()) {
            doc["nodes"].push_back({{"id", j.id}, {"slack_pressure_pa", *j.slack_pressure}});
        } else {
            doc["nodes"].push_back({{"id", j.id}, {"injection_kg_s", *j.injection}});
        }
    }
    doc["pipes"] = json::array();
    for (const auto& p : net.pipes()) {
        doc["pipes"].push_back({{"id", p.id},
                                {"from", p.from},
                                {"to", p.to},
                                {"length_m", p.length},
                                {"diameter_m", p.diameter},
                                {"friction_factor", p.friction_factor}});
    }
    doc["compressors"] = json::array();
    for (const auto& c : net.compressors()) {
        doc["compressors"].push_back({{"id", c.id}, {"from", c.from}, {"to", c.to}, {"ratio", c.ratio}});
    }
    doc["pass_throughs"] = json::array();
    for (const auto& t : net.pass_throughs()) {
        doc["pass_throughs"].push_back({{"id", t.id},
                                        {"from", t.from},
                                        {"to", t.to},
                                        {"kind", to_string(t.kind)},
                                        {"ratio", t.ratio},
                                        {"open", t.open}});
    }
    const auto& e = net.eos();
    doc["eos"] = {{"kind", to_string(e.kind)},
                  {"temperature_k", e.temperature},
                  {"specific_gravity", e.specific_gravity},
                  {"gas_constant_j_per_kg_k", e.gas_constant},
                  {"atmospheric_pressure_pa", e.atmospheric_pressure}};
    return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns false when a and b were already connected.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream out;
    auto line = [&](const char* name, const AssumptionCheck& c) {
        out << name << ": " << (c.ok ? "ok" : "violated");
        if (!c.offenders.empty()) {
            out << " (";
            for (std::size_t i = 0; i < c.offenders.size(); ++i) out << (i ? ", " : "") << c.offenders[i];
            out << ")";
        }
        out << "\n";
    };
    line("A1 slack present", a1_slack_present);
    line("A2 compressor ratios", a2_compressor_ratios);
    line("A3 slack paths contain a pipe", a3_slack_paths);
    line("A4 cycles contain a pipe", a4_non_pipe_cycles);
    return out.str();
}

ValidationReport validate(const Network& net) {
    ValidationReport report;

    report.a1_slack_present.ok = net.slack_count() >= 1;

    for (const auto& c : net.compressors()) {
        if (!std::isfinite(c.ratio) || c.ratio < 1.0) {
            report.a2_compressor_ratios.ok = false;
            report.a2_compressor_ratios.offenders.push_back(c.id);
        }
    }

    const auto& junctions = net.junctions();
    DisjointSets sets(junctions.size());
    for (const auto& e : net.edges()) {
        if (net.edge_is_pipe(e)) continue;
        if (!sets.unite(e.from, e.to)) {
            report.a4_non_pipe_cycles.ok = false;
            report.a4_non_pipe_cycles.offenders.push_back(net.edge_id(e));
        }
    }

    std::unordered_map<std::size_t, std::vector<std::string>> slacks_by_component;
    for (std::size_t i = 0; i < junctions.size(); ++i) {
        if (junctions[i].is_slack()) slacks_by_component[sets.find(i)].push_back(junctions[i].id);
    }
    std::set<std::string> a3;
    for (const auto& [root, ids] : slacks_by_component) {
        if (ids.size() >= 2) a3.insert(ids.begin(), ids.end());
    }
    report.a3_slack_paths.ok = a3.empty();
    report.a3_slack_paths.offenders.assign(a3.begin(), a3.end());
    return report;
}

// ---------------------------------------------------------------------------
// Incidence

IncidenceMatrices incidence(const Network& net) {
    const auto& junctions = net.junctions();
    const auto& edges = net.edges();

    IncidenceMatrices m;
    m.reduced_row_of_junction.assign(junctions.size(), -1);
    for (std::size_t i = 0; i < junctions.size(); ++i) {
        if (!junctions[i].is_slack()) {
            m.reduced_row_of_junction[i] = static_cast<std::ptrdiff_t>(m.row_order.size());
            m.row_order.push_back(i);
        }
    }
    m.column_order.resize(edges.size());
    std::iota(m.column_order.begin(), m.column_order.end(), 0);

    std::vector<Eigen::Triplet<double>> full, reduced;
    for (std::size_t col = 0; col < edges.size(); ++col) {
        const auto& e = edges[col];
        const auto c = static_cast<int>(col);
        full.emplace_back(static_cast<int>(e.from), c, -1.0);
        full.emplace_back(static_cast<int>(e.to), c, +1.0);
        if (auto r = m.reduced_row_of_junction[e.from]; r >= 0) reduced.emplace_back(static_cast<int>(r), c, -1.0);
        if (auto r = m.reduced_row_of_junction[e.to]; r >= 0) reduced.emplace_back(static_cast<int>(r), c, +1.0);
    }
    m.full.resize(static_cast<Eigen::Index>(junctions.size()), static_cast<Eigen::Index>(edges.size()));
    m.full.setFromTriplets(full.begin(), full.end());
    m.reduced.resize(static_cast<Eigen::Index>(m.row_order.size()), static_cast<Eigen::Index>(edges.size()));
    m.reduced.setFromTriplets(reduced.begin(), reduced.end());
    return m;
}

// ---------------------------------------------------------------------------
// Perturbation

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double draw(std::uint64_t seed, std::string_view tag, std::string_view id, Interval range) {
    std::mt19937_64 stream(splitmix64(seed ^ splitmix64(fnv1a(tag) ^ fnv1a(id))));
    if (range.lo == range.hi) return range.lo;
    return range.lo + (range.hi - range.lo) * unit_uniform(stream());
}

void check_interval(Interval r, const char* name) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo > 0.0 && r.lo <= r.hi)) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " range must be a non-empty positive interval");
    }
}

}  // namespace

Network perturb_instance(const Network& net, std::uint64_t seed, Interval withdrawal, Interval ratio) {
    check_interval(withdrawal, "withdrawal");
    check_interval(ratio, "ratio");

    auto junctions = net.junctions();
    for (auto& j : junctions) {
        if (!j.is_slack()) *j.injection *= draw(seed, "injection", j.id, withdrawal);
    }
    auto compressors = net.compressors();
    for (auto& c : compressors) c.ratio = draw(seed, "ratio", c.id, ratio);
    return net.with_boundary(std::move(junctions), std::move(compressors));
}

}  // namespace gasflow
