#include "gasflow/oracle.hpp"

#include "gasflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gasflow::oracle {

std::optional<double> single_pipe_ideal(const SinglePipeCase& c) {
    const double radicand = c.p1 * c.p1 - (2.0 * c.beta / c.coeffs.b1_bar) * c.f * std::abs(c.f);
    if (!(radicand > 0.0)) return std::nullopt;
    return std::sqrt(radicand);
}

std::optional<double> single_pipe_cnga(const SinglePipeCase& c) {
    const double target = potential(c.p1, c.coeffs) - c.beta * c.f * std::abs(c.f);
    if (!(target > 0.0)) return std::nullopt;
    return potential_inverse(target, c.coeffs);
}

namespace {

struct Adjacent {
    std::size_t edge;
    std::size_t other;
};

}  // namespace

TreeSolution tree_solve(const ScaledNetwork& snet) {
    const std::size_t n = snet.junction_count();
    const std::size_t slacks = static_cast<std::size_t>(std::count(snet.is_slack.begin(), snet.is_slack.end(), true));
    if (slacks != 1) {
        throw Error(ErrorCode::MultipleSlacks, "tree_solve needs exactly one slack junction, found " +
                                                   std::to_string(slacks));
    }
    if (snet.edge_count() + 1 != n) throw Error(ErrorCode::NotATree, "edge count is not |N| - 1");

    std::vector<std::vector<Adjacent>> adj(n);
    for (std::size_t k = 0; k < snet.edges.size(); ++k) {
        adj[snet.edges[k].from].push_back({k, snet.edges[k].to});
        adj[snet.edges[k].to].push_back({k, snet.edges[k].from});
    }

    const auto root = static_cast<std::size_t>(
        std::distance(snet.is_slack.begin(), std::find(snet.is_slack.begin(), snet.is_slack.end(), true)));

    // Iterative DFS: preorder from the slack, recording each junction's parent edge.
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent_edge(n, none), order;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
            if (seen[it->other]) continue;
            seen[it->other] = true;
            parent_edge[it->other] = it->edge;
            stack.push_back(it->other);
        }
    }
    if (order.size() != n) throw Error(ErrorCode::NotATree, "network is not connected");

    // Leaf-to-root: total injection of each subtree flows through its parent edge.
    std::vector<double> subtree(snet.q_bar);
    std::vector<double> f(snet.edge_count(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto v = *it;
        if (v == root) continue;
        const auto& e = snet.edges[parent_edge[v]];
        const std::size_t parent = e.from == v ? e.to : e.from;
        // Edge into v carries -subtree (withdrawals pull gas in); edge out of v carries +subtree.
        f[parent_edge[v]] = e.to == v ? -subtree[v] : subtree[v];
        subtree[parent] += subtree[v];
    }

    // Root-to-leaf: potentials through pipes, pressures through ratio edges.
    TreeSolution out;
    std::vector<double> p(n, 0.0);
    p[root] = snet.slack_p_bar[root];
    for (const auto v : order) {
        if (v == root) continue;
        const auto k = parent_edge[v];
        const auto& e = snet.edges[k];
        const bool v_is_head = e.to == v;
        const double pu = p[v_is_head ? e.from : e.to];
        if (e.kind == ScaledEdgeKind::Ratio) {
            p[v] = v_is_head ? e.alpha * pu : pu / e.alpha;
            continue;
        }
        // Pi(tail) - Pi(head) = beta f|f|.
        const double drop = e.beta * f[k] * std::abs(f[k]);
        const double pi_v = v_is_head ? potential(pu, snet.coeffs) - drop : potential(pu, snet.coeffs) + drop;
        if (!(pi_v > 0.0) || !(pu > 0.0)) {
            if (out.feasible) out.infeasible_at = snet.junction_ids[v];
            out.feasible = false;
            p[v] = NAN;
            continue;
        }
        p[v] = potential_inverse(pi_v, snet.coeffs);
    }

    out.solution.p = p;
    out.solution.f = f;
    out.solution.rho.reserve(n);
    for (double x : p) out.solution.rho.push_back(density(x, snet.coeffs));
    out.solution.q_full = snet.q_bar;
    out.solution.q_full[root] = -std::accumulate(snet.q_bar.begin(), snet.q_bar.end(), 0.0);
    out.solution.units = Units::Dimensionless;
    return out;
}

TreeSolution tree_solve(const Network& net) {
    const auto nv = choose_nominals(net);
    auto out = tree_solve(nondimensionalize(net, nv));
    out.solution = redimensionalize(out.solution, nv);
    return out;
}

double balance_check(const Solution& sol) {
    double sum = 0.0, peak = 0.0;
    for (double q : sol.q_full) {
        sum += q;
        peak = std::max(peak, std::abs(q));
    }
    return std::abs(sum) / std::max(1.0, peak);
}

}  // namespace gasflow::oracle
