#include "divsparse/domains.hpp"

#include <algorithm>
#include <stdexcept>

namespace divsparse {

namespace {

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

// Kahn's algorithm, always releasing the smallest ready vertex; nullopt on a cycle.
std::optional<std::vector<std::size_t>> topological_order(const GraphData& g) {
    std::vector<std::size_t> indegree(g.n_vertices, 0);
    std::vector<std::vector<std::size_t>> out(g.n_vertices);
    for (auto [u, v] : g.edges) {
        out[u].push_back(v);
        ++indegree[v];
    }
    std::vector<std::size_t> ready, order;
    for (std::size_t v = 0; v < g.n_vertices; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
        auto it = std::min_element(ready.begin(), ready.end());
        const std::size_t u = *it;
        ready.erase(it);
        order.push_back(u);
        for (auto v : out[u]) {
            if (--indegree[v] == 0) ready.push_back(v);
        }
    }
    if (order.size() != g.n_vertices) return std::nullopt;
    return order;
}

}  // namespace

void DagDpInstance::validate() const {
    if (!dag.directed) throw UsageError("dag_dp needs a directed graph");
    dag.validate();
    if (dag.n_vertices > kMaxUniverse) {
        throw CapabilityError("dag_dp limited to " + std::to_string(kMaxUniverse) + " vertices");
    }
    if (universe_size > kMaxUniverse) {
        throw CapabilityError("dag_dp ground set limited to " + std::to_string(kMaxUniverse));
    }
    if (labels.size() != dag.n_vertices) throw UsageError("dag_dp: one label per vertex required");
    for (auto l : labels) {
        if (l >= universe_size) throw UsageError("dag_dp: label out of range");
    }
    auto order = topological_order(dag);
    if (!order) throw UsageError("dag_dp: graph has a cycle");
    // reach[v]: vertices on some path starting at v, v excluded.
    std::vector<std::uint64_t> reach(dag.n_vertices, 0);
    std::vector<std::vector<std::size_t>> out(dag.n_vertices);
    for (auto [u, v] : dag.edges) out[u].push_back(v);
    for (auto it = order->rbegin(); it != order->rend(); ++it) {
        for (auto v : out[*it]) reach[*it] |= bit(v) | reach[v];
    }
    for (std::size_t u = 0; u < dag.n_vertices; ++u) {
        for (std::size_t v = 0; v < dag.n_vertices; ++v) {
            if (((reach[u] >> v) & 1) && labels[u] == labels[v]) {
                throw UsageError("dag_dp: a path repeats label " + std::to_string(labels[u]));
            }
        }
    }
}

DagDpInstance interval_scheduling_instance(const std::vector<std::pair<long, long>>& intervals) {
    DagDpInstance inst;
    inst.dag.directed = true;
    inst.dag.n_vertices = intervals.size();
    inst.universe_size = intervals.size();
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (intervals[i].first > intervals[i].second) throw UsageError("interval with left > right");
        inst.labels.push_back(i);
    }
    for (std::size_t u = 0; u < intervals.size(); ++u) {
        for (std::size_t v = 0; v < intervals.size(); ++v) {
            if (intervals[u].second < intervals[v].first) inst.dag.edges.push_back({u, v});
        }
    }
    return inst;
}

DagDpOracle::DagDpOracle(DagDpInstance inst) : inst_(std::move(inst)) {
    inst_.validate();
    topo_ = *topological_order(inst_.dag);
    const std::size_t n = inst_.dag.n_vertices;
    std::vector<std::vector<std::size_t>> preds(n);
    for (auto [u, v] : inst_.dag.edges) preds[v].push_back(u);
    opt_.assign(n, 1);
    tight_preds_.assign(n, {});
    for (auto v : topo_) {
        for (auto u : preds[v]) opt_[v] = std::max(opt_[v], opt_[u] + 1);
        for (auto u : preds[v]) {
            if (opt_[u] + 1 == opt_[v] &&
                std::find(tight_preds_[v].begin(), tight_preds_[v].end(), u) ==
                    tight_preds_[v].end()) {
                tight_preds_[v].push_back(u);
            }
        }
        std::sort(tight_preds_[v].begin(), tight_preds_[v].end());
        longest_ = std::max(longest_, opt_[v]);
    }
}

std::optional<SubsetMask> DagDpOracle::opt_pm1(const WeightVector& w) const {
    const std::size_t n = inst_.dag.n_vertices;
    if (n == 0) return std::nullopt;
    // best[v]: heaviest label weight over longest-so-far paths ending at v.
    std::vector<long> best(n, 0);
    std::vector<std::size_t> parent(n, n);
    for (auto v : topo_) {
        long from = 0;
        for (auto u : tight_preds_[v]) {
            if (parent[v] == n || best[u] > from) {
                from = best[u];
                parent[v] = u;
            }
        }
        best[v] = from + w[inst_.labels[v]];
    }
    std::size_t end = n;
    for (auto v : topo_) {
        if (opt_[v] == longest_ && (end == n || best[v] > best[end])) end = v;
    }
    SubsetMask out(inst_.universe_size);
    for (auto v = end; v != n; v = parent[v]) out.insert(inst_.labels[v]);
    return out;
}

ExtensionOutcome DagDpOracle::exact_extend(const ExtensionQuery& q,
                                           const ExtensionContext*) const {
    const std::size_t n = inst_.dag.n_vertices;
    if (n == 0) return NotFound{};
    const std::size_t c = q.center.count();
    const std::size_t len = longest_;
    // |D ^ C| = |C| - (len - outside) + outside for `outside` labels of D not in C.
    if (q.radius + len < c || (q.radius + len - c) % 2 != 0) return NotFound{};
    const std::size_t outside = (q.radius + len - c) / 2;
    if (outside > len) return NotFound{};
    const std::size_t want_forced = q.forced.count();

    // states[v][p]: bitmask of q values reachable by a tight path ending at v
    // with p labels from X and q labels outside C.
    std::vector<std::vector<std::uint64_t>> states(n, std::vector<std::uint64_t>(want_forced + 1, 0));
    auto allowed = [&](std::size_t v) { return !q.forbidden.contains(inst_.labels[v]); };
    auto in_x = [&](std::size_t v) { return q.forced.contains(inst_.labels[v]) ? 1u : 0u; };
    auto out_c = [&](std::size_t v) { return q.center.contains(inst_.labels[v]) ? 0u : 1u; };
    for (auto v : topo_) {
        if (!allowed(v)) continue;
        const std::size_t dp = in_x(v), dq = out_c(v);
        if (opt_[v] == 1) {
            if (dp <= want_forced) states[v][dp] |= bit(dq);
            continue;
        }
        for (auto u : tight_preds_[v]) {
            for (std::size_t p = 0; p + dp <= want_forced; ++p) {
                states[v][p + dp] |= states[u][p] << dq;
            }
        }
    }

    for (auto end : topo_) {
        if (opt_[end] != len || !((states[end][want_forced] >> outside) & 1)) continue;
        SubsetMask out(inst_.universe_size);
        std::size_t v = end, p = want_forced, rest = outside;
        while (true) {
            out.insert(inst_.labels[v]);
            const std::size_t np = p - in_x(v), nq = rest - out_c(v);
            if (opt_[v] == 1) break;
            for (auto u : tight_preds_[v]) {
                if ((states[u][np] >> nq) & 1) {
                    v = u;
                    break;
                }
            }
            p = np;
            rest = nq;
        }
        return Found{out};
    }
    return NotFound{};
}

std::unique_ptr<DomainOracle> dagdp_oracle(const DagDpInstance& inst) {
    return std::make_unique<DagDpOracle>(inst);
}

}  // namespace divsparse
