#include "divsparse/domains.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace divsparse {

namespace {

constexpr std::size_t kMaxIdeals = std::size_t{1} << 20;
constexpr std::size_t kMaxToggleNodes = 24;

// Edmonds-Karp on an arc list with integer capacities.
class FlowNetwork {
public:
    explicit FlowNetwork(std::size_t n) : adj_(n) {}

    void add_arc(std::size_t u, std::size_t v, long cap) {
        if (u == v) return;
        adj_[u].push_back(arcs_.size());
        arcs_.push_back({v, cap});
        adj_[v].push_back(arcs_.size());
        arcs_.push_back({u, 0});
    }

    long max_flow(std::size_t s, std::size_t t) {
        long total = 0;
        while (true) {
            std::vector<std::size_t> via(adj_.size(), kUnset);
            std::deque<std::size_t> queue{s};
            std::vector<bool> seen(adj_.size(), false);
            seen[s] = true;
            while (!queue.empty() && !seen[t]) {
                auto u = queue.front();
                queue.pop_front();
                for (auto a : adj_[u]) {
                    if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
                        seen[arcs_[a].to] = true;
                        via[arcs_[a].to] = a;
                        queue.push_back(arcs_[a].to);
                    }
                }
            }
            if (!seen[t]) return total;
            long push = std::numeric_limits<long>::max();
            for (auto v = t; v != s; v = arcs_[via[v] ^ 1].to) push = std::min(push, arcs_[via[v]].cap);
            for (auto v = t; v != s; v = arcs_[via[v] ^ 1].to) {
                arcs_[via[v]].cap -= push;
                arcs_[via[v] ^ 1].cap += push;
            }
            total += push;
        }
    }

    // Residual reachability: reach[u] = vertices reachable from u (u included).
    std::vector<std::uint64_t> residual_reach() const {
        const std::size_t n = adj_.size();
        std::vector<std::uint64_t> reach(n, 0);
        for (std::size_t u = 0; u < n; ++u) {
            std::vector<std::size_t> stack{u};
            reach[u] = std::uint64_t{1} << u;
            while (!stack.empty()) {
                auto x = stack.back();
                stack.pop_back();
                for (auto a : adj_[x]) {
                    auto y = arcs_[a].to;
                    if (arcs_[a].cap > 0 && !((reach[u] >> y) & 1)) {
                        reach[u] |= std::uint64_t{1} << y;
                        stack.push_back(y);
                    }
                }
            }
        }
        return reach;
    }

private:
    static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    struct Arc {
        std::size_t to;
        long cap;
    };
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Arc> arcs_;
};

void add_graph_arcs(FlowNetwork& net, const GraphData& g, long cap) {
    for (auto [u, v] : g.edges) {
        net.add_arc(u, v, cap);
        if (!g.directed) net.add_arc(v, u, cap);
    }
}

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

std::size_t popcount(std::uint64_t x) { return static_cast<std::size_t>(__builtin_popcountll(x)); }

}  // namespace

MinCutPoset build_mincut_poset(const GraphData& graph, std::size_t s, std::size_t t) {
    graph.validate();
    const std::size_t n = graph.n_vertices;
    if (n > kMaxUniverse) {
        throw CapabilityError("min-cut domain limited to " + std::to_string(kMaxUniverse) +
                              " vertices");
    }
    if (s >= n || t >= n || s == t) throw UsageError("min-cut: bad terminals");

    FlowNetwork net(n);
    add_graph_arcs(net, graph, 1);
    MinCutPoset poset;
    poset.n_vertices = n;
    poset.cut_value = static_cast<std::size_t>(net.max_flow(s, t));
    const auto reach = net.residual_reach();

    poset.source_block = SubsetMask::from_bits(n, reach[s]);
    poset.sink_block = SubsetMask(n);
    for (std::size_t v = 0; v < n; ++v) {
        if ((reach[v] >> t) & 1) poset.sink_block.insert(v);
    }

    // Remaining vertices grouped into residual strongly connected components.
    std::vector<std::size_t> node_of(n, n);
    for (std::size_t v = 0; v < n; ++v) {
        if (poset.source_block.contains(v) || poset.sink_block.contains(v) || node_of[v] != n) {
            continue;
        }
        SubsetMask block(n);
        for (std::size_t u = v; u < n; ++u) {
            if (((reach[v] >> u) & 1) && ((reach[u] >> v) & 1)) {
                block.insert(u);
                node_of[u] = poset.node_blocks.size();
            }
        }
        poset.node_blocks.push_back(block);
    }

    // Keeping u forces keeping everything u reaches: v <= u iff u reaches v.
    const std::size_t nodes = poset.node_blocks.size();
    poset.below.assign(nodes, 0);
    poset.above.assign(nodes, 0);
    for (std::size_t w = 0; w < nodes; ++w) {
        const std::size_t rep = poset.node_blocks[w].indices().front();
        for (std::size_t x = 0; x < nodes; ++x) {
            const std::size_t other = poset.node_blocks[x].indices().front();
            if ((reach[rep] >> other) & 1) {
                poset.below[w] |= bit(x);
                poset.above[x] |= bit(w);
            }
        }
    }
    return poset;
}

bool MinCutPoset::is_ideal(std::uint64_t nodes) const {
    for (std::size_t w = 0; w < node_count(); ++w) {
        if (((nodes >> w) & 1) && (below[w] & ~nodes)) return false;
    }
    return true;
}

SubsetMask MinCutPoset::cut_of(std::uint64_t ideal) const {
    SubsetMask cut = source_block;
    for (std::size_t w = 0; w < node_count(); ++w) {
        if ((ideal >> w) & 1) cut = cut | node_blocks[w];
    }
    return cut;
}

std::optional<std::uint64_t> MinCutPoset::ideal_of(const SubsetMask& cut) const {
    if (cut.universe_size() != n_vertices) return std::nullopt;
    if (!source_block.is_subset_of(cut) || cut.intersects(sink_block)) return std::nullopt;
    std::uint64_t ideal = 0;
    for (std::size_t w = 0; w < node_count(); ++w) {
        const auto inside = (node_blocks[w] & cut).count();
        if (inside == node_blocks[w].count()) {
            ideal |= bit(w);
        } else if (inside != 0) {
            return std::nullopt;
        }
    }
    if (!is_ideal(ideal)) return std::nullopt;
    return ideal;
}

std::vector<std::uint64_t> MinCutPoset::all_ideals() const {
    // Nodes ordered so that everything below a node precedes it.
    std::vector<std::size_t> order(node_count());
    for (std::size_t w = 0; w < order.size(); ++w) order[w] = w;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return popcount(below[a]) < popcount(below[b]);
    });
    std::vector<std::uint64_t> out;
    std::vector<std::pair<std::size_t, std::uint64_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, ideal] = stack.back();
        stack.pop_back();
        if (i == order.size()) {
            if (out.size() == kMaxIdeals) throw GuardExceeded("min-cut ideal enumeration guard");
            out.push_back(ideal);
            continue;
        }
        const std::size_t w = order[i];
        if (!((below[w] & ~bit(w)) & ~ideal)) stack.push_back({i + 1, ideal | bit(w)});
        stack.push_back({i + 1, ideal});
    }
    return out;
}

MinCutOracle::MinCutOracle(GraphData graph, std::size_t s, std::size_t t)
    : graph_(std::move(graph)), s_(s), t_(t), poset_(build_mincut_poset(graph_, s, t)) {}

std::optional<SubsetMask> MinCutOracle::opt_pm1(const WeightVector& w) const {
    const std::size_t n = graph_.n_vertices;
    // Cut edges dominate; unit arcs then reward keeping +1 vertices and dropping -1 vertices.
    FlowNetwork net(n);
    add_graph_arcs(net, graph_, static_cast<long>(2 * n + 1));
    for (std::size_t v = 0; v < n; ++v) {
        if (w[v] > 0) {
            net.add_arc(s_, v, 1);
        } else {
            net.add_arc(v, t_, 1);
        }
    }
    net.max_flow(s_, t_);
    return SubsetMask::from_bits(n, net.residual_reach()[s_]);
}

ExtensionOutcome MinCutOracle::exact_extend(const ExtensionQuery& q,
                                            const ExtensionContext* ctx) const {
    const auto center_ideal = poset_.ideal_of(q.center);
    if (!center_ideal) {
        for (auto ideal : poset_.all_ideals()) {
            auto cut = poset_.cut_of(ideal);
            if (q.satisfied_by(cut)) return Found{cut};
        }
        return NotFound{};
    }
    const std::uint64_t ic = *center_ideal;
    const std::size_t nodes = poset_.node_count();

    auto vertices_of = [&](std::uint64_t node_set) {
        std::size_t total = 0;
        for (std::size_t w = 0; w < nodes; ++w) {
            if ((node_set >> w) & 1) total += poset_.node_blocks[w].count();
        }
        return total;
    };
    // Nodes that can join (plus) or leave (minus) the center's ideal while
    // changing at most `limit` vertices.
    auto movable = [&](std::size_t limit, std::vector<std::size_t>& plus,
                       std::vector<std::size_t>& minus) {
        for (std::size_t w = 0; w < nodes; ++w) {
            if (!((ic >> w) & 1)) {
                if (vertices_of(poset_.below[w] & ~ic) <= limit) plus.push_back(w);
            } else if (vertices_of(poset_.above[w] & ic) <= limit) {
                minus.push_back(w);
            }
        }
    };

    if (ctx) {
        std::vector<std::size_t> plus, minus;
        movable(ctx->p, plus, minus);
        const std::size_t stride = 2 * ctx->d + 1;
        const std::size_t needed = ctx->k * stride;
        if (plus.size() >= needed || minus.size() >= needed) {
            const bool grow = plus.size() >= needed;
            auto chain = grow ? plus : minus;
            // Sorting by the number of nodes that must move along gives a
            // linear extension, so every prefix keeps an ideal.
            std::stable_sort(chain.begin(), chain.end(), [&](std::size_t a, std::size_t b) {
                auto cost = [&](std::size_t w) {
                    return popcount(grow ? poset_.below[w] & ~ic : poset_.above[w] & ic);
                };
                return cost(a) < cost(b);
            });
            SetFamily family(graph_.n_vertices);
            std::uint64_t ideal = ic;
            family.insert(poset_.cut_of(ideal));
            for (std::size_t i = 0; i < ctx->k; ++i) {
                for (std::size_t j = i * stride; j < (i + 1) * stride; ++j) {
                    ideal = grow ? ideal | bit(chain[j]) : ideal & ~bit(chain[j]);
                }
                family.insert(poset_.cut_of(ideal));
            }
            return TrivialSparsifier{family};
        }
    }

    std::vector<std::size_t> plus, minus;
    movable(q.radius, plus, minus);
    std::vector<std::size_t> toggles = plus;
    toggles.insert(toggles.end(), minus.begin(), minus.end());
    if (toggles.size() > kMaxToggleNodes) {
        for (auto ideal : poset_.all_ideals()) {
            auto cut = poset_.cut_of(ideal);
            if (q.satisfied_by(cut)) return Found{cut};
        }
        return NotFound{};
    }
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << toggles.size()); ++pick) {
        std::uint64_t ideal = ic;
        for (std::size_t i = 0; i < toggles.size(); ++i) {
            if ((pick >> i) & 1) ideal ^= bit(toggles[i]);
        }
        if (!poset_.is_ideal(ideal)) continue;
        auto cut = poset_.cut_of(ideal);
        if (q.satisfied_by(cut)) return Found{cut};
    }
    return NotFound{};
}

std::unique_ptr<DomainOracle> mincut_oracle(const GraphData& graph, std::size_t s, std::size_t t) {
    return std::make_unique<MinCutOracle>(graph, s, t);
}

}  // namespace divsparse
