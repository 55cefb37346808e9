#include "divsparse/domains.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace divsparse {

namespace {

// Perfect matchings of the expansion of a subgraph: original vertices in
// `alive`, usable edges in `usable`, plus `pads` pad vertices adjacent to
// every alive vertex. Pad vertices are interchangeable, so a state records
// only how many have been used. Branches are tried in ascending edge order,
// pad last, which fixes tie-breaking.
class ExpansionDp {
public:
    ExpansionDp(const GraphData& g, std::uint64_t alive, std::uint64_t usable, std::size_t pads)
        : g_(g), alive_(alive), usable_(usable), pads_(pads), adj_(g.n_vertices) {
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            if (!((usable >> e) & 1)) continue;
            auto [u, v] = g.edges[e];
            if (!((alive >> u) & 1) || !((alive >> v) & 1)) continue;
            adj_[u].push_back({v, e});
            adj_[v].push_back({u, e});
        }
    }

    static constexpr long kNone = std::numeric_limits<long>::min();

    // Best total weight of original edges over perfect matchings; kNone if none.
    long best(std::uint64_t matched, std::size_t used, const WeightVector& w) {
        const auto key = state_key(matched, used);
        if (auto it = best_memo_.find(key); it != best_memo_.end()) return it->second;
        long result = kNone;
        const std::uint64_t open = alive_ & ~matched;
        if (open == 0) {
            result = used == pads_ ? 0 : kNone;
        } else {
            const std::size_t v = lowest(open);
            for (auto [u, e] : adj_[v]) {
                if ((matched >> u) & 1) continue;
                long sub = best(matched | bit(v) | bit(u), used, w);
                if (sub != kNone) result = std::max(result, sub + w[e]);
            }
            if (used < pads_) {
                long sub = best(matched | bit(v), used + 1, w);
                if (sub != kNone) result = std::max(result, sub);
            }
        }
        best_memo_[key] = result;
        return result;
    }

    SubsetMask rebuild_best(const WeightVector& w) {
        SubsetMask out(g_.edges.size());
        std::uint64_t matched = 0;
        std::size_t used = 0;
        long target = best(0, 0, w);
        while (alive_ & ~matched) {
            const std::size_t v = lowest(alive_ & ~matched);
            bool moved = false;
            for (auto [u, e] : adj_[v]) {
                if ((matched >> u) & 1) continue;
                long sub = best(matched | bit(v) | bit(u), used, w);
                if (sub != kNone && sub + w[e] == target) {
                    out.insert(e);
                    matched |= bit(v) | bit(u);
                    target = sub;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                matched |= bit(v);
                ++used;
            }
        }
        return out;
    }

    // Bitmask of achievable counts of edges outside `center` (blue edges).
    std::uint64_t blue_counts(std::uint64_t matched, std::size_t used, std::uint64_t center) {
        const auto key = state_key(matched, used);
        if (auto it = blue_memo_.find(key); it != blue_memo_.end()) return it->second;
        std::uint64_t result = 0;
        const std::uint64_t open = alive_ & ~matched;
        if (open == 0) {
            result = used == pads_ ? 1 : 0;
        } else {
            const std::size_t v = lowest(open);
            for (auto [u, e] : adj_[v]) {
                if ((matched >> u) & 1) continue;
                auto sub = blue_counts(matched | bit(v) | bit(u), used, center);
                result |= ((center >> e) & 1) ? sub : (sub << 1);
            }
            if (used < pads_) result |= blue_counts(matched | bit(v), used + 1, center);
        }
        blue_memo_[key] = result;
        return result;
    }

    SubsetMask rebuild_blue(std::size_t target, std::uint64_t center) {
        SubsetMask out(g_.edges.size());
        std::uint64_t matched = 0;
        std::size_t used = 0;
        while (alive_ & ~matched) {
            const std::size_t v = lowest(alive_ & ~matched);
            bool moved = false;
            for (auto [u, e] : adj_[v]) {
                if ((matched >> u) & 1) continue;
                const bool blue = !((center >> e) & 1);
                if (blue && target == 0) continue;
                const std::size_t rest = target - (blue ? 1 : 0);
                if ((blue_counts(matched | bit(v) | bit(u), used, center) >> rest) & 1) {
                    out.insert(e);
                    matched |= bit(v) | bit(u);
                    target = rest;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                matched |= bit(v);
                ++used;
            }
        }
        return out;
    }

private:
    static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }
    static std::size_t lowest(std::uint64_t m) { return static_cast<std::size_t>(__builtin_ctzll(m)); }
    static std::uint64_t state_key(std::uint64_t matched, std::size_t used) {
        return matched | (static_cast<std::uint64_t>(used) << 40);
    }

    const GraphData& g_;
    std::uint64_t alive_;
    std::uint64_t usable_;
    std::size_t pads_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
    std::unordered_map<std::uint64_t, long> best_memo_;
    std::unordered_map<std::uint64_t, std::uint64_t> blue_memo_;
};

std::uint64_t low_bits(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

GraphData expanded_graph(const GraphData& graph, std::size_t size) {
    if (2 * size > graph.n_vertices) throw UsageError("expanded_graph: matching size too large");
    const std::size_t pads = graph.n_vertices - 2 * size;
    GraphData out;
    out.directed = false;
    out.n_vertices = graph.n_vertices + pads;
    out.edges = graph.edges;
    for (std::size_t j = 0; j < pads; ++j) {
        for (std::size_t v = 0; v < graph.n_vertices; ++v) {
            out.edges.push_back({graph.n_vertices + j, v});
        }
    }
    return out;
}

MatchingOracle::MatchingOracle(GraphData graph, std::size_t size)
    : graph_(std::move(graph)), size_(size) {
    if (graph_.directed) throw UsageError("matching domain needs an undirected graph");
    graph_.validate();
    if (graph_.edges.size() > kMaxUniverse) {
        throw CapabilityError("matching domain limited to " + std::to_string(kMaxUniverse) +
                              " edges");
    }
    const std::size_t n = graph_.n_vertices;
    if (2 * size_ <= n && 2 * n - 2 * size_ > kMaxExpandedVertices) {
        throw CapabilityError("expanded graph exceeds " + std::to_string(kMaxExpandedVertices) +
                              " vertices");
    }
}

std::optional<SubsetMask> MatchingOracle::opt_pm1(const WeightVector& w) const {
    const std::size_t n = graph_.n_vertices;
    if (2 * size_ > n) return std::nullopt;
    ExpansionDp dp(graph_, low_bits(n), low_bits(graph_.edges.size()), n - 2 * size_);
    if (dp.best(0, 0, w) == ExpansionDp::kNone) return std::nullopt;
    return dp.rebuild_best(w);
}

ExtensionOutcome MatchingOracle::exact_extend(const ExtensionQuery& q,
                                              const ExtensionContext*) const {
    const std::size_t n = graph_.n_vertices;
    const std::size_t m = graph_.edges.size();
    // |D ^ C| = size + |C| - 2|D & C| for every size-`size_` matching D.
    const std::size_t total = size_ + q.center.count();
    if (q.radius > total || (total - q.radius) % 2 != 0) return NotFound{};
    const std::size_t shared = (total - q.radius) / 2;
    if (q.forced.count() > size_) return NotFound{};

    std::uint64_t taken = 0;
    for (auto e : q.forced.indices()) {
        auto [u, v] = graph_.edges[e];
        const std::uint64_t ends = (std::uint64_t{1} << u) | (std::uint64_t{1} << v);
        if (taken & ends) return NotFound{};
        taken |= ends;
    }
    const std::size_t rest = size_ - q.forced.count();
    const std::size_t forced_shared = (q.forced & q.center).count();
    if (shared < forced_shared || shared - forced_shared > rest) return NotFound{};
    const std::size_t blue = rest - (shared - forced_shared);

    const std::uint64_t alive = low_bits(n) & ~taken;
    const std::size_t alive_count = static_cast<std::size_t>(__builtin_popcountll(alive));
    if (2 * rest > alive_count) return NotFound{};
    const std::uint64_t usable = low_bits(m) & ~(q.forced | q.forbidden).bits();
    ExpansionDp dp(graph_, alive, usable, alive_count - 2 * rest);
    const std::uint64_t center = q.center.bits();
    if (!((dp.blue_counts(0, 0, center) >> blue) & 1)) return NotFound{};
    return Found{dp.rebuild_blue(blue, center) | q.forced};
}

std::unique_ptr<DomainOracle> matching_oracle(const GraphData& graph, std::size_t size) {
    return std::make_unique<MatchingOracle>(graph, size);
}

}  // namespace divsparse
