#include "divsparse/domains.hpp"

#include <numeric>
#include <stdexcept>

namespace divsparse {

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::size_t MatroidSpec::universe_size() const {
    return std::visit(overloaded{
                          [](const GraphicMatroid& g) { return g.graph.edges.size(); },
                          [](const UniformMatroid& u) { return u.n; },
                          [](const PartitionMatroid& p) { return p.n; },
                      },
                      kind);
}

bool MatroidSpec::independent(const SubsetMask& s) const {
    return std::visit(
        overloaded{
            [&](const GraphicMatroid& g) {
                DisjointSets sets(g.graph.n_vertices);
                for (auto e : s.indices()) {
                    if (!sets.unite(g.graph.edges[e].first, g.graph.edges[e].second)) return false;
                }
                return true;
            },
            [&](const UniformMatroid& u) { return s.count() <= u.rank; },
            [&](const PartitionMatroid& p) {
                SubsetMask covered(p.n);
                for (const auto& b : p.blocks) {
                    std::size_t used = 0;
                    for (auto e : b.elements) {
                        covered.insert(e);
                        if (s.contains(e)) ++used;
                    }
                    if (used > b.capacity) return false;
                }
                return s.is_subset_of(covered);
            },
        },
        kind);
}

MatroidBaseOracle::MatroidBaseOracle(MatroidSpec spec) : spec_(std::move(spec)) {
    const std::size_t n = spec_.universe_size();
    if (n > kMaxUniverse) {
        throw CapabilityError("matroid ground set limited to " + std::to_string(kMaxUniverse));
    }
    if (auto* g = std::get_if<GraphicMatroid>(&spec_.kind)) {
        if (g->graph.directed) throw UsageError("graphic matroid needs an undirected graph");
        g->graph.validate();
    }
    if (auto* u = std::get_if<UniformMatroid>(&spec_.kind)) {
        if (u->rank > u->n) throw UsageError("uniform matroid rank exceeds ground set size");
    }
    if (auto* p = std::get_if<PartitionMatroid>(&spec_.kind)) {
        SubsetMask seen(p->n);
        for (const auto& b : p->blocks) {
            for (auto e : b.elements) {
                if (e >= p->n) throw UsageError("partition block element out of range");
                if (seen.contains(e)) throw UsageError("partition blocks overlap");
                seen.insert(e);
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    SubsetMask none(n);
    SubsetMask base = none;
    for (auto e : order) {
        auto next = base;
        next.insert(e);
        if (spec_.independent(next)) base = next;
    }
    rank_ = base.count();
}

std::optional<SubsetMask> MatroidBaseOracle::greedy_base(
    const SubsetMask& forced, const SubsetMask& forbidden,
    const std::vector<std::size_t>& order) const {
    if (forced.intersects(forbidden) || !spec_.independent(forced)) return std::nullopt;
    SubsetMask cur = forced;
    for (auto e : order) {
        if (cur.contains(e) || forbidden.contains(e)) continue;
        auto next = cur;
        next.insert(e);
        if (spec_.independent(next)) cur = next;
    }
    if (cur.count() != rank_) return std::nullopt;
    return cur;
}

SubsetMask MatroidBaseOracle::exchange_step(const SubsetMask& from, const SubsetMask& to) const {
    const auto leaving = (from - to).indices();
    if (leaving.empty()) throw UsageError("exchange_step: bases are equal");
    const std::size_t e1 = leaving.front();
    for (auto e2 : (to - from).indices()) {
        auto next = from;
        next.erase(e1);
        next.insert(e2);
        if (spec_.independent(next)) return next;
    }
    throw std::logic_error("exchange_step: no exchange partner; not a matroid?");
}

std::optional<SubsetMask> MatroidBaseOracle::opt_pm1(const WeightVector& w) const {
    const std::size_t n = universe_size();
    std::vector<std::size_t> order;
    for (std::size_t e = 0; e < n; ++e) {
        if (w[e] > 0) order.push_back(e);
    }
    for (std::size_t e = 0; e < n; ++e) {
        if (w[e] < 0) order.push_back(e);
    }
    return greedy_base(SubsetMask(n), SubsetMask(n), order);
}

ExtensionOutcome MatroidBaseOracle::exact_extend(const ExtensionQuery& q,
                                                 const ExtensionContext*) const {
    const std::size_t n = universe_size();
    // |D ^ C| = rank + |C| - 2|D & C| fixes the parity.
    if ((rank_ + q.center.count()) % 2 != q.radius % 2) return NotFound{};

    std::vector<std::size_t> prefer_center, avoid_center;
    for (std::size_t e = 0; e < n; ++e) {
        if (q.center.contains(e)) prefer_center.push_back(e);
    }
    for (std::size_t e = 0; e < n; ++e) {
        if (!q.center.contains(e)) prefer_center.push_back(e), avoid_center.push_back(e);
    }
    for (std::size_t e = 0; e < n; ++e) {
        if (q.center.contains(e)) avoid_center.push_back(e);
    }

    auto near = greedy_base(q.forced, q.forbidden, prefer_center);
    if (!near) return NotFound{};
    auto far = greedy_base(q.forced, q.forbidden, avoid_center);
    if (!far) throw std::logic_error("matroid: far base missing although a near base exists");
    if (q.radius < hamming(*near, q.center) || hamming(*far, q.center) < q.radius) {
        return NotFound{};
    }
    // Each exchange moves the distance to the center by -2, 0 or +2.
    SubsetMask cur = *near;
    while (hamming(cur, q.center) != q.radius) cur = exchange_step(cur, *far);
    return Found{cur};
}

std::unique_ptr<DomainOracle> matroid_base_oracle(const MatroidSpec& spec) {
    return std::make_unique<MatroidBaseOracle>(spec);
}

}  // namespace divsparse
