#include "divsparse/domains.hpp"

namespace divsparse {

namespace {

constexpr std::size_t kMaxCenterGuess = 24;

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// Bounded search tree: branch on the first uncovered edge.
bool cover_within(const EdgeList& edges, std::uint64_t& chosen, std::size_t budget) {
    for (auto [u, v] : edges) {
        const std::uint64_t bu = std::uint64_t{1} << u;
        const std::uint64_t bv = std::uint64_t{1} << v;
        if ((chosen & bu) || (chosen & bv)) continue;
        if (budget == 0) return false;
        chosen |= bu;
        if (cover_within(edges, chosen, budget - 1)) return true;
        chosen &= ~bu;
        chosen |= bv;
        if (cover_within(edges, chosen, budget - 1)) return true;
        chosen &= ~bv;
        return false;
    }
    return true;
}

}  // namespace

VertexCoverOracle::VertexCoverOracle(GraphData graph, std::size_t ell)
    : graph_(std::move(graph)), ell_(ell) {
    if (graph_.directed) throw UsageError("vertex cover domain needs an undirected graph");
    graph_.validate();
    if (graph_.n_vertices > kMaxUniverse) {
        throw CapabilityError("vertex cover domain limited to " + std::to_string(kMaxUniverse) +
                              " vertices");
    }
}

bool VertexCoverOracle::supports(Capability c) const { return c != Capability::opt_pm1; }

std::optional<SubsetMask> VertexCoverOracle::exact_cover(const SubsetMask& forced,
                                                         const SubsetMask& forbidden,
                                                         std::size_t size) const {
    const std::size_t n = graph_.n_vertices;
    if (size > ell_ || forced.intersects(forbidden)) return std::nullopt;

    // Edges with one usable endpoint force it; none usable means no cover.
    SubsetMask in = forced;
    for (auto [u, v] : graph_.edges) {
        if (in.contains(u) || in.contains(v)) continue;
        const bool u_ok = !forbidden.contains(u);
        const bool v_ok = !forbidden.contains(v);
        if (!u_ok && !v_ok) return std::nullopt;
        if (!v_ok) in.insert(u);
        if (!u_ok) in.insert(v);
    }
    if (in.count() > size) return std::nullopt;

    EdgeList open;
    for (auto e : graph_.edges) {
        if (!in.contains(e.first) && !in.contains(e.second)) open.push_back(e);
    }
    std::uint64_t chosen = in.bits();
    if (!cover_within(open, chosen, size - in.count())) return std::nullopt;

    SubsetMask cover = SubsetMask::from_bits(n, chosen);
    for (std::size_t v = 0; v < n && cover.count() < size; ++v) {
        if (!forbidden.contains(v)) cover.insert(v);
    }
    if (cover.count() != size) return std::nullopt;
    return cover;
}

ExtensionOutcome VertexCoverOracle::exact_empty_extend(std::size_t r,
                                                       const SubsetMask& forbidden) const {
    if (auto c = exact_cover(SubsetMask(graph_.n_vertices), forbidden, r)) return Found{*c};
    return NotFound{};
}

ExtensionOutcome VertexCoverOracle::exact_extend(const ExtensionQuery& q,
                                                 const ExtensionContext*) const {
    const std::size_t n = graph_.n_vertices;
    const auto center = q.center.indices();
    if (center.size() > kMaxCenterGuess) {
        throw GuardExceeded("vertex cover extension: center too large to guess its trace");
    }
    const SubsetMask forced_outside = q.forced - q.center;
    // Guess S = D & C; then D \ C must have exactly r - |C \ S| vertices.
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << center.size()); ++pick) {
        SubsetMask s(n);
        for (std::size_t i = 0; i < center.size(); ++i) {
            if ((pick >> i) & 1U) s.insert(center[i]);
        }
        if (!(q.forced & q.center).is_subset_of(s) || s.intersects(q.forbidden)) continue;
        const std::size_t dropped = center.size() - s.count();
        if (q.radius < dropped) continue;
        const std::size_t outside = q.radius - dropped;
        auto cover = exact_cover(s | forced_outside, (q.center - s) | q.forbidden,
                                 s.count() + outside);
        if (cover) return Found{*cover};
    }
    return NotFound{};
}

std::unique_ptr<DomainOracle> vertex_cover_oracle(const GraphData& graph, std::size_t ell) {
    return std::make_unique<VertexCoverOracle>(graph, ell);
}

}  // namespace divsparse
