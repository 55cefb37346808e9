#pragma once

// Shared fixtures and independent brute-force helpers for the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include "divsparse/core.hpp"
#include "divsparse/domains.hpp"

namespace testing_support {

using namespace divsparse;

inline SubsetMask set_of(std::size_t n, std::vector<std::size_t> idx) {
    return SubsetMask::from_indices(n, idx);
}

inline SetFamily family_of(std::size_t n, const std::vector<std::vector<std::size_t>>& sets) {
    SetFamily f(n);
    for (const auto& s : sets) f.insert(set_of(n, s));
    return f;
}

/// Distinct uniformly random subsets of an n-element ground set.
inline SetFamily random_family(std::size_t n, std::size_t count, std::mt19937_64& rng) {
    SetFamily f(n);
    const std::uint64_t limit = std::uint64_t{1} << n;
    count = std::min<std::uint64_t>(count, limit);
    while (f.size() < count) f.insert(SubsetMask::from_bits(n, rng() % limit));
    return f;
}

/// Random family whose members all have at most `ell` elements.
inline SetFamily random_bounded_family(std::size_t n, std::size_t count, std::size_t ell,
                                       std::mt19937_64& rng) {
    SetFamily f(n);
    std::size_t attempts = 0;
    while (f.size() < count && attempts++ < 100 * count) {
        auto m = SubsetMask::from_bits(n, rng() % (std::uint64_t{1} << n));
        if (m.count() <= ell) f.insert(m);
    }
    return f;
}

/// Closes a family under complement.
inline SetFamily complement_closure(const SetFamily& f) {
    SetFamily out(f.universe_size());
    for (const auto& m : f) {
        out.insert(m);
        out.insert(m.complement());
    }
    return out;
}

inline GraphData graph_of(bool directed, std::size_t n,
                          std::vector<std::pair<std::size_t, std::size_t>> edges) {
    GraphData g;
    g.directed = directed;
    g.n_vertices = n;
    g.edges = std::move(edges);
    return g;
}

/// Random simple graph without self-loops.
inline GraphData random_graph(bool directed, std::size_t n, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    GraphData g = graph_of(directed, n, {});
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v || (!directed && v < u)) continue;
            if (coin(rng)) g.edges.push_back({u, v});
        }
    }
    return g;
}

/// Random DAG: arcs only from lower to higher index.
inline GraphData random_dag(std::size_t n, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    GraphData g = graph_of(true, n, {});
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            if (coin(rng)) g.edges.push_back({u, v});
        }
    }
    return g;
}

inline DomainInstance explicit_instance(const SetFamily& f) {
    DomainInstance inst;
    inst.kind = DomainKind::explicit_family;
    inst.universe = f.universe_size();
    inst.family = f;
    return inst;
}

inline DomainInstance graph_instance(DomainKind kind, GraphData g) {
    DomainInstance inst;
    inst.kind = kind;
    inst.graph = std::move(g);
    return inst;
}

/// Same ground set and same members, ignoring insertion order.
inline bool same_family(const SetFamily& a, const SetFamily& b) {
    return a.universe_size() == b.universe_size() && a.canonical().members() == b.canonical().members();
}

/// Test-side popcount of the symmetric difference.
inline std::size_t naive_distance(const SubsetMask& a, const SubsetMask& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.universe_size(); ++i) d += a.contains(i) != b.contains(i);
    return d;
}

}  // namespace testing_support
