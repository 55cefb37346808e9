#include "divsparse/bruteforce.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace divsparse {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

bool forest(const GraphData& g, const SubsetMask& edges) {
    std::vector<std::size_t> parent(g.n_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    for (auto e : edges.indices()) {
        auto a = find_root(parent, g.edges[e].first);
        auto b = find_root(parent, g.edges[e].second);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

// Bases are the maximal independent sets.
bool is_base(const SubsetMask& s, const std::function<bool(const SubsetMask&)>& independent) {
    if (!independent(s)) return false;
    for (std::size_t e = 0; e < s.universe_size(); ++e) {
        if (s.contains(e)) continue;
        auto bigger = s;
        bigger.insert(e);
        if (independent(bigger)) return false;
    }
    return true;
}

std::size_t arcs_leaving(const GraphData& g, const SubsetMask& side) {
    std::size_t count = 0;
    for (auto [u, v] : g.edges) {
        if (side.contains(u) && !side.contains(v)) ++count;
        if (!g.directed && side.contains(v) && !side.contains(u)) ++count;
    }
    return count;
}

// Label sets of all paths with the largest vertex count.
std::set<std::uint64_t> longest_path_labels(const GraphData& g,
                                            const std::vector<std::size_t>& labels) {
    std::vector<std::vector<std::size_t>> out(g.n_vertices);
    for (auto [u, v] : g.edges) out[u].push_back(v);
    std::size_t best = 0;
    std::set<std::uint64_t> sets;
    std::vector<std::size_t> path;
    std::function<void(std::size_t)> walk = [&](std::size_t v) {
        path.push_back(v);
        if (path.size() > g.n_vertices) throw UsageError("dag_dp graph has a cycle");
        if (path.size() >= best) {
            std::uint64_t mask = 0;
            for (auto x : path) mask |= std::uint64_t{1} << labels[x];
            if (path.size() > best) {
                best = path.size();
                sets.clear();
            }
            sets.insert(mask);
        }
        for (auto w : out[v]) walk(w);
        path.pop_back();
    };
    for (std::size_t v = 0; v < g.n_vertices; ++v) walk(v);
    return sets;
}

std::size_t capped(std::size_t x, std::size_t cap) { return std::min(x, cap); }

bool next_multiset(std::vector<std::size_t>& idx, std::size_t m) {
    std::size_t i = idx.size();
    while (i > 0 && idx[i - 1] == m - 1) --i;
    if (i == 0) return false;
    const std::size_t v = idx[i - 1] + 1;
    for (std::size_t j = i - 1; j < idx.size(); ++j) idx[j] = v;
    return true;
}

std::uint64_t multiset_count(std::size_t m, std::size_t k) {
    long double c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<long double>(m + k - i) / static_cast<long double>(i);
        if (c > static_cast<long double>(kMaxBruteTuples)) return kMaxBruteTuples + 1;
    }
    return static_cast<std::uint64_t>(c + 0.5L);
}

class ReferenceOracle : public DomainOracle {
public:
    explicit ReferenceOracle(SetFamily family) : family_(std::move(family)) {}

    std::size_t universe_size() const override { return family_.universe_size(); }

    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override {
        std::optional<SubsetMask> best;
        for (const auto& m : family_) {
            if (!best || w.weight_of(m) > w.weight_of(*best)) best = m;
        }
        return best;
    }

    ExtensionOutcome exact_extend(const ExtensionQuery& q, const ExtensionContext*) const override {
        for (const auto& m : family_) {
            if (hamming(m, q.center) == q.radius && q.forced.is_subset_of(m) &&
                !m.intersects(q.forbidden)) {
                return Found{m};
            }
        }
        return NotFound{};
    }

    bool complement_closed() const override {
        return std::all_of(family_.begin(), family_.end(),
                           [&](const SubsetMask& m) { return family_.contains(m.complement()); });
    }

private:
    SetFamily family_;
};

}  // namespace

MembershipPredicate::MembershipPredicate(const DomainInstance& inst) : n_(inst.universe_size()) {
    switch (inst.kind) {
        case DomainKind::explicit_family: {
            auto family = *inst.family;
            test_ = [family](const SubsetMask& s) { return family.contains(s); };
            break;
        }
        case DomainKind::vertex_cover: {
            auto g = *inst.graph;
            auto ell = inst.ell;
            test_ = [g, ell](const SubsetMask& s) {
                if (s.count() > ell) return false;
                return std::all_of(g.edges.begin(), g.edges.end(), [&](auto e) {
                    return s.contains(e.first) || s.contains(e.second);
                });
            };
            break;
        }
        case DomainKind::spanning_tree: {
            auto g = *inst.graph;
            test_ = [g](const SubsetMask& s) {
                return is_base(s, [&](const SubsetMask& x) { return forest(g, x); });
            };
            break;
        }
        case DomainKind::uniform_matroid: {
            auto rank = inst.rank;
            test_ = [rank](const SubsetMask& s) {
                return is_base(s, [&](const SubsetMask& x) { return x.count() <= rank; });
            };
            break;
        }
        case DomainKind::partition_matroid: {
            auto blocks = inst.blocks;
            test_ = [blocks](const SubsetMask& s) {
                return is_base(s, [&](const SubsetMask& x) {
                    std::size_t placed = 0;
                    for (const auto& b : blocks) {
                        std::size_t used = 0;
                        for (auto e : b.elements) used += x.contains(e) ? 1 : 0;
                        if (used > b.capacity) return false;
                        placed += used;
                    }
                    return placed == x.count();
                });
            };
            break;
        }
        case DomainKind::matching: {
            auto g = *inst.graph;
            auto size = inst.matching_size;
            test_ = [g, size](const SubsetMask& s) {
                if (s.count() != size) return false;
                std::vector<bool> used(g.n_vertices, false);
                for (auto e : s.indices()) {
                    auto [u, v] = g.edges[e];
                    if (used[u] || used[v]) return false;
                    used[u] = used[v] = true;
                }
                return true;
            };
            break;
        }
        case DomainKind::st_mincut: {
            auto g = *inst.graph;
            auto s = inst.s, t = inst.t;
            if (g.n_vertices > kMaxEnumerateUniverse) {
                throw GuardExceeded("brute-force min cut limited to " +
                                    std::to_string(kMaxEnumerateUniverse) + " vertices");
            }
            std::size_t best = std::numeric_limits<std::size_t>::max();
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << g.n_vertices); ++bits) {
                auto side = SubsetMask::from_bits(g.n_vertices, bits);
                if (side.contains(s) && !side.contains(t)) best = std::min(best, arcs_leaving(g, side));
            }
            test_ = [g, s, t, best](const SubsetMask& side) {
                return side.contains(s) && !side.contains(t) && arcs_leaving(g, side) == best;
            };
            break;
        }
        case DomainKind::dag_dp: {
            auto sets = longest_path_labels(*inst.graph, inst.labels);
            test_ = [sets](const SubsetMask& s) { return sets.count(s.bits()) > 0; };
            break;
        }
    }
}

bool MembershipPredicate::operator()(const SubsetMask& s) const {
    if (s.universe_size() != n_) throw UsageError("membership test on a different universe");
    return test_(s);
}

SetFamily enumerate_domain(const DomainInstance& instance) {
    const std::size_t n = instance.universe_size();
    if (n > kMaxEnumerateUniverse) {
        throw GuardExceeded("enumeration limited to ground sets of " +
                            std::to_string(kMaxEnumerateUniverse) + " elements");
    }
    MembershipPredicate member(instance);
    SetFamily out(n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        auto s = SubsetMask::from_bits(n, bits);
        if (member(s)) out.insert(s);
    }
    return out;
}

VerifyScope VerifyScope::against_domain(std::size_t k, std::optional<std::size_t> cap) {
    VerifyScope s;
    s.k = k;
    s.cap = cap;
    s.reference = Reference::domain;
    return s;
}

VerifyScope VerifyScope::against_all_subsets(std::size_t k, std::optional<std::size_t> cap) {
    VerifyScope s = against_domain(k, cap);
    s.reference = Reference::all_subsets;
    return s;
}

VerifyScope VerifyScope::against_ball(std::size_t k, std::optional<std::size_t> cap,
                                      SubsetMask center, std::size_t radius) {
    VerifyScope s = against_domain(k, cap);
    s.reference = Reference::ball;
    s.ball_center = center;
    s.ball_radius = radius;
    return s;
}

VerifyResult verify_sparsifier(const SetFamily& domain, const SetFamily& cand,
                               const VerifyScope& scope, std::uint64_t seed) {
    if (scope.k < 1) throw UsageError("verify_sparsifier: k must be positive");
    const std::size_t n = domain.universe_size();
    for (const auto& m : cand) {
        if (!domain.contains(m)) throw UsageError("candidate family is not inside the domain");
    }
    const std::size_t cap = scope.cap ? std::min(*scope.cap, n) : n;
    VerifyResult result;

    std::vector<SubsetMask> reference;
    bool sample = false;
    switch (scope.reference) {
        case VerifyScope::Reference::domain:
            reference = domain.members();
            break;
        case VerifyScope::Reference::all_subsets:
        case VerifyScope::Reference::ball:
            if (n > kMaxMaterializedUniverse) {
                sample = true;
                break;
            }
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
                auto f = SubsetMask::from_bits(n, bits);
                if (scope.reference == VerifyScope::Reference::all_subsets ||
                    hamming(f, scope.ball_center) <= scope.ball_radius) {
                    reference.push_back(f);
                }
            }
            break;
    }

    auto dominated = [&](const std::vector<SubsetMask>& tuple, const SubsetMask& d) {
        for (const auto& k : cand) {
            bool all = true;
            for (const auto& f : tuple) {
                if (capped(hamming(f, k), cap) < capped(hamming(f, d), cap)) {
                    all = false;
                    break;
                }
            }
            if (all) return true;
        }
        return false;
    };

    if (sample) {
        result.sampled = true;
        std::mt19937_64 rng(seed);
        for (std::size_t trial = 0; trial < kVerifySamples; ++trial) {
            std::vector<SubsetMask> tuple;
            while (tuple.size() < scope.k) {
                auto f = SubsetMask::from_bits(n, n >= 64 ? rng() : rng() & ((std::uint64_t{1} << n) - 1));
                if (scope.reference == VerifyScope::Reference::ball &&
                    hamming(f, scope.ball_center) > scope.ball_radius) {
                    // Walk toward the center until inside the ball.
                    auto diff = (f ^ scope.ball_center).indices();
                    while (hamming(f, scope.ball_center) > scope.ball_radius) {
                        auto e = diff.back();
                        diff.pop_back();
                        f = f ^ SubsetMask::from_indices(n, {e});
                    }
                }
                tuple.push_back(f);
            }
            for (const auto& d : domain) {
                if (!dominated(tuple, d)) {
                    result.ok = false;
                    result.counterexample_tuple = tuple;
                    result.counterexample_member = d;
                    return result;
                }
            }
        }
        return result;
    }

    // A member D fails exactly when at most k reference sets together defeat
    // every candidate K: each K is defeated by the sets F with
    // min(cap,|F^K|) < min(cap,|F^D|). That is a hitting-set search of depth k.
    const std::size_t rn = reference.size();
    const std::size_t words = (rn + 63) / 64;
    using Bits = std::vector<std::uint64_t>;
    for (const auto& d : domain) {
        if (cand.contains(d) || rn == 0) continue;
        std::vector<Bits> defeats;
        bool always_ok = false;
        for (const auto& k : cand) {
            Bits b(words, 0);
            bool any = false;
            for (std::size_t i = 0; i < rn; ++i) {
                if (capped(hamming(reference[i], k), cap) < capped(hamming(reference[i], d), cap)) {
                    b[i / 64] |= std::uint64_t{1} << (i % 64);
                    any = true;
                }
            }
            if (!any) {
                always_ok = true;
                break;
            }
            defeats.push_back(std::move(b));
        }
        if (always_ok) continue;

        std::vector<std::size_t> chosen;
        std::function<bool()> search = [&]() {
            const Bits* open = nullptr;
            std::size_t open_size = std::numeric_limits<std::size_t>::max();
            for (const auto& b : defeats) {
                bool hit = false;
                for (auto c : chosen) {
                    if ((b[c / 64] >> (c % 64)) & 1) {
                        hit = true;
                        break;
                    }
                }
                if (hit) continue;
                std::size_t size = 0;
                for (auto w : b) size += static_cast<std::size_t>(__builtin_popcountll(w));
                if (size < open_size) {
                    open = &b;
                    open_size = size;
                }
            }
            if (!open) return true;
            if (chosen.size() == scope.k) return false;
            for (std::size_t i = 0; i < rn; ++i) {
                if (!(((*open)[i / 64] >> (i % 64)) & 1)) continue;
                chosen.push_back(i);
                if (search()) return true;
                chosen.pop_back();
            }
            return false;
        };
        if (search()) {
            result.ok = false;
            if (chosen.empty()) chosen.push_back(0);
            while (chosen.size() < scope.k) chosen.push_back(chosen.back());
            for (auto i : chosen) result.counterexample_tuple.push_back(reference[i]);
            result.counterexample_member = d;
            return result;
        }
    }
    return result;
}

SolveAnswer brute_solve(const SetFamily& domain, const ProblemSpec& spec) {
    if (spec.k < 1) throw UsageError("k must be at least 1");
    const std::size_t m = domain.size();
    SolveAnswer answer;
    answer.sparsifier_size = m;
    if (m == 0) return answer;
    if (multiset_count(m, spec.k) > kMaxBruteTuples) {
        throw GuardExceeded("brute-force tuple enumeration exceeds the guard");
    }
    auto dist = [&](std::size_t a, std::size_t b) {
        return distance(domain[a], domain[b], spec.modified);
    };

    std::vector<std::size_t> idx(spec.k, 0);
    const bool clustering = spec.problem == Problem::kcenter || spec.problem == Problem::ksumradii;

    if (!clustering) {
        long best_sum = -1;
        std::vector<std::size_t> best_idx;
        do {
            std::size_t min_d = std::numeric_limits<std::size_t>::max();
            long sum = 0;
            for (std::size_t a = 0; a < spec.k; ++a) {
                for (std::size_t b = a + 1; b < spec.k; ++b) {
                    min_d = std::min(min_d, dist(idx[a], idx[b]));
                    sum += static_cast<long>(dist(idx[a], idx[b]));
                }
            }
            if (spec.problem == Problem::maxmin) {
                if (min_d >= spec.d) {
                    answer.feasible = true;
                    for (auto i : idx) answer.witnesses.push_back(domain[i]);
                    return answer;
                }
            } else if (sum > best_sum) {
                best_sum = sum;
                best_idx = idx;
            }
        } while (next_multiset(idx, m));
        if (spec.problem == Problem::maxsum) {
            answer.objective = best_sum;
            if (best_sum >= static_cast<long>(spec.d)) {
                answer.feasible = true;
                for (auto i : best_idx) answer.witnesses.push_back(domain[i]);
            }
        }
        return answer;
    }

    // Clustering: try every center tuple and every radius vector.
    long best = std::numeric_limits<long>::max();
    std::vector<std::size_t> radii(spec.k, 0);
    do {
        std::function<void(std::size_t, long)> choose = [&](std::size_t i, long used) {
            if (i == spec.k) {
                for (std::size_t x = 0; x < m; ++x) {
                    bool covered = false;
                    for (std::size_t c = 0; c < spec.k && !covered; ++c) {
                        covered = dist(x, idx[c]) <= radii[c];
                    }
                    if (!covered) return;
                }
                long obj = 0;
                for (auto r : radii) {
                    obj = spec.problem == Problem::ksumradii ? obj + static_cast<long>(r)
                                                             : std::max(obj, static_cast<long>(r));
                }
                if (obj < best) {
                    best = obj;
                    answer.witnesses.clear();
                    for (auto c : idx) answer.witnesses.push_back(domain[c]);
                    answer.radii = radii;
                }
                return;
            }
            for (std::size_t r = 0; used + static_cast<long>(r) <= static_cast<long>(spec.d) ||
                                    (spec.problem == Problem::kcenter && r <= spec.d);
                 ++r) {
                radii[i] = r;
                choose(i + 1, spec.problem == Problem::ksumradii ? used + static_cast<long>(r) : 0);
            }
            radii[i] = 0;
        };
        choose(0, 0);
    } while (next_multiset(idx, m));
    if (best <= static_cast<long>(spec.d)) {
        answer.feasible = true;
        answer.objective = best;
    } else {
        answer.witnesses.clear();
        answer.radii.reset();
    }
    return answer;
}

std::unique_ptr<DomainOracle> brute_oracles(const SetFamily& domain) {
    return std::make_unique<ReferenceOracle>(domain);
}

}  // namespace divsparse
