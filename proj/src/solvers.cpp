#include "divsparse/solvers.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_map>
#include <stdexcept>

namespace divsparse {

namespace {

constexpr std::uint64_t kMaxTuples = 50'000'000;
constexpr std::size_t kMaxBadElements = 24;

class SmallBuilder : public SparsifierBuilder {
public:
    SmallBuilder(const DomainOracle& oracle, std::size_t ell) : oracle_(oracle), ell_(ell) {}
    SparsifierReport build(std::size_t k, std::size_t) const override {
        OracleEmptyView view(oracle_);
        return k_sparsify(SmallSparsifyParams{k, ell_, ell_}, view);
    }
    std::optional<ExtensionContext> context(std::size_t, std::size_t) const override {
        return std::nullopt;
    }

private:
    const DomainOracle& oracle_;
    std::size_t ell_;
};

class LimitedBuilder : public SparsifierBuilder {
public:
    LimitedBuilder(const DomainOracle& oracle, LimitedSparsifyParams base)
        : oracle_(oracle), base_(std::move(base)) {}
    SparsifierReport build(std::size_t k, std::size_t d) const override {
        return dk_sparsify(oracle_, params(k, d));
    }
    std::optional<ExtensionContext> context(std::size_t k, std::size_t d) const override {
        return ExtensionContext{k, d, params(k, d).cluster_radius()};
    }

private:
    LimitedSparsifyParams params(std::size_t k, std::size_t d) const {
        auto p = base_;
        p.k = k;
        p.d = d;
        return p;
    }
    const DomainOracle& oracle_;
    LimitedSparsifyParams base_;
};

std::uint64_t multiset_count(std::size_t m, std::size_t k) {
    // C(m + k - 1, k), saturating at kMaxTuples + 1.
    long double c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<long double>(m + k - i) / static_cast<long double>(i);
        if (c > kMaxTuples) return kMaxTuples + 1;
    }
    return static_cast<std::uint64_t>(c + 0.5L);
}

void require_complement_closed(const DomainOracle& oracle, const ProblemSpec& spec) {
    if (spec.modified && !oracle.complement_closed()) {
        throw UsageError("modified distance needs a domain closed under complement");
    }
}

std::vector<std::vector<std::size_t>> distance_table(const SetFamily& family, bool modified) {
    const std::size_t m = family.size();
    std::vector<std::vector<std::size_t>> table(m, std::vector<std::size_t>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            table[i][j] = table[j][i] = distance(family[i], family[j], modified);
        }
    }
    return table;
}

// Checks k+1 (or 2k+1 under modified distance) members pairwise beyond 2d;
// no k balls of radius d can hold them all.
void check_infeasibility_proof(const SetFamily& family, const ProblemSpec& spec) {
    const std::size_t needed = spec.modified ? 2 * spec.k + 1 : spec.k + 1;
    bool ok = family.size() >= needed;
    for (std::size_t i = 0; ok && i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (hamming(family[i], family[j]) <= 2 * spec.d) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) throw std::logic_error("trivial sparsifier does not rule out a clustering");
}

// Branch and bound over assignments of sparsifier members to at most k
// clusters (restricted growth), each member optionally replaced by its
// complement under modified distance.
class ClusterSearch {
public:
    ClusterSearch(const DomainOracle& oracle, const ProblemSpec& spec, const SetFamily& members,
                  const ExtensionContext* ctx)
        : oracle_(oracle), spec_(spec), members_(members), ctx_(ctx),
          sum_(spec.problem == Problem::ksumradii) {}

    void run() { assign(0); }

    bool found() const { return best_ <= static_cast<long>(spec_.d); }
    long best() const { return best_; }
    const std::vector<ClusterRadius>& best_clusters() const { return best_clusters_; }

private:
    struct Block {
        // Member bits, then flip bits: the memo key for this cluster.
        std::vector<bool> key;
        std::vector<SubsetMask> reps;
        ClusterRadius radius;
    };

    long objective() const {
        long total = 0;
        for (const auto& b : blocks_) {
            const long r = static_cast<long>(b.radius.radius);
            total = sum_ ? total + r : std::max(total, r);
        }
        return total;
    }

    std::optional<ClusterRadius> radius_of(const Block& b) {
        if (auto it = memo_.find(b.key); it != memo_.end()) return it->second;
        auto r = min_cluster_radius(b.reps, spec_.d, oracle_, ctx_);
        memo_.emplace(b.key, r);
        return r;
    }

    bool try_extend(std::size_t i, std::size_t block, bool flip) {
        const SubsetMask rep = flip ? members_[i].complement() : members_[i];
        auto& b = blocks_[block];
        for (const auto& other : b.reps) {
            if (hamming(rep, other) > 2 * spec_.d) return false;
        }
        const Block saved = b;
        b.key[i] = true;
        if (flip) b.key[members_.size() + i] = true;
        b.reps.push_back(rep);
        auto r = radius_of(b);
        if (r) {
            b.radius = *r;
            const long obj = objective();
            if (obj <= static_cast<long>(spec_.d) && obj < best_) assign(i + 1);
        }
        blocks_[block] = saved;
        return best_ == 0;
    }

    void assign(std::size_t i) {
        if (i == members_.size()) {
            const long obj = objective();
            if (obj < best_) {
                best_ = obj;
                best_clusters_.clear();
                for (const auto& b : blocks_) best_clusters_.push_back(b.radius);
            }
            return;
        }
        for (std::size_t block = 0; block < blocks_.size(); ++block) {
            if (try_extend(i, block, false)) return;
            if (spec_.modified && try_extend(i, block, true)) return;
        }
        if (blocks_.size() < spec_.k) {
            blocks_.push_back(Block{std::vector<bool>(2 * members_.size()), {}, {}});
            try_extend(i, blocks_.size() - 1, false);
            blocks_.pop_back();
        }
    }

    const DomainOracle& oracle_;
    const ProblemSpec& spec_;
    const SetFamily& members_;
    const ExtensionContext* ctx_;
    bool sum_;
    std::vector<Block> blocks_;
    std::unordered_map<std::vector<bool>, std::optional<ClusterRadius>> memo_;
    long best_ = std::numeric_limits<long>::max();
    std::vector<ClusterRadius> best_clusters_;
};

SolveAnswer solve_clustering(const DomainOracle& oracle, const ProblemSpec& spec,
                             const SparsifierBuilder& builder) {
    require_complement_closed(oracle, spec);
    const std::size_t ks = sparsifier_k(spec), ds = sparsifier_d(spec);
    auto report = builder.build(ks, ds);
    SolveAnswer answer;
    answer.sparsifier_size = report.family.size();
    if (report.family.empty()) return answer;
    if (report.shortcut || report.trivial_cluster) {
        check_infeasibility_proof(report.family, spec);
        return answer;
    }

    const auto ctx = builder.context(ks, ds);
    ClusterSearch search(oracle, spec, report.family, ctx ? &*ctx : nullptr);
    try {
        search.run();
    } catch (const GloballyInfeasible&) {
        return answer;
    }
    if (!search.found()) return answer;

    answer.feasible = true;
    answer.objective = search.best();
    std::vector<std::size_t> radii;
    for (const auto& c : search.best_clusters()) {
        answer.witnesses.push_back(c.center);
        radii.push_back(c.radius);
    }
    while (answer.witnesses.size() < spec.k) {
        answer.witnesses.push_back(answer.witnesses.front());
        radii.push_back(0);
    }
    answer.radii = radii;

    for (const auto& m : report.family) {
        bool covered = false;
        for (std::size_t i = 0; i < answer.witnesses.size() && !covered; ++i) {
            covered = distance(m, answer.witnesses[i], spec.modified) <= radii[i];
        }
        if (!covered) throw std::logic_error("clustering witness leaves a member uncovered");
    }
    return answer;
}

}  // namespace

const char* to_string(Problem p) {
    switch (p) {
        case Problem::maxmin: return "maxmin";
        case Problem::maxsum: return "maxsum";
        case Problem::kcenter: return "kcenter";
        case Problem::ksumradii: return "ksumradii";
    }
    return "unknown";
}

Problem parse_problem(const std::string& name) {
    for (auto p : {Problem::maxmin, Problem::maxsum, Problem::kcenter, Problem::ksumradii}) {
        if (name == to_string(p)) return p;
    }
    throw UsageError("unknown problem '" + name + "'");
}

std::unique_ptr<SparsifierBuilder> small_builder(const DomainOracle& oracle, std::size_t ell) {
    return std::make_unique<SmallBuilder>(oracle, ell);
}

std::unique_ptr<SparsifierBuilder> limited_builder(const DomainOracle& oracle,
                                                   LimitedSparsifyParams base) {
    return std::make_unique<LimitedBuilder>(oracle, std::move(base));
}

std::size_t sparsifier_k(const ProblemSpec& spec) {
    switch (spec.problem) {
        case Problem::maxmin:
        case Problem::maxsum:
            // One tuple entry is replaced while the other k-1 (and, under
            // modified distance, their complements) stay fixed.
            return std::max<std::size_t>(1, spec.modified ? 2 * spec.k - 2 : spec.k - 1);
        case Problem::kcenter:
        case Problem::ksumradii: return spec.modified ? 2 * spec.k : spec.k;
    }
    return spec.k;
}

std::size_t sparsifier_d(const ProblemSpec& spec) {
    const bool clustering = spec.problem == Problem::kcenter || spec.problem == Problem::ksumradii;
    return clustering ? spec.d + 1 : spec.d;
}

std::optional<ClusterRadius> min_cluster_radius(const std::vector<SubsetMask>& cluster,
                                                std::size_t d, const DomainOracle& oracle,
                                                const ExtensionContext* ctx) {
    if (cluster.empty()) throw UsageError("min_cluster_radius: empty cluster");
    const std::size_t n = oracle.universe_size();
    SubsetMask any(n), all = SubsetMask::full(n);
    for (const auto& m : cluster) {
        any = any | m;
        all = all & m;
    }
    const SubsetMask bad = any - all;
    // Every bad element costs some member one unit of distance.
    if (bad.count() > d * cluster.size()) return std::nullopt;
    if (bad.count() > kMaxBadElements) {
        throw GuardExceeded("cluster has " + std::to_string(bad.count()) + " bad elements");
    }
    const auto bad_elems = bad.indices();
    const std::uint64_t choices = std::uint64_t{1} << bad_elems.size();

    // Members agree off the bad elements, so the farthest one from D is the
    // one disagreeing most with D on them.
    std::vector<SubsetMask> inside(choices, SubsetMask(n));
    std::vector<std::size_t> farthest(choices, 0);
    for (std::uint64_t pick = 0; pick < choices; ++pick) {
        for (std::size_t i = 0; i < bad_elems.size(); ++i) {
            if ((pick >> i) & 1) inside[pick].insert(bad_elems[i]);
        }
        std::size_t best = 0;
        for (std::size_t j = 0; j < cluster.size(); ++j) {
            const auto dist = hamming(cluster[j] & bad, inside[pick]);
            if (dist > best) {
                best = dist;
                farthest[pick] = j;
            }
        }
    }

    for (std::size_t r = 0; r <= d; ++r) {
        for (std::uint64_t pick = 0; pick < choices; ++pick) {
            ExtensionQuery q(cluster[farthest[pick]], r, inside[pick], bad - inside[pick]);
            auto outcome = oracle.exact_extend(q, ctx);
            if (auto* f = std::get_if<Found>(&outcome)) {
                if (!q.satisfied_by(f->witness)) {
                    throw std::logic_error("exact_extend witness violates the query");
                }
                return ClusterRadius{r, f->witness};
            }
            if (auto* t = std::get_if<TrivialSparsifier>(&outcome)) {
                (void)t;
                throw GloballyInfeasible("extension oracle reported pairwise far members");
            }
        }
    }
    return std::nullopt;
}

SolveAnswer solve_max_min(const DomainOracle& oracle, const ProblemSpec& spec,
                          const SparsifierBuilder& builder) {
    if (spec.k < 1) throw UsageError("k must be at least 1");
    require_complement_closed(oracle, spec);
    auto report = builder.build(sparsifier_k(spec), sparsifier_d(spec));
    SolveAnswer answer;
    answer.sparsifier_size = report.family.size();
    const auto& fam = report.family;
    const auto dist = distance_table(fam, spec.modified);

    std::vector<std::size_t> pick;
    std::function<bool(std::size_t)> dfs = [&](std::size_t from) {
        if (pick.size() == spec.k) return true;
        for (std::size_t i = from; i < fam.size(); ++i) {
            bool ok = true;
            for (auto j : pick) {
                if (dist[i][j] < spec.d) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            pick.push_back(i);
            if (dfs(i)) return true;
            pick.pop_back();
        }
        return false;
    };
    if (!fam.empty() && dfs(0)) {
        answer.feasible = true;
        for (auto i : pick) answer.witnesses.push_back(fam[i]);
        for (std::size_t a = 0; a < pick.size(); ++a) {
            for (std::size_t b = a + 1; b < pick.size(); ++b) {
                if (distance(answer.witnesses[a], answer.witnesses[b], spec.modified) < spec.d) {
                    throw std::logic_error("max-min witnesses are too close");
                }
            }
        }
    }
    return answer;
}

SolveAnswer solve_max_sum(const DomainOracle& oracle, const ProblemSpec& spec,
                          const SparsifierBuilder& builder) {
    if (spec.k < 1) throw UsageError("k must be at least 1");
    require_complement_closed(oracle, spec);
    auto report = builder.build(sparsifier_k(spec), sparsifier_d(spec));
    SolveAnswer answer;
    answer.sparsifier_size = report.family.size();
    const auto& fam = report.family;
    if (fam.empty()) return answer;
    if (multiset_count(fam.size(), spec.k) > kMaxTuples) {
        throw GuardExceeded("max-sum tuple search exceeds the guard");
    }
    const auto dist = distance_table(fam, spec.modified);

    long best = -1;
    std::vector<std::size_t> pick, best_pick;
    std::function<void(std::size_t, long)> dfs = [&](std::size_t from, long sum) {
        if (pick.size() == spec.k) {
            if (sum > best) {
                best = sum;
                best_pick = pick;
            }
            return;
        }
        for (std::size_t i = from; i < fam.size(); ++i) {
            long add = 0;
            for (auto j : pick) add += static_cast<long>(dist[i][j]);
            pick.push_back(i);
            dfs(i, sum + add);
            pick.pop_back();
        }
    };
    dfs(0, 0);
    answer.objective = best;
    if (best >= static_cast<long>(spec.d)) {
        answer.feasible = true;
        for (auto i : best_pick) answer.witnesses.push_back(fam[i]);
        long check = 0;
        for (std::size_t a = 0; a < best_pick.size(); ++a) {
            for (std::size_t b = a + 1; b < best_pick.size(); ++b) {
                check += static_cast<long>(
                    distance(answer.witnesses[a], answer.witnesses[b], spec.modified));
            }
        }
        if (check != best) throw std::logic_error("max-sum objective does not re-check");
    }
    return answer;
}

SolveAnswer solve_k_center(const DomainOracle& oracle, const ProblemSpec& spec,
                           const SparsifierBuilder& builder) {
    if (spec.k < 1) throw UsageError("k must be at least 1");
    return solve_clustering(oracle, spec, builder);
}

SolveAnswer solve_k_sum_radii(const DomainOracle& oracle, const ProblemSpec& spec,
                              const SparsifierBuilder& builder) {
    if (spec.k < 1) throw UsageError("k must be at least 1");
    return solve_clustering(oracle, spec, builder);
}

SolveAnswer solve(const DomainOracle& oracle, const ProblemSpec& spec,
                  const SparsifierBuilder& builder) {
    switch (spec.problem) {
        case Problem::maxmin: return solve_max_min(oracle, spec, builder);
        case Problem::maxsum: return solve_max_sum(oracle, spec, builder);
        case Problem::kcenter: return solve_k_center(oracle, spec, builder);
        case Problem::ksumradii: return solve_k_sum_radii(oracle, spec, builder);
    }
    throw UsageError("unknown problem");
}

}  // namespace divsparse
