#include "divsparse/sparsifier_small.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace divsparse {

namespace {

// Largest union of members over which blocker sets are enumerated.
constexpr std::size_t kMaxBlockerGround = 30;

std::vector<SubsetMask> members_of_size(const SetFamily& family, std::size_t size) {
    std::vector<SubsetMask> out;
    for (const auto& m : family) {
        if (m.count() == size) out.push_back(m);
    }
    return out;
}

// True if `t` pairwise disjoint petals can be chosen from petals[from..].
bool pack_disjoint(const std::vector<std::uint64_t>& petals, std::size_t from, std::uint64_t used,
                   std::size_t t) {
    if (t == 0) return true;
    for (std::size_t i = from; i + t <= petals.size(); ++i) {
        if (petals[i] & used) continue;
        if (pack_disjoint(petals, i + 1, used | petals[i], t - 1)) return true;
    }
    return false;
}

}  // namespace

std::optional<Sunflower> is_sunflower(const SetFamily& family) {
    if (family.empty()) throw UsageError("is_sunflower: empty family");
    const std::size_t size = family[0].count();
    for (const auto& m : family) {
        if (m.count() != size) throw UsageError("is_sunflower: members of mixed cardinality");
    }
    if (family.size() == 1) return Sunflower{family, family[0]};
    const SubsetMask core = family[0] & family[1];
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if ((family[i] & family[j]) != core) return std::nullopt;
        }
    }
    return Sunflower{family, core};
}

std::vector<SubsetMask> sunflower_cores(const SetFamily& family, std::size_t size, std::size_t t) {
    if (t == 0) throw UsageError("sunflower_cores: petal count must be positive");
    const auto group = members_of_size(family, size);
    if (t == 1) return group;
    if (group.size() < t) return {};

    // Any core of a sunflower with at least two petals is the intersection of two of them.
    std::vector<SubsetMask> candidates;
    std::unordered_set<SubsetMask, SubsetMaskHash> seen;
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (std::size_t j = i + 1; j < group.size(); ++j) {
            auto c = group[i] & group[j];
            if (seen.insert(c).second) candidates.push_back(c);
        }
    }

    std::vector<SubsetMask> cores;
    for (const auto& c : candidates) {
        std::vector<std::uint64_t> petals;
        for (const auto& m : group) {
            if (c.is_subset_of(m)) petals.push_back((m - c).bits());
        }
        if (petals.size() >= t && pack_disjoint(petals, 0, 0, t)) cores.push_back(c);
    }
    return cores;
}

void for_each_blocker(const SetFamily& family, std::size_t ell_prime, std::size_t t,
                      const std::function<bool(const SubsetMask&)>& visit) {
    const std::size_t n = family.universe_size();
    SubsetMask ground(n);
    for (const auto& m : family) ground = ground | m;

    auto required = members_of_size(family, ell_prime);
    for (const auto& c : sunflower_cores(family, ell_prime, t)) required.push_back(c);
    for (const auto& m : required) {
        if (m.empty()) return;
    }

    const auto elems = ground.indices();
    if (elems.size() > kMaxBlockerGround) {
        throw GuardExceeded("blocker enumeration over " + std::to_string(elems.size()) +
                            " elements exceeds the guard of " + std::to_string(kMaxBlockerGround));
    }

    // Combinations of `elems` by size, each size in lexicographic order.
    std::vector<std::size_t> pick;
    for (std::size_t s = 0; s <= elems.size(); ++s) {
        pick.resize(s);
        for (std::size_t i = 0; i < s; ++i) pick[i] = i;
        while (true) {
            SubsetMask y(n);
            for (auto i : pick) y.insert(elems[i]);
            bool hits_all = std::all_of(required.begin(), required.end(),
                                        [&](const SubsetMask& m) { return m.intersects(y); });
            if (hits_all && !visit(y)) return;

            std::size_t i = s;
            while (i > 0 && pick[i - 1] == elems.size() - s + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
}

std::vector<SubsetMask> blocker_candidates(const SetFamily& family, std::size_t ell_prime,
                                           std::size_t t) {
    std::vector<SubsetMask> out;
    for_each_blocker(family, ell_prime, t, [&](const SubsetMask& y) {
        out.push_back(y);
        return true;
    });
    return out;
}

std::uint64_t small_size_bound(std::size_t k, std::size_t r, std::size_t ell) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    auto mul = [](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
        if (a != 0 && b > kMax / a) return kMax;
        return a * b;
    };
    std::uint64_t bound = 1;
    for (std::uint64_t i = 2; i <= ell + 1; ++i) bound = mul(bound, i);
    const std::uint64_t base = mul(k, r) == kMax ? kMax : mul(k, r) + 1;
    for (std::size_t i = 0; i < ell; ++i) bound = mul(bound, base);
    return bound;
}

SparsifierReport k_sparsify(const SmallSparsifyParams& params, const EmptyExtensionView& view) {
    if (params.k < 1) throw UsageError("k_sparsify: k must be at least 1");
    if (params.ell > params.r) throw UsageError("k_sparsify: ell must not exceed r");

    const std::size_t n = view.universe_size();
    const std::size_t t = params.k * params.r + 1;
    const std::size_t max_size = std::min(params.ell, n);
    const std::uint64_t bound = small_size_bound(params.k, params.r, params.ell);

    SparsifierReport report;
    report.mode = "small";
    report.k = params.k;
    report.r = params.r;
    report.ell = params.ell;
    report.family = SetFamily(n);

    while (true) {
        ++report.passes;
        // The final pass adds nothing.
        if (report.passes - 1 > bound) throw std::logic_error("k_sparsify: pass bound violated");
        bool added = false;
        std::optional<SetFamily> trivial;

        for (std::size_t ell_prime = 0; ell_prime <= max_size && !added && !trivial; ++ell_prime) {
            for_each_blocker(report.family, ell_prime, t, [&](const SubsetMask& y) {
                ++report.calls_extend;
                auto outcome = view.extend(ell_prime, y);
                if (auto* f = std::get_if<Found>(&outcome)) {
                    if (f->witness.count() != ell_prime || f->witness.intersects(y)) {
                        throw std::logic_error("k_sparsify: oracle witness violates the query");
                    }
                    if (!report.family.insert(f->witness)) {
                        throw std::logic_error("k_sparsify: oracle returned a set already kept");
                    }
                    added = true;
                    return false;
                }
                if (auto* ts = std::get_if<TrivialSparsifier>(&outcome)) {
                    trivial = ts->family;
                    return false;
                }
                return true;
            });
        }

        if (trivial) {
            report.family = *trivial;
            report.shortcut = true;
            return report;
        }
        if (!added) break;
    }
    return report;
}

}  // namespace divsparse
