#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "divsparse/bruteforce.hpp"
#include "divsparse/domains.hpp"
#include "divsparse/sparsifier_small.hpp"
#include "support.hpp"

using namespace divsparse;
using testing_support::family_of;
using testing_support::set_of;

namespace {

// Exhaustive: does some t-subset of the members form a sunflower with this core?
bool pairwise_core(const std::vector<SubsetMask>& petals, SubsetMask& core) {
    if (petals.size() == 1) {
        core = petals[0];
        return true;
    }
    core = petals[0] & petals[1];
    for (std::size_t i = 0; i < petals.size(); ++i) {
        for (std::size_t j = i + 1; j < petals.size(); ++j) {
            if ((petals[i] & petals[j]) != core) return false;
        }
    }
    return true;
}

std::vector<SubsetMask> exhaustive_cores(const SetFamily& f, std::size_t size, std::size_t t) {
    std::vector<SubsetMask> group;
    for (const auto& m : f) {
        if (m.count() == size) group.push_back(m);
    }
    std::vector<SubsetMask> cores;
    std::vector<SubsetMask> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() == t) {
            SubsetMask core;
            if (pairwise_core(pick, core) &&
                std::find(cores.begin(), cores.end(), core) == cores.end()) {
                cores.push_back(core);
            }
            return;
        }
        for (std::size_t i = from; i < group.size(); ++i) {
            pick.push_back(group[i]);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return cores;
}

// Exhaustive blocker list in the documented order: by size, then by the
// sorted index vector.
std::vector<SubsetMask> exhaustive_blockers(const SetFamily& f, std::size_t ell_prime,
                                            std::size_t t) {
    const std::size_t n = f.universe_size();
    SubsetMask ground(n);
    for (const auto& m : f) ground = ground | m;
    std::vector<SubsetMask> required;
    for (const auto& m : f) {
        if (m.count() == ell_prime) required.push_back(m);
    }
    for (const auto& c : exhaustive_cores(f, ell_prime, t)) required.push_back(c);
    std::vector<SubsetMask> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        auto y = SubsetMask::from_bits(n, bits);
        if (!y.is_subset_of(ground)) continue;
        bool ok = std::all_of(required.begin(), required.end(),
                              [&](const SubsetMask& r) { return r.intersects(y); });
        if (ok) out.push_back(y);
    }
    std::stable_sort(out.begin(), out.end(), [](const SubsetMask& a, const SubsetMask& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a.indices() < b.indices();
    });
    return out;
}

SparsifierReport run_small(const SetFamily& domain, std::size_t k, std::size_t r, std::size_t ell) {
    auto oracle = explicit_oracle(domain);
    OracleEmptyView view(*oracle);
    return k_sparsify(SmallSparsifyParams{k, r, ell}, view);
}

bool ball_valid(const SetFamily& domain, const SetFamily& k_family, std::size_t k, std::size_t r) {
    const std::size_t n = domain.universe_size();
    return verify_sparsifier(domain, k_family,
                             VerifyScope::against_ball(k, std::nullopt, SubsetMask(n), r))
        .ok;
}

}  // namespace

TEST_CASE("is_sunflower examples") {
    auto s = is_sunflower(family_of(4, {{0, 1}, {0, 2}, {0, 3}}));
    REQUIRE(s);
    CHECK(s->core == set_of(4, {0}));
    auto disjoint = is_sunflower(family_of(4, {{0, 1}, {2, 3}}));
    REQUIRE(disjoint);
    CHECK(disjoint->core.empty());
    CHECK_FALSE(is_sunflower(family_of(3, {{0, 1}, {0, 2}, {1, 2}})));
    auto single = is_sunflower(family_of(3, {{0, 2}}));
    REQUIRE(single);
    CHECK(single->core == set_of(3, {0, 2}));
    CHECK_THROWS_AS(is_sunflower(family_of(3, {{0}, {1, 2}})), UsageError);
}

TEST_CASE("blocker_candidates examples") {
    CHECK(blocker_candidates(SetFamily(3), 1, 2) == std::vector<SubsetMask>{SubsetMask(3)});
    auto one = family_of(3, {{0}});
    CHECK(blocker_candidates(one, 1, 2) == exhaustive_blockers(one, 1, 2));
    CHECK(blocker_candidates(one, 1, 2) == std::vector<SubsetMask>{set_of(3, {0})});
    auto two = family_of(3, {{0}, {1}});
    CHECK(exhaustive_blockers(two, 1, 2).empty());
    CHECK(blocker_candidates(two, 1, 2).empty());
}

TEST_CASE("sunflower cores and blockers agree with exhaustive search") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng() % 5;
        auto f = testing_support::random_family(n, 1 + rng() % 12, rng);
        const std::size_t size = rng() % (n + 1);
        const std::size_t t = 1 + rng() % 4;
        auto got = sunflower_cores(f, size, t);
        auto want = exhaustive_cores(f, size, t);
        std::sort(got.begin(), got.end(), canonical_less);
        std::sort(want.begin(), want.end(), canonical_less);
        CHECK(got == want);
        CHECK(blocker_candidates(f, size, t) == exhaustive_blockers(f, size, t));
    }
}

TEST_CASE("k_sparsify examples") {
    SetFamily singletons = family_of(5, {{0}, {1}, {2}, {3}, {4}});
    auto r1 = run_small(singletons, 1, 1, 1);
    CHECK(r1.family.size() == 2);
    CHECK(ball_valid(singletons, r1.family, 1, 1));

    SetFamily empty_only = family_of(4, {{}});
    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t r = 0; r <= 3; ++r) {
            auto rep = run_small(empty_only, k, r, 0);
            CHECK(rep.family.size() == 1);
            CHECK(rep.family[0].empty());
        }
    }

    SetFamily pairs = family_of(6, {{0, 1}, {2, 3}, {4, 5}});
    auto r2 = run_small(pairs, 1, 2, 2);
    CHECK(r2.family.size() <= 3);
    CHECK(ball_valid(pairs, r2.family, 1, 2));
}

TEST_CASE("k_sparsify rejects bad parameters") {
    SetFamily f = family_of(3, {{0}});
    CHECK_THROWS_AS(run_small(f, 0, 1, 1), UsageError);
    CHECK_THROWS_AS(run_small(f, 1, 1, 2), UsageError);
}

TEST_CASE("k_sparsify output properties on random domains") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 3 + rng() % 6;
        const std::size_t k = 1 + rng() % 3;
        const std::size_t r = rng() % 5;
        const std::size_t ell = rng() % (std::min(r, n) + 1);
        auto domain = testing_support::random_bounded_family(n, 1 + rng() % 40, ell, rng);
        auto rep = run_small(domain, k, r, ell);
        INFO("trial " << trial << " n=" << n << " k=" << k << " r=" << r << " ell=" << ell);
        for (const auto& m : rep.family) CHECK(domain.contains(m));
        CHECK(rep.family.size() <= small_size_bound(k, r, ell));
        CHECK(rep.passes - 1 <= small_size_bound(k, r, ell));
        CHECK(ball_valid(domain, rep.family, k, r));
        if (rep.family.size() <= 12) {
            for (std::size_t size = 0; size <= ell; ++size) {
                CHECK(exhaustive_cores(rep.family, size, k * r + 2).empty());
            }
        }
        // Deterministic per instance.
        CHECK(run_small(domain, k, r, ell).family.members() == rep.family.members());
    }
}

TEST_CASE("small size bound") {
    CHECK(small_size_bound(1, 1, 1) == 2 * 2);
    CHECK(small_size_bound(2, 3, 2) == 6 * 49);
    CHECK(small_size_bound(5, 5, 0) == 1);
    CHECK(small_size_bound(100, 100, 30) == UINT64_MAX);
}
