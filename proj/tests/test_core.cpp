#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "divsparse/core.hpp"
#include "support.hpp"

using namespace divsparse;
using testing_support::set_of;

TEST_CASE("hamming examples") {
    CHECK(hamming(set_of(3, {0, 1}), set_of(3, {1, 2})) == 2);
    const auto a = set_of(5, {0, 3, 4});
    CHECK(hamming(a, a) == 0);
    CHECK(hamming(set_of(3, {0, 1, 2}), SubsetMask(3)) == 3);
}

TEST_CASE("hamming rejects mismatched universes") {
    CHECK_THROWS_AS(hamming(SubsetMask(3), SubsetMask(4)), UsageError);
    CHECK_THROWS_AS(modified_hamming(SubsetMask(3), SubsetMask(4)), UsageError);
}

TEST_CASE("modified hamming examples") {
    CHECK(modified_hamming(set_of(4, {0, 1}), set_of(4, {2, 3})) == 0);
    CHECK(modified_hamming(set_of(4, {0}), set_of(4, {1, 2, 3})) == 0);
    CHECK(modified_hamming(set_of(4, {0, 1}), set_of(4, {0, 2})) == 2);
}

TEST_CASE("hamming is a metric and matches the cardinality identity") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t n = 1 + rng() % 32;
        const std::uint64_t lim = std::uint64_t{1} << n;
        auto a = SubsetMask::from_bits(n, rng() % lim);
        auto b = SubsetMask::from_bits(n, rng() % lim);
        auto c = SubsetMask::from_bits(n, rng() % lim);
        CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
        CHECK(hamming(a, b) == hamming(b, a));
        CHECK(hamming(a, b) == a.count() + b.count() - 2 * (a & b).count());
        CHECK(hamming(a, b) == testing_support::naive_distance(a, b));
        CHECK(modified_hamming(a, b) == modified_hamming(a, b.complement()));
        CHECK(modified_hamming(a, b) <= n);
    }
}

TEST_CASE("subset masks") {
    auto m = set_of(6, {1, 4});
    CHECK(m.count() == 2);
    CHECK(m.contains(4));
    CHECK_FALSE(m.contains(5));
    CHECK(m.complement() == set_of(6, {0, 2, 3, 5}));
    CHECK(m.indices() == std::vector<std::size_t>{1, 4});
    CHECK_THROWS_AS(m.insert(6), UsageError);
    CHECK(SubsetMask::full(64).count() == 64);
    CHECK_THROWS_AS(SubsetMask(65), CapabilityError);
    CHECK(format_indices(m) == "1 4");
    CHECK(format_indices(SubsetMask(3)).empty());
}

TEST_CASE("set families keep insertion order and reject duplicates") {
    SetFamily f(4);
    CHECK(f.insert(set_of(4, {3})));
    CHECK(f.insert(set_of(4, {0})));
    CHECK_FALSE(f.insert(set_of(4, {3})));
    CHECK(f.size() == 2);
    CHECK(f[0] == set_of(4, {3}));
    auto c = f.canonical();
    CHECK(c[0] == set_of(4, {0}));
    CHECK(f.max_cardinality() == 1);
    CHECK_THROWS_AS(f.insert(SubsetMask(5)), UsageError);
}

TEST_CASE("weights and queries validate their inputs") {
    CHECK_THROWS_AS(WeightVector({1, 0, -1}), UsageError);
    WeightVector w({1, -1, 1});
    CHECK(w.weight_of(set_of(3, {0, 1, 2})) == 1);
    CHECK_THROWS_AS(ExtensionQuery(SubsetMask(3), 1, set_of(3, {0}), set_of(3, {0})), UsageError);
    ExtensionQuery q(set_of(3, {0}), 2, set_of(3, {1}), set_of(3, {2}));
    CHECK(q.satisfied_by(set_of(3, {1})));
    CHECK_FALSE(q.satisfied_by(set_of(3, {0, 1})));
    CHECK_THROWS_AS(GroundSet(0), UsageError);
    CHECK_THROWS_AS(GroundSet(2, {"a"}), UsageError);
}
