#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "divsparse/bruteforce.hpp"
#include "divsparse/domains.hpp"
#include "instances.hpp"
#include "support.hpp"

using namespace divsparse;
using namespace testing_support;

namespace {

const GraphData kTriangle = graph_of(false, 3, {{0, 1}, {1, 2}, {2, 0}});
const GraphData kC4 = graph_of(false, 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
const GraphData kP3 = graph_of(false, 3, {{0, 1}, {1, 2}});
// s=0, a=1, b=2, t=3.
const GraphData kDiamond = graph_of(true, 4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});

Found expect_found(const ExtensionOutcome& o) {
    REQUIRE(std::holds_alternative<Found>(o));
    return std::get<Found>(o);
}

}  // namespace

TEST_CASE("explicit oracle examples") {
    auto o = explicit_oracle(family_of(2, {{0}, {1}}));
    CHECK(*o->opt_pm1(WeightVector({1, -1})) == set_of(2, {0}));
    CHECK(expect_found(o->exact_extend(ExtensionQuery(set_of(2, {0}), 2, SubsetMask(2), SubsetMask(2)), nullptr)).witness == set_of(2, {1}));
    auto single = explicit_oracle(family_of(1, {{0}}));
    CHECK(std::holds_alternative<NotFound>(single->exact_extend(ExtensionQuery(set_of(1, {0}), 1, SubsetMask(1), SubsetMask(1)), nullptr)));
    CHECK_FALSE(explicit_oracle(SetFamily(3))->opt_pm1(WeightVector({1, 1, 1})));
    CHECK(explicit_oracle(family_of(2, {{0}, {1}}))->complement_closed());
    CHECK_FALSE(explicit_oracle(family_of(2, {{0}}))->complement_closed());
}

TEST_CASE("vertex cover oracle examples") {
    VertexCoverOracle o(kP3, 3);
    CHECK(expect_found(o.exact_empty_extend(2, set_of(3, {1}))).witness == set_of(3, {0, 2}));
    for (std::size_t r = 0; r <= 3; ++r) {
        CHECK(std::holds_alternative<NotFound>(o.exact_empty_extend(r, set_of(3, {0, 1}))));
    }
    CHECK(expect_found(o.exact_empty_extend(1, set_of(3, {0, 2}))).witness == set_of(3, {1}));
    CHECK_FALSE(o.supports(Capability::opt_pm1));
    CHECK_THROWS_AS(o.opt_pm1(WeightVector({1, 1, 1})), CapabilityError);
    VertexCoverOracle small(kP3, 1);
    CHECK(std::holds_alternative<NotFound>(small.exact_empty_extend(2, SubsetMask(3))));
}

TEST_CASE("matroid oracle examples") {
    MatroidBaseOracle tri(MatroidSpec{GraphicMatroid{kTriangle}});
    auto best = tri.opt_pm1(WeightVector({1, 1, -1}));
    CHECK(*best == set_of(3, {0, 1}));
    auto far = expect_found(tri.exact_extend(ExtensionQuery(set_of(3, {0, 1}), 2, SubsetMask(3), SubsetMask(3)), nullptr));
    CHECK(hamming(far.witness, set_of(3, {0, 1})) == 2);
    CHECK(enumerate_domain(graph_instance(DomainKind::spanning_tree, kTriangle)).contains(far.witness));

    MatroidBaseOracle uni(MatroidSpec{UniformMatroid{4, 2}});
    CHECK(expect_found(uni.exact_extend(ExtensionQuery(set_of(4, {0, 1}), 4, SubsetMask(4), SubsetMask(4)), nullptr)).witness == set_of(4, {2, 3}));
    CHECK(std::holds_alternative<NotFound>(uni.exact_extend(ExtensionQuery(set_of(4, {0, 1}), 3, SubsetMask(4), SubsetMask(4)), nullptr)));
}

TEST_CASE("matroid exchange walk keeps bases and moves by two") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        auto kind = trial % 3 == 0 ? DomainKind::spanning_tree
                                   : (trial % 3 == 1 ? DomainKind::uniform_matroid : DomainKind::partition_matroid);
        auto inst = random_instance(kind, rng);
        auto domain = enumerate_domain(inst);
        MatroidBaseOracle o(inst.matroid());
        for (const auto& from : domain) {
            for (const auto& to : domain) {
                if (from == to) continue;
                const auto center = domain[0];
                auto cur = from;
                while (cur != to) {
                    auto next = o.exchange_step(cur, to);
                    CHECK(domain.contains(next));
                    CHECK(hamming(next, to) + 2 == hamming(cur, to));
                    const long delta = static_cast<long>(hamming(next, center)) - static_cast<long>(hamming(cur, center));
                    CHECK((delta == -2 || delta == 0 || delta == 2));
                    cur = next;
                }
            }
        }
    }
}

TEST_CASE("matching oracle examples") {
    MatchingOracle o(kC4, 2);
    auto best = o.opt_pm1(WeightVector({1, 1, 1, 1}));
    REQUIRE(best);
    CHECK(best->count() == 2);
    CHECK(enumerate_domain([&] { auto i = graph_instance(DomainKind::matching, kC4); i.matching_size = 2; return i; }()).contains(*best));
    const auto c = set_of(4, {0, 2});
    CHECK(expect_found(o.exact_extend(ExtensionQuery(c, 4, SubsetMask(4), SubsetMask(4)), nullptr)).witness == set_of(4, {1, 3}));
    CHECK(std::holds_alternative<NotFound>(o.exact_extend(ExtensionQuery(c, 2, SubsetMask(4), SubsetMask(4)), nullptr)));
}

TEST_CASE("expanded graph perfect matchings restrict to size-l matchings") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        auto g = random_graph(false, n, 0.6, rng);
        const std::size_t size = rng() % (n / 2 + 1);
        auto big = expanded_graph(g, size);
        // Perfect matchings of the expansion, by brute force over edge subsets
        // of the right size.
        const std::size_t half = big.n_vertices / 2;
        SetFamily restricted(g.edges.size());
        std::vector<std::size_t> pick;
        std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t from, std::uint64_t used) {
            if (pick.size() == half) {
                SubsetMask m(g.edges.size());
                for (auto e : pick) {
                    if (e < g.edges.size()) m.insert(e);
                }
                CHECK(m.count() == size);
                restricted.insert(m);
                return;
            }
            // Match the lowest unmatched vertex.
            std::size_t v = 0;
            while ((used >> v) & 1) ++v;
            for (std::size_t e = 0; e < big.edges.size(); ++e) {
                auto [a, b] = big.edges[e];
                if (a != v && b != v) continue;
                auto other = a == v ? b : a;
                if ((used >> other) & 1) continue;
                pick.push_back(e);
                rec(e + 1, used | (std::uint64_t{1} << a) | (std::uint64_t{1} << b));
                pick.pop_back();
            }
        };
        rec(0, 0);
        auto inst = graph_instance(DomainKind::matching, g);
        inst.matching_size = size;
        auto domain = enumerate_domain(inst);
        CHECK(restricted.canonical().members() == domain.canonical().members());
    }
}

TEST_CASE("min-cut oracle examples") {
    auto inst = graph_instance(DomainKind::st_mincut, kDiamond);
    inst.s = 0;
    inst.t = 3;
    auto domain = enumerate_domain(inst);
    CHECK(domain.size() == 4);
    CHECK(domain.canonical().members() == family_of(4, {{0}, {0, 1}, {0, 2}, {0, 1, 2}}).canonical().members());
    MinCutOracle o(kDiamond, 0, 3);
    CHECK(*o.opt_pm1(WeightVector({-1, 1, 1, -1})) == set_of(4, {0, 1, 2}));
    CHECK(expect_found(o.exact_extend(ExtensionQuery(set_of(4, {0}), 1, set_of(4, {1}), SubsetMask(4)), nullptr)).witness == set_of(4, {0, 1}));
    CHECK(o.poset().cut_value == 2);
}

TEST_CASE("min-cut poset ideals biject with minimum cuts") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 7;
        auto g = random_graph(trial % 2 == 0, n, 0.4, rng);
        auto inst = graph_instance(DomainKind::st_mincut, g);
        inst.s = 0;
        inst.t = n - 1;
        auto domain = enumerate_domain(inst);
        auto poset = build_mincut_poset(g, 0, n - 1);
        SetFamily from_ideals(n);
        for (auto ideal : poset.all_ideals()) {
            CHECK(from_ideals.insert(poset.cut_of(ideal)));
            CHECK(poset.ideal_of(poset.cut_of(ideal)) == ideal);
        }
        CHECK(from_ideals.canonical().members() == domain.canonical().members());
        // The order is reflexive, antisymmetric, and transitive.
        for (std::size_t a = 0; a < poset.node_count(); ++a) {
            CHECK(((poset.below[a] >> a) & 1));
            for (std::size_t b = 0; b < poset.node_count(); ++b) {
                if (a != b && ((poset.below[a] >> b) & 1)) CHECK_FALSE(((poset.below[b] >> a) & 1));
                if ((poset.below[a] >> b) & 1) CHECK((poset.below[b] & ~poset.below[a]) == 0);
            }
        }
    }
}

TEST_CASE("min-cut shortcut returns pairwise far members") {
    // A long path s -> 1 -> ... -> t with unit capacities: every prefix is a
    // minimum cut, so the ideals form a chain.
    for (std::size_t len = 3; len <= 20; ++len) {
        GraphData g = graph_of(true, len, {});
        for (std::size_t v = 0; v + 1 < len; ++v) g.edges.push_back({v, v + 1});
        MinCutOracle o(g, 0, len - 1);
        auto domain = enumerate_domain([&] { auto i = graph_instance(DomainKind::st_mincut, g); i.t = len - 1; return i; }());
        for (std::size_t k = 1; k <= 3; ++k) {
            for (std::size_t d = 0; d <= 2; ++d) {
                ExtensionContext ctx{k, d, 1000};
                auto center = set_of(len, {0});
                auto outcome = o.exact_extend(ExtensionQuery(center, 1, SubsetMask(len), SubsetMask(len)), &ctx);
                if (auto* t = std::get_if<TrivialSparsifier>(&outcome)) {
                    CHECK(t->family.size() == k + 1);
                    for (std::size_t i = 0; i < t->family.size(); ++i) {
                        CHECK(domain.contains(t->family[i]));
                        for (std::size_t j = i + 1; j < t->family.size(); ++j) {
                            CHECK(hamming(t->family[i], t->family[j]) > 2 * d);
                        }
                    }
                } else {
                    // Fewer than k(2d+1) movable blocks.
                    CHECK(len - 2 < k * (2 * d + 1));
                }
            }
        }
    }
}

TEST_CASE("dag oracle examples") {
    DagDpInstance inst{graph_of(true, 3, {{0, 2}, {1, 2}}), {0, 1, 2}, 3};
    DagDpOracle o(inst);
    CHECK(o.longest() == 2);
    CHECK(*o.opt_pm1(WeightVector({1, -1, 1})) == set_of(3, {0, 2}));
    CHECK(expect_found(o.exact_extend(ExtensionQuery(set_of(3, {0, 2}), 2, SubsetMask(3), SubsetMask(3)), nullptr)).witness == set_of(3, {1, 2}));
    CHECK(std::holds_alternative<NotFound>(o.exact_extend(ExtensionQuery(set_of(3, {0, 2}), 1, SubsetMask(3), SubsetMask(3)), nullptr)));
    DagDpInstance repeat{graph_of(true, 2, {{0, 1}}), {0, 0}, 2};
    CHECK_THROWS_AS(DagDpOracle{repeat}, UsageError);
    DagDpInstance cyclic{graph_of(true, 2, {{0, 1}, {1, 0}}), {0, 1}, 2};
    CHECK_THROWS_AS(DagDpOracle{cyclic}, UsageError);
}

TEST_CASE("interval scheduling encoding") {
    // Maximum sets of pairwise disjoint intervals.
    auto inst = interval_scheduling_instance({{0, 2}, {3, 5}, {1, 4}, {6, 7}});
    DomainInstance di;
    di.kind = DomainKind::dag_dp;
    di.graph = inst.dag;
    di.labels = inst.labels;
    di.universe = inst.universe_size;
    auto domain = enumerate_domain(di);
    CHECK(domain.canonical().members() == family_of(4, {{0, 1, 3}}).members());
    OracleCheck check;
    DagDpOracle o(inst);
    check_opt(o, domain, check);
    check_extend(o, domain, check);
    CHECK(check.mismatches == 0);
}

TEST_CASE("union oracle examples") {
    std::shared_ptr<const DomainOracle> a = explicit_oracle(family_of(2, {{0}}));
    std::shared_ptr<const DomainOracle> b = explicit_oracle(family_of(2, {{1}}));
    auto u = union_oracle({a, b});
    CHECK(*u->opt_pm1(WeightVector({-1, 1})) == set_of(2, {1}));
    CHECK(expect_found(u->exact_extend(ExtensionQuery(SubsetMask(2), 1, SubsetMask(2), set_of(2, {1})), nullptr)).witness == set_of(2, {0}));
    std::shared_ptr<const DomainOracle> empty = explicit_oracle(SetFamily(2));
    auto only_b = union_oracle({empty, b});
    CHECK(*only_b->opt_pm1(WeightVector({1, 1})) == set_of(2, {1}));
    CHECK(std::holds_alternative<NotFound>(only_b->exact_extend(ExtensionQuery(SubsetMask(2), 1, SubsetMask(2), set_of(2, {1})), nullptr)));
}

TEST_CASE("union with a min-cut part keeps valid shortcuts only") {
    GraphData g = graph_of(true, 8, {});
    for (std::size_t v = 0; v + 1 < 8; ++v) g.edges.push_back({v, v + 1});
    std::shared_ptr<const DomainOracle> cut = mincut_oracle(g, 0, 7);
    std::shared_ptr<const DomainOracle> other = explicit_oracle(family_of(8, {{7}}));
    auto u = union_oracle({cut, other});
    ExtensionContext ctx{2, 1, 100};
    auto outcome = u->exact_extend(ExtensionQuery(set_of(8, {0}), 1, SubsetMask(8), SubsetMask(8)), &ctx);
    REQUIRE(std::holds_alternative<TrivialSparsifier>(outcome));
    const auto& fam = std::get<TrivialSparsifier>(outcome).family;
    CHECK(fam.size() == 3);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = i + 1; j < fam.size(); ++j) CHECK(hamming(fam[i], fam[j]) > 2);
    }
}

TEST_CASE("adapters agree with brute force on random instances") {
    std::mt19937_64 rng(31337);
    for (auto kind : kAllKinds) {
        for (int trial = 0; trial < 6; ++trial) {
            auto inst = random_instance(kind, rng);
            INFO(describe(inst));
            auto result = check_oracle(inst, 2);
            CHECK_MESSAGE(result.mismatches == 0, result.first_mismatch);
        }
    }
}

TEST_CASE("membership predicates are idempotent under enumeration") {
    std::mt19937_64 rng(8);
    for (auto kind : kAllKinds) {
        auto inst = random_instance(kind, rng);
        auto domain = enumerate_domain(inst);
        MembershipPredicate member(inst);
        const std::size_t n = inst.universe_size();
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            auto s = SubsetMask::from_bits(n, bits);
            CHECK(member(s) == domain.contains(s));
        }
    }
}

TEST_CASE("adapters reject malformed inputs") {
    CHECK_THROWS_AS(VertexCoverOracle(graph_of(true, 2, {{0, 1}}), 1), UsageError);
    CHECK_THROWS_AS(MatchingOracle(graph_of(false, 2, {{0, 0}}), 1), UsageError);
    CHECK_THROWS_AS(MinCutOracle(kDiamond, 0, 0), UsageError);
    CHECK_THROWS_AS(MatroidBaseOracle(MatroidSpec{UniformMatroid{2, 3}}), UsageError);
    CHECK_THROWS_AS(MatroidBaseOracle(MatroidSpec{PartitionMatroid{3, {{1, {0, 1}}, {1, {1, 2}}}}}), UsageError);
    GraphData big = graph_of(false, 14, {{0, 1}});
    CHECK_THROWS_AS(MatchingOracle(big, 1), CapabilityError);
}
