#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "divsparse/core.hpp"
#include "divsparse/domains.hpp"
#include "divsparse/solvers.hpp"

namespace divsparse {

/// Membership test for the domain described by an instance, written
/// directly from the domain's definition (no oracle code is shared).
class MembershipPredicate {
public:
    explicit MembershipPredicate(const DomainInstance& instance);
    bool operator()(const SubsetMask& s) const;
    std::size_t universe_size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::function<bool(const SubsetMask&)> test_;
};

/// Largest ground set enumerate_domain accepts.
inline constexpr std::size_t kMaxEnumerateUniverse = 20;

/// The domain as an explicit family in canonical order, by filtering 2^U.
SetFamily enumerate_domain(const DomainInstance& instance);

struct VerifyScope {
    enum class Reference { domain, all_subsets, ball };

    std::size_t k = 1;
    /// nullopt means unlimited.
    std::optional<std::size_t> cap;
    Reference reference = Reference::domain;
    SubsetMask ball_center;
    std::size_t ball_radius = 0;

    static VerifyScope against_domain(std::size_t k, std::optional<std::size_t> cap);
    static VerifyScope against_all_subsets(std::size_t k, std::optional<std::size_t> cap);
    static VerifyScope against_ball(std::size_t k, std::optional<std::size_t> cap,
                                    SubsetMask center, std::size_t radius);
};

/// Largest ground set for which 2^U is materialized as the reference family.
inline constexpr std::size_t kMaxMaterializedUniverse = 12;
inline constexpr std::size_t kVerifySamples = 10'000;

struct VerifyResult {
    bool ok = true;
    /// The reference family was too large and random tuples were checked.
    bool sampled = false;
    std::vector<SubsetMask> counterexample_tuple;
    std::optional<SubsetMask> counterexample_member;
};

/// Checks that for every reference tuple (F_1..F_k) and every D in `domain`
/// some K in `cand` has min(cap,|F_i ^ K|) >= min(cap,|F_i ^ D|) for all i.
VerifyResult verify_sparsifier(const SetFamily& domain, const SetFamily& cand,
                               const VerifyScope& scope, std::uint64_t seed = 0);

/// Largest tuple count brute_solve will enumerate.
inline constexpr std::uint64_t kMaxBruteTuples = 10'000'000;

/// Exhaustive answer over tuples (with repetition) of domain members.
SolveAnswer brute_solve(const SetFamily& domain, const ProblemSpec& spec);

/// Scanning oracle over an explicit family.
std::unique_ptr<DomainOracle> brute_oracles(const SetFamily& domain);

}  // namespace divsparse
