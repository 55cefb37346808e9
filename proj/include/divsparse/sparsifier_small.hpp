#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "divsparse/core.hpp"

namespace divsparse {

/// Output of a sparsifier computation together with how it was obtained.
struct SparsifierReport {
    SetFamily family;
    std::string mode;  // "small" or "limited"
    std::size_t k = 0;
    std::size_t d = 0;  // cap; unused in small mode
    std::size_t p = 0;  // cluster radius; limited mode only
    std::size_t r = 0;  // ball radius; small mode only
    std::size_t ell = 0;
    std::uint64_t seed = 0;
    std::size_t calls_opt = 0;
    std::size_t calls_extend = 0;
    std::size_t passes = 0;
    std::size_t centers = 0;
    /// An exact extension query answered with a trivial sparsifier.
    bool shortcut = false;
    /// The clustering step found k+1 pairwise far sets.
    bool trivial_cluster = false;
};

/// Exact empty extension capability over some (possibly derived) domain.
class EmptyExtensionView {
public:
    virtual ~EmptyExtensionView() = default;
    virtual std::size_t universe_size() const = 0;
    /// A member of cardinality r disjoint from `forbidden`.
    virtual ExtensionOutcome extend(std::size_t r, const SubsetMask& forbidden) const = 0;
};

/// Forwards to DomainOracle::exact_empty_extend.
class OracleEmptyView : public EmptyExtensionView {
public:
    explicit OracleEmptyView(const DomainOracle& oracle) : oracle_(oracle) {}
    std::size_t universe_size() const override { return oracle_.universe_size(); }
    ExtensionOutcome extend(std::size_t r, const SubsetMask& forbidden) const override {
        return oracle_.exact_empty_extend(r, forbidden);
    }

private:
    const DomainOracle& oracle_;
};

struct Sunflower {
    SetFamily petals;
    SubsetMask core;
};

struct SmallSparsifyParams {
    std::size_t k = 1;
    std::size_t r = 0;
    std::size_t ell = 0;
};

/// The sunflower formed by `family`, if any. A single set is a sunflower
/// whose core is the set itself.
std::optional<Sunflower> is_sunflower(const SetFamily& family);

/// Cores of every sunflower with exactly `t` petals among the members of
/// `family` of cardinality `size`.
std::vector<SubsetMask> sunflower_cores(const SetFamily& family, std::size_t size, std::size_t t);

/// Calls `visit` for every Y within the union of `family` that hits every
/// member of cardinality `ell_prime` and every core of a t-petal sunflower
/// of such members. Visits by increasing |Y|, then lexicographically by
/// member indices; stops when `visit` returns false.
void for_each_blocker(const SetFamily& family, std::size_t ell_prime, std::size_t t,
                      const std::function<bool(const SubsetMask&)>& visit);

std::vector<SubsetMask> blocker_candidates(const SetFamily& family, std::size_t ell_prime,
                                           std::size_t t);

/// (ell+1)! (k r + 1)^ell, saturating at UINT64_MAX.
std::uint64_t small_size_bound(std::size_t k, std::size_t r, std::size_t ell);

/// k-max-distance sparsifier of the domain behind `view` with respect to
/// the ball of radius r around the empty set, built by repeatedly adding a
/// member that no large same-size sunflower already accounts for.
SparsifierReport k_sparsify(const SmallSparsifyParams& params, const EmptyExtensionView& view);

}  // namespace divsparse
