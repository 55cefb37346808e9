#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>

#include "divsparse/core.hpp"
#include "divsparse/sparsifier_small.hpp"

namespace divsparse {

/// Randomness source for weight sampling. std::mt19937_64 is fully specified
/// by the standard, so outputs are identical across platforms for a seed.
using Rng = std::mt19937_64;

/// Draws w in {-1,1}^n, one generator step per element in index order.
WeightVector random_weights(std::size_t n, Rng& rng);

struct LimitedSparsifyParams {
    std::size_t k = 1;
    std::size_t d = 0;
    /// Cluster radius; defaults to default_cluster_radius(k, d).
    std::optional<std::size_t> p;
    double epsilon = 0.01;
    std::optional<std::size_t> trials_override;
    std::uint64_t seed = 0;

    std::size_t cluster_radius() const;
};

/// (4d+2)^2 * 2^(k-1), saturating.
std::size_t default_cluster_radius(std::size_t k, std::size_t d);

/// Trials needed so that one far-set search with `num_centers` centers misses
/// with probability at most epsilon / (k+1), from the per-trial success bound
/// 2^(-2^c) * 4^(-c). Throws GuardExceeded above kMaxDefaultFarSetTrials;
/// pass trials_override to run such searches anyway.
inline constexpr std::size_t kMaxDefaultFarSetTrials = 1'000'000'000;
std::size_t default_far_set_trials(std::size_t k, std::size_t num_centers, double epsilon);

struct FarSetStats {
    std::size_t calls_opt = 0;
};

/// Samples random weight vectors and returns the first optimum lying more
/// than 2d from every center, or nullopt after `trials` misses.
std::optional<SubsetMask> approx_far_set(const DomainOracle& oracle, const SetFamily& centers,
                                         std::size_t d, std::size_t trials, Rng& rng,
                                         FarSetStats* stats = nullptr);

struct Centers {
    SetFamily family;
};
struct TrivialCluster {
    SetFamily family;
};
using ClusterResult = std::variant<Centers, TrivialCluster>;

ClusterResult cluster_or_trivial(const DomainOracle& oracle, const LimitedSparsifyParams& params,
                                 Rng& rng, FarSetStats* stats = nullptr);

/// Empty extension over { D ^ center : D in domain }. A query (r, Y) becomes
/// exact_extend(center, r, Y & center, Y \ center) and a witness D comes back
/// as D ^ center.
class ShiftedEmptyView : public EmptyExtensionView {
public:
    ShiftedEmptyView(const DomainOracle& oracle, SubsetMask center,
                     std::optional<ExtensionContext> ctx);

    std::size_t universe_size() const override { return oracle_.universe_size(); }
    ExtensionOutcome extend(std::size_t r, const SubsetMask& forbidden) const override;

private:
    const DomainOracle& oracle_;
    SubsetMask center_;
    std::optional<ExtensionContext> ctx_;
};

ShiftedEmptyView shifted_empty_extension(const DomainOracle& oracle, const SubsetMask& center,
                                         std::size_t k, std::size_t d, std::size_t p);

/// d-limited k-max-distance sparsifier with respect to all subsets of U.
/// Succeeds with probability at least 1 - epsilon when p and the trial count
/// keep their defaults.
SparsifierReport dk_sparsify(const DomainOracle& oracle, const LimitedSparsifyParams& params);

}  // namespace divsparse
