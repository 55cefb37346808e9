#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "divsparse/core.hpp"
#include "divsparse/sparsifier_limited.hpp"
#include "divsparse/sparsifier_small.hpp"

namespace divsparse {

enum class Problem { maxmin, maxsum, kcenter, ksumradii };

const char* to_string(Problem p);
/// Accepts "maxmin", "maxsum", "kcenter", "ksumradii".
Problem parse_problem(const std::string& name);

struct ProblemSpec {
    Problem problem = Problem::maxmin;
    std::size_t k = 1;
    std::size_t d = 0;
    bool modified = false;
};

struct SolveAnswer {
    bool feasible = false;
    /// k sets when feasible: the diverse tuple, or the cluster centers.
    std::vector<SubsetMask> witnesses;
    /// Clustering only, aligned with witnesses.
    std::optional<std::vector<std::size_t>> radii;
    /// Best pairwise sum (max-sum) or radius sum (k-sum-of-radii).
    std::optional<long> objective;
    std::size_t sparsifier_size = 0;
};

/// Produces sparsifiers on demand for the cap and tuple size a solver needs.
class SparsifierBuilder {
public:
    virtual ~SparsifierBuilder() = default;
    /// A d-limited k-max-distance sparsifier (or a stronger one).
    virtual SparsifierReport build(std::size_t k, std::size_t d) const = 0;
    /// Context handed to exact_extend by solvers built on this builder.
    virtual std::optional<ExtensionContext> context(std::size_t k, std::size_t d) const = 0;
};

/// Unlimited sparsifiers with respect to the ball of radius ell around the
/// empty set, valid when every member has at most ell elements.
std::unique_ptr<SparsifierBuilder> small_builder(const DomainOracle& oracle, std::size_t ell);

/// d-limited sparsifiers with respect to all subsets; k and d of `base` are
/// replaced on every build.
std::unique_ptr<SparsifierBuilder> limited_builder(const DomainOracle& oracle,
                                                   LimitedSparsifyParams base);

struct ClusterRadius {
    std::size_t radius = 0;
    SubsetMask center;
};

/// Thrown when an extension query proves that no clustering exists.
class GloballyInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least r <= d such that one domain member lies within r of every set in
/// `cluster`, with that member; nullopt if the least such r exceeds d.
std::optional<ClusterRadius> min_cluster_radius(const std::vector<SubsetMask>& cluster,
                                                std::size_t d, const DomainOracle& oracle,
                                                const ExtensionContext* ctx = nullptr);

SolveAnswer solve_max_min(const DomainOracle& oracle, const ProblemSpec& spec,
                          const SparsifierBuilder& builder);
SolveAnswer solve_max_sum(const DomainOracle& oracle, const ProblemSpec& spec,
                          const SparsifierBuilder& builder);
SolveAnswer solve_k_center(const DomainOracle& oracle, const ProblemSpec& spec,
                           const SparsifierBuilder& builder);
SolveAnswer solve_k_sum_radii(const DomainOracle& oracle, const ProblemSpec& spec,
                              const SparsifierBuilder& builder);

/// Dispatches on spec.problem.
SolveAnswer solve(const DomainOracle& oracle, const ProblemSpec& spec,
                  const SparsifierBuilder& builder);

/// Sparsifier parameters each solver asks its builder for.
std::size_t sparsifier_k(const ProblemSpec& spec);
std::size_t sparsifier_d(const ProblemSpec& spec);

}  // namespace divsparse
