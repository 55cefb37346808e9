#include "divsparse/sparsifier_limited.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace divsparse {

WeightVector random_weights(std::size_t n, Rng& rng) {
    std::vector<int> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (rng() >> 63) ? 1 : -1;
    return WeightVector(std::move(w));
}

std::size_t default_cluster_radius(std::size_t k, std::size_t d) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    const std::size_t side = 4 * d + 2;
    std::size_t p = side * side;
    for (std::size_t i = 1; i < k; ++i) {
        if (p > kMax / 2) return kMax;
        p *= 2;
    }
    return p;
}

std::size_t LimitedSparsifyParams::cluster_radius() const {
    return p ? *p : default_cluster_radius(k, d);
}

std::size_t default_far_set_trials(std::size_t k, std::size_t num_centers, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must lie in (0, 1)");
    // log2 of the per-trial success bound q = 2^(-2^c) * 4^(-c).
    const double c = static_cast<double>(num_centers);
    const double log2_q = -std::exp2(c) - 2.0 * c;
    const double trials = std::ceil(std::log((static_cast<double>(k) + 1.0) / epsilon) *
                                    std::exp2(-log2_q));
    if (trials > static_cast<double>(kMaxDefaultFarSetTrials)) {
        throw GuardExceeded("default far-set trial count exceeds " + std::to_string(kMaxDefaultFarSetTrials) +
                            " with " + std::to_string(num_centers) + " centers; set trials explicitly");
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(trials));
}

std::optional<SubsetMask> approx_far_set(const DomainOracle& oracle, const SetFamily& centers,
                                         std::size_t d, std::size_t trials, Rng& rng,
                                         FarSetStats* stats) {
    if (trials == 0) throw UsageError("approx_far_set: trials must be positive");
    const std::size_t n = oracle.universe_size();
    for (std::size_t trial = 0; trial < trials; ++trial) {
        auto w = random_weights(n, rng);
        if (stats) ++stats->calls_opt;
        auto candidate = oracle.opt_pm1(w);
        if (!candidate) return std::nullopt;
        bool far = true;
        for (const auto& c : centers) {
            if (hamming(*candidate, c) <= 2 * d) {
                far = false;
                break;
            }
        }
        if (far) return candidate;
    }
    return std::nullopt;
}

ClusterResult cluster_or_trivial(const DomainOracle& oracle, const LimitedSparsifyParams& params,
                                 Rng& rng, FarSetStats* stats) {
    const std::size_t n = oracle.universe_size();
    SetFamily centers(n);
    while (true) {
        const std::size_t trials = params.trials_override
                                       ? *params.trials_override
                                       : default_far_set_trials(params.k, centers.size(),
                                                                params.epsilon);
        auto far = approx_far_set(oracle, centers, params.d, trials, rng, stats);
        if (!far) return Centers{centers};
        for (const auto& c : centers) {
            if (hamming(*far, c) <= 2 * params.d) {
                throw std::logic_error("approx_far_set returned a set near a center");
            }
        }
        centers.insert(*far);
        if (centers.size() == params.k + 1) return TrivialCluster{centers};
    }
}

ShiftedEmptyView::ShiftedEmptyView(const DomainOracle& oracle, SubsetMask center,
                                   std::optional<ExtensionContext> ctx)
    : oracle_(oracle), center_(center), ctx_(ctx) {}

ExtensionOutcome ShiftedEmptyView::extend(std::size_t r, const SubsetMask& forbidden) const {
    ExtensionQuery q(center_, r, forbidden & center_, forbidden - center_);
    auto outcome = oracle_.exact_extend(q, ctx_ ? &*ctx_ : nullptr);
    if (auto* f = std::get_if<Found>(&outcome)) return Found{f->witness ^ center_};
    return outcome;
}

ShiftedEmptyView shifted_empty_extension(const DomainOracle& oracle, const SubsetMask& center,
                                         std::size_t k, std::size_t d, std::size_t p) {
    return ShiftedEmptyView(oracle, center, ExtensionContext{k, d, p});
}

namespace {

class CountingView : public EmptyExtensionView {
public:
    explicit CountingView(const EmptyExtensionView& inner) : inner_(inner) {}
    std::size_t universe_size() const override { return inner_.universe_size(); }
    ExtensionOutcome extend(std::size_t r, const SubsetMask& forbidden) const override {
        ++calls;
        return inner_.extend(r, forbidden);
    }
    mutable std::size_t calls = 0;

private:
    const EmptyExtensionView& inner_;
};

}  // namespace

SparsifierReport dk_sparsify(const DomainOracle& oracle, const LimitedSparsifyParams& params) {
    if (params.k < 1) throw UsageError("dk_sparsify: k must be at least 1");
    const std::size_t p = params.cluster_radius();
    if (p <= 2 * params.d) throw UsageError("dk_sparsify: p must exceed 2d");

    const std::size_t n = oracle.universe_size();
    SparsifierReport report;
    report.mode = "limited";
    report.k = params.k;
    report.d = params.d;
    report.p = p;
    report.ell = p;
    report.r = p + params.d;
    report.seed = params.seed;
    report.family = SetFamily(n);

    Rng rng(params.seed);
    FarSetStats stats;
    auto clustered = cluster_or_trivial(oracle, params, rng, &stats);
    report.calls_opt = stats.calls_opt;

    if (auto* trivial = std::get_if<TrivialCluster>(&clustered)) {
        report.family = trivial->family;
        report.centers = trivial->family.size();
        report.trivial_cluster = true;
        return report;
    }

    const auto& centers = std::get<Centers>(clustered).family;
    report.centers = centers.size();
    for (const auto& c : centers) {
        auto shifted = shifted_empty_extension(oracle, c, params.k, params.d, p);
        CountingView counted(shifted);
        auto part = k_sparsify(SmallSparsifyParams{params.k, p + params.d, p}, counted);
        report.calls_extend += counted.calls;
        report.passes += part.passes;
        if (part.shortcut) {
            // Trivial families are produced in the original (unshifted) domain.
            report.family = part.family;
            report.shortcut = true;
            return report;
        }
        for (const auto& kstar : part.family) report.family.insert(kstar ^ c);
    }
    return report;
}

}  // namespace divsparse
