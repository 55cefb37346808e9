#include "divsparse/domains.hpp"

namespace divsparse {

void GraphData::validate() const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u >= n_vertices || v >= n_vertices) {
            throw UsageError("edge " + std::to_string(i) + " has an endpoint out of range");
        }
        if (u == v) throw UsageError("edge " + std::to_string(i) + " is a self-loop");
    }
}

ExplicitOracle::ExplicitOracle(SetFamily family) : family_(std::move(family)) {
    complement_closed_ = true;
    for (const auto& m : family_) {
        if (!family_.contains(m.complement())) {
            complement_closed_ = false;
            break;
        }
    }
}

std::optional<SubsetMask> ExplicitOracle::opt_pm1(const WeightVector& w) const {
    std::optional<SubsetMask> best;
    long best_weight = 0;
    for (const auto& m : family_) {
        long x = w.weight_of(m);
        if (!best || x > best_weight) {
            best = m;
            best_weight = x;
        }
    }
    return best;
}

ExtensionOutcome ExplicitOracle::exact_extend(const ExtensionQuery& q,
                                              const ExtensionContext*) const {
    for (const auto& m : family_) {
        if (q.satisfied_by(m)) return Found{m};
    }
    return NotFound{};
}

std::unique_ptr<DomainOracle> explicit_oracle(const SetFamily& family) {
    return std::make_unique<ExplicitOracle>(family);
}

}  // namespace divsparse
