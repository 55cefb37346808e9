#include "divsparse/domains.hpp"

namespace divsparse {

namespace {

bool valid_trivial(const SetFamily& family, const ExtensionContext& ctx) {
    if (family.size() != ctx.k + 1) return false;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (hamming(family[i], family[j]) <= 2 * ctx.d) return false;
        }
    }
    return true;
}

}  // namespace

UnionOracle::UnionOracle(std::vector<std::shared_ptr<const DomainOracle>> parts)
    : parts_(std::move(parts)) {
    if (parts_.empty()) throw UsageError("union of zero domains");
    n_ = parts_.front()->universe_size();
    for (const auto& p : parts_) {
        if (p->universe_size() != n_) throw UsageError("union parts have different ground sets");
    }
}

bool UnionOracle::supports(Capability c) const {
    for (const auto& p : parts_) {
        if (!p->supports(c)) return false;
    }
    return true;
}

std::optional<SubsetMask> UnionOracle::opt_pm1(const WeightVector& w) const {
    std::optional<SubsetMask> best;
    long best_weight = 0;
    for (const auto& p : parts_) {
        auto m = p->opt_pm1(w);
        if (!m) continue;
        long x = w.weight_of(*m);
        if (!best || x > best_weight) {
            best = m;
            best_weight = x;
        }
    }
    return best;
}

ExtensionOutcome UnionOracle::exact_extend(const ExtensionQuery& q,
                                           const ExtensionContext* ctx) const {
    for (const auto& p : parts_) {
        auto outcome = p->exact_extend(q, ctx);
        if (auto* ts = std::get_if<TrivialSparsifier>(&outcome)) {
            // Pairwise far sets of one part stay a valid shortcut for the union.
            if (ctx && valid_trivial(ts->family, *ctx)) return outcome;
            outcome = p->exact_extend(q, nullptr);
        }
        if (std::holds_alternative<Found>(outcome)) return outcome;
    }
    return NotFound{};
}

std::unique_ptr<DomainOracle> union_oracle(std::vector<std::shared_ptr<const DomainOracle>> parts) {
    return std::make_unique<UnionOracle>(std::move(parts));
}

}  // namespace divsparse
