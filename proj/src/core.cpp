#include "divsparse/core.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace divsparse {

namespace {

std::uint64_t universe_bits(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void check_universe(std::size_t n) {
    if (n > kMaxUniverse) {
        throw CapabilityError("universe of size " + std::to_string(n) +
                              " exceeds the mask width " + std::to_string(kMaxUniverse));
    }
}

}  // namespace

GroundSet::GroundSet(std::size_t n, std::vector<std::string> names)
    : size(n), element_names(std::move(names)) {
    if (n == 0) throw UsageError("ground set must be nonempty");
    if (!element_names.empty() && element_names.size() != n) {
        throw UsageError("element name count does not match ground set size");
    }
}

SubsetMask::SubsetMask(std::size_t universe_size) : n_(static_cast<std::uint32_t>(universe_size)) {
    check_universe(universe_size);
}

SubsetMask SubsetMask::from_bits(std::size_t universe_size, std::uint64_t bits) {
    SubsetMask m(universe_size);
    if (bits & ~universe_bits(universe_size)) {
        throw UsageError("mask has members outside the universe");
    }
    m.bits_ = bits;
    return m;
}

SubsetMask SubsetMask::from_indices(std::size_t universe_size,
                                    const std::vector<std::size_t>& indices) {
    SubsetMask m(universe_size);
    for (auto i : indices) m.insert(i);
    return m;
}

SubsetMask SubsetMask::full(std::size_t universe_size) {
    SubsetMask m(universe_size);
    m.bits_ = universe_bits(universe_size);
    return m;
}

std::size_t SubsetMask::count() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool SubsetMask::contains(std::size_t i) const { return i < n_ && ((bits_ >> i) & 1U); }

void SubsetMask::insert(std::size_t i) {
    if (i >= n_) {
        throw UsageError("element " + std::to_string(i) + " outside universe of size " +
                         std::to_string(n_));
    }
    bits_ |= std::uint64_t{1} << i;
}

void SubsetMask::erase(std::size_t i) {
    if (i < n_) bits_ &= ~(std::uint64_t{1} << i);
}

SubsetMask SubsetMask::complement() const {
    SubsetMask m = *this;
    m.bits_ = ~bits_ & universe_bits(n_);
    return m;
}

void SubsetMask::check_same(const SubsetMask& o) const {
    if (n_ != o.n_) {
        throw UsageError("universe mismatch: " + std::to_string(n_) + " vs " +
                         std::to_string(o.n_));
    }
}

bool SubsetMask::is_subset_of(const SubsetMask& other) const {
    check_same(other);
    return (bits_ & ~other.bits_) == 0;
}

bool SubsetMask::intersects(const SubsetMask& other) const {
    check_same(other);
    return (bits_ & other.bits_) != 0;
}

std::vector<std::size_t> SubsetMask::indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::uint64_t b = bits_; b; b &= b - 1) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
}

SubsetMask SubsetMask::operator&(const SubsetMask& o) const {
    check_same(o);
    SubsetMask m = *this;
    m.bits_ &= o.bits_;
    return m;
}

SubsetMask SubsetMask::operator|(const SubsetMask& o) const {
    check_same(o);
    SubsetMask m = *this;
    m.bits_ |= o.bits_;
    return m;
}

SubsetMask SubsetMask::operator^(const SubsetMask& o) const {
    check_same(o);
    SubsetMask m = *this;
    m.bits_ ^= o.bits_;
    return m;
}

SubsetMask SubsetMask::operator-(const SubsetMask& o) const {
    check_same(o);
    SubsetMask m = *this;
    m.bits_ &= ~o.bits_;
    return m;
}

bool canonical_less(const SubsetMask& a, const SubsetMask& b) { return a.bits() < b.bits(); }

SetFamily::SetFamily(std::size_t universe_size) : n_(universe_size) { check_universe(n_); }

SetFamily::SetFamily(std::size_t universe_size, const std::vector<SubsetMask>& members)
    : SetFamily(universe_size) {
    for (const auto& m : members) insert(m);
}

bool SetFamily::insert(const SubsetMask& m) {
    if (m.universe_size() != n_) {
        throw UsageError("family member over universe " + std::to_string(m.universe_size()) +
                         ", family universe is " + std::to_string(n_));
    }
    if (!index_.insert(m).second) return false;
    members_.push_back(m);
    return true;
}

bool SetFamily::contains(const SubsetMask& m) const { return index_.count(m) != 0; }

SetFamily SetFamily::canonical() const {
    auto sorted = members_;
    std::sort(sorted.begin(), sorted.end(), canonical_less);
    return SetFamily(n_, sorted);
}

std::size_t SetFamily::max_cardinality() const {
    std::size_t best = 0;
    for (const auto& m : members_) best = std::max(best, m.count());
    return best;
}

WeightVector::WeightVector(std::vector<int> weights) : w_(std::move(weights)) {
    for (int x : w_) {
        if (x != 1 && x != -1) throw UsageError("weights must be -1 or +1");
    }
}

long WeightVector::weight_of(const SubsetMask& m) const {
    if (m.universe_size() != w_.size()) throw UsageError("weight vector universe mismatch");
    long total = 0;
    for (auto i : m.indices()) total += w_[i];
    return total;
}

ExtensionQuery::ExtensionQuery(SubsetMask c, std::size_t r, SubsetMask x, SubsetMask y)
    : center(c), radius(r), forced(x), forbidden(y) {
    if (c.universe_size() != x.universe_size() || c.universe_size() != y.universe_size()) {
        throw UsageError("extension query universe mismatch");
    }
    if (forced.intersects(forbidden)) throw UsageError("forced and forbidden sets overlap");
}

bool ExtensionQuery::satisfied_by(const SubsetMask& d) const {
    return hamming(d, center) == radius && forced.is_subset_of(d) && !d.intersects(forbidden);
}

bool DomainOracle::supports(Capability) const { return true; }

std::optional<SubsetMask> DomainOracle::opt_pm1(const WeightVector&) const {
    throw CapabilityError("this domain does not offer the (-1,1)-optimization oracle");
}

ExtensionOutcome DomainOracle::exact_extend(const ExtensionQuery&, const ExtensionContext*) const {
    throw CapabilityError("this domain does not offer the exact extension oracle");
}

ExtensionOutcome DomainOracle::exact_empty_extend(std::size_t r,
                                                  const SubsetMask& forbidden) const {
    SubsetMask none(universe_size());
    return exact_extend(ExtensionQuery(none, r, none, forbidden), nullptr);
}

std::size_t hamming(const SubsetMask& a, const SubsetMask& b) { return (a ^ b).count(); }

std::size_t modified_hamming(const SubsetMask& a, const SubsetMask& b) {
    return std::min(hamming(a, b), hamming(a, b.complement()));
}

std::size_t distance(const SubsetMask& a, const SubsetMask& b, bool modified) {
    return modified ? modified_hamming(a, b) : hamming(a, b);
}

std::string format_indices(const SubsetMask& m) {
    std::ostringstream out;
    bool first = true;
    for (auto i : m.indices()) {
        if (!first) out << ' ';
        out << i;
        first = false;
    }
    return out.str();
}

}  // namespace divsparse
