#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace divsparse {

/// Largest ground set a SubsetMask can represent.
inline constexpr std::size_t kMaxUniverse = 64;

/// Raised when an operation is called with arguments violating its contract.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a domain adapter does not offer the requested oracle capability,
/// or an instance exceeds an adapter's representational cap.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an exhaustive computation would exceed its desk-scale guard.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GroundSet {
    std::size_t size = 0;
    std::vector<std::string> element_names;

    GroundSet(std::size_t n, std::vector<std::string> names = {});
};

/// A subset of the ground set {0, ..., n-1}, stored as a 64-bit membership mask.
class SubsetMask {
public:
    SubsetMask() = default;
    explicit SubsetMask(std::size_t universe_size);

    static SubsetMask from_bits(std::size_t universe_size, std::uint64_t bits);
    static SubsetMask from_indices(std::size_t universe_size,
                                   const std::vector<std::size_t>& indices);
    static SubsetMask full(std::size_t universe_size);

    std::size_t universe_size() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    std::size_t count() const;
    bool empty() const { return bits_ == 0; }

    bool contains(std::size_t i) const;
    void insert(std::size_t i);
    void erase(std::size_t i);

    SubsetMask complement() const;
    bool is_subset_of(const SubsetMask& other) const;
    bool intersects(const SubsetMask& other) const;

    /// Member indices in ascending order.
    std::vector<std::size_t> indices() const;

    SubsetMask operator&(const SubsetMask& o) const;
    SubsetMask operator|(const SubsetMask& o) const;
    SubsetMask operator^(const SubsetMask& o) const;
    /// Set difference.
    SubsetMask operator-(const SubsetMask& o) const;

    friend bool operator==(const SubsetMask& a, const SubsetMask& b) = default;

private:
    std::uint64_t bits_ = 0;
    std::uint32_t n_ = 0;

    void check_same(const SubsetMask& o) const;
};

/// Canonical order: ascending mask value (bit i has weight 2^i).
bool canonical_less(const SubsetMask& a, const SubsetMask& b);

struct SubsetMaskHash {
    std::size_t operator()(const SubsetMask& m) const noexcept {
        return std::hash<std::uint64_t>{}(m.bits());
    }
};

/// Duplicate-free family of subsets in insertion order.
class SetFamily {
public:
    SetFamily() = default;
    explicit SetFamily(std::size_t universe_size);
    SetFamily(std::size_t universe_size, const std::vector<SubsetMask>& members);

    std::size_t universe_size() const { return n_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    /// Returns false (and leaves the family unchanged) if `m` is already present.
    bool insert(const SubsetMask& m);
    bool contains(const SubsetMask& m) const;

    const SubsetMask& operator[](std::size_t i) const { return members_[i]; }
    const std::vector<SubsetMask>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    /// Copy with members in canonical (mask-ascending) order.
    SetFamily canonical() const;

    /// Largest member cardinality; 0 for the empty family.
    std::size_t max_cardinality() const;

private:
    std::size_t n_ = 0;
    std::vector<SubsetMask> members_;
    std::unordered_set<SubsetMask, SubsetMaskHash> index_;
};

/// Element weights in {-1, +1}.
class WeightVector {
public:
    explicit WeightVector(std::vector<int> weights);

    std::size_t universe_size() const { return w_.size(); }
    int operator[](std::size_t i) const { return w_[i]; }
    long weight_of(const SubsetMask& m) const;

private:
    std::vector<int> w_;
};

/// Arguments of an exact extension query: find D with |D ^ center| = radius,
/// forced <= D and D disjoint from forbidden.
struct ExtensionQuery {
    SubsetMask center;
    std::size_t radius = 0;
    SubsetMask forced;
    SubsetMask forbidden;

    ExtensionQuery(SubsetMask c, std::size_t r, SubsetMask x, SubsetMask y);

    /// Checks every constraint of the query against `d`.
    bool satisfied_by(const SubsetMask& d) const;
};

/// Framework parameters visible to adapters that can answer with a shortcut.
struct ExtensionContext {
    std::size_t k = 1;
    std::size_t d = 0;
    std::size_t p = 0;
};

struct Found {
    SubsetMask witness;
};
struct NotFound {};
/// k+1 domain members pairwise more than 2d apart.
struct TrivialSparsifier {
    SetFamily family;
};

using ExtensionOutcome = std::variant<Found, NotFound, TrivialSparsifier>;

enum class Capability { opt_pm1, exact_extend, exact_empty_extend };

/// Implicit description of a solution domain, accessed only through oracles.
///
/// Implementations are immutable after construction; every query is pure.
class DomainOracle {
public:
    virtual ~DomainOracle() = default;

    virtual std::size_t universe_size() const = 0;
    virtual bool supports(Capability c) const;

    /// A member maximizing the weight of its elements, or nullopt if the
    /// domain is empty.
    virtual std::optional<SubsetMask> opt_pm1(const WeightVector& w) const;

    /// `ctx` is null when the caller is not running a d-limited framework.
    virtual ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                          const ExtensionContext* ctx) const;

    /// A member of cardinality r avoiding `forbidden`. The default routes
    /// through exact_extend with an empty center and an empty forced set.
    virtual ExtensionOutcome exact_empty_extend(std::size_t r,
                                                const SubsetMask& forbidden) const;

    /// True if U \ D is a member whenever D is.
    virtual bool complement_closed() const { return false; }
};

std::size_t hamming(const SubsetMask& a, const SubsetMask& b);

/// min(|a ^ b|, |a ^ (U \ b)|).
std::size_t modified_hamming(const SubsetMask& a, const SubsetMask& b);

/// Distance selected by the `modified` flag.
std::size_t distance(const SubsetMask& a, const SubsetMask& b, bool modified);

/// Space separated member indices, e.g. "0 2 5".
std::string format_indices(const SubsetMask& m);

}  // namespace divsparse
