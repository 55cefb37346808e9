#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "divsparse/core.hpp"

namespace divsparse {

struct GraphData {
    bool directed = false;
    std::size_t n_vertices = 0;
    /// Edge i is edges[i].
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    /// Rejects out-of-range endpoints and self-loops.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Matroids

struct GraphicMatroid {
    GraphData graph;
};
struct UniformMatroid {
    std::size_t n = 0;
    std::size_t rank = 0;
};
struct PartitionBlock {
    std::size_t capacity = 0;
    std::vector<std::size_t> elements;
};
/// Elements outside every block are loops.
struct PartitionMatroid {
    std::size_t n = 0;
    std::vector<PartitionBlock> blocks;
};

struct MatroidSpec {
    std::variant<GraphicMatroid, UniformMatroid, PartitionMatroid> kind;

    std::size_t universe_size() const;
    bool independent(const SubsetMask& s) const;
};

// ---------------------------------------------------------------------------
// Minimum s,t-cut lattice

/// Poset whose ideals correspond one-to-one to the vertex sets of minimum
/// s,t-cuts: cut = source_block plus the blocks of the ideal's nodes.
struct MinCutPoset {
    std::size_t n_vertices = 0;
    SubsetMask source_block;  // in every minimum cut
    SubsetMask sink_block;    // in none
    std::vector<SubsetMask> node_blocks;
    /// below[w]: nodes u with u <= w (w's ideal must contain them), w included.
    std::vector<std::uint64_t> below;
    /// above[w]: nodes u with u >= w, w included.
    std::vector<std::uint64_t> above;
    std::size_t cut_value = 0;

    std::size_t node_count() const { return node_blocks.size(); }
    bool is_ideal(std::uint64_t nodes) const;
    SubsetMask cut_of(std::uint64_t ideal) const;
    /// Nodes of the ideal whose cut is `cut`; nullopt if `cut` is not a minimum cut.
    std::optional<std::uint64_t> ideal_of(const SubsetMask& cut) const;
    /// Enumerates all ideals (guarded).
    std::vector<std::uint64_t> all_ideals() const;
};

/// Builds the poset from a maximum flow and the strongly connected
/// components of its residual graph. Undirected edges become two arcs.
MinCutPoset build_mincut_poset(const GraphData& graph, std::size_t s, std::size_t t);

// ---------------------------------------------------------------------------
// DAG dynamic programming domain

struct DagDpInstance {
    GraphData dag;
    /// labels[v] is the ground element of vertex v.
    std::vector<std::size_t> labels;
    std::size_t universe_size = 0;

    /// Rejects cycles, bad labels, and paths repeating a label.
    void validate() const;
};

/// Intervals as (left, right); u precedes v when u ends strictly before v starts.
DagDpInstance interval_scheduling_instance(
    const std::vector<std::pair<long, long>>& intervals);

// ---------------------------------------------------------------------------
// Adapters

class ExplicitOracle : public DomainOracle {
public:
    explicit ExplicitOracle(SetFamily family);

    std::size_t universe_size() const override { return family_.universe_size(); }
    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override;
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;
    bool complement_closed() const override { return complement_closed_; }
    const SetFamily& family() const { return family_; }

private:
    SetFamily family_;
    bool complement_closed_ = false;
};

/// Vertex covers of size at most ell. Supports the extension oracles only.
class VertexCoverOracle : public DomainOracle {
public:
    VertexCoverOracle(GraphData graph, std::size_t ell);

    std::size_t universe_size() const override { return graph_.n_vertices; }
    bool supports(Capability c) const override;
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;
    ExtensionOutcome exact_empty_extend(std::size_t r,
                                        const SubsetMask& forbidden) const override;

    /// A vertex cover of exactly `size` vertices containing `forced` and
    /// avoiding `forbidden`.
    std::optional<SubsetMask> exact_cover(const SubsetMask& forced, const SubsetMask& forbidden,
                                          std::size_t size) const;

    std::size_t ell() const { return ell_; }

private:
    GraphData graph_;
    std::size_t ell_;
};

/// Bases of a graphic, uniform, or partition matroid.
class MatroidBaseOracle : public DomainOracle {
public:
    explicit MatroidBaseOracle(MatroidSpec spec);

    std::size_t universe_size() const override { return spec_.universe_size(); }
    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override;
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;

    /// Greedy completion: takes `forced` (nullopt if dependent), then scans
    /// `order` skipping `forbidden`. Returns nullopt unless the result is a base.
    std::optional<SubsetMask> greedy_base(const SubsetMask& forced, const SubsetMask& forbidden,
                                          const std::vector<std::size_t>& order) const;

    /// One strong-exchange step: removes the lowest e1 in from \ to and adds
    /// the lowest e2 in to \ from that keeps a base.
    SubsetMask exchange_step(const SubsetMask& from, const SubsetMask& to) const;

    std::size_t rank() const { return rank_; }
    const MatroidSpec& spec() const { return spec_; }

private:
    MatroidSpec spec_;
    std::size_t rank_ = 0;
};

/// Matchings with exactly `size` edges; universe = edges.
class MatchingOracle : public DomainOracle {
public:
    /// Vertex cap of the expanded graph on which subset DP runs.
    static constexpr std::size_t kMaxExpandedVertices = 22;

    MatchingOracle(GraphData graph, std::size_t size);

    std::size_t universe_size() const override { return graph_.edges.size(); }
    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override;
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;

    std::size_t size() const { return size_; }

private:
    GraphData graph_;
    std::size_t size_;
};

/// Expanded graph: G plus |V| - 2*size pad vertices joined to every vertex
/// of G. Pad edges follow the original edges; edge i < |E| is original edge i.
GraphData expanded_graph(const GraphData& graph, std::size_t size);

/// Vertex sets of minimum s,t-cuts; universe = vertices.
class MinCutOracle : public DomainOracle {
public:
    MinCutOracle(GraphData graph, std::size_t s, std::size_t t);

    std::size_t universe_size() const override { return graph_.n_vertices; }
    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override;
    /// With a context, answers with a trivial sparsifier when the center has
    /// many nearby ideals; otherwise searches the ideals sandwiched around it.
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;

    const MinCutPoset& poset() const { return poset_; }

private:
    GraphData graph_;
    std::size_t s_;
    std::size_t t_;
    MinCutPoset poset_;
};

/// Label sets of longest paths in a labelled DAG.
class DagDpOracle : public DomainOracle {
public:
    explicit DagDpOracle(DagDpInstance inst);

    std::size_t universe_size() const override { return inst_.universe_size; }
    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override;
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;

    /// Vertex count of a longest path (0 for an empty graph).
    std::size_t longest() const { return longest_; }

private:
    DagDpInstance inst_;
    std::vector<std::size_t> topo_;
    std::vector<std::size_t> opt_;  // vertices on a longest path ending at v
    std::vector<std::vector<std::size_t>> tight_preds_;
    std::size_t longest_ = 0;
};

/// Union of domains over a shared ground set.
class UnionOracle : public DomainOracle {
public:
    explicit UnionOracle(std::vector<std::shared_ptr<const DomainOracle>> parts);

    std::size_t universe_size() const override { return n_; }
    bool supports(Capability c) const override;
    std::optional<SubsetMask> opt_pm1(const WeightVector& w) const override;
    ExtensionOutcome exact_extend(const ExtensionQuery& q,
                                  const ExtensionContext* ctx) const override;

private:
    std::vector<std::shared_ptr<const DomainOracle>> parts_;
    std::size_t n_ = 0;
};

std::unique_ptr<DomainOracle> explicit_oracle(const SetFamily& family);
std::unique_ptr<DomainOracle> vertex_cover_oracle(const GraphData& graph, std::size_t ell);
std::unique_ptr<DomainOracle> matroid_base_oracle(const MatroidSpec& spec);
std::unique_ptr<DomainOracle> matching_oracle(const GraphData& graph, std::size_t size);
std::unique_ptr<DomainOracle> mincut_oracle(const GraphData& graph, std::size_t s, std::size_t t);
std::unique_ptr<DomainOracle> dagdp_oracle(const DagDpInstance& inst);
std::unique_ptr<DomainOracle> union_oracle(std::vector<std::shared_ptr<const DomainOracle>> parts);

// ---------------------------------------------------------------------------
// Parsed instances

enum class DomainKind {
    explicit_family,
    vertex_cover,
    spanning_tree,
    uniform_matroid,
    partition_matroid,
    matching,
    st_mincut,
    dag_dp,
};

const char* to_string(DomainKind kind);

/// Implicit description of a domain as read from an instance file.
struct DomainInstance {
    DomainKind kind = DomainKind::explicit_family;
    std::size_t universe = 0;
    std::optional<GraphData> graph;
    std::optional<SetFamily> family;         // explicit
    std::size_t ell = 0;                     // vertex_cover
    std::size_t rank = 0;                    // uniform_matroid
    std::vector<PartitionBlock> blocks;      // partition_matroid
    std::size_t matching_size = 0;           // matching
    std::size_t s = 0, t = 0;                // st_mincut
    std::vector<std::size_t> labels;         // dag_dp

    std::size_t universe_size() const;
    std::unique_ptr<DomainOracle> make_oracle() const;
    /// Size bound for small-mode sparsification, when the domain declares one.
    std::optional<std::size_t> size_bound() const;
    MatroidSpec matroid() const;
    DagDpInstance dag_instance() const;
};

}  // namespace divsparse
