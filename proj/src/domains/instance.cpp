#include "divsparse/domains.hpp"

namespace divsparse {

const char* to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::explicit_family: return "explicit";
        case DomainKind::vertex_cover: return "vertex_cover";
        case DomainKind::spanning_tree: return "spanning_tree";
        case DomainKind::uniform_matroid: return "uniform_matroid";
        case DomainKind::partition_matroid: return "partition_matroid";
        case DomainKind::matching: return "matching";
        case DomainKind::st_mincut: return "st_mincut";
        case DomainKind::dag_dp: return "dag_dp";
    }
    return "unknown";
}

namespace {

const GraphData& need_graph(const DomainInstance& inst) {
    if (!inst.graph) throw UsageError(std::string(to_string(inst.kind)) + " instance needs a graph");
    return *inst.graph;
}

}  // namespace

std::size_t DomainInstance::universe_size() const {
    switch (kind) {
        case DomainKind::explicit_family:
            return family ? family->universe_size() : universe;
        case DomainKind::vertex_cover:
        case DomainKind::st_mincut:
            return need_graph(*this).n_vertices;
        case DomainKind::spanning_tree:
        case DomainKind::matching:
            return need_graph(*this).edges.size();
        case DomainKind::uniform_matroid:
        case DomainKind::partition_matroid:
        case DomainKind::dag_dp:
            return universe;
    }
    return universe;
}

MatroidSpec DomainInstance::matroid() const {
    switch (kind) {
        case DomainKind::spanning_tree: return MatroidSpec{GraphicMatroid{need_graph(*this)}};
        case DomainKind::uniform_matroid: return MatroidSpec{UniformMatroid{universe, rank}};
        case DomainKind::partition_matroid: return MatroidSpec{PartitionMatroid{universe, blocks}};
        default: throw UsageError(std::string(to_string(kind)) + " is not a matroid domain");
    }
}

DagDpInstance DomainInstance::dag_instance() const {
    if (kind != DomainKind::dag_dp) throw UsageError("not a dag_dp instance");
    return DagDpInstance{need_graph(*this), labels, universe};
}

std::unique_ptr<DomainOracle> DomainInstance::make_oracle() const {
    switch (kind) {
        case DomainKind::explicit_family:
            if (!family) throw UsageError("explicit instance has no family");
            return explicit_oracle(*family);
        case DomainKind::vertex_cover: return vertex_cover_oracle(need_graph(*this), ell);
        case DomainKind::spanning_tree:
        case DomainKind::uniform_matroid:
        case DomainKind::partition_matroid: return matroid_base_oracle(matroid());
        case DomainKind::matching: return matching_oracle(need_graph(*this), matching_size);
        case DomainKind::st_mincut: return mincut_oracle(need_graph(*this), s, t);
        case DomainKind::dag_dp: return dagdp_oracle(dag_instance());
    }
    throw UsageError("unknown domain kind");
}

std::optional<std::size_t> DomainInstance::size_bound() const {
    if (kind == DomainKind::vertex_cover) return ell;
    return std::nullopt;
}

}  // namespace divsparse
