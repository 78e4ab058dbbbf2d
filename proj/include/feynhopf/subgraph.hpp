#ifndef FEYNHOPF_SUBGRAPH_HPP
#define FEYNHOPF_SUBGRAPH_HPP

#include <vector>

#include "feynhopf/graph.hpp"

namespace feynhopf {

// Counts of vertices and internal edges by kind (m_{Gamma,r}), or of
// subgraph components by residue (n_{gamma,r}).
struct ResidueCounts {
    std::vector<int> vertex; // indexed by vertex kind
    std::vector<int> edge;   // indexed by edge kind

    int of(Residue r) const { return r.is_vertex ? vertex.at(r.index) : edge.at(r.index); }
};

// A disjoint union of 1PI subgraphs inside an ambient graph, identified by
// its internal-edge subset. Components induce standalone graphs whose
// external legs are the half-edges toward the complement plus the ambient
// legs attached to component vertices.
struct SubgraphOccurrence {
    std::vector<int> edge_ids;                     // sorted ambient edge indices
    std::vector<std::vector<int>> component_edges; // partition of edge_ids
    std::vector<FeynmanGraph> components;
    std::vector<Residue> residues; // per component
};

// All proper nonempty occurrences of g, ordered by edge subset. Distinct
// placements of isomorphic subgraphs count separately.
std::vector<SubgraphOccurrence> enumerate_subgraphs(const FeynmanGraph& g);

// The quotient graph g / occ: vertex-residue components collapse to a new
// vertex, edge-residue components splice their two attachment points into
// one edge (possibly a self-loop).
FeynmanGraph contract(const FeynmanGraph& g, const SubgraphOccurrence& occ);

ResidueCounts component_counts(const FeynmanGraph& g);
ResidueCounts part_counts(const FeynmanGraph& g, const SubgraphOccurrence& occ);

// Insertion places big|parts: vertex parts occupy distinct vertices of their
// kind, edge parts choose edges with repetition.
Int count_insertion_places(const FeynmanGraph& big, const std::vector<Residue>& parts);

// Same count from raw residue counts; m_edge = -1 entries (the bare edge
// quotient) are handled through the falling-factorial binomial.
Int count_insertion_places(const Theory& theory, const ResidueCounts& big, const std::vector<Residue>& parts);

} // namespace feynhopf

#endif
