#ifndef FEYNHOPF_GRAPH_HPP
#define FEYNHOPF_GRAPH_HPP

#include <memory>
#include <string>
#include <vector>

#include "feynhopf/theory.hpp"

namespace feynhopf {

struct GraphVertex {
    std::string id;
    int kind = -1; // vertex kind index
};

// Internal edge; tail == head is a self-loop. For unoriented kinds the
// tail/head order carries no meaning.
struct GraphEdge {
    std::string id;
    int kind = -1; // edge kind index
    int tail = -1;
    int head = -1;
};

struct ExternalLeg {
    std::string label;
    int kind = -1;
    Role role = Role::Plain;
    int vertex = -1;
};

// A typed half-edge multigraph with labeled external legs. Immutable after
// finalize(); all queries are const and safe to share across threads.
class FeynmanGraph {
public:
    FeynmanGraph() = default;
    explicit FeynmanGraph(std::shared_ptr<const Theory> theory);

    int add_vertex(std::string id, int kind);
    int add_edge(std::string id, int kind, int tail, int head);
    void add_external(std::string label, int kind, Role role, int vertex);
    void finalize(); // validates; throws Error

    const Theory& theory() const { return *theory_; }
    const std::shared_ptr<const Theory>& theory_ptr() const { return theory_; }
    const std::vector<GraphVertex>& vertices() const { return vertices_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::vector<ExternalLeg>& externals() const { return externals_; }
    bool empty() const { return vertices_.empty() && edges_.empty() && externals_.empty(); }

    int loop_number() const;
    bool connected() const;
    bool is_1pi() const; // requires a connected graph
    Residue residue() const;

    // Isomorphism-class key; two graphs get equal keys iff they are
    // isomorphic respecting kinds, orientations and external structure
    // (legs of equal kind and role are interchangeable).
    const std::string& canonical_key() const;

    // Order of the automorphism group fixing every external leg. For a
    // disconnected graph: product over components times multiplicity
    // factorials of repeated component classes.
    Int sym() const;

    // Automorphism order when same-kind same-role legs may be permuted.
    // Connected graphs only.
    Int aut_free() const;

    // Number of distinct leg-pinned isomorphism classes in this merged
    // class: external_perm_count(res) * sym / aut_free. Connected graphs
    // with a residue only.
    Int labeled_variant_count() const;

    std::vector<FeynmanGraph> components() const;

private:
    struct Caches;

    void require_finalized() const;

    std::shared_ptr<const Theory> theory_;
    std::vector<GraphVertex> vertices_;
    std::vector<GraphEdge> edges_;
    std::vector<ExternalLeg> externals_;
    bool finalized_ = false;
    std::shared_ptr<Caches> caches_;
};

FeynmanGraph parse_graph(const std::string& text, std::shared_ptr<const Theory> theory);
FeynmanGraph load_graph_file(const std::string& path, std::shared_ptr<const Theory> theory);
std::string serialize_graph(const FeynmanGraph& g);

// The `theory <name>` header of a graph file, without a full parse.
std::string graph_file_theory_name(const std::string& text);

// Disjoint union; external labels are prefixed per part to stay distinct.
FeynmanGraph disjoint_union(const std::vector<const FeynmanGraph*>& parts);

} // namespace feynhopf

#endif
