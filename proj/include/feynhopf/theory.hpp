#ifndef FEYNHOPF_THEORY_HPP
#define FEYNHOPF_THEORY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

// Half-edge role at a vertex. Unoriented kinds use Plain; oriented kinds
// distinguish In (a line arriving at the vertex) from Out (a line leaving).
enum class Role : std::uint8_t { Plain = 0, In = 1, Out = 2 };

const char* role_suffix(Role r); // "", ".in", ".out"

struct EdgeKind {
    std::string name;
    bool oriented = false;
};

// One leg slot of a vertex kind: the edge kind it accepts plus the role.
struct LegType {
    int edge_kind = -1;
    Role role = Role::Plain;

    friend bool operator==(const LegType&, const LegType&) = default;
    friend auto operator<=>(const LegType&, const LegType&) = default;
};

struct VertexKind {
    std::string name;
    std::vector<LegType> legs; // sorted multiset

    int valence() const { return static_cast<int>(legs.size()); }
};

// A residue r in R = R_V u R_E: either a vertex kind or an edge kind.
struct Residue {
    bool is_vertex = false;
    int index = -1; // into vertex_kinds or edge_kinds

    friend bool operator==(const Residue&, const Residue&) = default;
    friend auto operator<=>(const Residue&, const Residue&) = default;
};

class Theory {
public:
    std::string name;
    std::vector<EdgeKind> edge_kinds;
    std::vector<VertexKind> vertex_kinds;

    int edge_kind_index(const std::string& name) const;    // -1 if absent
    int vertex_kind_index(const std::string& name) const;  // -1 if absent
    std::optional<Residue> residue_by_name(const std::string& name) const;
    const std::string& residue_name(Residue r) const;
    std::vector<Residue> residues() const; // vertices first, then edges

    // N_e(r): legs of kind e attached to r (2 for r == e itself).
    int leg_count(Residue r, int edge_kind) const;
    // N(v): total valence of a vertex kind.
    int total_valence(int vertex_kind) const;

    // W(r): number of (kind, role)-respecting permutations of r's legs.
    Int external_perm_count(Residue r) const;

    void validate() const; // throws Error on a malformed theory
};

Theory parse_theory(const std::string& text);
Theory load_theory_file(const std::string& path);
std::string serialize_theory(const Theory& t);

} // namespace feynhopf

#endif
