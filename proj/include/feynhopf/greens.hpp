#ifndef FEYNHOPF_GREENS_HPP
#define FEYNHOPF_GREENS_HPP

#include <string>

#include "feynhopf/generate.hpp"
#include "feynhopf/hopf.hpp"
#include "feynhopf/series.hpp"

namespace feynhopf {

using HSeries = GradedSeries<AlgebraElement>;

HSeries hseries_one(int max_degree);

// G^r = 1 +/- sum Gamma / Sym(Gamma), truncated at the catalog depth.
HSeries green(GeneratorTable& table, const GraphCatalog& catalog, Residue r);

// X_v = (G^v / prod_e (G^e)^{N_e(v)/2})^{1/(N(v)-2)}
HSeries x_element(GeneratorTable& table, const GraphCatalog& catalog, int vertex_kind);

// Delta(G^r) three ways; all truncated to total loop degree <= catalog depth.
TensorElement coproduct_green_direct(GeneratorTable& table, const GraphCatalog& catalog, Residue r);
TensorElement coproduct_green_prop(GeneratorTable& table, const GraphCatalog& catalog, Residue r);
TensorElement coproduct_green_enhanced(GeneratorTable& table, const GraphCatalog& catalog, Residue r);

// Spanning data for the Slavnov-Taylor ideal I = <X_v - X_v'>.
struct IdealBasis {
    int max_degree = 0;
    std::vector<std::pair<int, int>> pairs; // vertex-kind pairs (v, v')
    std::vector<HSeries> gen_x;             // X_v - X_v'
    std::vector<HSeries> gen_poly;          // cross-multiplied polynomial form
    // raw spanning elements of I_n: monomial multiples of homogeneous
    // generator components, indexed by degree
    std::vector<std::vector<AlgebraElement>> span;
    // catalog generators (id, loops): the monomial universe per degree
    std::vector<std::pair<GenId, int>> universe;
};

IdealBasis ideal_basis(GeneratorTable& table, const GraphCatalog& catalog, int max_degree);

// exact membership by degreewise elimination over the monomial basis
bool ideal_membership(GeneratorTable& table, const IdealBasis& basis, const AlgebraElement& a);
// t in I (x) H + H (x) I; with left_only, t in I (x) H
bool tensor_membership(GeneratorTable& table, const IdealBasis& basis, const TensorElement& t,
                       bool left_only = false);

struct CheckRecord {
    std::string check;
    std::string subject;
    int degree = -1;
    bool pass = false;
};

struct CheckReport {
    std::vector<CheckRecord> records;
    bool all_pass() const
    {
        for (const CheckRecord& r : records)
            if (!r.pass) return false;
        return true;
    }
    void add(std::string check, std::string subject, int degree, bool pass)
    {
        records.push_back({std::move(check), std::move(subject), degree, pass});
    }
};

// direct == proposition == enhanced, reported per total degree
CheckReport check_proposition(GeneratorTable& table, const GraphCatalog& catalog, Residue r);

// Hopf-ideal conditions for every generator (both styles) and degree:
// eps(I) = 0, S(I) in I, Delta(I) in I (x) H + H (x) I.
CheckReport check_hopf_ideal(GeneratorTable& table, const GraphCatalog& catalog, int max_degree);

// Delta(G^r) minus the closed form lies in I (x) H, for every reference
// vertex kind; exact equality when the theory has a single vertex kind.
CheckReport check_closed_coproduct(GeneratorTable& table, const GraphCatalog& catalog, Residue r, int max_degree);

std::string render_report(const CheckReport& report);

} // namespace feynhopf

#endif
