#ifndef FEYNHOPF_HOPF_HPP
#define FEYNHOPF_HOPF_HPP

#include "feynhopf/algebra.hpp"
#include "feynhopf/subgraph.hpp"

namespace feynhopf {

// counit: coefficient of the empty monomial
Rat counit(const AlgebraElement& a);

// loop-degree-n part
AlgebraElement grade(const GeneratorTable& table, const AlgebraElement& a, int n);
int max_grade(const GeneratorTable& table, const AlgebraElement& a);

// Delta on a generator: Gamma (x) 1 + 1 (x) Gamma + sum over occurrences of
// component-class product (x) quotient class. Memoized per generator; new
// classes encountered in subgraphs and quotients are interned on the fly.
TensorElement gen_coproduct(GeneratorTable& table, GenId id);
TensorElement coproduct(GeneratorTable& table, const AlgebraElement& a);

// S(Gamma) = -Gamma - sum S(gamma) Gamma/gamma, extended as an algebra map.
AlgebraElement gen_antipode(GeneratorTable& table, GenId id);
AlgebraElement antipode(GeneratorTable& table, const AlgebraElement& a);

bool check_coassociativity(GeneratorTable& table, const AlgebraElement& a);
bool check_counit(GeneratorTable& table, const AlgebraElement& a);
bool check_antipode(GeneratorTable& table, const AlgebraElement& a);
// Delta(H^n) subset sum_k H^k (x) H^{n-k}
bool check_grading(GeneratorTable& table, GenId id);

// m(S (x) id) applied to a tensor: used by the antipode axiom and by tests
// that corrupt a coproduct on purpose.
AlgebraElement contract_antipode_left(GeneratorTable& table, const TensorElement& t);
AlgebraElement contract_antipode_right(GeneratorTable& table, const TensorElement& t);

} // namespace feynhopf

#endif
