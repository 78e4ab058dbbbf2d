#include "feynhopf/greens.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace feynhopf {

namespace {

int residue_leg_total(const Theory& th, Residue r)
{
    int n = 0;
    for (std::size_t e = 0; e < th.edge_kinds.size(); ++e) n += th.leg_count(r, static_cast<int>(e));
    return n;
}

struct FlatEntry {
    GenId id;
    int loops;
    Residue residue;
    Rat weight;
};

std::vector<FlatEntry> flatten(const GeneratorTable& table, const GraphCatalog& catalog)
{
    std::vector<FlatEntry> out;
    for (Residue r : table.theory().residues())
        for (int loops = 1; loops <= catalog.max_loops(); ++loops)
            for (const CatalogEntry& e : catalog.at(r, loops)) out.push_back({e.id, loops, r, e.green_weight});
    std::sort(out.begin(), out.end(), [](const FlatEntry& a, const FlatEntry& b) { return a.id < b.id; });
    return out;
}

// all monomials over the given generators with total loop degree d
void monomials_rec(const std::vector<std::pair<GenId, int>>& gens, std::size_t start, int remaining, Monomial& cur,
                   std::vector<Monomial>& out)
{
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < gens.size(); ++i) {
        if (gens[i].second > remaining) continue;
        cur.push_back(gens[i].first);
        monomials_rec(gens, i, remaining - gens[i].second, cur, out);
        cur.pop_back();
    }
}

std::vector<Monomial> monomials_of_degree(const std::vector<std::pair<GenId, int>>& gens, int d)
{
    std::vector<Monomial> out;
    Monomial cur;
    monomials_rec(gens, 0, d, cur, out);
    for (Monomial& m : out) std::sort(m.begin(), m.end());
    std::sort(out.begin(), out.end());
    return out;
}

// echelonized sparse row space over exact rationals
template <class Key>
class SparseSpan {
public:
    using Row = std::map<Key, Rat>;

    Row reduce(Row v) const
    {
        while (!v.empty()) {
            auto lead = v.begin();
            auto it = rows_.find(lead->first);
            if (it == rows_.end()) return v;
            Rat c = lead->second;
            for (const auto& [k, rv] : it->second) {
                auto [pos, fresh] = v.try_emplace(k, 0);
                (void)fresh;
                pos->second -= c * rv;
                if (pos->second == 0) v.erase(pos);
            }
        }
        return v;
    }

    void add(Row v)
    {
        v = reduce(std::move(v));
        if (v.empty()) return;
        Rat lead = v.begin()->second;
        for (auto& [k, c] : v) c /= lead;
        Key pivot = v.begin()->first;
        rows_.emplace(std::move(pivot), std::move(v));
    }

    bool contains(Row v) const { return reduce(std::move(v)).empty(); }
    std::size_t dim() const { return rows_.size(); }

private:
    std::map<Key, Row> rows_; // pivot key -> normalized row
};

using PairKey = std::pair<Monomial, Monomial>;

std::map<Monomial, Rat> to_row(const AlgebraElement& a) { return a.terms(); }
std::map<PairKey, Rat> to_row(const TensorElement& t) { return t.terms(); }

TensorElement slice_total_degree(const GeneratorTable& table, const TensorElement& t, int n)
{
    TensorElement out;
    for (const auto& [k, c] : t.terms())
        if (table.monomial_grade(k.first) + table.monomial_grade(k.second) == n) out.add(k.first, k.second, c);
    return out;
}

// span of sum_k I_k (x) H_{n-k} (+ H_k (x) I_{n-k} unless left_only)
SparseSpan<PairKey> tensor_ideal_span(const IdealBasis& basis, int n, bool left_only)
{
    SparseSpan<PairKey> span;
    for (int k = 0; k <= n; ++k) {
        std::vector<Monomial> right = monomials_of_degree(basis.universe, n - k);
        for (const AlgebraElement& s : basis.span.at(k))
            for (const Monomial& m : right) span.add(to_row(TensorElement::tensor(s, AlgebraElement::monomial(m))));
        if (!left_only) {
            std::vector<Monomial> left = monomials_of_degree(basis.universe, k);
            for (const AlgebraElement& s : basis.span.at(n - k))
                for (const Monomial& m : left) span.add(to_row(TensorElement::tensor(AlgebraElement::monomial(m), s)));
        }
    }
    return span;
}

} // namespace

HSeries hseries_one(int max_degree)
{
    HSeries s(max_degree, AlgebraElement());
    s.at(0) = AlgebraElement::unit();
    return s;
}

HSeries green(GeneratorTable& table, const GraphCatalog& catalog, Residue r)
{
    (void)table;
    HSeries s = hseries_one(catalog.max_loops());
    Rat sign = r.is_vertex ? 1 : -1;
    for (int loops = 1; loops <= catalog.max_loops(); ++loops)
        for (const CatalogEntry& e : catalog.at(r, loops))
            s.at(loops) += AlgebraElement::generator(e.id, sign * e.green_weight);
    return s;
}

HSeries x_element(GeneratorTable& table, const GraphCatalog& catalog, int vertex_kind)
{
    const Theory& th = table.theory();
    if (th.total_valence(vertex_kind) < 3) throw Error(ErrorKind::Domain, "vertex valence below 3");
    AlgebraElement unit = AlgebraElement::unit();
    HSeries x = green(table, catalog, Residue{true, vertex_kind});
    for (std::size_t e = 0; e < th.edge_kinds.size(); ++e) {
        int ne = th.leg_count(Residue{true, vertex_kind}, static_cast<int>(e));
        if (ne == 0) continue;
        HSeries ge = green(table, catalog, Residue{false, static_cast<int>(e)});
        x = x * ge.pow(Rat(-ne, 2), unit);
    }
    return x.pow(Rat(1, th.total_valence(vertex_kind) - 2), unit);
}

TensorElement coproduct_green_direct(GeneratorTable& table, const GraphCatalog& catalog, Residue r)
{
    HSeries g = green(table, catalog, r);
    TensorElement out;
    for (int n = 0; n <= catalog.max_loops(); ++n) out += coproduct(table, g.at(n));
    return out;
}

namespace {

struct GammaSlot {
    Rat coeff;            // signed coefficient of the right factor in G^r
    ResidueCounts counts; // m-counts; the bare edge carries m_e = -1
    Monomial right;
    int loops = 0;
};

std::vector<GammaSlot> gamma_slots(GeneratorTable& table, const GraphCatalog& catalog, Residue r)
{
    const Theory& th = table.theory();
    std::vector<GammaSlot> slots;
    GammaSlot bare;
    bare.coeff = 1;
    bare.counts.vertex.assign(th.vertex_kinds.size(), 0);
    bare.counts.edge.assign(th.edge_kinds.size(), 0);
    if (r.is_vertex)
        bare.counts.vertex[r.index] = 1;
    else
        bare.counts.edge[r.index] = -1;
    slots.push_back(std::move(bare));
    Rat sign = r.is_vertex ? 1 : -1;
    for (int loops = 1; loops <= catalog.max_loops(); ++loops)
        for (const CatalogEntry& e : catalog.at(r, loops)) {
            GammaSlot s;
            s.coeff = sign * e.green_weight;
            s.counts = component_counts(table.info(e.id).graph);
            s.right = {e.id};
            s.loops = loops;
            slots.push_back(std::move(s));
        }
    return slots;
}

} // namespace

TensorElement coproduct_green_prop(GeneratorTable& table, const GraphCatalog& catalog, Residue r)
{
    const Theory& th = table.theory();
    std::vector<FlatEntry> gens = flatten(table, catalog);
    TensorElement out;

    for (const GammaSlot& slot : gamma_slots(table, catalog, r)) {
        int budget = catalog.max_loops() - slot.loops;
        Monomial chosen;
        std::vector<Residue> parts;
        std::function<void(std::size_t, int, Rat)> rec = [&](std::size_t start, int remaining, Rat umult) {
            Int places = count_insertion_places(th, slot.counts, parts);
            if (places != 0) {
                Monomial left = chosen;
                std::sort(left.begin(), left.end());
                out.add(left, slot.right, Rat(places) * umult * slot.coeff);
            }
            for (std::size_t i = start; i < gens.size(); ++i) {
                if (gens[i].loops > remaining) continue;
                int already = static_cast<int>(std::count(chosen.begin(), chosen.end(), gens[i].id));
                chosen.push_back(gens[i].id);
                parts.push_back(gens[i].residue);
                // per-class weight w^k / k!
                rec(i, remaining - gens[i].loops, umult * gens[i].weight / (already + 1));
                parts.pop_back();
                chosen.pop_back();
            }
        };
        rec(0, budget, Rat(1));
    }
    return out;
}

TensorElement coproduct_green_enhanced(GeneratorTable& table, const GraphCatalog& catalog, Residue r)
{
    const Theory& th = table.theory();
    AlgebraElement unit = AlgebraElement::unit();
    int lmax = catalog.max_loops();

    std::map<int, HSeries> gv, ge;
    for (std::size_t v = 0; v < th.vertex_kinds.size(); ++v)
        gv.emplace(static_cast<int>(v), green(table, catalog, Residue{true, static_cast<int>(v)}));
    for (std::size_t e = 0; e < th.edge_kinds.size(); ++e)
        ge.emplace(static_cast<int>(e), green(table, catalog, Residue{false, static_cast<int>(e)}));

    TensorElement out;
    for (const GammaSlot& slot : gamma_slots(table, catalog, r)) {
        HSeries left = hseries_one(lmax);
        for (std::size_t v = 0; v < th.vertex_kinds.size(); ++v)
            if (int m = slot.counts.vertex[v]; m != 0) left = left * gv.at(static_cast<int>(v)).pow(Rat(m), unit);
        for (std::size_t e = 0; e < th.edge_kinds.size(); ++e)
            if (int m = slot.counts.edge[e]; m != 0) left = left * ge.at(static_cast<int>(e)).pow(Rat(-m), unit);
        AlgebraElement right = AlgebraElement::monomial(slot.right, slot.coeff);
        for (int d = 0; d + slot.loops <= lmax; ++d) out += TensorElement::tensor(left.at(d), right);
    }
    return out;
}

IdealBasis ideal_basis(GeneratorTable& table, const GraphCatalog& catalog, int max_degree)
{
    const Theory& th = table.theory();
    if (max_degree > catalog.max_loops()) throw Error(ErrorKind::Domain, "degree exceeds the catalog depth");
    IdealBasis basis;
    basis.max_degree = max_degree;
    basis.span.assign(max_degree + 1, {});
    for (const FlatEntry& e : flatten(table, catalog)) basis.universe.push_back({e.id, e.loops});
    if (th.vertex_kinds.size() < 2) return basis; // I = 0

    AlgebraElement unit = AlgebraElement::unit();
    std::map<int, HSeries> gv, ge;
    std::map<int, HSeries> xv;
    for (std::size_t v = 0; v < th.vertex_kinds.size(); ++v) {
        gv.emplace(static_cast<int>(v), green(table, catalog, Residue{true, static_cast<int>(v)}));
        xv.emplace(static_cast<int>(v), x_element(table, catalog, static_cast<int>(v)));
    }
    for (std::size_t e = 0; e < th.edge_kinds.size(); ++e)
        ge.emplace(static_cast<int>(e), green(table, catalog, Residue{false, static_cast<int>(e)}));

    for (std::size_t v = 0; v < th.vertex_kinds.size(); ++v) {
        for (std::size_t w = v + 1; w < th.vertex_kinds.size(); ++w) {
            int iv = static_cast<int>(v), iw = static_cast<int>(w);
            basis.pairs.push_back({iv, iw});
            basis.gen_x.push_back(xv.at(iv) - xv.at(iw));

            // cross-multiplied denominators of X_v^(N(v)-2)(N(w)-2) - X_w^(...)
            int nv = th.total_valence(iv), nw = th.total_valence(iw);
            HSeries a = gv.at(iv).pow(Rat(nw - 2), unit);
            HSeries b = gv.at(iw).pow(Rat(nv - 2), unit);
            for (std::size_t e = 0; e < th.edge_kinds.size(); ++e) {
                int ie = static_cast<int>(e);
                if (int c = th.leg_count(Residue{true, iw}, ie); c != 0)
                    a = a * ge.at(ie).pow(Rat(c * (nv - 2), 2), unit);
                if (int c = th.leg_count(Residue{true, iv}, ie); c != 0)
                    b = b * ge.at(ie).pow(Rat(c * (nw - 2), 2), unit);
            }
            basis.gen_poly.push_back(a - b);
        }
    }

    for (int n = 1; n <= max_degree; ++n)
        for (const HSeries& gen : basis.gen_poly)
            for (int k = 1; k <= n; ++k) {
                if (gen.at(k).is_zero()) continue;
                for (const Monomial& m : monomials_of_degree(basis.universe, n - k))
                    basis.span[n].push_back(AlgebraElement::monomial(m) * gen.at(k));
            }
    return basis;
}

bool ideal_membership(GeneratorTable& table, const IdealBasis& basis, const AlgebraElement& a)
{
    if (a.is_zero()) return true;
    std::map<int, AlgebraElement> by_degree;
    for (const auto& [m, c] : a.terms()) by_degree[table.monomial_grade(m)].add(m, c);
    for (const auto& [n, part] : by_degree) {
        if (n > basis.max_degree) throw Error(ErrorKind::Domain, "degree exceeds the ideal basis depth");
        SparseSpan<Monomial> span;
        for (const AlgebraElement& s : basis.span.at(n)) span.add(to_row(s));
        if (!span.contains(to_row(part))) return false;
    }
    return true;
}

bool tensor_membership(GeneratorTable& table, const IdealBasis& basis, const TensorElement& t, bool left_only)
{
    if (t.is_zero()) return true;
    std::map<int, TensorElement> by_degree;
    for (const auto& [k, c] : t.terms())
        by_degree[table.monomial_grade(k.first) + table.monomial_grade(k.second)].add(k.first, k.second, c);
    for (const auto& [n, part] : by_degree) {
        if (n > basis.max_degree) throw Error(ErrorKind::Domain, "degree exceeds the ideal basis depth");
        SparseSpan<PairKey> span = tensor_ideal_span(basis, n, left_only);
        if (!span.contains(to_row(part))) return false;
    }
    return true;
}

CheckReport check_proposition(GeneratorTable& table, const GraphCatalog& catalog, Residue r)
{
    const std::string name = table.theory().residue_name(r);
    TensorElement direct = coproduct_green_direct(table, catalog, r);
    TensorElement prop = coproduct_green_prop(table, catalog, r);
    TensorElement enh = coproduct_green_enhanced(table, catalog, r);
    CheckReport report;
    for (int n = 0; n <= catalog.max_loops(); ++n) {
        report.add("proposition-vs-direct", name, n,
                   slice_total_degree(table, prop, n) == slice_total_degree(table, direct, n));
        report.add("enhanced-vs-direct", name, n,
                   slice_total_degree(table, enh, n) == slice_total_degree(table, direct, n));
    }
    return report;
}

CheckReport check_hopf_ideal(GeneratorTable& table, const GraphCatalog& catalog, int max_degree)
{
    IdealBasis basis = ideal_basis(table, catalog, max_degree);
    const Theory& th = table.theory();
    CheckReport report;

    std::vector<SparseSpan<Monomial>> ispan(max_degree + 1);
    for (int n = 0; n <= max_degree; ++n)
        for (const AlgebraElement& s : basis.span[n]) ispan[n].add(to_row(s));
    std::vector<SparseSpan<PairKey>> tspan;
    tspan.reserve(max_degree + 1);
    for (int n = 0; n <= max_degree; ++n) tspan.push_back(tensor_ideal_span(basis, n, /*left_only=*/false));

    for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
        std::string subject =
            th.vertex_kinds[basis.pairs[i].first].name + "-" + th.vertex_kinds[basis.pairs[i].second].name;
        for (int style = 0; style < 2; ++style) {
            const HSeries& gen = style == 0 ? basis.gen_x[i] : basis.gen_poly[i];
            std::string label = subject + (style == 0 ? " (X form)" : " (poly form)");
            for (int n = 0; n <= max_degree; ++n) {
                const AlgebraElement& comp = gen.at(n);
                report.add("counit-vanishes", label, n, counit(comp) == 0);
                report.add("antipode-in-ideal", label, n, ispan[n].contains(to_row(antipode(table, comp))));
                report.add("coproduct-in-ideal", label, n, tspan[n].contains(to_row(coproduct(table, comp))));
            }
        }
    }

    // both generator styles span the same degreewise spaces
    for (int n = 1; n <= max_degree; ++n) {
        SparseSpan<Monomial> xspan;
        for (const HSeries& gen : basis.gen_x)
            for (int k = 1; k <= n; ++k) {
                if (gen.at(k).is_zero()) continue;
                for (const Monomial& m : monomials_of_degree(basis.universe, n - k))
                    xspan.add(to_row(AlgebraElement::monomial(m) * gen.at(k)));
            }
        bool x_in_poly = true;
        for (const HSeries& gen : basis.gen_x)
            for (int k = 1; x_in_poly && k <= n; ++k) {
                if (gen.at(k).is_zero()) continue;
                for (const Monomial& m : monomials_of_degree(basis.universe, n - k))
                    if (!ispan[n].contains(to_row(AlgebraElement::monomial(m) * gen.at(k)))) {
                        x_in_poly = false;
                        break;
                    }
            }
        bool poly_in_x = true;
        for (const AlgebraElement& s : basis.span[n])
            if (!xspan.contains(to_row(s))) {
                poly_in_x = false;
                break;
            }
        report.add("generator-styles-equal-span", "degree", n, x_in_poly && poly_in_x);
    }
    return report;
}

CheckReport check_closed_coproduct(GeneratorTable& table, const GraphCatalog& catalog, Residue r, int max_degree)
{
    const Theory& th = table.theory();
    IdealBasis basis = ideal_basis(table, catalog, max_degree);
    AlgebraElement unit = AlgebraElement::unit();
    int lmax = catalog.max_loops();
    int nres = residue_leg_total(th, r);

    TensorElement direct = coproduct_green_direct(table, catalog, r);
    HSeries g = green(table, catalog, r);

    HSeries prefactor = hseries_one(lmax);
    for (std::size_t e = 0; e < th.edge_kinds.size(); ++e) {
        int ne = th.leg_count(r, static_cast<int>(e));
        if (ne == 0) continue;
        prefactor = prefactor * green(table, catalog, Residue{false, static_cast<int>(e)}).pow(Rat(ne, 2), unit);
    }

    std::vector<SparseSpan<PairKey>> left_span;
    left_span.reserve(max_degree + 1);
    for (int n = 0; n <= max_degree; ++n) left_span.push_back(tensor_ideal_span(basis, n, /*left_only=*/true));

    CheckReport report;
    for (std::size_t v = 0; v < th.vertex_kinds.size(); ++v) {
        HSeries xv = x_element(table, catalog, static_cast<int>(v));
        TensorElement rhs;
        for (int L = 0; L <= lmax; ++L) {
            HSeries left = prefactor * xv.pow(Rat(2 * L + nres - 2), unit);
            for (int d = 0; d + L <= lmax; ++d) rhs += TensorElement::tensor(left.at(d), g.at(L));
        }
        TensorElement residual = direct - rhs;
        std::string subject = th.residue_name(r) + " ref " + th.vertex_kinds[v].name;
        for (int n = 0; n <= max_degree; ++n)
            report.add("closed-coproduct-residual", subject, n,
                       left_span[n].contains(to_row(slice_total_degree(table, residual, n))));
    }
    return report;
}

std::string render_report(const CheckReport& report)
{
    std::ostringstream os;
    for (const CheckRecord& r : report.records) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.check << " " << r.subject;
        if (r.degree >= 0) os << " degree " << r.degree;
        os << "\n";
    }
    return os.str();
}

} // namespace feynhopf
