#include "feynhopf/hopf.hpp"

#include <tuple>

namespace feynhopf {

// cache slots in GeneratorTable are type-erased; this is the only accessor
class HopfCacheAccess {
public:
    static std::shared_ptr<const TensorElement> get_delta(GeneratorTable& t, GenId id)
    {
        std::lock_guard<std::mutex> lock(t.mutex_);
        auto it = t.delta_cache_.find(id);
        if (it == t.delta_cache_.end()) return nullptr;
        return std::static_pointer_cast<const TensorElement>(it->second);
    }
    static void put_delta(GeneratorTable& t, GenId id, std::shared_ptr<const TensorElement> v)
    {
        std::lock_guard<std::mutex> lock(t.mutex_);
        t.delta_cache_.try_emplace(id, std::move(v));
    }
    static std::shared_ptr<const AlgebraElement> get_antipode(GeneratorTable& t, GenId id)
    {
        std::lock_guard<std::mutex> lock(t.mutex_);
        auto it = t.antipode_cache_.find(id);
        if (it == t.antipode_cache_.end()) return nullptr;
        return std::static_pointer_cast<const AlgebraElement>(it->second);
    }
    static void put_antipode(GeneratorTable& t, GenId id, std::shared_ptr<const AlgebraElement> v)
    {
        std::lock_guard<std::mutex> lock(t.mutex_);
        t.antipode_cache_.try_emplace(id, std::move(v));
    }
};

Rat counit(const AlgebraElement& a)
{
    auto it = a.terms().find(Monomial{});
    return it == a.terms().end() ? Rat(0) : it->second;
}

AlgebraElement grade(const GeneratorTable& table, const AlgebraElement& a, int n)
{
    AlgebraElement out;
    for (const auto& [m, c] : a.terms())
        if (table.monomial_grade(m) == n) out.add(m, c);
    return out;
}

int max_grade(const GeneratorTable& table, const AlgebraElement& a)
{
    int g = 0;
    for (const auto& [m, c] : a.terms()) g = std::max(g, table.monomial_grade(m));
    return g;
}

TensorElement gen_coproduct(GeneratorTable& table, GenId id)
{
    if (auto cached = HopfCacheAccess::get_delta(table, id)) return *cached;
    FeynmanGraph graph = table.info(id).graph;

    TensorElement d;
    d.add({id}, {}, 1);
    d.add({}, {id}, 1);
    for (const SubgraphOccurrence& occ : enumerate_subgraphs(graph)) {
        Monomial left;
        for (const FeynmanGraph& comp : occ.components) left.push_back(table.intern(comp));
        std::sort(left.begin(), left.end());
        GenId quotient = table.intern(contract(graph, occ));
        d.add(left, {quotient}, 1);
    }
    HopfCacheAccess::put_delta(table, id, std::make_shared<const TensorElement>(d));
    return d;
}

TensorElement coproduct(GeneratorTable& table, const AlgebraElement& a)
{
    TensorElement out;
    for (const auto& [m, c] : a.terms()) {
        TensorElement dm;
        dm.add({}, {}, 1);
        for (GenId id : m) dm = dm * gen_coproduct(table, id);
        dm *= c;
        out += dm;
    }
    return out;
}

AlgebraElement gen_antipode(GeneratorTable& table, GenId id)
{
    if (auto cached = HopfCacheAccess::get_antipode(table, id)) return *cached;
    FeynmanGraph graph = table.info(id).graph;

    AlgebraElement s = AlgebraElement::generator(id, -1);
    for (const SubgraphOccurrence& occ : enumerate_subgraphs(graph)) {
        AlgebraElement part = AlgebraElement::unit();
        for (const FeynmanGraph& comp : occ.components) part = part * gen_antipode(table, table.intern(comp));
        GenId quotient = table.intern(contract(graph, occ));
        part = part * AlgebraElement::generator(quotient);
        s -= part;
    }
    HopfCacheAccess::put_antipode(table, id, std::make_shared<const AlgebraElement>(s));
    return s;
}

AlgebraElement antipode(GeneratorTable& table, const AlgebraElement& a)
{
    AlgebraElement out;
    for (const auto& [m, c] : a.terms()) {
        AlgebraElement sm = AlgebraElement::unit(c);
        for (GenId id : m) sm = sm * gen_antipode(table, id);
        out += sm;
    }
    return out;
}

namespace {

using TripleKey = std::tuple<Monomial, Monomial, Monomial>;
using Triple = std::map<TripleKey, Rat>;

void triple_add(Triple& t, const Monomial& a, const Monomial& b, const Monomial& c, const Rat& v)
{
    if (v == 0) return;
    auto [it, fresh] = t.try_emplace({a, b, c}, v);
    if (!fresh) {
        it->second += v;
        if (it->second == 0) t.erase(it);
    }
}

} // namespace

bool check_coassociativity(GeneratorTable& table, const AlgebraElement& a)
{
    TensorElement d = coproduct(table, a);
    Triple left, right;
    for (const auto& [key, c] : d.terms()) {
        TensorElement dl = coproduct(table, AlgebraElement::monomial(key.first));
        for (const auto& [k2, c2] : dl.terms()) triple_add(left, k2.first, k2.second, key.second, c * c2);
        TensorElement dr = coproduct(table, AlgebraElement::monomial(key.second));
        for (const auto& [k2, c2] : dr.terms()) triple_add(right, key.first, k2.first, k2.second, c * c2);
    }
    return left == right;
}

bool check_counit(GeneratorTable& table, const AlgebraElement& a)
{
    TensorElement d = coproduct(table, a);
    AlgebraElement left, right;
    for (const auto& [key, c] : d.terms()) {
        if (key.second.empty()) left.add(key.first, c);  // (id (x) eps)
        if (key.first.empty()) right.add(key.second, c); // (eps (x) id)
    }
    return left == a && right == a;
}

AlgebraElement contract_antipode_left(GeneratorTable& table, const TensorElement& t)
{
    AlgebraElement out;
    for (const auto& [key, c] : t.terms())
        out += antipode(table, AlgebraElement::monomial(key.first, c)) * AlgebraElement::monomial(key.second);
    return out;
}

AlgebraElement contract_antipode_right(GeneratorTable& table, const TensorElement& t)
{
    AlgebraElement out;
    for (const auto& [key, c] : t.terms())
        out += AlgebraElement::monomial(key.first, c) * antipode(table, AlgebraElement::monomial(key.second));
    return out;
}

bool check_antipode(GeneratorTable& table, const AlgebraElement& a)
{
    TensorElement d = coproduct(table, a);
    AlgebraElement expect = AlgebraElement::unit(counit(a));
    return contract_antipode_left(table, d) == expect && contract_antipode_right(table, d) == expect;
}

bool check_grading(GeneratorTable& table, GenId id)
{
    int n = table.info(id).loops;
    TensorElement d = gen_coproduct(table, id);
    for (const auto& [key, c] : d.terms()) {
        (void)c;
        if (table.monomial_grade(key.first) + table.monomial_grade(key.second) != n) return false;
    }
    return true;
}

} // namespace feynhopf
