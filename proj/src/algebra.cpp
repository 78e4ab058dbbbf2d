#include "feynhopf/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace feynhopf {

Monomial monomial_product(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

GenId GeneratorTable::intern(const FeynmanGraph& g)
{
    if (g.empty()) throw Error(ErrorKind::Domain, "the unit is not a generator");
    const std::string& key = g.canonical_key();
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    GeneratorInfo info{g, key, g.loop_number(), std::nullopt, ""};
    try {
        info.residue = g.residue();
    } catch (const Error&) {
        // graphs without a residue in R may still be registered (CLI inputs)
    }
    GenId id = static_cast<GenId>(gens_.size());
    info.name = "g" + std::to_string(id);
    gens_.push_back(std::move(info));
    by_key_.emplace(key, id);
    return id;
}

std::optional<GenId> GeneratorTable::find_key(const std::string& key) const
{
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

int GeneratorTable::monomial_grade(const Monomial& m) const
{
    int g = 0;
    for (GenId id : m) g += gens_.at(id).loops;
    return g;
}

AlgebraElement AlgebraElement::unit(Rat c) { return monomial({}, std::move(c)); }

AlgebraElement AlgebraElement::generator(GenId id, Rat c) { return monomial({id}, std::move(c)); }

AlgebraElement AlgebraElement::monomial(Monomial m, Rat c)
{
    AlgebraElement a;
    a.add(m, c);
    return a;
}

void AlgebraElement::add(const Monomial& m, const Rat& c)
{
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o)
{
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o)
{
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Rat& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b)
{
    AlgebraElement out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add(monomial_product(ma, mb), ca * cb);
    return out;
}

TensorElement TensorElement::tensor(const AlgebraElement& left, const AlgebraElement& right)
{
    TensorElement t;
    for (const auto& [ml, cl] : left.terms())
        for (const auto& [mr, cr] : right.terms()) t.add(ml, mr, cl * cr);
    return t;
}

void TensorElement::add(const Monomial& l, const Monomial& r, const Rat& c)
{
    if (c == 0) return;
    Key k{l, r};
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

TensorElement& TensorElement::operator+=(const TensorElement& o)
{
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o)
{
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
}

TensorElement& TensorElement::operator*=(const Rat& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

TensorElement operator*(const TensorElement& a, const TensorElement& b)
{
    TensorElement out;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_)
            out.add(monomial_product(ka.first, kb.first), monomial_product(ka.second, kb.second), ca * cb);
    return out;
}

std::string monomial_to_string(const GeneratorTable& table, const Monomial& m)
{
    if (m.empty()) return "[1]";
    std::vector<std::string> names;
    for (GenId id : m) names.push_back(table.info(id).name);
    std::sort(names.begin(), names.end());
    std::string out = "[";
    for (std::size_t i = 0; i < names.size(); ++i) out += (i ? " " : "") + names[i];
    return out + "]";
}

namespace {

template <class Terms, class Render>
std::string render_sum(const Terms& terms, Render render)
{
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms) {
        out += (first ? "" : " + ") + rat_to_string(c) + " * " + render(k);
        first = false;
    }
    return out;
}

} // namespace

std::string to_string(const GeneratorTable& table, const AlgebraElement& a)
{
    return render_sum(a.terms(), [&](const Monomial& m) { return monomial_to_string(table, m); });
}

std::string to_string(const GeneratorTable& table, const TensorElement& t)
{
    return render_sum(t.terms(), [&](const TensorElement::Key& k) {
        return monomial_to_string(table, k.first) + " (x) " + monomial_to_string(table, k.second);
    });
}

} // namespace feynhopf
