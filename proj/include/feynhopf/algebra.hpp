#ifndef FEYNHOPF_ALGEBRA_HPP
#define FEYNHOPF_ALGEBRA_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feynhopf/graph.hpp"

namespace feynhopf {

using GenId = int;
using Monomial = std::vector<GenId>; // sorted generator ids; empty = 1

Monomial monomial_product(const Monomial& a, const Monomial& b);

struct GeneratorInfo {
    FeynmanGraph graph;
    std::string key;
    int loops = 0;
    std::optional<Residue> residue;
    std::string name;
};

class TensorElement;

// Interning registry for connected 1PI generators, keyed by canonical form.
// Also memoizes per-generator coproducts and antipodes.
class GeneratorTable {
public:
    explicit GeneratorTable(std::shared_ptr<const Theory> theory) : theory_(std::move(theory)) {}

    GenId intern(const FeynmanGraph& g);
    const GeneratorInfo& info(GenId id) const { return gens_.at(id); }
    std::optional<GenId> find_key(const std::string& key) const;
    void set_name(GenId id, const std::string& name) { gens_.at(id).name = name; }
    std::size_t size() const { return gens_.size(); }
    const Theory& theory() const { return *theory_; }
    const std::shared_ptr<const Theory>& theory_ptr() const { return theory_; }

    int monomial_grade(const Monomial& m) const;

private:
    friend TensorElement gen_coproduct(GeneratorTable&, GenId);
    friend class HopfCacheAccess;

    std::shared_ptr<const Theory> theory_;
    std::vector<GeneratorInfo> gens_;
    std::map<std::string, GenId> by_key_;
    std::mutex mutex_;
    std::map<GenId, std::shared_ptr<const void>> delta_cache_;
    std::map<GenId, std::shared_ptr<const void>> antipode_cache_;
};

// Exact-rational linear combination of monomials.
class AlgebraElement {
public:
    AlgebraElement() = default;
    static AlgebraElement unit(Rat c = 1);
    static AlgebraElement generator(GenId id, Rat c = 1);
    static AlgebraElement monomial(Monomial m, Rat c = 1);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rat>& terms() const { return terms_; }
    void add(const Monomial& m, const Rat& c);

    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    AlgebraElement& operator*=(const Rat& c);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(AlgebraElement a, const Rat& c) { return a *= c; }
    friend AlgebraElement operator*(const Rat& c, AlgebraElement a) { return a *= c; }
    friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

private:
    std::map<Monomial, Rat> terms_;
};

// Exact-rational element of H (x) H.
class TensorElement {
public:
    using Key = std::pair<Monomial, Monomial>;

    TensorElement() = default;
    static TensorElement tensor(const AlgebraElement& left, const AlgebraElement& right);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, Rat>& terms() const { return terms_; }
    void add(const Monomial& l, const Monomial& r, const Rat& c);

    TensorElement& operator+=(const TensorElement& o);
    TensorElement& operator-=(const TensorElement& o);
    TensorElement& operator*=(const Rat& c);
    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
    friend TensorElement operator*(const TensorElement& a, const TensorElement& b); // (a(x)b)(c(x)d)=ac(x)bd
    friend TensorElement operator*(TensorElement a, const Rat& c) { return a *= c; }
    friend bool operator==(const TensorElement&, const TensorElement&) = default;

private:
    std::map<Key, Rat> terms_;
};

std::string monomial_to_string(const GeneratorTable& table, const Monomial& m);
std::string to_string(const GeneratorTable& table, const AlgebraElement& a);
std::string to_string(const GeneratorTable& table, const TensorElement& t);

} // namespace feynhopf

#endif
