#ifndef FEYNHOPF_GENERATE_HPP
#define FEYNHOPF_GENERATE_HPP

#include <cstdint>
#include <map>

#include "feynhopf/algebra.hpp"

namespace feynhopf {

struct GenerateOptions {
    std::uint64_t candidate_cap = 10'000'000; // matchings examined before giving up
    int jobs = 0;                             // 0 = hardware concurrency
};

struct CatalogEntry {
    GenId id = -1;
    Int sym;      // leg-fixing automorphism order
    Int variants; // leg-pinned isomorphism classes inside this merged class
    Rat green_weight; // variants / sym; the coefficient magnitude in G^r
};

// All connected 1PI isomorphism classes per (residue, loop order).
class GraphCatalog {
public:
    GraphCatalog() = default;
    int max_loops() const { return max_loops_; }
    const std::vector<CatalogEntry>& at(Residue r, int loops) const;
    bool has(Residue r, int loops) const;

private:
    friend GraphCatalog build_catalog(GeneratorTable& table, int max_loops, const GenerateOptions& opts);
    int max_loops_ = 0;
    std::map<std::pair<Residue, int>, std::vector<CatalogEntry>> entries_;
};

// All connected 1PI graphs with residue r and the given loop order, in
// canonical-key order. Enumerates vertex multisets solving
// sum (N(v)-2) m_v = 2L + N(r) - 2, pairs half-edge slots, filters, and
// deduplicates by canonical form.
std::vector<FeynmanGraph> generate(std::shared_ptr<const Theory> theory, Residue r, int loops,
                                   const GenerateOptions& opts = {});

GraphCatalog build_catalog(GeneratorTable& table, int max_loops, const GenerateOptions& opts = {});

} // namespace feynhopf

#endif
