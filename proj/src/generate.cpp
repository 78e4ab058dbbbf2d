#include "feynhopf/generate.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <numeric>
#include <thread>

namespace feynhopf {

namespace {

struct Slot {
    int vertex;
    int kind;
    Role role;
};

// vertex-kind multisets with sum (N(v)-2) m_v == budget
void weighted_multisets(const Theory& th, int budget, int kind, std::vector<int>& counts,
                        std::vector<std::vector<int>>& out)
{
    if (budget == 0) {
        out.push_back(counts);
        return;
    }
    if (kind >= static_cast<int>(th.vertex_kinds.size())) return;
    int w = th.total_valence(kind) - 2;
    for (int m = 0; m * w <= budget; ++m) {
        counts[kind] = m;
        weighted_multisets(th, budget - m * w, kind + 1, counts, out);
    }
    counts[kind] = 0;
}

class MatchingEnumerator {
public:
    MatchingEnumerator(std::shared_ptr<const Theory> theory, Residue r, int loops, std::uint64_t cap,
                       std::atomic<std::uint64_t>& counter)
        : theory_(std::move(theory)), th_(*theory_), loops_(loops), cap_(cap), counter_(counter)
    {
        if (r.is_vertex) {
            rlegs_ = th_.vertex_kinds[r.index].legs;
        } else if (th_.edge_kinds[r.index].oriented) {
            rlegs_ = {{r.index, Role::In}, {r.index, Role::Out}};
        } else {
            rlegs_ = {{r.index, Role::Plain}, {r.index, Role::Plain}};
        }
    }

    // canonical-key -> graph, for one vertex-kind multiset
    std::map<std::string, FeynmanGraph> run(const std::vector<int>& kind_counts)
    {
        slots_.clear();
        vkinds_.clear();
        for (std::size_t k = 0; k < kind_counts.size(); ++k)
            for (int i = 0; i < kind_counts[k]; ++i) vkinds_.push_back(static_cast<int>(k));
        int nv = static_cast<int>(vkinds_.size());
        if (nv == 0) return {};
        for (int v = 0; v < nv; ++v)
            for (const LegType& l : th_.vertex_kinds[vkinds_[v]].legs) slots_.push_back({v, l.edge_kind, l.role});

        int internal = static_cast<int>(slots_.size()) - static_cast<int>(rlegs_.size());
        if (internal < 0 || internal % 2) return {};

        found_.clear();
        seen_labeled_.clear();
        taken_.assign(slots_.size(), 0);
        leg_slot_.assign(rlegs_.size(), -1);
        place_leg(0);
        return std::move(found_);
    }

private:
    void place_leg(std::size_t l)
    {
        if (l == rlegs_.size()) {
            pairs_.clear();
            match();
            return;
        }
        // identical legs are placed in nondecreasing slot order to avoid
        // enumerating permutations of interchangeable external lines
        std::size_t start = 0;
        if (l > 0 && rlegs_[l] == rlegs_[l - 1]) start = static_cast<std::size_t>(leg_slot_[l - 1]) + 1;
        for (std::size_t s = start; s < slots_.size(); ++s) {
            if (taken_[s]) continue;
            if (slots_[s].kind != rlegs_[l].edge_kind || slots_[s].role != rlegs_[l].role) continue;
            taken_[s] = 1;
            leg_slot_[l] = static_cast<int>(s);
            place_leg(l + 1);
            leg_slot_[l] = -1;
            taken_[s] = 0;
        }
    }

    void match()
    {
        int first = -1;
        for (std::size_t s = 0; s < slots_.size(); ++s)
            if (!taken_[s]) {
                first = static_cast<int>(s);
                break;
            }
        if (first < 0) {
            finish();
            return;
        }
        taken_[first] = 1;
        for (std::size_t s = first + 1; s < slots_.size(); ++s) {
            if (taken_[s]) continue;
            if (slots_[s].kind != slots_[first].kind) continue;
            if (th_.edge_kinds[slots_[s].kind].oriented) {
                bool ok = (slots_[first].role == Role::In && slots_[s].role == Role::Out) ||
                          (slots_[first].role == Role::Out && slots_[s].role == Role::In);
                if (!ok) continue;
            }
            taken_[s] = 1;
            pairs_.push_back({first, static_cast<int>(s)});
            match();
            pairs_.pop_back();
            taken_[s] = 0;
        }
        taken_[first] = 0;
    }

    int find_root(int x)
    {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    // joins all pairs except `skip`; returns the number of components
    int component_count(std::size_t skip)
    {
        int nv = static_cast<int>(vkinds_.size());
        parent_.resize(nv);
        std::iota(parent_.begin(), parent_.end(), 0);
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            if (i == skip) continue;
            parent_[find_root(slots_[pairs_[i].first].vertex)] = find_root(slots_[pairs_[i].second].vertex);
        }
        int roots = 0;
        for (int v = 0; v < nv; ++v)
            if (find_root(v) == v) ++roots;
        return roots;
    }

    void finish()
    {
        if (counter_.fetch_add(1, std::memory_order_relaxed) + 1 > cap_)
            throw Error(ErrorKind::Limit, "candidate matchings exceed the configured cap");
        int nv = static_cast<int>(vkinds_.size());
        // connectivity; the loop order then follows from the multiset equation
        if (component_count(pairs_.size()) != 1) return;
        if (static_cast<int>(pairs_.size()) - nv + 1 != loops_) return;

        // matchings that differ only in which identical slot they used give
        // the same labeled graph; skip exact repeats before any further work
        labeled_.clear();
        for (auto& [s1, s2] : pairs_) {
            int a = slots_[s1].vertex, b = slots_[s2].vertex;
            int dir = 0;
            if (th_.edge_kinds[slots_[s1].kind].oriented) dir = slots_[s1].role == Role::Out ? 1 : 2;
            if (!dir && a > b) std::swap(a, b);
            labeled_.push_back(((a * 64 + b) * 4 + dir) * 64 + slots_[s1].kind);
        }
        std::sort(labeled_.begin(), labeled_.end());
        for (std::size_t l = 0; l < rlegs_.size(); ++l)
            labeled_.push_back(-1 - slots_[leg_slot_[l]].vertex * 16 - static_cast<int>(l));
        if (!seen_labeled_.insert(labeled_).second) return;

        // 1PI: no bridge
        for (std::size_t skip = 0; skip < pairs_.size(); ++skip) {
            if (slots_[pairs_[skip].first].vertex == slots_[pairs_[skip].second].vertex) continue;
            if (component_count(skip) != 1) return;
        }

        FeynmanGraph g(theory_);
        for (int v = 0; v < nv; ++v) g.add_vertex("w" + std::to_string(v), vkinds_[v]);
        int eid = 0;
        for (auto& [s1, s2] : pairs_) {
            int tail, head;
            if (th_.edge_kinds[slots_[s1].kind].oriented) {
                tail = slots_[s1].role == Role::Out ? slots_[s1].vertex : slots_[s2].vertex;
                head = slots_[s1].role == Role::Out ? slots_[s2].vertex : slots_[s1].vertex;
            } else {
                tail = slots_[s1].vertex;
                head = slots_[s2].vertex;
            }
            g.add_edge("e" + std::to_string(eid++), slots_[s1].kind, tail, head);
        }
        for (std::size_t l = 0; l < rlegs_.size(); ++l)
            g.add_external("x" + std::to_string(l), rlegs_[l].edge_kind, rlegs_[l].role,
                           slots_[leg_slot_[l]].vertex);
        g.finalize();
        found_.try_emplace(g.canonical_key(), std::move(g));
    }

    std::shared_ptr<const Theory> theory_;
    const Theory& th_;
    int loops_;
    std::uint64_t cap_;
    std::atomic<std::uint64_t>& counter_;

    std::vector<LegType> rlegs_;
    std::vector<int> vkinds_;
    std::vector<Slot> slots_;
    std::vector<char> taken_;
    std::vector<int> leg_slot_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> parent_;
    std::vector<int> labeled_;
    std::set<std::vector<int>> seen_labeled_;
    std::map<std::string, FeynmanGraph> found_;
};

} // namespace

std::vector<FeynmanGraph> generate(std::shared_ptr<const Theory> theory, Residue r, int loops,
                                   const GenerateOptions& opts)
{
    if (loops < 1) return {};
    const Theory& th = *theory;
    int n_res = 0;
    for (std::size_t e = 0; e < th.edge_kinds.size(); ++e) n_res += th.leg_count(r, static_cast<int>(e));
    int budget = 2 * loops + n_res - 2;
    if (budget < 0) return {};

    std::vector<std::vector<int>> multisets;
    std::vector<int> counts(th.vertex_kinds.size(), 0);
    weighted_multisets(th, budget, 0, counts, multisets);

    std::atomic<std::uint64_t> counter{0};
    unsigned jobs = opts.jobs > 0 ? static_cast<unsigned>(opts.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(std::size_t{1}, multisets.size())));

    std::vector<std::map<std::string, FeynmanGraph>> results(multisets.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        MatchingEnumerator enumerator(theory, r, loops, opts.candidate_cap, counter);
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= multisets.size()) return;
            try {
                results[i] = enumerator.run(multisets[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::map<std::string, FeynmanGraph> merged;
    for (auto& m : results)
        for (auto& [key, g] : m) merged.try_emplace(key, std::move(g));
    std::vector<FeynmanGraph> out;
    out.reserve(merged.size());
    for (auto& [key, g] : merged) out.push_back(std::move(g));
    return out;
}

const std::vector<CatalogEntry>& GraphCatalog::at(Residue r, int loops) const
{
    static const std::vector<CatalogEntry> empty;
    auto it = entries_.find({r, loops});
    return it == entries_.end() ? empty : it->second;
}

bool GraphCatalog::has(Residue r, int loops) const { return entries_.count({r, loops}) > 0; }

GraphCatalog build_catalog(GeneratorTable& table, int max_loops, const GenerateOptions& opts)
{
    if (max_loops < 1) throw Error(ErrorKind::Domain, "catalog needs max loops >= 1");
    GraphCatalog cat;
    cat.max_loops_ = max_loops;
    const Theory& th = table.theory();
    for (Residue r : th.residues()) {
        for (int loops = 1; loops <= max_loops; ++loops) {
            std::vector<CatalogEntry>& list = cat.entries_[{r, loops}];
            int ordinal = 0;
            for (FeynmanGraph& g : generate(table.theory_ptr(), r, loops, opts)) {
                CatalogEntry e;
                e.sym = g.sym();
                e.variants = g.labeled_variant_count();
                e.green_weight = Rat(e.variants) / Rat(e.sym);
                e.id = table.intern(g);
                ++ordinal;
                if (table.info(e.id).name.rfind("g", 0) == 0)
                    table.set_name(e.id, th.residue_name(r) + ".L" + std::to_string(loops) + "." +
                                             std::to_string(ordinal));
                list.push_back(std::move(e));
            }
        }
    }
    return cat;
}

} // namespace feynhopf
