#include "support/oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace oracles {

using namespace feynhopf;

namespace {

struct LegColor {
    int kind;
    int role;
    int rank; // within the component, by label order
    friend auto operator<=>(const LegColor&, const LegColor&) = default;
};

std::vector<int> component_ids(const FeynmanGraph& g)
{
    int nv = static_cast<int>(g.vertices().size());
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const GraphEdge& e : g.edges()) parent[find(e.tail)] = find(e.head);
    std::vector<int> comp(nv);
    std::map<int, int> dense;
    for (int v = 0; v < nv; ++v) comp[v] = dense.emplace(find(v), static_cast<int>(dense.size())).first->second;
    return comp;
}

} // namespace

Int brute_force_sym(const FeynmanGraph& g)
{
    if (g.empty()) return 1;
    const Theory& th = g.theory();
    const auto& V = g.vertices();
    const auto& E = g.edges();
    int nv = static_cast<int>(V.size());

    std::vector<int> comp = component_ids(g);

    // leg colors per vertex: (kind, role, rank-in-component); externals()
    // is sorted by label, so rank = running index per component
    std::vector<std::vector<LegColor>> legs(nv);
    std::map<int, int> next_rank;
    for (const ExternalLeg& l : g.externals()) {
        int c = comp[l.vertex];
        legs[l.vertex].push_back({l.kind, static_cast<int>(l.role), next_rank[c]++});
    }
    for (auto& ls : legs) std::sort(ls.begin(), ls.end());

    // vertex permutation candidates: same kind and same leg color multiset
    std::vector<std::vector<int>> cand(nv);
    for (int v = 0; v < nv; ++v)
        for (int w = 0; w < nv; ++w)
            if (V[v].kind == V[w].kind && legs[v] == legs[w]) cand[v].push_back(w);

    std::vector<int> sigma(nv, -1);
    std::vector<char> vused(nv, 0);
    Int total = 0;

    int ne = static_cast<int>(E.size());
    std::vector<int> eimage(ne, -1);
    std::vector<char> eused(ne, 0);

    // with sigma fixed, assign edge images and count half-edge completions
    std::function<Int(int)> assign_edges = [&](int i) -> Int {
        if (i == ne) return 1;
        const GraphEdge& e = E[i];
        bool oriented = th.edge_kinds[e.kind].oriented;
        Int sum = 0;
        for (int j = 0; j < ne; ++j) {
            if (eused[j]) continue;
            const GraphEdge& f = E[j];
            if (f.kind != e.kind) continue;
            bool self = e.tail == e.head;
            if (self != (f.tail == f.head)) continue;
            Int ways = 0;
            if (self) {
                if (sigma[e.tail] != f.tail) continue;
                // both half assignments; a flip maps the tail half to the
                // head half, which is only role-preserving when unoriented
                ways = oriented ? 1 : 2;
            } else if (oriented) {
                if (sigma[e.tail] != f.tail || sigma[e.head] != f.head) continue;
                ways = 1;
            } else {
                bool straight = sigma[e.tail] == f.tail && sigma[e.head] == f.head;
                bool flipped = sigma[e.tail] == f.head && sigma[e.head] == f.tail;
                if (!straight && !flipped) continue;
                // with distinct endpoints the half assignment is forced by sigma
                ways = 1;
            }
            eused[j] = 1;
            eimage[i] = j;
            sum += ways * assign_edges(i + 1);
            eused[j] = 0;
            eimage[i] = -1;
        }
        return sum;
    };

    std::function<void(int)> assign_vertices = [&](int v) {
        if (v == nv) {
            total += assign_edges(0);
            return;
        }
        for (int w : cand[v]) {
            if (vused[w]) continue;
            sigma[v] = w;
            vused[w] = 1;
            assign_vertices(v + 1);
            vused[w] = 0;
            sigma[v] = -1;
        }
    };
    assign_vertices(0);
    return total;
}

Int brute_force_insertions(const FeynmanGraph& big, const std::vector<Residue>& parts)
{
    const auto& V = big.vertices();
    std::vector<char> vused(V.size(), 0);
    std::map<int, int> extra_slots; // edge kind -> inserted edge parts so far
    std::map<int, int> base_slots;
    for (const GraphEdge& e : big.edges()) base_slots[e.kind]++;

    std::function<Int(std::size_t)> rec = [&](std::size_t i) -> Int {
        if (i == parts.size()) return 1;
        Residue r = parts[i];
        Int sum = 0;
        if (r.is_vertex) {
            for (std::size_t v = 0; v < V.size(); ++v) {
                if (vused[v] || V[v].kind != r.index) continue;
                vused[v] = 1;
                sum += rec(i + 1);
                vused[v] = 0;
            }
        } else {
            int slots = base_slots[r.index] + extra_slots[r.index];
            for (int s = 0; s < slots; ++s) {
                extra_slots[r.index]++;
                sum += rec(i + 1);
                extra_slots[r.index]--;
            }
        }
        return sum;
    };
    return rec(0);
}

namespace {

struct PairSig {
    int kind;
    int dir; // 0 plain, 1 low->high, 2 high->low, 3 self plain, 4 self directed
    friend auto operator<=>(const PairSig&, const PairSig&) = default;
};

std::map<std::pair<int, int>, std::vector<PairSig>> pair_map(const FeynmanGraph& g)
{
    std::map<std::pair<int, int>, std::vector<PairSig>> m;
    for (const GraphEdge& e : g.edges()) {
        bool oriented = g.theory().edge_kinds[e.kind].oriented;
        int a = std::min(e.tail, e.head), b = std::max(e.tail, e.head);
        int dir;
        if (a == b)
            dir = oriented ? 4 : 3;
        else if (!oriented)
            dir = 0;
        else
            dir = e.tail == a ? 1 : 2;
        m[{a, b}].push_back({e.kind, dir});
    }
    for (auto& [k, v] : m) std::sort(v.begin(), v.end());
    return m;
}

std::vector<std::vector<std::pair<LegColor, int>>> merged_leg_counts(const FeynmanGraph& g)
{
    std::vector<std::map<LegColor, int>> acc(g.vertices().size());
    for (const ExternalLeg& l : g.externals()) acc[l.vertex][{l.kind, static_cast<int>(l.role), 0}]++;
    std::vector<std::vector<std::pair<LegColor, int>>> out(acc.size());
    for (std::size_t v = 0; v < acc.size(); ++v) out[v] = {acc[v].begin(), acc[v].end()};
    return out;
}

} // namespace

bool brute_force_isomorphic(const FeynmanGraph& a, const FeynmanGraph& b)
{
    if (a.vertices().size() != b.vertices().size() || a.edges().size() != b.edges().size() ||
        a.externals().size() != b.externals().size())
        return false;
    int nv = static_cast<int>(a.vertices().size());
    auto legs_a = merged_leg_counts(a), legs_b = merged_leg_counts(b);
    auto pm_a = pair_map(a), pm_b = pair_map(b);

    auto profile = [](const std::map<std::pair<int, int>, std::vector<PairSig>>& pm, int u, int v) {
        auto it = pm.find({std::min(u, v), std::max(u, v)});
        std::vector<PairSig> out = it == pm.end() ? std::vector<PairSig>{} : it->second;
        if (u > v)
            for (auto& s : out)
                if (s.dir == 1 || s.dir == 2) s.dir = 3 - s.dir;
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<int> sigma(nv, -1);
    std::vector<char> used(nv, 0);
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == nv) return true;
        for (int w = 0; w < nv; ++w) {
            if (used[w]) continue;
            if (a.vertices()[v].kind != b.vertices()[w].kind) continue;
            if (legs_a[v] != legs_b[w]) continue;
            bool ok = profile(pm_a, v, v) == profile(pm_b, w, w);
            for (int u = 0; ok && u < v; ++u)
                if (profile(pm_a, v, u) != profile(pm_b, w, sigma[u])) ok = false;
            if (!ok) continue;
            sigma[v] = w;
            used[w] = 1;
            if (rec(v + 1)) return true;
            used[w] = 0;
            sigma[v] = -1;
        }
        return false;
    };
    return nv == 0 ? true : rec(0);
}

namespace {

struct Slot {
    int vertex;
    int kind;
    Role role;
};

// enumerate all multisets of vertex kinds of a given size
void kind_multisets(int kinds, int size, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(cur.size()) == size) {
        out.push_back(cur);
        return;
    }
    for (int k = start; k < kinds; ++k) {
        cur.push_back(k);
        kind_multisets(kinds, size, k, cur, out);
        cur.pop_back();
    }
}

struct Candidate {
    std::vector<int> vkinds;
    std::vector<std::pair<int, int>> leg_at; // leg index -> (vertex, slot index)
    std::vector<std::pair<int, int>> pairs;  // slot pairings
};

} // namespace

std::vector<FeynmanGraph> reference_generate(std::shared_ptr<const Theory> theory, Residue r, int loops)
{
    const Theory& th = *theory;
    std::vector<LegType> rlegs;
    if (r.is_vertex) {
        rlegs = th.vertex_kinds[r.index].legs;
    } else {
        if (th.edge_kinds[r.index].oriented) {
            rlegs.push_back({r.index, Role::In});
            rlegs.push_back({r.index, Role::Out});
        } else {
            rlegs.push_back({r.index, Role::Plain});
            rlegs.push_back({r.index, Role::Plain});
        }
    }
    int nlegs = static_cast<int>(rlegs.size());
    int max_nv = 2 * loops + nlegs - 2; // valence >= 3 forces this many at most

    std::vector<FeynmanGraph> kept;
    for (int nv = 1; nv <= max_nv; ++nv) {
        std::vector<std::vector<int>> multisets;
        std::vector<int> cur;
        kind_multisets(static_cast<int>(th.vertex_kinds.size()), nv, 0, cur, multisets);
        for (const std::vector<int>& vkinds : multisets) {
            std::vector<Slot> slots;
            for (int v = 0; v < nv; ++v)
                for (const LegType& l : th.vertex_kinds[vkinds[v]].legs)
                    slots.push_back({v, l.edge_kind, l.role});
            // edge count bookkeeping: slots - legs must be even and yield the loop count
            int internal_halves = static_cast<int>(slots.size()) - nlegs;
            if (internal_halves < 0 || internal_halves % 2 != 0) continue;
            if (internal_halves / 2 - nv + 1 != loops) continue; // connected graphs only

            std::vector<int> leg_slot(nlegs, -1);
            std::vector<char> taken(slots.size(), 0);

            std::function<void(int)> place_legs;
            std::function<void(std::vector<std::pair<int, int>>&)> match_slots;

            auto process_matching = [&](const std::vector<std::pair<int, int>>& pairs) {
                // cheap filters on raw data before building a graph
                std::vector<int> parent(nv);
                std::iota(parent.begin(), parent.end(), 0);
                std::function<int(int)> find = [&](int x) {
                    while (parent[x] != x) x = parent[x] = parent[parent[x]];
                    return x;
                };
                for (auto& [s1, s2] : pairs) parent[find(slots[s1].vertex)] = find(slots[s2].vertex);
                int roots = 0;
                for (int v = 0; v < nv; ++v)
                    if (find(v) == v) ++roots;
                if (roots != 1) return;
                // 1PI: dropping any non-self pair keeps it connected
                for (std::size_t skip = 0; skip < pairs.size(); ++skip) {
                    if (slots[pairs[skip].first].vertex == slots[pairs[skip].second].vertex) continue;
                    std::iota(parent.begin(), parent.end(), 0);
                    for (std::size_t i = 0; i < pairs.size(); ++i)
                        if (i != skip) parent[find(slots[pairs[i].first].vertex)] = find(slots[pairs[i].second].vertex);
                    int rr = 0;
                    for (int v = 0; v < nv; ++v)
                        if (find(v) == v) ++rr;
                    if (rr != 1) return;
                }
                if (pairs.empty()) return; // trees/no-loop handled by loop equation anyway

                FeynmanGraph g(theory);
                for (int v = 0; v < nv; ++v) g.add_vertex("w" + std::to_string(v), vkinds[v]);
                int eid = 0;
                for (auto& [s1, s2] : pairs) {
                    int tail, head;
                    if (th.edge_kinds[slots[s1].kind].oriented) {
                        tail = slots[s1].role == Role::Out ? slots[s1].vertex : slots[s2].vertex;
                        head = slots[s1].role == Role::Out ? slots[s2].vertex : slots[s1].vertex;
                    } else {
                        tail = slots[s1].vertex;
                        head = slots[s2].vertex;
                    }
                    g.add_edge("e" + std::to_string(eid++), slots[s1].kind, tail, head);
                }
                for (int l = 0; l < nlegs; ++l)
                    g.add_external("x" + std::to_string(l), rlegs[l].edge_kind, rlegs[l].role,
                                   slots[leg_slot[l]].vertex);
                g.finalize();
                for (const FeynmanGraph& h : kept)
                    if (brute_force_isomorphic(g, h)) return;
                kept.push_back(std::move(g));
            };

            std::vector<std::pair<int, int>> pairs;
            std::function<void()> match_rec = [&]() {
                int first = -1;
                for (std::size_t s = 0; s < slots.size(); ++s)
                    if (!taken[s]) {
                        first = static_cast<int>(s);
                        break;
                    }
                if (first < 0) {
                    process_matching(pairs);
                    return;
                }
                taken[first] = 1;
                for (std::size_t s = first + 1; s < slots.size(); ++s) {
                    if (taken[s]) continue;
                    if (slots[s].kind != slots[first].kind) continue;
                    bool oriented = th.edge_kinds[slots[s].kind].oriented;
                    if (oriented) {
                        bool ok = (slots[first].role == Role::In && slots[s].role == Role::Out) ||
                                  (slots[first].role == Role::Out && slots[s].role == Role::In);
                        if (!ok) continue;
                    }
                    taken[s] = 1;
                    pairs.push_back({first, static_cast<int>(s)});
                    match_rec();
                    pairs.pop_back();
                    taken[s] = 0;
                }
                taken[first] = 0;
            };

            place_legs = [&](int l) {
                if (l == nlegs) {
                    match_rec();
                    return;
                }
                for (std::size_t s = 0; s < slots.size(); ++s) {
                    if (taken[s]) continue;
                    if (slots[s].kind != rlegs[l].edge_kind || slots[s].role != rlegs[l].role) continue;
                    taken[s] = 1;
                    leg_slot[l] = static_cast<int>(s);
                    place_legs(l + 1);
                    leg_slot[l] = -1;
                    taken[s] = 0;
                }
            };
            place_legs(0);
        }
    }
    return kept;
}

FeynmanGraph random_relabel(const FeynmanGraph& g, std::mt19937& rng)
{
    int nv = static_cast<int>(g.vertices().size());
    std::vector<int> perm(nv);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng); // old index -> new index

    std::vector<int> order(nv);
    for (int v = 0; v < nv; ++v) order[perm[v]] = v;

    FeynmanGraph out(g.theory_ptr());
    for (int p = 0; p < nv; ++p) {
        int v = order[p];
        out.add_vertex("rv" + std::to_string(rng() % 100000) + "_" + std::to_string(p), g.vertices()[v].kind);
    }
    std::vector<const GraphEdge*> edges;
    for (const GraphEdge& e : g.edges()) edges.push_back(&e);
    std::shuffle(edges.begin(), edges.end(), rng);
    int eid = 0;
    for (const GraphEdge* e : edges) {
        int tail = perm[e->tail], head = perm[e->head];
        if (!g.theory().edge_kinds[e->kind].oriented && (rng() & 1)) std::swap(tail, head);
        out.add_edge("re" + std::to_string(eid++), e->kind, tail, head);
    }
    std::vector<const ExternalLeg*> legs;
    for (const ExternalLeg& l : g.externals()) legs.push_back(&l);
    std::shuffle(legs.begin(), legs.end(), rng);
    int lid = 0;
    for (const ExternalLeg* l : legs) {
        out.add_external("rl" + std::to_string(rng() % 100000) + "_" + std::to_string(lid++), l->kind, l->role,
                         perm[l->vertex]);
    }
    out.finalize();
    return out;
}

} // namespace oracles
