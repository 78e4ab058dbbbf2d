#include "feynhopf/subgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace feynhopf {

namespace {

std::vector<int> edge_components(const FeynmanGraph& g, const std::vector<int>& edge_ids)
{
    // component index per chosen edge, joined through shared vertices
    std::map<int, int> vertex_root;
    std::vector<int> parent(edge_ids.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
        const GraphEdge& e = g.edges()[edge_ids[i]];
        for (int v : {e.tail, e.head}) {
            auto [it, fresh] = vertex_root.try_emplace(v, static_cast<int>(i));
            if (!fresh) parent[find(static_cast<int>(i))] = find(it->second);
        }
    }
    std::vector<int> comp(edge_ids.size());
    std::map<int, int> dense;
    for (std::size_t i = 0; i < edge_ids.size(); ++i)
        comp[i] = dense.emplace(find(static_cast<int>(i)), static_cast<int>(dense.size())).first->second;
    return comp;
}

// Builds the standalone graph of one component of an edge subset.
FeynmanGraph induce_component(const FeynmanGraph& g, const std::vector<int>& comp_edges,
                              const std::vector<char>& in_subset)
{
    const Theory& th = g.theory();
    std::set<int> vset;
    for (int e : comp_edges) {
        vset.insert(g.edges()[e].tail);
        vset.insert(g.edges()[e].head);
    }
    FeynmanGraph sub(g.theory_ptr());
    std::map<int, int> vmap;
    for (int v : vset) vmap[v] = sub.add_vertex(g.vertices()[v].id, g.vertices()[v].kind);
    for (int e : comp_edges) {
        const GraphEdge& ed = g.edges()[e];
        sub.add_edge(ed.id, ed.kind, vmap[ed.tail], vmap[ed.head]);
    }
    // External legs get fresh labels: cut half-edges toward the complement
    // first (by ambient edge order), then ambient legs attached inside the
    // component. Leg identity does not enter the isomorphism class.
    int next_leg = 0;
    auto leg_label = [&next_leg] { return "x" + std::to_string(next_leg++); };
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        if (in_subset[e]) continue;
        const GraphEdge& ed = g.edges()[e];
        bool oriented = th.edge_kinds[ed.kind].oriented;
        if (vset.count(ed.tail))
            sub.add_external(leg_label(), ed.kind, oriented ? Role::Out : Role::Plain, vmap[ed.tail]);
        if (vset.count(ed.head))
            sub.add_external(leg_label(), ed.kind, oriented ? Role::In : Role::Plain, vmap[ed.head]);
    }
    for (const ExternalLeg& l : g.externals())
        if (vset.count(l.vertex)) sub.add_external(leg_label(), l.kind, l.role, vmap[l.vertex]);
    sub.finalize();
    return sub;
}

} // namespace

std::vector<SubgraphOccurrence> enumerate_subgraphs(const FeynmanGraph& g)
{
    if (g.empty() || g.edges().empty()) return {};
    if (!g.connected()) throw Error(ErrorKind::Domain, "subgraph enumeration needs a connected graph");
    int ne = static_cast<int>(g.edges().size());
    if (ne > 24) throw Error(ErrorKind::Limit, "too many internal edges for subset enumeration");

    std::vector<SubgraphOccurrence> out;
    for (unsigned mask = 1; mask + 1 < (1u << ne); ++mask) {
        std::vector<int> edge_ids;
        std::vector<char> in_subset(ne, 0);
        for (int e = 0; e < ne; ++e)
            if (mask & (1u << e)) {
                edge_ids.push_back(e);
                in_subset[e] = 1;
            }
        std::vector<int> comp = edge_components(g, edge_ids);
        int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
        std::vector<std::vector<int>> comp_edges(ncomp);
        for (std::size_t i = 0; i < edge_ids.size(); ++i) comp_edges[comp[i]].push_back(edge_ids[i]);

        SubgraphOccurrence occ;
        occ.edge_ids = edge_ids;
        bool ok = true;
        for (const std::vector<int>& ce : comp_edges) {
            FeynmanGraph sub = induce_component(g, ce, in_subset);
            try {
                if (!sub.is_1pi()) {
                    ok = false;
                    break;
                }
                occ.residues.push_back(sub.residue());
            } catch (const Error&) {
                ok = false;
                break;
            }
            occ.components.push_back(std::move(sub));
            occ.component_edges.push_back(ce);
        }
        if (ok) out.push_back(std::move(occ));
    }
    return out;
}

FeynmanGraph contract(const FeynmanGraph& g, const SubgraphOccurrence& occ)
{
    const Theory& th = g.theory();
    int nv = static_cast<int>(g.vertices().size());
    std::vector<char> in_subset(g.edges().size(), 0);
    for (int e : occ.edge_ids) in_subset[e] = 1;

    // resolve each ambient vertex: quotient vertex index, or wire id for
    // vertices inside an edge-residue component
    const int WIRE = -2;
    std::vector<int> vres(nv, -1);
    std::vector<int> wire_of(nv, -1);
    std::vector<int> wire_kind; // edge kind per wire

    FeynmanGraph q(g.theory_ptr());
    int next_vertex = 0; // quotient vertex ids are synthesized afresh
    std::vector<char> in_comp(nv, 0);
    for (std::size_t c = 0; c < occ.component_edges.size(); ++c) {
        std::set<int> vset;
        for (int e : occ.component_edges[c]) {
            vset.insert(g.edges()[e].tail);
            vset.insert(g.edges()[e].head);
        }
        Residue r = occ.residues[c];
        if (r.is_vertex) {
            int w = q.add_vertex("v" + std::to_string(next_vertex++), r.index);
            for (int v : vset) {
                vres[v] = w;
                in_comp[v] = 1;
            }
        } else {
            int wid = static_cast<int>(wire_kind.size());
            wire_kind.push_back(r.index);
            for (int v : vset) {
                vres[v] = WIRE;
                wire_of[v] = wid;
                in_comp[v] = 1;
            }
        }
    }
    for (int v = 0; v < nv; ++v)
        if (!in_comp[v]) vres[v] = q.add_vertex("v" + std::to_string(next_vertex++), g.vertices()[v].kind);

    // connection objects: complement edges and ambient external legs.
    // ends: node >= 0 quotient vertex, WIRE_BASE+w a wire, OUT_BASE+x outside.
    const int WIRE_BASE = 1'000'000;
    const int OUT_BASE = 2'000'000;
    struct Obj {
        int kind;
        int tail, head; // encoded ends; flow runs tail -> head for oriented kinds
        bool alive = true;
    };
    std::vector<Obj> objs;
    auto resolve = [&](int v) { return vres[v] == WIRE ? WIRE_BASE + wire_of[v] : vres[v]; };

    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        if (in_subset[e]) continue;
        const GraphEdge& ed = g.edges()[e];
        objs.push_back({ed.kind, resolve(ed.tail), resolve(ed.head), true});
    }
    for (std::size_t x = 0; x < g.externals().size(); ++x) {
        const ExternalLeg& l = g.externals()[x];
        int vnode = resolve(l.vertex);
        int outside = OUT_BASE + static_cast<int>(x);
        // an .in leg carries flow from outside into the graph
        if (l.role == Role::Out)
            objs.push_back({l.kind, vnode, outside, true});
        else
            objs.push_back({l.kind, outside, vnode, true});
    }

    // splice every wire: it has exactly two attached object ends
    for (std::size_t w = 0; w < wire_kind.size(); ++w) {
        int node = WIRE_BASE + static_cast<int>(w);
        std::vector<std::pair<int, bool>> ports; // (obj, end_is_tail)
        for (std::size_t o = 0; o < objs.size(); ++o) {
            if (!objs[o].alive) continue;
            if (objs[o].tail == node) ports.push_back({static_cast<int>(o), true});
            if (objs[o].head == node) ports.push_back({static_cast<int>(o), false});
        }
        if (ports.size() != 2) throw Error(ErrorKind::Internal, "edge-residue component without two attachments");
        auto [o1, t1] = ports[0];
        auto [o2, t2] = ports[1];
        if (o1 == o2) throw Error(ErrorKind::Internal, "edge-residue component closes on a single edge");
        if (objs[o1].kind != wire_kind[w] || objs[o2].kind != wire_kind[w])
            throw Error(ErrorKind::Internal, "kind mismatch while splicing");
        bool oriented = th.edge_kinds[wire_kind[w]].oriented;
        Obj merged;
        merged.kind = wire_kind[w];
        merged.alive = true;
        if (oriented) {
            // one object must flow into the wire (its head here), the other out
            if (t1 == t2) throw Error(ErrorKind::Internal, "orientation clash while splicing");
            int in_obj = t1 ? o2 : o1;  // object whose head is at the wire
            int out_obj = t1 ? o1 : o2; // object whose tail is at the wire
            merged.tail = objs[in_obj].tail;
            merged.head = objs[out_obj].head;
        } else {
            merged.tail = t1 ? objs[o1].head : objs[o1].tail;
            merged.head = t2 ? objs[o2].head : objs[o2].tail;
        }
        objs[o1].alive = false;
        objs[o2].alive = false;
        objs.push_back(merged);
    }

    int eid = 0;
    for (const Obj& o : objs) {
        if (!o.alive) continue;
        bool tail_out = o.tail >= OUT_BASE, head_out = o.head >= OUT_BASE;
        if (tail_out && head_out) throw Error(ErrorKind::Internal, "contraction produced a bare propagator");
        if (!tail_out && !head_out) {
            q.add_edge("q" + std::to_string(eid++), o.kind, o.tail, o.head);
        } else {
            const ExternalLeg& src = g.externals()[(tail_out ? o.tail : o.head) - OUT_BASE];
            bool oriented = th.edge_kinds[o.kind].oriented;
            Role role = Role::Plain;
            if (oriented) role = tail_out ? Role::In : Role::Out; // flow arriving from outside is .in
            q.add_external(src.label, o.kind, role, tail_out ? o.head : o.tail);
        }
    }
    q.finalize();
    return q;
}

ResidueCounts component_counts(const FeynmanGraph& g)
{
    ResidueCounts c;
    c.vertex.assign(g.theory().vertex_kinds.size(), 0);
    c.edge.assign(g.theory().edge_kinds.size(), 0);
    for (const GraphVertex& v : g.vertices()) c.vertex[v.kind]++;
    for (const GraphEdge& e : g.edges()) c.edge[e.kind]++;
    return c;
}

ResidueCounts part_counts(const FeynmanGraph& g, const SubgraphOccurrence& occ)
{
    ResidueCounts c;
    c.vertex.assign(g.theory().vertex_kinds.size(), 0);
    c.edge.assign(g.theory().edge_kinds.size(), 0);
    for (Residue r : occ.residues) (r.is_vertex ? c.vertex : c.edge)[r.index]++;
    return c;
}

Int count_insertion_places(const Theory& theory, const ResidueCounts& big, const std::vector<Residue>& parts)
{
    ResidueCounts n;
    n.vertex.assign(theory.vertex_kinds.size(), 0);
    n.edge.assign(theory.edge_kinds.size(), 0);
    for (Residue r : parts) (r.is_vertex ? n.vertex : n.edge)[r.index]++;

    Int total = 1;
    for (std::size_t v = 0; v < n.vertex.size(); ++v) {
        unsigned k = static_cast<unsigned>(n.vertex[v]);
        if (k) total *= factorial(k) * binom(Int(big.vertex[v]), k);
    }
    for (std::size_t e = 0; e < n.edge.size(); ++e) {
        unsigned k = static_cast<unsigned>(n.edge[e]);
        if (k) total *= factorial(k) * binom(Int(big.edge[e]) + k - 1, k);
    }
    return total;
}

Int count_insertion_places(const FeynmanGraph& big, const std::vector<Residue>& parts)
{
    return count_insertion_places(big.theory(), component_counts(big), parts);
}

} // namespace feynhopf
