#include "feynhopf/graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace feynhopf {

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
    int count_roots() const
    {
        int n = 0;
        for (std::size_t i = 0; i < parent.size(); ++i)
            if (parent[i] == static_cast<int>(i)) ++n;
        return n;
    }
};

// Direction of an edge group relative to an ordered vertex pair (a, b):
// 0 = unoriented, 1 = a->b, 2 = b->a, 3 = unoriented self-loop,
// 4 = oriented self-loop.
struct PairProfileEntry {
    int kind;
    int dir;
    int mult;
    friend auto operator<=>(const PairProfileEntry&, const PairProfileEntry&) = default;
};

struct CanonData {
    int nv = 0;
    std::vector<int> vkind;
    std::vector<std::string> vkey; // initial color key per vertex
    // (min(a,b), max(a,b)) -> profile entries with dir relative to (min, max)
    std::map<std::pair<int, int>, std::vector<PairProfileEntry>> pairs;
    // per vertex: (kind, rel, other, mult); rel as above but from v's side
    std::vector<std::vector<std::array<int, 4>>> adj;
    Int parallel_factor = 1; // prod over parallel groups of mult!
    int unoriented_self_loops = 0;

    std::vector<PairProfileEntry> profile(int a, int b) const
    {
        auto it = pairs.find({std::min(a, b), std::max(a, b)});
        if (it == pairs.end()) return {};
        if (a <= b) return it->second;
        std::vector<PairProfileEntry> out = it->second;
        for (auto& e : out)
            if (e.dir == 1 || e.dir == 2) e.dir = 3 - e.dir;
        std::sort(out.begin(), out.end());
        return out;
    }
};

std::string leg_decoration(const Theory& th, const std::vector<const ExternalLeg*>& legs, bool pinned)
{
    std::vector<std::string> parts;
    if (pinned) {
        for (const ExternalLeg* l : legs)
            parts.push_back(l->label + ":" + th.edge_kinds[l->kind].name + role_suffix(l->role));
    } else {
        std::map<std::pair<int, int>, int> counts;
        for (const ExternalLeg* l : legs) counts[{l->kind, static_cast<int>(l->role)}]++;
        for (auto& [kr, c] : counts)
            parts.push_back(th.edge_kinds[kr.first].name + role_suffix(static_cast<Role>(kr.second)) + "*" +
                            std::to_string(c));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (auto& p : parts) out += p + ";";
    return out;
}

CanonData build_canon_data(const FeynmanGraph& g, bool pinned_legs)
{
    const Theory& th = g.theory();
    CanonData cd;
    cd.nv = static_cast<int>(g.vertices().size());
    cd.vkind.resize(cd.nv);
    cd.adj.resize(cd.nv);

    std::vector<std::vector<const ExternalLeg*>> legs_at(cd.nv);
    for (const ExternalLeg& l : g.externals()) legs_at[l.vertex].push_back(&l);
    for (int v = 0; v < cd.nv; ++v) {
        cd.vkind[v] = g.vertices()[v].kind;
        cd.vkey.push_back(th.vertex_kinds[cd.vkind[v]].name + "|" + leg_decoration(th, legs_at[v], pinned_legs));
    }

    std::map<std::tuple<int, int, int, int>, int> groups; // (a, b, kind, dir rel (a,b))
    for (const GraphEdge& e : g.edges()) {
        bool oriented = th.edge_kinds[e.kind].oriented;
        int a = std::min(e.tail, e.head), b = std::max(e.tail, e.head);
        int dir;
        if (e.tail == e.head)
            dir = oriented ? 4 : 3;
        else if (!oriented)
            dir = 0;
        else
            dir = (e.tail == a) ? 1 : 2;
        groups[{a, b, e.kind, dir}]++;
        if (dir == 3) ++cd.unoriented_self_loops;
    }
    for (auto& [key, mult] : groups) {
        auto [a, b, kind, dir] = key;
        cd.pairs[{a, b}].push_back({kind, dir, mult});
        cd.parallel_factor *= factorial(static_cast<unsigned>(mult));
        if (a == b) {
            cd.adj[a].push_back({kind, dir, a, mult});
        } else {
            int rel_a = (dir == 0) ? 0 : (dir == 1 ? 1 : 2); // 1 = outgoing from a
            int rel_b = (dir == 0) ? 0 : (dir == 1 ? 2 : 1);
            cd.adj[a].push_back({kind, rel_a, b, mult});
            cd.adj[b].push_back({kind, rel_b, a, mult});
        }
    }
    for (auto& [pr, vec] : cd.pairs) std::sort(vec.begin(), vec.end());
    return cd;
}

std::vector<int> initial_colors(const CanonData& cd)
{
    std::vector<std::string> keys = cd.vkey;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<int> col(cd.nv);
    for (int v = 0; v < cd.nv; ++v)
        col[v] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), cd.vkey[v]) - keys.begin());
    return col;
}

std::vector<int> refine(const CanonData& cd, std::vector<int> col)
{
    using Sig = std::pair<int, std::vector<std::array<int, 4>>>;
    for (;;) {
        std::vector<Sig> sigs(cd.nv);
        for (int v = 0; v < cd.nv; ++v) {
            std::vector<std::array<int, 4>> nbr;
            for (const auto& [kind, rel, other, mult] : cd.adj[v])
                nbr.push_back({kind, rel, col[other], mult});
            std::sort(nbr.begin(), nbr.end());
            sigs[v] = {col[v], std::move(nbr)};
        }
        std::vector<Sig> uniq = sigs;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> next(cd.nv);
        for (int v = 0; v < cd.nv; ++v)
            next[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sigs[v]) - uniq.begin());
        if (next == col) return col;
        col = std::move(next);
    }
}

bool is_discrete(const std::vector<int>& col)
{
    std::set<int> seen(col.begin(), col.end());
    return seen.size() == col.size();
}

std::vector<int> individualize(const std::vector<int>& col, int v)
{
    std::vector<std::pair<int, int>> keys(col.size());
    for (std::size_t u = 0; u < col.size(); ++u) keys[u] = {col[u], u == static_cast<std::size_t>(v) ? 0 : 1};
    std::vector<std::pair<int, int>> uniq = keys;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> out(col.size());
    for (std::size_t u = 0; u < col.size(); ++u)
        out[u] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), keys[u]) - uniq.begin());
    return out;
}

std::string encode_with_order(const CanonData& cd, const std::vector<int>& col)
{
    // col is discrete: col[v] is the canonical position of v.
    std::vector<int> at(cd.nv); // position -> vertex
    for (int v = 0; v < cd.nv; ++v) at[col[v]] = v;

    std::ostringstream os;
    os << "V:";
    for (int p = 0; p < cd.nv; ++p) os << (p ? "," : "") << cd.vkey[at[p]];
    os << "|E:";
    std::vector<std::tuple<int, int, int, int, int>> rows; // (pa, pb, kind, dir, mult)
    for (const auto& [pr, entries] : cd.pairs) {
        int pa = col[pr.first], pb = col[pr.second];
        for (const auto& e : entries) {
            int a = pa, b = pb, dir = e.dir;
            if (a > b) {
                std::swap(a, b);
                if (dir == 1 || dir == 2) dir = 3 - dir;
            }
            rows.emplace_back(a, b, e.kind, dir, e.mult);
        }
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [a, b, kind, dir, mult] : rows)
        os << a << "~" << b << ":" << kind << ":" << dir << "*" << mult << ";";
    return os.str();
}

std::string canonical_encode(const CanonData& cd)
{
    if (cd.nv == 0) return "V:|E:";
    std::string best;
    bool have = false;

    struct Frame {
        std::vector<int> col;
    };
    std::vector<Frame> stack;
    stack.push_back({refine(cd, initial_colors(cd))});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (is_discrete(f.col)) {
            std::string enc = encode_with_order(cd, f.col);
            if (!have || enc < best) {
                best = std::move(enc);
                have = true;
            }
            continue;
        }
        // smallest non-singleton cell with the lowest color id
        std::map<int, std::vector<int>> cells;
        for (int v = 0; v < cd.nv; ++v) cells[f.col[v]].push_back(v);
        int target = -1;
        std::size_t target_size = 0;
        for (const auto& [c, members] : cells) {
            if (members.size() < 2) continue;
            if (target < 0 || members.size() < target_size) {
                target = c;
                target_size = members.size();
            }
        }
        for (int v : cells[target]) stack.push_back({refine(cd, individualize(f.col, v))});
    }
    return best;
}

// Counts color-preserving vertex bijections that preserve all pair profiles.
Int count_isos(const CanonData& cd, const std::vector<int>& col)
{
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < cd.nv; ++v) cells[col[v]].push_back(v);
    std::vector<int> order; // vertices in cell order
    for (const auto& [c, members] : cells)
        for (int v : members) order.push_back(v);

    std::vector<int> image(cd.nv, -1);
    std::vector<char> used(cd.nv, 0);
    Int count = 0;

    auto consistent = [&](int v, int w, std::size_t upto) {
        if (cd.profile(v, v) != cd.profile(w, w)) return false;
        for (std::size_t j = 0; j < upto; ++j) {
            int x = order[j];
            if (cd.profile(v, x) != cd.profile(w, image[x])) return false;
        }
        return true;
    };

    std::vector<std::size_t> pos_stack;
    // recursive backtrack, iterative over order index
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == order.size()) {
            ++count;
            return;
        }
        int v = order[i];
        for (int w : cells[col[v]]) {
            if (used[w]) continue;
            if (!consistent(v, w, i)) continue;
            image[v] = w;
            used[w] = 1;
            rec(i + 1);
            used[w] = 0;
            image[v] = -1;
        }
    };
    rec(0);
    return count;
}

} // namespace

struct FeynmanGraph::Caches {
    std::once_flag key_once, sym_once, free_once;
    std::string key;
    Int sym_value, free_value;
};

FeynmanGraph::FeynmanGraph(std::shared_ptr<const Theory> theory) : theory_(std::move(theory))
{
    if (!theory_) throw Error(ErrorKind::Internal, "graph constructed without a theory");
}

int FeynmanGraph::add_vertex(std::string id, int kind)
{
    if (finalized_) throw Error(ErrorKind::Internal, "graph is finalized");
    if (kind < 0 || kind >= static_cast<int>(theory_->vertex_kinds.size()))
        throw Error(ErrorKind::Semantic, "unknown vertex kind for '" + id + "'");
    vertices_.push_back({std::move(id), kind});
    return static_cast<int>(vertices_.size()) - 1;
}

int FeynmanGraph::add_edge(std::string id, int kind, int tail, int head)
{
    if (finalized_) throw Error(ErrorKind::Internal, "graph is finalized");
    if (kind < 0 || kind >= static_cast<int>(theory_->edge_kinds.size()))
        throw Error(ErrorKind::Semantic, "unknown edge kind for '" + id + "'");
    if (tail < 0 || tail >= static_cast<int>(vertices_.size()) || head < 0 ||
        head >= static_cast<int>(vertices_.size()))
        throw Error(ErrorKind::Semantic, "edge '" + id + "' has a dangling endpoint");
    edges_.push_back({std::move(id), kind, tail, head});
    return static_cast<int>(edges_.size()) - 1;
}

void FeynmanGraph::add_external(std::string label, int kind, Role role, int vertex)
{
    if (finalized_) throw Error(ErrorKind::Internal, "graph is finalized");
    if (kind < 0 || kind >= static_cast<int>(theory_->edge_kinds.size()))
        throw Error(ErrorKind::Semantic, "unknown edge kind for external '" + label + "'");
    if (vertex < 0 || vertex >= static_cast<int>(vertices_.size()))
        throw Error(ErrorKind::Semantic, "external '" + label + "' attached to a missing vertex");
    bool oriented = theory_->edge_kinds[kind].oriented;
    if (oriented && role == Role::Plain)
        throw Error(ErrorKind::Semantic, "external '" + label + "' needs .in/.out on an oriented kind");
    if (!oriented && role != Role::Plain)
        throw Error(ErrorKind::Semantic, "external '" + label + "' carries a role on an unoriented kind");
    externals_.push_back({std::move(label), kind, role, vertex});
}

void FeynmanGraph::finalize()
{
    if (finalized_) return;
    std::sort(externals_.begin(), externals_.end(),
              [](const ExternalLeg& a, const ExternalLeg& b) { return a.label < b.label; });
    std::set<std::string> labels;
    for (const ExternalLeg& l : externals_)
        if (!labels.insert(l.label).second)
            throw Error(ErrorKind::Semantic, "duplicate external label '" + l.label + "'");
    std::set<std::string> vids, eids;
    for (const GraphVertex& v : vertices_)
        if (!vids.insert(v.id).second) throw Error(ErrorKind::Semantic, "duplicate vertex id '" + v.id + "'");
    for (const GraphEdge& e : edges_)
        if (!eids.insert(e.id).second) throw Error(ErrorKind::Semantic, "duplicate edge id '" + e.id + "'");

    // per-vertex incident (kind, role) multiset must equal the kind signature
    std::vector<std::vector<LegType>> incident(vertices_.size());
    for (const GraphEdge& e : edges_) {
        bool oriented = theory_->edge_kinds[e.kind].oriented;
        if (oriented) {
            incident[e.tail].push_back({e.kind, Role::Out});
            incident[e.head].push_back({e.kind, Role::In});
        } else {
            incident[e.tail].push_back({e.kind, Role::Plain});
            incident[e.head].push_back({e.kind, Role::Plain});
        }
    }
    for (const ExternalLeg& l : externals_) incident[l.vertex].push_back({l.kind, l.role});
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        std::sort(incident[v].begin(), incident[v].end());
        const VertexKind& vk = theory_->vertex_kinds[vertices_[v].kind];
        if (incident[v] != vk.legs)
            throw Error(ErrorKind::Semantic, "vertex '" + vertices_[v].id + "' does not match the signature of '" +
                                                 vk.name + "'");
    }
    caches_ = std::make_shared<Caches>();
    finalized_ = true;
}

void FeynmanGraph::require_finalized() const
{
    if (!finalized_) throw Error(ErrorKind::Internal, "graph not finalized");
}

int FeynmanGraph::loop_number() const
{
    require_finalized();
    if (vertices_.empty()) return 0;
    Dsu dsu(static_cast<int>(vertices_.size()));
    for (const GraphEdge& e : edges_) dsu.join(e.tail, e.head);
    return static_cast<int>(edges_.size()) - static_cast<int>(vertices_.size()) + dsu.count_roots();
}

bool FeynmanGraph::connected() const
{
    require_finalized();
    if (vertices_.size() <= 1) return true;
    Dsu dsu(static_cast<int>(vertices_.size()));
    for (const GraphEdge& e : edges_) dsu.join(e.tail, e.head);
    return dsu.count_roots() == 1;
}

bool FeynmanGraph::is_1pi() const
{
    require_finalized();
    if (empty()) throw Error(ErrorKind::Domain, "is_1pi needs a nonempty graph");
    if (!connected()) throw Error(ErrorKind::Domain, "is_1pi needs a connected graph");
    if (loop_number() < 1) return false;
    for (std::size_t skip = 0; skip < edges_.size(); ++skip) {
        if (edges_[skip].tail == edges_[skip].head) continue;
        Dsu dsu(static_cast<int>(vertices_.size()));
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (i != skip) dsu.join(edges_[i].tail, edges_[i].head);
        if (dsu.count_roots() != 1) return false;
    }
    return true;
}

Residue FeynmanGraph::residue() const
{
    require_finalized();
    if (empty()) throw Error(ErrorKind::Domain, "the empty graph has no residue");
    if (!connected()) throw Error(ErrorKind::Domain, "residue needs a connected graph");
    std::vector<LegType> ext;
    for (const ExternalLeg& l : externals_) ext.push_back({l.kind, l.role});
    std::sort(ext.begin(), ext.end());

    if (ext.size() == 2 && ext[0].edge_kind == ext[1].edge_kind) {
        int kind = ext[0].edge_kind;
        bool oriented = theory_->edge_kinds[kind].oriented;
        bool ok = oriented ? (ext[0].role == Role::In && ext[1].role == Role::Out)
                           : (ext[0].role == Role::Plain && ext[1].role == Role::Plain);
        if (ok) return Residue{false, kind};
    }
    int match = -1;
    for (std::size_t k = 0; k < theory_->vertex_kinds.size(); ++k) {
        if (theory_->vertex_kinds[k].legs == ext) {
            if (match >= 0) throw Error(ErrorKind::Domain, "residue is ambiguous between vertex kinds");
            match = static_cast<int>(k);
        }
    }
    if (match < 0)
        throw Error(ErrorKind::Domain, "external structure matches no element of R in theory '" + theory_->name + "'");
    return Residue{true, match};
}

const std::string& FeynmanGraph::canonical_key() const
{
    require_finalized();
    std::call_once(caches_->key_once, [this] {
        CanonData cd = build_canon_data(*this, /*pinned_legs=*/false);
        caches_->key = canonical_encode(cd);
    });
    return caches_->key;
}

Int FeynmanGraph::sym() const
{
    require_finalized();
    std::call_once(caches_->sym_once, [this] {
        if (empty()) {
            caches_->sym_value = 1;
            return;
        }
        if (!connected()) {
            std::vector<FeynmanGraph> comps = components();
            Int total = 1;
            std::map<std::string, int> class_mult;
            for (const FeynmanGraph& c : comps) {
                total *= c.sym();
                class_mult[c.canonical_key()]++;
            }
            for (auto& [key, mult] : class_mult) total *= factorial(static_cast<unsigned>(mult));
            caches_->sym_value = total;
            return;
        }
        CanonData cd = build_canon_data(*this, /*pinned_legs=*/true);
        std::vector<int> col = refine(cd, initial_colors(cd));
        Int n = count_isos(cd, col);
        caches_->sym_value = n * cd.parallel_factor * boost::multiprecision::pow(Int(2), cd.unoriented_self_loops);
    });
    return caches_->sym_value;
}

Int FeynmanGraph::aut_free() const
{
    require_finalized();
    std::call_once(caches_->free_once, [this] {
        if (empty()) {
            caches_->free_value = 1;
            return;
        }
        if (!connected()) throw Error(ErrorKind::Domain, "aut_free needs a connected graph");
        CanonData cd = build_canon_data(*this, /*pinned_legs=*/false);
        std::vector<int> col = refine(cd, initial_colors(cd));
        Int n = count_isos(cd, col) * cd.parallel_factor *
                boost::multiprecision::pow(Int(2), cd.unoriented_self_loops);
        std::map<std::pair<int, std::pair<int, int>>, int> leg_counts; // (vertex, (kind, role))
        for (const ExternalLeg& l : externals_) leg_counts[{l.vertex, {l.kind, static_cast<int>(l.role)}}]++;
        for (auto& [k, c] : leg_counts) n *= factorial(static_cast<unsigned>(c));
        caches_->free_value = n;
    });
    return caches_->free_value;
}

Int FeynmanGraph::labeled_variant_count() const
{
    Int w = theory_->external_perm_count(residue());
    Int num = w * sym();
    Int den = aut_free();
    if (num % den != 0) throw Error(ErrorKind::Internal, "variant count is not integral");
    return num / den;
}

std::vector<FeynmanGraph> FeynmanGraph::components() const
{
    require_finalized();
    Dsu dsu(static_cast<int>(vertices_.size()));
    for (const GraphEdge& e : edges_) dsu.join(e.tail, e.head);
    std::map<int, int> root_to_comp;
    for (std::size_t v = 0; v < vertices_.size(); ++v)
        root_to_comp.emplace(dsu.find(static_cast<int>(v)), static_cast<int>(root_to_comp.size()));

    std::vector<FeynmanGraph> out(root_to_comp.size(), FeynmanGraph(theory_));
    std::vector<int> vmap(vertices_.size(), -1);
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        int c = root_to_comp[dsu.find(static_cast<int>(v))];
        vmap[v] = out[c].add_vertex(vertices_[v].id, vertices_[v].kind);
    }
    for (const GraphEdge& e : edges_) {
        int c = root_to_comp[dsu.find(e.tail)];
        out[c].add_edge(e.id, e.kind, vmap[e.tail], vmap[e.head]);
    }
    for (const ExternalLeg& l : externals_) {
        int c = root_to_comp[dsu.find(l.vertex)];
        out[c].add_external(l.label, l.kind, l.role, vmap[l.vertex]);
    }
    for (FeynmanGraph& g : out) g.finalize();
    return out;
}

namespace {

struct GLine {
    int number;
    std::vector<std::string> tokens;
};

std::vector<GLine> graph_lines(const std::string& text)
{
    std::vector<GLine> out;
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        GLine line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

} // namespace

std::string graph_file_theory_name(const std::string& text)
{
    for (const GLine& l : graph_lines(text))
        if (l.tokens[0] == "theory" && l.tokens.size() == 2) return l.tokens[1];
    throw Error(ErrorKind::Parse, "graph file has no 'theory <name>' line");
}

FeynmanGraph parse_graph(const std::string& text, std::shared_ptr<const Theory> theory)
{
    FeynmanGraph g(theory);
    std::map<std::string, int> vindex;
    bool saw_theory = false;

    auto fail = [](int line, const std::string& msg) -> void {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
    };

    for (const GLine& line : graph_lines(text)) {
        const auto& tok = line.tokens;
        if (tok[0] == "theory") {
            if (tok.size() != 2) fail(line.number, "expected 'theory <name>'");
            if (tok[1] != theory->name)
                throw Error(ErrorKind::Semantic, "graph declares theory '" + tok[1] + "' but '" + theory->name +
                                                     "' was supplied");
            saw_theory = true;
        } else if (tok[0] == "vertex") {
            if (tok.size() != 3) fail(line.number, "expected 'vertex <id> <kind>'");
            int kind = theory->vertex_kind_index(tok[2]);
            if (kind < 0)
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": unknown vertex kind '" + tok[2] + "'");
            if (vindex.count(tok[1]))
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": duplicate vertex id '" + tok[1] + "'");
            vindex[tok[1]] = g.add_vertex(tok[1], kind);
        } else if (tok[0] == "edge") {
            if (tok.size() != 5) fail(line.number, "expected 'edge <id> <kind> <tail> <head>'");
            int kind = theory->edge_kind_index(tok[2]);
            if (kind < 0)
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": unknown edge kind '" + tok[2] + "'");
            auto t = vindex.find(tok[3]), h = vindex.find(tok[4]);
            if (t == vindex.end() || h == vindex.end())
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": edge '" + tok[1] + "' has a dangling endpoint");
            g.add_edge(tok[1], kind, t->second, h->second);
        } else if (tok[0] == "ext") {
            if (tok.size() != 4) fail(line.number, "expected 'ext <label> <kind>[.in|.out] <vertex>'");
            std::string kindname = tok[2];
            Role role = Role::Plain;
            if (auto dot = kindname.rfind('.'); dot != std::string::npos) {
                std::string suffix = kindname.substr(dot + 1);
                if (suffix == "in")
                    role = Role::In;
                else if (suffix == "out")
                    role = Role::Out;
                else
                    fail(line.number, "bad role '." + suffix + "'");
                kindname = kindname.substr(0, dot);
            }
            int kind = theory->edge_kind_index(kindname);
            if (kind < 0)
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": unknown edge kind '" + kindname + "'");
            auto v = vindex.find(tok[3]);
            if (v == vindex.end())
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(line.number) + ": external '" + tok[1] +
                                "' attached to unknown vertex '" + tok[3] + "'");
            g.add_external(tok[1], kind, role, v->second);
        } else {
            fail(line.number, "unknown directive '" + tok[0] + "'");
        }
    }
    if (!saw_theory && !g.empty())
        throw Error(ErrorKind::Parse, "graph file has no 'theory <name>' line");
    g.finalize();
    return g;
}

FeynmanGraph load_graph_file(const std::string& path, std::shared_ptr<const Theory> theory)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_graph(buf.str(), std::move(theory));
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::string serialize_graph(const FeynmanGraph& g)
{
    std::ostringstream os;
    os << "theory " << g.theory().name << "\n";
    for (const GraphVertex& v : g.vertices())
        os << "vertex " << v.id << " " << g.theory().vertex_kinds[v.kind].name << "\n";
    for (const GraphEdge& e : g.edges())
        os << "edge " << e.id << " " << g.theory().edge_kinds[e.kind].name << " " << g.vertices()[e.tail].id << " "
           << g.vertices()[e.head].id << "\n";
    for (const ExternalLeg& l : g.externals())
        os << "ext " << l.label << " " << g.theory().edge_kinds[l.kind].name << role_suffix(l.role) << " "
           << g.vertices()[l.vertex].id << "\n";
    return os.str();
}

FeynmanGraph disjoint_union(const std::vector<const FeynmanGraph*>& parts)
{
    if (parts.empty()) throw Error(ErrorKind::Domain, "disjoint_union of nothing");
    FeynmanGraph g(parts[0]->theory_ptr());
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const FeynmanGraph& part = *parts[p];
        if (part.theory_ptr().get() != parts[0]->theory_ptr().get())
            throw Error(ErrorKind::Domain, "disjoint_union across theories");
        std::string prefix = "p" + std::to_string(p) + ".";
        std::vector<int> vmap;
        for (const GraphVertex& v : part.vertices()) vmap.push_back(g.add_vertex(prefix + v.id, v.kind));
        for (const GraphEdge& e : part.edges()) g.add_edge(prefix + e.id, e.kind, vmap[e.tail], vmap[e.head]);
        for (const ExternalLeg& l : part.externals()) g.add_external(prefix + l.label, l.kind, l.role, vmap[l.vertex]);
    }
    g.finalize();
    return g;
}

} // namespace feynhopf
