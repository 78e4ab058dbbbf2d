#include "feynhopf/theory.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace feynhopf {

std::string rat_to_string(const Rat& r)
{
    std::ostringstream os;
    os << r;
    return os.str();
}

Rat rat_from_string(const std::string& s)
{
    try {
        return Rat(s);
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "bad rational literal: '" + s + "'");
    }
}

const char* role_suffix(Role r)
{
    switch (r) {
    case Role::In: return ".in";
    case Role::Out: return ".out";
    default: return "";
    }
}

int Theory::edge_kind_index(const std::string& n) const
{
    for (std::size_t i = 0; i < edge_kinds.size(); ++i)
        if (edge_kinds[i].name == n) return static_cast<int>(i);
    return -1;
}

int Theory::vertex_kind_index(const std::string& n) const
{
    for (std::size_t i = 0; i < vertex_kinds.size(); ++i)
        if (vertex_kinds[i].name == n) return static_cast<int>(i);
    return -1;
}

std::optional<Residue> Theory::residue_by_name(const std::string& n) const
{
    if (int v = vertex_kind_index(n); v >= 0) return Residue{true, v};
    if (int e = edge_kind_index(n); e >= 0) return Residue{false, e};
    return std::nullopt;
}

const std::string& Theory::residue_name(Residue r) const
{
    return r.is_vertex ? vertex_kinds.at(r.index).name : edge_kinds.at(r.index).name;
}

std::vector<Residue> Theory::residues() const
{
    std::vector<Residue> out;
    for (std::size_t i = 0; i < vertex_kinds.size(); ++i)
        out.push_back({true, static_cast<int>(i)});
    for (std::size_t i = 0; i < edge_kinds.size(); ++i)
        out.push_back({false, static_cast<int>(i)});
    return out;
}

int Theory::leg_count(Residue r, int edge_kind) const
{
    if (edge_kind < 0 || edge_kind >= static_cast<int>(edge_kinds.size()))
        throw Error(ErrorKind::Domain, "unknown edge kind index");
    if (!r.is_vertex) {
        if (r.index < 0 || r.index >= static_cast<int>(edge_kinds.size()))
            throw Error(ErrorKind::Domain, "unknown residue");
        return r.index == edge_kind ? 2 : 0;
    }
    if (r.index < 0 || r.index >= static_cast<int>(vertex_kinds.size()))
        throw Error(ErrorKind::Domain, "unknown residue");
    int n = 0;
    for (const LegType& l : vertex_kinds[r.index].legs)
        if (l.edge_kind == edge_kind) ++n;
    return n;
}

int Theory::total_valence(int vertex_kind) const
{
    if (vertex_kind < 0 || vertex_kind >= static_cast<int>(vertex_kinds.size()))
        throw Error(ErrorKind::Domain, "unknown vertex kind");
    return vertex_kinds[vertex_kind].valence();
}

Int Theory::external_perm_count(Residue r) const
{
    std::map<LegType, int> counts;
    if (r.is_vertex) {
        for (const LegType& l : vertex_kinds.at(r.index).legs) counts[l]++;
    } else {
        if (edge_kinds.at(r.index).oriented) return 1; // in + out, distinct
        return 2;                                      // two plain legs
    }
    Int w = 1;
    for (auto& [lt, c] : counts) w *= factorial(static_cast<unsigned>(c));
    return w;
}

void Theory::validate() const
{
    if (name.empty()) throw Error(ErrorKind::Semantic, "theory has no name");
    if (edge_kinds.empty()) throw Error(ErrorKind::Semantic, "theory '" + name + "' has no edge kinds");
    if (vertex_kinds.empty()) throw Error(ErrorKind::Semantic, "theory '" + name + "' has no vertex kinds");
    std::set<std::string> names;
    for (const EdgeKind& e : edge_kinds)
        if (!names.insert(e.name).second)
            throw Error(ErrorKind::Semantic, "duplicate kind name '" + e.name + "'");
    for (const VertexKind& v : vertex_kinds) {
        if (!names.insert(v.name).second)
            throw Error(ErrorKind::Semantic, "duplicate kind name '" + v.name + "'");
        if (v.valence() < 3)
            throw Error(ErrorKind::Semantic,
                        "vertex '" + v.name + "' has valence " + std::to_string(v.valence()) + " (minimum is 3)");
        for (const LegType& l : v.legs) {
            if (l.edge_kind < 0 || l.edge_kind >= static_cast<int>(edge_kinds.size()))
                throw Error(ErrorKind::Semantic, "vertex '" + v.name + "' references a missing edge kind");
            bool oriented = edge_kinds[l.edge_kind].oriented;
            if (oriented && l.role == Role::Plain)
                throw Error(ErrorKind::Semantic, "vertex '" + v.name + "' needs .in/.out on oriented kind '" +
                                                     edge_kinds[l.edge_kind].name + "'");
            if (!oriented && l.role != Role::Plain)
                throw Error(ErrorKind::Semantic, "vertex '" + v.name + "' puts a role on unoriented kind '" +
                                                     edge_kinds[l.edge_kind].name + "'");
        }
    }
}

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize_lines(const std::string& text)
{
    std::vector<Line> out;
    std::istringstream is(text);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        for (char& c : raw)
            if (c == ',' || c == '=' || c == '\t') c = ' ';
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg)
{
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

} // namespace

Theory parse_theory(const std::string& text)
{
    Theory t;
    struct PendingVertex {
        int line;
        std::string name;
        std::vector<std::string> legs;
    };
    std::vector<PendingVertex> pending;

    for (const Line& line : tokenize_lines(text)) {
        const auto& tok = line.tokens;
        if (tok[0] == "theory") {
            if (tok.size() != 2) parse_fail(line.number, "expected 'theory <name>'");
            t.name = tok[1];
        } else if (tok[0] == "edge") {
            if (tok.size() == 2) {
                t.edge_kinds.push_back({tok[1], false});
            } else if (tok.size() == 3 && tok[2] == "oriented") {
                t.edge_kinds.push_back({tok[1], true});
            } else {
                parse_fail(line.number, "expected 'edge <name> [oriented]'");
            }
        } else if (tok[0] == "vertex") {
            if (tok.size() < 3) parse_fail(line.number, "expected 'vertex <name> = <leg>,<leg>,...'");
            pending.push_back({line.number, tok[1], {tok.begin() + 2, tok.end()}});
        } else {
            parse_fail(line.number, "unknown directive '" + tok[0] + "'");
        }
    }

    for (const PendingVertex& pv : pending) {
        VertexKind v;
        v.name = pv.name;
        for (const std::string& spec : pv.legs) {
            std::string kind = spec;
            Role role = Role::Plain;
            if (auto dot = spec.rfind('.'); dot != std::string::npos) {
                std::string suffix = spec.substr(dot + 1);
                if (suffix == "in")
                    role = Role::In;
                else if (suffix == "out")
                    role = Role::Out;
                else
                    parse_fail(pv.line, "bad leg role '." + suffix + "'");
                kind = spec.substr(0, dot);
            }
            int ek = t.edge_kind_index(kind);
            if (ek < 0)
                throw Error(ErrorKind::Semantic,
                            "line " + std::to_string(pv.line) + ": vertex '" + pv.name +
                                "' references unknown edge kind '" + kind + "'");
            v.legs.push_back({ek, role});
        }
        std::sort(v.legs.begin(), v.legs.end());
        t.vertex_kinds.push_back(std::move(v));
    }

    t.validate();
    return t;
}

Theory load_theory_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open theory file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_theory(buf.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::string serialize_theory(const Theory& t)
{
    std::ostringstream os;
    os << "theory " << t.name << "\n";
    for (const EdgeKind& e : t.edge_kinds) {
        os << "edge " << e.name;
        if (e.oriented) os << " oriented";
        os << "\n";
    }
    for (const VertexKind& v : t.vertex_kinds) {
        os << "vertex " << v.name << " =";
        for (std::size_t i = 0; i < v.legs.size(); ++i) {
            const LegType& l = v.legs[i];
            os << (i ? ", " : " ") << t.edge_kinds[l.edge_kind].name << role_suffix(l.role);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace feynhopf
