#include <doctest.h>

#include "feynhopf/subgraph.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace feynhopf;

TEST_CASE("the 2-loop photon self-energy has exactly two occurrences")
{
    auto qed = testutil::theory("qed");
    FeynmanGraph g = testutil::graph("qed-2loop-photon-se", qed);
    auto occs = enumerate_subgraphs(g);
    REQUIRE(occs.size() == 2);
    FeynmanGraph vc1 = testutil::graph("qed-vc1", qed);
    FeynmanGraph bubble = testutil::graph("qed-photon-se-1loop", qed);
    for (const auto& occ : occs) {
        REQUIRE(occ.components.size() == 1);
        CHECK(occ.components[0].canonical_key() == vc1.canonical_key());
        CHECK(contract(g, occ).canonical_key() == bubble.canonical_key());
    }
}

TEST_CASE("primitive graphs have no occurrences")
{
    auto qed = testutil::theory("qed");
    CHECK(enumerate_subgraphs(testutil::graph("qed-electron-se-1loop", qed)).empty());
    CHECK(enumerate_subgraphs(testutil::graph("qed-vc1", qed)).empty());
    CHECK(enumerate_subgraphs(testutil::graph("qed-photon-se-1loop", qed)).empty());
    auto phi3 = testutil::theory("phi3");
    CHECK(enumerate_subgraphs(testutil::graph("phi3-bubble", phi3)).empty());
}

TEST_CASE("the 3-loop ladder reproduces the displayed occurrence classes")
{
    auto qed = testutil::theory("qed");
    FeynmanGraph g = testutil::graph("qed-photon-se-3loop-ladder", qed);
    FeynmanGraph vc1 = testutil::graph("qed-vc1", qed);
    FeynmanGraph se2 = testutil::graph("qed-2loop-photon-se", qed);
    FeynmanGraph bubble = testutil::graph("qed-photon-se-1loop", qed);

    auto occs = enumerate_subgraphs(g);
    REQUIRE(occs.size() == 5);
    int nested_vc = 0, single_vc = 0, pair_vc = 0;
    for (const auto& occ : occs) {
        FeynmanGraph quo = contract(g, occ);
        if (occ.components.size() == 2) {
            CHECK(occ.components[0].canonical_key() == vc1.canonical_key());
            CHECK(occ.components[1].canonical_key() == vc1.canonical_key());
            CHECK(quo.canonical_key() == bubble.canonical_key());
            ++pair_vc;
        } else if (occ.components[0].loop_number() == 2) {
            CHECK(quo.canonical_key() == bubble.canonical_key());
            CHECK(occ.components[0].residue().is_vertex);
            ++nested_vc;
        } else {
            CHECK(occ.components[0].canonical_key() == vc1.canonical_key());
            CHECK(quo.canonical_key() == se2.canonical_key());
            ++single_vc;
        }
    }
    CHECK(nested_vc == 2);
    CHECK(single_vc == 2);
    CHECK(pair_vc == 1);
}

TEST_CASE("contracting the nested electron self-energy")
{
    auto qed = testutil::theory("qed");
    FeynmanGraph g = testutil::graph("qed-electron-se-2loop-nested", qed);
    FeynmanGraph se1 = testutil::graph("qed-electron-se-1loop", qed);
    auto occs = enumerate_subgraphs(g);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].components[0].canonical_key() == se1.canonical_key());
    CHECK(contract(g, occs[0]).canonical_key() == se1.canonical_key());
}

TEST_CASE("contraction invariants on every occurrence of the corpus")
{
    auto qed = testutil::theory("qed");
    for (const char* name : {"qed-2loop-photon-se", "qed-photon-se-3loop-ladder", "qed-electron-se-2loop-nested",
                             "qed-electron-se-2loop-crossed"}) {
        FeynmanGraph g = testutil::graph(name, qed);
        for (const auto& occ : enumerate_subgraphs(g)) {
            FeynmanGraph quo = contract(g, occ);
            CHECK(quo.is_1pi());
            CHECK(quo.residue() == g.residue());
            int locc = 0;
            for (const FeynmanGraph& c : occ.components) {
                CHECK(c.is_1pi());
                locc += c.loop_number();
            }
            CHECK(g.loop_number() == locc + quo.loop_number());
        }
    }
}

TEST_CASE("edge contraction may create self-loops")
{
    auto phi34 = testutil::theory("phi34");
    // quartic vertex with a dressed self-loop: w == x double edge, self-loop at x
    FeynmanGraph g(phi34);
    int v4 = phi34->vertex_kind_index("v4");
    g.add_vertex("w", v4);
    g.add_vertex("x", v4);
    g.add_edge("d1", 0, 0, 1);
    g.add_edge("d2", 0, 0, 1);
    g.add_edge("sl", 0, 1, 1);
    g.add_external("a", 0, Role::Plain, 0);
    g.add_external("b", 0, Role::Plain, 0);
    g.finalize();
    REQUIRE(g.is_1pi());
    auto occs = enumerate_subgraphs(g);
    // {sl} is an edge-residue occurrence; contracting it closes a self-loop at w
    bool found = false;
    for (const auto& occ : occs) {
        if (occ.edge_ids == std::vector<int>{2}) {
            found = true;
            FeynmanGraph quo = contract(g, occ);
            CHECK(quo.vertices().size() == 1);
            REQUIRE(quo.edges().size() == 1);
            CHECK(quo.edges()[0].tail == quo.edges()[0].head);
        }
    }
    CHECK(found);
}

TEST_CASE("insertion place counts from the paper")
{
    auto qed = testutil::theory("qed");
    FeynmanGraph bubble = testutil::graph("qed-photon-se-1loop", qed);
    Residue vertex{true, 0};
    Residue electron{false, qed->edge_kind_index("electron")};
    CHECK(count_insertion_places(bubble, {vertex}) == 2);
    CHECK(count_insertion_places(bubble, {electron, electron}) == 6);
    CHECK(count_insertion_places(bubble, {}) == 1);
}

TEST_CASE("insertion counts match brute-force placement enumeration")
{
    auto phi3 = testutil::theory("phi3");
    FeynmanGraph b = testutil::graph("phi3-bubble", phi3);
    FeynmanGraph t = testutil::graph("phi3-triangle", phi3);
    Residue vr{true, 0}, er{false, 0};
    std::vector<std::vector<Residue>> part_lists = {
        {}, {vr}, {er}, {vr, vr}, {er, er}, {vr, er}, {vr, vr, er}, {er, er, er}, {vr, vr, vr}};
    for (const FeynmanGraph* big : {&b, &t})
        for (const auto& parts : part_lists)
            CHECK(count_insertion_places(*big, parts) == oracles::brute_force_insertions(*big, parts));
}

TEST_CASE("component counts")
{
    auto qed = testutil::theory("qed");
    FeynmanGraph vc1 = testutil::graph("qed-vc1", qed);
    ResidueCounts m = component_counts(vc1);
    CHECK(m.vertex[0] == 3);
    CHECK(m.edge[qed->edge_kind_index("electron")] == 2);
    CHECK(m.edge[qed->edge_kind_index("photon")] == 1);

    FeynmanGraph bubble = testutil::graph("qed-photon-se-1loop", qed);
    m = component_counts(bubble);
    CHECK(m.vertex[0] == 2);
    CHECK(m.edge[qed->edge_kind_index("electron")] == 2);
    CHECK(m.edge[qed->edge_kind_index("photon")] == 0);

    FeynmanGraph unit = parse_graph("", qed);
    m = component_counts(unit);
    CHECK(m.vertex[0] == 0);
    CHECK(m.edge[0] == 0);
    CHECK(m.edge[1] == 0);
}

TEST_CASE("occurrence counts stay by edge subset, not isomorphism class")
{
    // phi3 wheatstone graph: two triangle occurrences sharing edges
    auto phi3 = testutil::theory("phi3");
    FeynmanGraph w(phi3);
    for (const char* id : {"a", "b", "c", "d"}) w.add_vertex(id, 0);
    w.add_edge("ac", 0, 0, 2);
    w.add_edge("ad", 0, 0, 3);
    w.add_edge("bc", 0, 1, 2);
    w.add_edge("bd", 0, 1, 3);
    w.add_edge("cd", 0, 2, 3);
    w.add_external("x", 0, Role::Plain, 0);
    w.add_external("y", 0, Role::Plain, 1);
    w.finalize();
    REQUIRE(w.is_1pi());
    auto occs = enumerate_subgraphs(w);
    REQUIRE(occs.size() == 2);
    FeynmanGraph tri = testutil::graph("phi3-triangle", phi3);
    FeynmanGraph bub = testutil::graph("phi3-bubble", phi3);
    for (const auto& occ : occs) {
        CHECK(occ.components[0].canonical_key() == tri.canonical_key());
        CHECK(contract(w, occ).canonical_key() == bub.canonical_key());
    }
}
