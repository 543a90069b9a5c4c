#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpv/program.hpp"
#include "gpv/rule.hpp"
#include "testutil.hpp"

using namespace gpv;

static const std::vector<ListValue> kDomain = {ListValue{}, {Atom::ofInt(0)},
                                               {Atom::ofInt(1)}};

TEST_CASE("parsing the relabelling-and-deleting rule") {
    RuleSchema r = parse_rule(corpusFile("del.gpr"));
    CHECK(r.name == "del");
    CHECK(r.vars.size() == 5);
    CHECK(r.L.nodes.size() == 3);
    CHECK(r.L.edges.size() == 2);
    CHECK(r.R.nodes.size() == 2);
    CHECK(r.interface == std::vector<std::string>{"1", "2"});
    CHECK(r.deletedNodes() == std::vector<std::string>{"3"});
    // e1 keeps its endpoints, so it is relabelled rather than re-created
    CHECK(r.preservedEdges() == std::vector<std::string>{"e1"});
    CHECK(r.deletedEdges() == std::vector<std::string>{"e2"});
    CHECK(canonEqual(r.gamma, parse_formula("d >= e")));
}

TEST_CASE("parsing the root-copying rule") {
    RuleSchema r = parse_rule(corpusFile("copy.gpr"));
    CHECK(r.L.nodes.size() == 1);
    CHECK(r.L.nodes[0].root);
    CHECK(r.R.nodes.size() == 2);
    CHECK_FALSE(r.R.nodes[0].root);
    CHECK(r.R.nodes[1].root);
    CHECK(r.R.edges[0].mark == Mark::Dashed);
    CHECK(r.deletedNodes().empty());
}

TEST_CASE("applying del merges the two edge labels") {
    RuleSchema r = parse_rule(corpusFile("del.gpr"));
    HostGraph g = parse_host_graph(
        "[ | (a, empty) (b, empty) (c, empty) | (x, a, b, 5) (y, a, c, 3) ]");
    auto ds = apply_rule(r, g);
    REQUIRE(ds.size() == 1);
    const HostGraph& h = ds[0].H;
    CHECK(h.nodes.size() == 2);
    CHECK(h.edges.size() == 1);
    CHECK(h.edges[0].label == ListValue{Atom::ofInt(8)});
    // the kept endpoint of the deleted edge turns red
    int reds = 0;
    for (const auto& n : h.nodes) reds += n.mark == Mark::Red;
    CHECK(reds == 1);
}

TEST_CASE("del respects its condition and the dangling condition") {
    RuleSchema r = parse_rule(corpusFile("del.gpr"));
    // the two edges can be matched either way round, but d >= e only holds
    // for one of the assignments, so exactly one derivation remains
    auto ds = apply_rule(r, parse_host_graph("[ | (a, empty) (b, empty) (c, empty) |"
                                             " (x, a, b, 1) (y, a, c, 3) ]"));
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].H.edges[0].label == ListValue{Atom::ofInt(4)});
    // dangling: node c has an extra incident edge not in the match
    CHECK(apply_rule(r, parse_host_graph("[ | (a, empty) (b, empty) (c, empty) |"
                                         " (x, a, b, 5) (y, a, c, 3) (z, c, b, 0) ]"))
              .empty());
}

TEST_CASE("copy only applies at a root with outgoing edges") {
    RuleSchema r = parse_rule(corpusFile("copy.gpr"));
    CHECK(apply_rule(r, parse_host_graph("[ | (a(R), 7) | ]")).empty());
    auto ds = apply_rule(r, parse_host_graph("[ | (a(R), 7) (b, 1) | (e, a, b, empty) ]"));
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].H.nodes.size() == 3);
    int roots = 0;
    for (const auto& n : ds[0].H.nodes) roots += n.root;
    CHECK(roots == 1);  // the root moves to the copy
}

TEST_CASE("bidirectional edges expand to both orientations") {
    Program p = parse_program(corpusFile("twocolouring.gp2"));
    auto variants = expand_bidirectional(p.rules.at("col_blue"));
    CHECK(variants.size() == 2);
    CHECK(variants[0].L.edges[0].src != variants[1].L.edges[0].src);
    CHECK(expand_bidirectional(parse_rule(corpusFile("del.gpr"))).size() == 1);

    // the rule matches an edge in either direction
    HostGraph g = parse_host_graph("[ | (a, empty#red) (b, empty) | (e, b, a, empty) ]");
    CHECK(apply_rule(p.rules.at("col_blue"), g).size() == 1);
}

TEST_CASE("any-mark in the left graph means marked") {
    Program p = parse_program(corpusFile("twocolouring.gp2"));
    const RuleSchema& unmark = p.rules.at("unmark");
    CHECK(apply_rule(unmark, parse_host_graph("[ | (a, empty) | ]")).empty());
    auto ds = apply_rule(unmark, parse_host_graph("[ | (a, 3#green) | ]"));
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].H.nodes[0].mark == Mark::None);
    CHECK(ds[0].H.nodes[0].label == ListValue{Atom::ofInt(3)});
}

TEST_CASE("generalised application agrees with plain application") {
    for (const char* f : {"del.gpr", "copy.gpr"}) {
        RuleSchema r = parse_rule(corpusFile(f));
        GeneralisedRule w = generalise(r);
        HostGraph g = parse_host_graph(
            "[ | (a(R), empty) (b, empty) (c, empty) | (x, a, b, 1) (y, a, c, 1) ]");
        auto plain = apply_rule(r, g);
        auto gen = apply_generalised(w, g, kDomain, {Mark::None}, {Mark::None});
        REQUIRE(plain.size() == gen.size());
        for (size_t i = 0; i < plain.size(); ++i) {
            bool found = false;
            for (size_t j = 0; j < gen.size(); ++j)
                found = found || isomorphic(plain[i].H, gen[j].H);
            CHECK(found);
        }
    }
}

TEST_CASE("inverting a derivation recovers the source graph") {
    RuleSchema r = parse_rule(corpusFile("del.gpr"));
    HostGraph g = parse_host_graph(
        "[ | (a, empty) (b, empty) (c, empty) | (x, a, b, 1) (y, a, c, 1) ]");
    GeneralisedRule w = generalise(r);
    GeneralisedRule winv = invert(w);
    for (const auto& d : apply_generalised(w, g, kDomain, {Mark::None}, {Mark::None})) {
        bool recovered = false;
        for (const auto& back :
             apply_generalised(winv, d.H, kDomain, {Mark::None, Mark::Red}, {Mark::None}))
            recovered = recovered || isomorphic(back.H, g);
        CHECK(recovered);
    }
}

TEST_CASE("schema restrictions are enforced") {
    // right-hand variable not in the left graph
    CHECK_THROWS(parse_rule("bad(a, b : list) [ | (1, a) | ] => [ | (1, b) | ] interface {1}"));
    // non-simple left label
    CHECK_THROWS(parse_rule("bad(a, b : list) [ | (1, a:b) | ] => [ | (1, a) | ] interface {1}"));
    // interface node missing from R
    CHECK_THROWS(parse_rule("bad(a : list) [ | (1, a) | ] => [ | | ] interface {1}"));
}
