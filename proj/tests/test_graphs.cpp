#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpv/graph.hpp"
#include "testutil.hpp"

using namespace gpv;

TEST_CASE("parse and print round-trip") {
    std::string text = "[ | (n1, 1:2#red) (n2(R), \"hi\") | (e1, n1, n2, empty#dashed) ]";
    HostGraph g = parse_host_graph(text);
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.node("n1").mark == Mark::Red);
    CHECK(g.node("n1").label.size() == 2);
    CHECK(g.node("n2").root);
    CHECK(g.node("n2").label[0].str == "hi");
    CHECK(g.edge("e1").mark == Mark::Dashed);
    CHECK(g.edge("e1").label.empty());
    HostGraph g2 = parse_host_graph(g.print());
    CHECK(g2.canonicalKey() == g.canonicalKey());
}

TEST_CASE("corpus host graph parses") {
    HostGraph g = parse_host_graph(corpusFile("triangle.host"));
    CHECK(g.nodes.size() == 3);
    CHECK(g.edges.size() == 3);
    for (const auto& n : g.nodes) CHECK(n.label.empty());
}

TEST_CASE("canonical key identifies isomorphic graphs") {
    HostGraph a = parse_host_graph("[ | (x, 1) (y, 2) | (e, x, y, empty) ]");
    HostGraph b = parse_host_graph("[ | (p, 2) (q, 1) | (d, q, p, empty) ]");
    CHECK(isomorphic(a, b));
    HostGraph c = parse_host_graph("[ | (x, 1) (y, 2) | (e, y, x, empty) ]");
    CHECK_FALSE(isomorphic(a, c));  // edge direction reversed relative to labels
}

TEST_CASE("canonical key distinguishes marks and roots") {
    HostGraph a = parse_host_graph("[ | (x, empty) | ]");
    HostGraph b = parse_host_graph("[ | (x, empty#red) | ]");
    HostGraph c = parse_host_graph("[ | (x(R), empty) | ]");
    CHECK(a.canonicalKey() != b.canonicalKey());
    CHECK(a.canonicalKey() != c.canonicalKey());
}

TEST_CASE("parallel edges and loops survive the round trip") {
    HostGraph g = parse_host_graph(
        "[ | (x, empty) | (e1, x, x, 1) (e2, x, x, 1) (e3, x, x, 2) ]");
    CHECK(g.edges.size() == 3);
    CHECK(isomorphic(g, parse_host_graph(g.print())));
}

TEST_CASE("node removal requires isolation") {
    HostGraph g = parse_host_graph("[ | (x, empty) (y, empty) | (e, x, y, empty) ]");
    CHECK_THROWS(g.removeNode("x"));
    g.removeEdge("e");
    g.removeNode("x");
    CHECK(g.nodes.size() == 1);
}

TEST_CASE("fresh node ids avoid collisions") {
    HostGraph g = parse_host_graph("[ | (n1, empty) | ]");
    std::string id = g.freshNodeId("n1");
    CHECK(id != "n1");
    CHECK(g.nodeIndex(id) == -1);
}

TEST_CASE("bidirectional tag rejected in host graphs") {
    CHECK_THROWS(parse_host_graph("[ | (x, empty) | (e(B), x, x, empty) ]"));
}
