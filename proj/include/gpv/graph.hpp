#pragma once
#include <map>
#include <string>
#include <vector>

#include "gpv/value.hpp"

namespace gpv {

struct HostNode {
    std::string id;
    ListValue label;
    Mark mark = Mark::None;
    bool root = false;
};

struct HostEdge {
    std::string id;
    std::string src, tgt;
    ListValue label;
    Mark mark = Mark::None;
};

struct HostGraph {
    std::vector<HostNode> nodes;
    std::vector<HostEdge> edges;

    int nodeIndex(const std::string& id) const;  // -1 if absent
    int edgeIndex(const std::string& id) const;
    const HostNode& node(const std::string& id) const;
    const HostEdge& edge(const std::string& id) const;
    void addNode(HostNode n);
    void addEdge(HostEdge e);
    void removeEdge(const std::string& id);
    void removeNode(const std::string& id);  // node must be isolated
    std::string freshNodeId(const std::string& hint) const;
    std::string freshEdgeId(const std::string& hint) const;

    int indeg(int nodeIdx) const;
    int outdeg(int nodeIdx) const;

    // Serialization in the same text syntax parse_host_graph accepts.
    std::string print() const;

    // Canonical serialization: minimal over all node orderings, so equal
    // keys <=> isomorphic graphs. Intended for small graphs (<= 6 nodes).
    std::string canonicalKey() const;
};

// Parses "[ | nodes | edges ]" (brackets optional). Node: (id, label) with
// optional (R) root tag and #mark suffix; edge: (id, src, tgt, label).
// Bare identifiers in labels are read as string atoms. Throws
// std::runtime_error on syntax errors, dangling edge endpoints, duplicate
// ids, or marks illegal in host graphs.
HostGraph parse_host_graph(const std::string& text);

bool isomorphic(const HostGraph& a, const HostGraph& b);

// Maps of rule-graph item ids to host ids; src/tgt/root-preserving when
// used as a premorphism.
struct Premorphism {
    std::map<std::string, std::string> nodeMap;
    std::map<std::string, std::string> edgeMap;
};

// Graph G with the image of the morphism renamed to the rule graph's own
// ids (other items renamed apart if they collide).
HostGraph replacement_graph(const HostGraph& G, const Premorphism& g);

}  // namespace gpv
