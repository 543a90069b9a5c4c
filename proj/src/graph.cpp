#include "gpv/graph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gpv {

int HostGraph::nodeIndex(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return (int)i;
    return -1;
}

int HostGraph::edgeIndex(const std::string& id) const {
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id) return (int)i;
    return -1;
}

const HostNode& HostGraph::node(const std::string& id) const {
    int i = nodeIndex(id);
    if (i < 0) throw std::runtime_error("no such node: " + id);
    return nodes[i];
}

const HostEdge& HostGraph::edge(const std::string& id) const {
    int i = edgeIndex(id);
    if (i < 0) throw std::runtime_error("no such edge: " + id);
    return edges[i];
}

void HostGraph::addNode(HostNode n) {
    if (nodeIndex(n.id) >= 0) throw std::runtime_error("duplicate node id: " + n.id);
    if (!is_node_mark(n.mark) || n.mark == Mark::Any)
        throw std::runtime_error("illegal node mark in host graph: " + to_string(n.mark));
    nodes.push_back(std::move(n));
}

void HostGraph::addEdge(HostEdge e) {
    if (edgeIndex(e.id) >= 0) throw std::runtime_error("duplicate edge id: " + e.id);
    if (nodeIndex(e.src) < 0 || nodeIndex(e.tgt) < 0)
        throw std::runtime_error("edge " + e.id + " references a missing node");
    if (!is_edge_mark(e.mark) || e.mark == Mark::Any)
        throw std::runtime_error("illegal edge mark in host graph: " + to_string(e.mark));
    edges.push_back(std::move(e));
}

void HostGraph::removeEdge(const std::string& id) {
    int i = edgeIndex(id);
    if (i < 0) throw std::runtime_error("no such edge: " + id);
    edges.erase(edges.begin() + i);
}

void HostGraph::removeNode(const std::string& id) {
    int i = nodeIndex(id);
    if (i < 0) throw std::runtime_error("no such node: " + id);
    for (const auto& e : edges)
        if (e.src == id || e.tgt == id)
            throw std::runtime_error("removing non-isolated node: " + id);
    nodes.erase(nodes.begin() + i);
}

std::string HostGraph::freshNodeId(const std::string& hint) const {
    if (nodeIndex(hint) < 0) return hint;
    for (int k = 0;; ++k) {
        std::string cand = hint + "_" + std::to_string(k);
        if (nodeIndex(cand) < 0) return cand;
    }
}

std::string HostGraph::freshEdgeId(const std::string& hint) const {
    if (edgeIndex(hint) < 0) return hint;
    for (int k = 0;; ++k) {
        std::string cand = hint + "_" + std::to_string(k);
        if (edgeIndex(cand) < 0) return cand;
    }
}

int HostGraph::indeg(int nodeIdx) const {
    int d = 0;
    for (const auto& e : edges)
        if (e.tgt == nodes[nodeIdx].id) ++d;
    return d;
}

int HostGraph::outdeg(int nodeIdx) const {
    int d = 0;
    for (const auto& e : edges)
        if (e.src == nodes[nodeIdx].id) ++d;
    return d;
}

std::string HostGraph::print() const {
    std::ostringstream os;
    os << "[ |";
    for (const auto& n : nodes) {
        os << " (" << n.id;
        if (n.root) os << "(R)";
        os << ", " << to_string(n.label);
        if (n.mark != Mark::None) os << " #" << to_string(n.mark);
        os << ")";
    }
    os << " |";
    for (const auto& e : edges) {
        os << " (" << e.id << ", " << e.src << ", " << e.tgt << ", " << to_string(e.label);
        if (e.mark != Mark::None) os << " #" << to_string(e.mark);
        os << ")";
    }
    os << " ]";
    return os.str();
}

std::string HostGraph::canonicalKey() const {
    size_t n = nodes.size();
    if (n > 8) throw std::runtime_error("canonicalKey: graph too large");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    bool first = true;
    do {
        // pos[i] = new position of old node i
        std::vector<int> pos(n);
        for (size_t k = 0; k < n; ++k) pos[perm[k]] = (int)k;
        std::string key;
        for (size_t k = 0; k < n; ++k) {
            const auto& nd = nodes[perm[k]];
            key += "N(" + to_string(nd.label) + "," + to_string(nd.mark) +
                   (nd.root ? ",R)" : ")");
        }
        std::vector<std::string> es;
        for (const auto& e : edges)
            es.push_back("E(" + std::to_string(pos[nodeIndex(e.src)]) + "," +
                         std::to_string(pos[nodeIndex(e.tgt)]) + "," + to_string(e.label) +
                         "," + to_string(e.mark) + ")");
        std::sort(es.begin(), es.end());
        for (const auto& s : es) key += s;
        if (first || key < best) {
            best = key;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

bool isomorphic(const HostGraph& a, const HostGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    return a.canonicalKey() == b.canonicalKey();
}

// ---- parsing ----------------------------------------------------------

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;

    void skipWs() {
        while (i < s.size() && (std::isspace((unsigned char)s[i]) || s[i] == '\n')) ++i;
    }
    bool eof() {
        skipWs();
        return i >= s.size();
    }
    char peek() {
        skipWs();
        return i < s.size() ? s[i] : '\0';
    }
    bool tryEat(char c) {
        skipWs();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!tryEat(c))
            throw std::runtime_error(std::string("expected '") + c + "' at offset " +
                                     std::to_string(i) + " in graph text");
    }
    std::string ident() {
        skipWs();
        size_t j = i;
        while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
        if (j == i) throw std::runtime_error("expected identifier at offset " + std::to_string(i));
        std::string out = s.substr(i, j - i);
        i = j;
        return out;
    }
};

Atom parseAtom(Cursor& c) {
    c.skipWs();
    if (c.peek() == '"') {
        ++c.i;
        std::string v;
        while (c.i < c.s.size() && c.s[c.i] != '"') v += c.s[c.i++];
        if (c.i >= c.s.size()) throw std::runtime_error("unterminated string literal");
        ++c.i;
        return Atom::ofStr(v);
    }
    bool neg = c.tryEat('-');
    c.skipWs();
    if (c.i < c.s.size() && std::isdigit((unsigned char)c.s[c.i])) {
        size_t j = c.i;
        while (j < c.s.size() && std::isdigit((unsigned char)c.s[j])) ++j;
        long long n = std::stoll(c.s.substr(c.i, j - c.i));
        c.i = j;
        return Atom::ofInt(neg ? -n : n);
    }
    if (neg) throw std::runtime_error("expected number after '-'");
    // Bare identifiers are read as string atoms.
    return Atom::ofStr(c.ident());
}

// label [#mark]; stops at ',' or ')'
std::pair<ListValue, Mark> parseLabel(Cursor& c) {
    ListValue lv;
    Mark mark = Mark::None;
    if (c.peek() != '#') {
        while (true) {
            c.skipWs();
            // "empty" denotes the empty list
            size_t save = c.i;
            Atom a = parseAtom(c);
            if (!(a.isInt == false && a.str == "empty")) {
                lv.push_back(a);
            } else if (!lv.empty()) {
                throw std::runtime_error("'empty' inside a non-empty list");
            }
            (void)save;
            if (!c.tryEat(':')) break;
        }
    }
    if (c.tryEat('#')) {
        auto m = mark_from_string(c.ident());
        if (!m) throw std::runtime_error("unknown mark");
        mark = *m;
    }
    return {lv, mark};
}

}  // namespace

HostGraph parse_host_graph(const std::string& text) {
    Cursor c{text};
    bool bracket = c.tryEat('[');
    // anything before the first '|' is layout information; skip it
    while (!c.eof() && c.peek() != '|') ++c.i;
    c.expect('|');
    HostGraph g;
    while (c.peek() == '(') {
        c.expect('(');
        HostNode n;
        n.id = c.ident();
        if (c.tryEat('(')) {
            std::string tag = c.ident();
            if (tag != "R") throw std::runtime_error("unknown node tag: " + tag);
            n.root = true;
            c.expect(')');
        }
        c.expect(',');
        auto [lv, mark] = parseLabel(c);
        n.label = lv;
        n.mark = mark;
        if (c.tryEat(',')) {  // discard position info
            while (c.peek() != ')' && !c.eof()) ++c.i;
        }
        c.expect(')');
        g.addNode(std::move(n));
    }
    c.expect('|');
    while (c.peek() == '(') {
        c.expect('(');
        HostEdge e;
        e.id = c.ident();
        if (c.tryEat('('))
            throw std::runtime_error("bidirectional tag is not allowed in host graphs");
        c.expect(',');
        e.src = c.ident();
        c.expect(',');
        e.tgt = c.ident();
        c.expect(',');
        auto [lv, mark] = parseLabel(c);
        e.label = lv;
        e.mark = mark;
        c.expect(')');
        g.addEdge(std::move(e));
    }
    if (bracket) c.expect(']');
    if (!c.eof()) throw std::runtime_error("trailing input after graph");
    return g;
}

HostGraph replacement_graph(const HostGraph& G, const Premorphism& g) {
    std::map<std::string, std::string> nodeRen, edgeRen;  // host id -> new id
    std::set<std::string> usedN, usedE;
    for (const auto& [lid, hid] : g.nodeMap) {
        nodeRen[hid] = lid;
        usedN.insert(lid);
    }
    for (const auto& [lid, hid] : g.edgeMap) {
        edgeRen[hid] = lid;
        usedE.insert(lid);
    }
    auto freshen = [](const std::string& base, std::set<std::string>& used) {
        if (!used.count(base)) {
            used.insert(base);
            return base;
        }
        for (int k = 0;; ++k) {
            std::string cand = base + "_" + std::to_string(k);
            if (!used.count(cand)) {
                used.insert(cand);
                return cand;
            }
        }
    };
    for (const auto& n : G.nodes)
        if (!nodeRen.count(n.id)) nodeRen[n.id] = freshen(n.id, usedN);
    for (const auto& e : G.edges)
        if (!edgeRen.count(e.id)) edgeRen[e.id] = freshen(e.id, usedE);

    HostGraph out;
    for (const auto& n : G.nodes) {
        HostNode m = n;
        m.id = nodeRen[n.id];
        out.addNode(std::move(m));
    }
    for (const auto& e : G.edges) {
        HostEdge f = e;
        f.id = edgeRen[e.id];
        f.src = nodeRen[e.src];
        f.tgt = nodeRen[e.tgt];
        out.addEdge(std::move(f));
    }
    return out;
}

}  // namespace gpv
