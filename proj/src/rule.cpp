#include "gpv/rule.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gpv {

int RuleGraph::nodeIndex(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return (int)i;
    return -1;
}

int RuleGraph::edgeIndex(const std::string& id) const {
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id) return (int)i;
    return -1;
}

int RuleGraph::indeg(const std::string& id) const {
    int d = 0;
    for (const auto& e : edges) d += (e.tgt == id);
    return d;
}

int RuleGraph::outdeg(const std::string& id) const {
    int d = 0;
    for (const auto& e : edges) d += (e.src == id);
    return d;
}

std::map<std::string, VType> RuleSchema::varTypes() const {
    std::map<std::string, VType> out;
    for (const auto& [n, t] : vars) out[n] = t;
    return out;
}

std::vector<std::string> RuleSchema::preservedEdges() const {
    std::vector<std::string> out;
    for (const auto& e : L.edges) {
        int j = R.edgeIndex(e.id);
        if (j >= 0 && R.edges[j].src == e.src && R.edges[j].tgt == e.tgt)
            out.push_back(e.id);
    }
    return out;
}

std::vector<std::string> RuleSchema::deletedNodes() const {
    std::vector<std::string> out;
    for (const auto& n : L.nodes)
        if (std::find(interface.begin(), interface.end(), n.id) == interface.end())
            out.push_back(n.id);
    return out;
}

std::vector<std::string> RuleSchema::deletedEdges() const {
    auto pres = preservedEdges();
    std::vector<std::string> out;
    for (const auto& e : L.edges)
        if (std::find(pres.begin(), pres.end(), e.id) == pres.end()) out.push_back(e.id);
    return out;
}

// ---- parsing ------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// splits on top-level (paren depth 0) occurrences of sep
std::vector<std::string> splitTop(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

VType vtypeFromName(const std::string& s) {
    if (s == "list") return VType::List;
    if (s == "atom") return VType::Atom;
    if (s == "int") return VType::Int;
    if (s == "string") return VType::Str;
    if (s == "char") return VType::Char;
    throw std::runtime_error("unknown variable type: " + s);
}

struct IdTag {
    std::string id;
    bool tagged = false;  // (R) on nodes, (B) on edges
};

IdTag parseIdTag(const std::string& s, char tag) {
    std::string t = trim(s);
    IdTag out;
    size_t p = t.find('(');
    if (p == std::string::npos) {
        out.id = t;
        return out;
    }
    out.id = trim(t.substr(0, p));
    std::string rest = trim(t.substr(p));
    if (rest != std::string("(") + tag + ")")
        throw std::runtime_error("bad tag on item '" + t + "'");
    out.tagged = true;
    return out;
}

std::pair<std::vector<TermP>, Mark> parseRuleLabel(const std::string& s,
                                                   const std::map<std::string, VType>& types) {
    int depth = 0;
    size_t hash = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == '#' && depth == 0) {
            hash = i;
            break;
        }
    }
    std::string labelText = trim(hash == std::string::npos ? s : s.substr(0, hash));
    Mark mark = Mark::None;
    if (hash != std::string::npos) {
        auto m = mark_from_string(trim(s.substr(hash + 1)));
        if (!m) throw std::runtime_error("unknown mark in label '" + s + "'");
        mark = *m;
    }
    if (labelText.empty()) labelText = "empty";
    return {parse_label_expr(labelText, types), mark};
}

RuleGraph parseRuleGraph(const std::string& text, const std::map<std::string, VType>& types,
                         bool leftSide) {
    auto sections = splitTop(text, '|');
    if (sections.size() != 3)
        throw std::runtime_error("rule graph needs '| nodes | edges': " + text);
    RuleGraph g;
    auto groups = [](const std::string& s) {
        std::vector<std::string> out;
        int depth = 0;
        size_t start = 0;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') {
                if (depth == 0) start = i + 1;
                ++depth;
            } else if (s[i] == ')') {
                --depth;
                if (depth == 0) out.push_back(s.substr(start, i - start));
                if (depth < 0)
                    throw std::runtime_error("unbalanced parentheses in rule graph");
            }
        }
        if (depth != 0) throw std::runtime_error("unbalanced parentheses in rule graph");
        return out;
    };
    for (const auto& grp : groups(sections[1])) {
        auto parts = splitTop(grp, ',');
        if (parts.size() != 2) throw std::runtime_error("bad node entry: (" + grp + ")");
        RuleNode n;
        IdTag it = parseIdTag(parts[0], 'R');
        n.id = it.id;
        n.root = it.tagged;
        auto [label, mark] = parseRuleLabel(parts[1], types);
        n.label = label;
        n.mark = mark;
        if (!is_node_mark(n.mark)) throw std::runtime_error("node mark cannot be dashed");
        if (g.nodeIndex(n.id) >= 0) throw std::runtime_error("duplicate node id " + n.id);
        g.nodes.push_back(std::move(n));
    }
    for (const auto& grp : groups(sections[2])) {
        auto parts = splitTop(grp, ',');
        if (parts.size() != 4) throw std::runtime_error("bad edge entry: (" + grp + ")");
        RuleEdge e;
        IdTag it = parseIdTag(parts[0], 'B');
        e.id = it.id;
        e.bidirectional = it.tagged;
        if (e.bidirectional && !leftSide)
            throw std::runtime_error("bidirectional tag only allowed in the left graph");
        e.src = trim(parts[1]);
        e.tgt = trim(parts[2]);
        auto [label, mark] = parseRuleLabel(parts[3], types);
        e.label = label;
        e.mark = mark;
        if (!is_edge_mark(e.mark)) throw std::runtime_error("edge mark cannot be grey");
        if (g.nodeIndex(e.src) < 0 || g.nodeIndex(e.tgt) < 0)
            throw std::runtime_error("edge " + e.id + " references a missing node");
        if (g.edgeIndex(e.id) >= 0) throw std::runtime_error("duplicate edge id " + e.id);
        g.edges.push_back(std::move(e));
    }
    return g;
}

void collectTermVars(const TermP& t, std::set<std::string>& out) {
    if (t->kind == Term::Var && t->varSort == Sort::List) out.insert(t->name);
    if (t->a) collectTermVars(t->a, out);
    if (t->b) collectTermVars(t->b, out);
}

std::set<std::string> graphVars(const RuleGraph& g) {
    std::set<std::string> out;
    for (const auto& n : g.nodes)
        for (const auto& p : n.label) collectTermVars(p, out);
    for (const auto& e : g.edges)
        for (const auto& p : e.label) collectTermVars(p, out);
    return out;
}

bool isSimpleLabel(const std::vector<TermP>& parts) {
    int listVars = 0;
    for (const auto& p : parts) {
        if (p->kind == Term::Var) {
            if (p->vtype == VType::List) ++listVars;
        } else if (p->kind != Term::ListConst) {
            return false;
        }
    }
    return listVars <= 1;
}

}  // namespace

RuleSchema parse_rule(const std::string& text) {
    RuleSchema r;
    size_t p = text.find('(');
    if (p == std::string::npos) throw std::runtime_error("rule needs a parameter list");
    r.name = trim(text.substr(0, p));
    int depth = 1;
    size_t q = p + 1;
    while (q < text.size() && depth > 0) {
        if (text[q] == '(') ++depth;
        if (text[q] == ')') --depth;
        ++q;
    }
    std::string decls = text.substr(p + 1, q - p - 2);
    for (const auto& group : splitTop(decls, ';')) {
        if (group.empty()) continue;
        auto cp = splitTop(group, ':');
        if (cp.size() != 2) throw std::runtime_error("bad variable declaration: " + group);
        VType vt = vtypeFromName(cp[1]);
        for (const auto& v : splitTop(cp[0], ','))
            r.vars.emplace_back(v, vt);
    }
    auto types = r.varTypes();

    auto grabGraph = [&](size_t& i) {
        while (i < text.size() && text[i] != '[') ++i;
        if (i >= text.size()) throw std::runtime_error("missing '[' in rule");
        size_t start = ++i;
        while (i < text.size() && text[i] != ']') ++i;
        if (i >= text.size()) throw std::runtime_error("missing ']' in rule");
        return text.substr(start, i++ - start);
    };
    size_t i = q;
    std::string Ltext = grabGraph(i);
    size_t arrow = text.find("=>", i);
    if (arrow == std::string::npos) throw std::runtime_error("missing '=>' in rule");
    i = arrow + 2;
    std::string Rtext = grabGraph(i);
    r.L = parseRuleGraph(Ltext, types, true);
    r.R = parseRuleGraph(Rtext, types, false);

    size_t intf = text.find("interface", i);
    if (intf == std::string::npos) throw std::runtime_error("missing interface clause");
    size_t ob = text.find('{', intf);
    size_t cb = text.find('}', ob);
    if (ob == std::string::npos || cb == std::string::npos)
        throw std::runtime_error("malformed interface clause");
    for (const auto& id : splitTop(text.substr(ob + 1, cb - ob - 1), ','))
        if (!id.empty()) r.interface.push_back(id);

    size_t wh = text.find("where", cb);
    if (wh != std::string::npos)
        r.gamma = parse_formula(trim(text.substr(wh + 5)), types);
    else
        r.gamma = mkTrue();

    // schema restrictions
    for (const auto& id : r.interface)
        if (r.L.nodeIndex(id) < 0 || r.R.nodeIndex(id) < 0)
            throw std::runtime_error("interface node " + id + " missing from L or R");
    if (!r.unrestricted) {
        for (const auto& n : r.L.nodes)
            if (!isSimpleLabel(n.label))
                throw std::runtime_error("left label of node " + n.id + " is not simple");
        for (const auto& e : r.L.edges)
            if (!isSimpleLabel(e.label))
                throw std::runtime_error("left label of edge " + e.id + " is not simple");
        auto lv = graphVars(r.L), rv = graphVars(r.R);
        for (const auto& v : rv)
            if (!lv.count(v))
                throw std::runtime_error("right-side variable " + v + " does not occur in L");
        for (const auto& n : r.R.nodes)
            if (n.mark == Mark::Any) {
                int j = r.L.nodeIndex(n.id);
                bool pres = std::find(r.interface.begin(), r.interface.end(), n.id) !=
                            r.interface.end();
                if (!pres || j < 0 || r.L.nodes[j].mark != Mark::Any)
                    throw std::runtime_error(
                        "any-mark in R requires a preserved any-marked counterpart");
            }
        for (const auto& e : r.R.edges)
            if (e.mark == Mark::Any) {
                int j = r.L.edgeIndex(e.id);
                if (j < 0 || r.L.edges[j].mark != Mark::Any)
                    throw std::runtime_error(
                        "any-mark in R requires a preserved any-marked counterpart");
            }
    }
    return r;
}

std::vector<RuleSchema> expand_bidirectional(const RuleSchema& r) {
    // bidirectional slots: left edges, plus right-only edges (these arise
    // when inverting a rule that deletes a bidirectional edge)
    struct Slot {
        bool inL;
        int idx;
    };
    std::vector<Slot> bidi;
    for (size_t i = 0; i < r.L.edges.size(); ++i)
        if (r.L.edges[i].bidirectional) bidi.push_back({true, (int)i});
    for (size_t i = 0; i < r.R.edges.size(); ++i)
        if (r.R.edges[i].bidirectional && r.L.edgeIndex(r.R.edges[i].id) < 0)
            bidi.push_back({false, (int)i});
    std::vector<RuleSchema> out;
    for (int mask = 0; mask < (1 << bidi.size()); ++mask) {
        RuleSchema v = r;
        for (size_t k = 0; k < bidi.size(); ++k) {
            bool flip = mask & (1 << k);
            RuleEdge& e = bidi[k].inL ? v.L.edges[bidi[k].idx] : v.R.edges[bidi[k].idx];
            e.bidirectional = false;
            if (flip) std::swap(e.src, e.tgt);
            if (bidi[k].inL) {
                int j = v.R.edgeIndex(e.id);
                if (j >= 0) {
                    v.R.edges[j].bidirectional = false;
                    if (flip) std::swap(v.R.edges[j].src, v.R.edges[j].tgt);
                }
            }
        }
        for (auto& e : v.R.edges) e.bidirectional = false;
        out.push_back(std::move(v));
    }
    return out;
}

// ---- instantiation and matching ------------------------------------------

namespace {

ListValue evalLabel(const std::vector<TermP>& parts,
                    const std::map<std::string, ListValue>& vars) {
    ListValue out;
    for (const auto& p : parts) {
        auto v = eval_ground(p, vars);
        if (!v) throw std::runtime_error("label expression not evaluable: " + print(p));
        out.insert(out.end(), v->begin(), v->end());
    }
    return out;
}

bool atomHasType(const Atom& a, VType t) {
    switch (t) {
        case VType::Int: return a.isInt;
        case VType::Str: return !a.isInt;
        case VType::Char: return !a.isInt && a.str.size() == 1;
        case VType::Atom: return true;
        default: return true;
    }
}

struct Matcher {
    const RuleGraph& L;
    const std::map<std::string, VType>& types;
    const HostGraph& G;
    const std::vector<ListValue>& domain;
    std::vector<Match>& out;

    std::map<std::string, ListValue> env;
    std::map<std::string, std::string> nmap, emap;
    std::map<std::string, Mark> nodeMarks, edgeMarks;
    std::set<int> usedN, usedE;

    void collectUnbound(const TermP& t, std::vector<std::string>& vars) const {
        if (t->kind == Term::Var && t->varSort == Sort::List && !env.count(t->name)) {
            if (std::find(vars.begin(), vars.end(), t->name) == vars.end())
                vars.push_back(t->name);
        }
        if (t->a) collectUnbound(t->a, vars);
        if (t->b) collectUnbound(t->b, vars);
    }

    bool unify(const std::vector<TermP>& parts, size_t pi, const ListValue& value, size_t vi,
               const std::function<bool()>& k) {
        if (pi == parts.size()) return vi == value.size() && k();
        const TermP& part = parts[pi];
        if (auto v = eval_ground(part, env)) {
            if (vi + v->size() > value.size()) return false;
            for (size_t j = 0; j < v->size(); ++j)
                if (!((*v)[j] == value[vi + j])) return false;
            return unify(parts, pi + 1, value, vi + v->size(), k);
        }
        if (part->kind == Term::Var && !env.count(part->name)) {
            VType vt = part->vtype;
            if (vt == VType::List) {
                for (size_t len = 0; vi + len <= value.size(); ++len) {
                    env[part->name] = ListValue(value.begin() + vi, value.begin() + vi + len);
                    if (unify(parts, pi + 1, value, vi + len, k)) return true;
                    env.erase(part->name);
                }
                return false;
            }
            if (vi >= value.size() || !atomHasType(value[vi], vt)) return false;
            env[part->name] = {value[vi]};
            if (unify(parts, pi + 1, value, vi + 1, k)) return true;
            env.erase(part->name);
            return false;
        }
        // Non-simple slot: enumerate its unbound variables over the domain.
        std::vector<std::string> unbound;
        collectUnbound(part, unbound);
        if (unbound.empty() || domain.empty()) return false;
        std::function<bool(size_t)> assign = [&](size_t ui) -> bool {
            if (ui == unbound.size()) return unify(parts, pi, value, vi, k);
            auto it = types.find(unbound[ui]);
            VType vt = it == types.end() ? VType::List : it->second;
            for (const auto& cand : domain) {
                if (vt != VType::List &&
                    !(cand.size() == 1 && atomHasType(cand[0], vt)))
                    continue;
                env[unbound[ui]] = cand;
                if (assign(ui + 1)) return true;
                env.erase(unbound[ui]);
            }
            return false;
        };
        return assign(0);
    }

    bool markCompat(Mark rule, Mark host) {
        if (rule == Mark::Any) return host != Mark::None;
        return rule == host;
    }

    bool matchEdges(size_t k) {
        if (k == L.edges.size()) {
            Match m;
            m.g.nodeMap = nmap;
            m.g.edgeMap = emap;
            m.alpha.vars = env;
            m.alpha.nodeMarks = nodeMarks;
            m.alpha.edgeMarks = edgeMarks;
            out.push_back(std::move(m));
            return false;  // keep enumerating all matches
        }
        const RuleEdge& le = L.edges[k];
        for (size_t j = 0; j < G.edges.size(); ++j) {
            if (usedE.count((int)j)) continue;
            const HostEdge& he = G.edges[j];
            if (he.src != nmap.at(le.src) || he.tgt != nmap.at(le.tgt)) continue;
            if (!markCompat(le.mark, he.mark)) continue;
            usedE.insert((int)j);
            emap[le.id] = he.id;
            bool anyMark = le.mark == Mark::Any;
            if (anyMark) edgeMarks[le.id] = he.mark;
            unify(le.label, 0, he.label, 0, [&] { return matchEdges(k + 1); });
            if (anyMark) edgeMarks.erase(le.id);
            emap.erase(le.id);
            usedE.erase((int)j);
        }
        return false;
    }

    bool matchNodes(size_t i) {
        if (i == L.nodes.size()) return matchEdges(0);
        const RuleNode& ln = L.nodes[i];
        for (size_t j = 0; j < G.nodes.size(); ++j) {
            if (usedN.count((int)j)) continue;
            const HostNode& hn = G.nodes[j];
            if (ln.root != hn.root) continue;
            if (!markCompat(ln.mark, hn.mark)) continue;
            usedN.insert((int)j);
            nmap[ln.id] = hn.id;
            bool anyMark = ln.mark == Mark::Any;
            if (anyMark) nodeMarks[ln.id] = hn.mark;
            unify(ln.label, 0, hn.label, 0, [&] { return matchNodes(i + 1); });
            if (anyMark) nodeMarks.erase(ln.id);
            nmap.erase(ln.id);
            usedN.erase((int)j);
        }
        return false;
    }
};

Env matchEnv(const Premorphism& g, const LabelAssignment& alpha) {
    Env env;
    env.nodeConsts = g.nodeMap;
    env.edgeConsts = g.edgeMap;
    env.listVars = alpha.vars;
    return env;
}

}  // namespace

HostGraph instantiate(const RuleGraph& g, const LabelAssignment& alpha,
                      const std::map<std::string, VType>& types) {
    (void)types;
    HostGraph out;
    for (const auto& n : g.nodes) {
        HostNode hn;
        hn.id = n.id;
        hn.label = evalLabel(n.label, alpha.vars);
        hn.mark = n.mark == Mark::Any ? alpha.nodeMarks.at(n.id) : n.mark;
        hn.root = n.root;
        out.addNode(std::move(hn));
    }
    for (const auto& e : g.edges) {
        HostEdge he;
        he.id = e.id;
        he.src = e.src;
        he.tgt = e.tgt;
        he.label = evalLabel(e.label, alpha.vars);
        he.mark = e.mark == Mark::Any ? alpha.edgeMarks.at(e.id) : e.mark;
        out.addEdge(std::move(he));
    }
    return out;
}

std::vector<Match> find_matches(const RuleGraph& L,
                                const std::map<std::string, VType>& types,
                                const HostGraph& G, const std::vector<ListValue>& domain) {
    std::vector<Match> out;
    Matcher m{L, types, G, domain, out};
    m.matchNodes(0);
    return out;
}

bool check_dangling(const Premorphism& g, const RuleSchema& r, const HostGraph& G) {
    std::set<std::string> imageEdges;
    for (const auto& [lid, hid] : g.edgeMap) imageEdges.insert(hid);
    for (const auto& v : r.deletedNodes()) {
        const std::string& hid = g.nodeMap.at(v);
        for (const auto& e : G.edges)
            if ((e.src == hid || e.tgt == hid) && !imageEdges.count(e.id)) return false;
    }
    return true;
}

namespace {

// Builds the derived graph once a match and a full label assignment are
// fixed; anyFallback supplies marks for any-items in R without an
// any-counterpart in L (only relevant for unrestricted rules).
Derivation deriveResult(const RuleSchema& r, const HostGraph& G, const Premorphism& g,
                        const LabelAssignment& alpha,
                        const std::map<std::string, Mark>& anyNodeFallback,
                        const std::map<std::string, Mark>& anyEdgeFallback) {
    HostGraph H = G;
    for (const auto& eid : r.deletedEdges()) H.removeEdge(g.edgeMap.at(eid));
    for (const auto& vid : r.deletedNodes()) H.removeNode(g.nodeMap.at(vid));

    Premorphism comatch;
    auto pres = r.preservedEdges();
    for (const auto& id : r.interface) comatch.nodeMap[id] = g.nodeMap.at(id);
    for (const auto& id : pres) comatch.edgeMap[id] = g.edgeMap.at(id);

    auto rMarkNode = [&](const RuleNode& rn) {
        if (rn.mark != Mark::Any) return rn.mark;
        int j = r.L.nodeIndex(rn.id);
        if (j >= 0 && r.L.nodes[j].mark == Mark::Any)
            return G.node(g.nodeMap.at(rn.id)).mark;  // carried over
        return anyNodeFallback.at(rn.id);
    };
    auto rMarkEdge = [&](const RuleEdge& re) {
        if (re.mark != Mark::Any) return re.mark;
        int j = r.L.edgeIndex(re.id);
        if (j >= 0 && r.L.edges[j].mark == Mark::Any)
            return G.edge(g.edgeMap.at(re.id)).mark;
        return anyEdgeFallback.at(re.id);
    };

    for (const auto& rn : r.R.nodes) {
        bool preserved = std::find(r.interface.begin(), r.interface.end(), rn.id) !=
                         r.interface.end();
        if (preserved) {
            int hi = H.nodeIndex(g.nodeMap.at(rn.id));
            H.nodes[hi].label = evalLabel(rn.label, alpha.vars);
            H.nodes[hi].mark = rMarkNode(rn);
            H.nodes[hi].root = rn.root;
        } else {
            HostNode hn;
            hn.id = H.freshNodeId(rn.id);
            hn.label = evalLabel(rn.label, alpha.vars);
            hn.mark = rMarkNode(rn);
            hn.root = rn.root;
            comatch.nodeMap[rn.id] = hn.id;
            H.addNode(std::move(hn));
        }
    }
    for (const auto& re : r.R.edges) {
        bool preserved = std::find(pres.begin(), pres.end(), re.id) != pres.end();
        if (preserved) {
            int hi = H.edgeIndex(g.edgeMap.at(re.id));
            H.edges[hi].label = evalLabel(re.label, alpha.vars);
            H.edges[hi].mark = rMarkEdge(re);
        } else {
            HostEdge he;
            he.id = H.freshEdgeId(re.id);
            he.src = comatch.nodeMap.at(re.src);
            he.tgt = comatch.nodeMap.at(re.tgt);
            he.label = evalLabel(re.label, alpha.vars);
            he.mark = rMarkEdge(re);
            comatch.edgeMap[re.id] = he.id;
            H.addEdge(std::move(he));
        }
    }
    return Derivation{std::move(H), g, std::move(comatch), alpha};
}

}  // namespace

std::vector<Derivation> apply_rule(const RuleSchema& r, const HostGraph& G) {
    std::vector<Derivation> out;
    for (const auto& v : expand_bidirectional(r)) {
        auto types = v.varTypes();
        for (auto& m : find_matches(v.L, types, G)) {
            if (v.gamma->kind != Formula::True) {
                auto dom = label_domain({}, G);
                if (!satisfies(G, v.gamma, dom, matchEnv(m.g, m.alpha))) continue;
            }
            if (!check_dangling(m.g, v, G)) continue;
            out.push_back(deriveResult(v, G, m.g, m.alpha, {}, {}));
        }
    }
    return out;
}

GeneralisedRule generalise(const RuleSchema& r) {
    GeneralisedRule w;
    w.rule = r;
    w.acL = r.gamma;
    w.acR = mkTrue();
    w.rule.gamma = mkTrue();
    w.rule.unrestricted = true;
    return w;
}

GeneralisedRule invert(const GeneralisedRule& w) {
    GeneralisedRule out;
    out.rule = w.rule;
    std::swap(out.rule.L, out.rule.R);
    out.acL = w.acR;
    out.acR = w.acL;
    out.rule.unrestricted = true;
    // a bidirectional edge stays bidirectional in the inverse: the inverse
    // of each orientation variant is an orientation variant of the inverse
    for (auto& e : out.rule.L.edges) {
        int j = w.rule.L.edgeIndex(e.id);
        e.bidirectional = j >= 0 && w.rule.L.edges[j].bidirectional;
    }
    for (auto& e : out.rule.R.edges) {
        int j = w.rule.L.edgeIndex(e.id);
        e.bidirectional = j >= 0 && w.rule.L.edges[j].bidirectional &&
                          w.rule.R.edgeIndex(e.id) < 0;
    }
    return out;
}

std::vector<Derivation> apply_generalised(const GeneralisedRule& w, const HostGraph& G,
                                          const std::vector<ListValue>& domain,
                                          const std::vector<Mark>& nodeMarks,
                                          const std::vector<Mark>& edgeMarks) {
    std::vector<Derivation> out;
    for (const auto& v : expand_bidirectional(w.rule)) {
        auto types = v.varTypes();
        std::vector<std::string> allVars;
        for (const auto& [n, t] : v.vars) allVars.push_back(n);

        for (auto& m : find_matches(v.L, types, G, domain)) {
            if (w.acL->kind != Formula::True &&
                !satisfies(G, w.acL, label_domain(domain, G), matchEnv(m.g, m.alpha)))
                continue;
            if (!check_dangling(m.g, v, G)) continue;

            // variables not bound by the match (they occur only in R)
            std::vector<std::string> unbound;
            std::function<void(const TermP&)> collect = [&](const TermP& t) {
                if (t->kind == Term::Var && t->varSort == Sort::List &&
                    !m.alpha.vars.count(t->name))
                    unbound.push_back(t->name);
                if (t->a) collect(t->a);
                if (t->b) collect(t->b);
            };
            for (const auto& rn : v.R.nodes)
                for (const auto& p : rn.label) collect(p);
            for (const auto& re : v.R.edges)
                for (const auto& p : re.label) collect(p);
            std::sort(unbound.begin(), unbound.end());
            unbound.erase(std::unique(unbound.begin(), unbound.end()), unbound.end());

            // any-marked items in R needing a fresh mark
            std::vector<std::string> anyNodes, anyEdges;
            for (const auto& rn : v.R.nodes)
                if (rn.mark == Mark::Any) {
                    int j = v.L.nodeIndex(rn.id);
                    if (!(j >= 0 && v.L.nodes[j].mark == Mark::Any)) anyNodes.push_back(rn.id);
                }
            for (const auto& re : v.R.edges)
                if (re.mark == Mark::Any) {
                    int j = v.L.edgeIndex(re.id);
                    if (!(j >= 0 && v.L.edges[j].mark == Mark::Any)) anyEdges.push_back(re.id);
                }

            std::map<std::string, Mark> nodeFb, edgeFb;
            std::function<void(size_t)> overEdgeMarks = [&](size_t k) {
                if (k == anyEdges.size()) {
                    try {
                        Derivation d = deriveResult(v, G, m.g, m.alpha, nodeFb, edgeFb);
                        Env env;
                        env.nodeConsts = d.comatch.nodeMap;
                        env.edgeConsts = d.comatch.edgeMap;
                        env.listVars = m.alpha.vars;
                        if (w.acR->kind == Formula::True ||
                            satisfies(d.H, w.acR, label_domain(domain, d.H), env))
                            out.push_back(std::move(d));
                    } catch (const std::exception&) {
                        // unevaluable label under this assignment
                    }
                    return;
                }
                for (Mark mk : edgeMarks) {
                    if (mk == Mark::None || !is_edge_mark(mk)) continue;
                    edgeFb[anyEdges[k]] = mk;
                    overEdgeMarks(k + 1);
                }
                edgeFb.erase(anyEdges[k]);
            };
            std::function<void(size_t)> overNodeMarks = [&](size_t k) {
                if (k == anyNodes.size()) {
                    overEdgeMarks(0);
                    return;
                }
                for (Mark mk : nodeMarks) {
                    if (mk == Mark::None || !is_node_mark(mk)) continue;
                    nodeFb[anyNodes[k]] = mk;
                    overNodeMarks(k + 1);
                }
                nodeFb.erase(anyNodes[k]);
            };
            std::function<void(size_t)> overVars = [&](size_t ui) {
                if (ui == unbound.size()) {
                    overNodeMarks(0);
                    return;
                }
                auto it = types.find(unbound[ui]);
                VType vt = it == types.end() ? VType::List : it->second;
                for (const auto& cand : domain) {
                    if (vt != VType::List && !(cand.size() == 1 && atomHasType(cand[0], vt)))
                        continue;
                    m.alpha.vars[unbound[ui]] = cand;
                    overVars(ui + 1);
                }
                m.alpha.vars.erase(unbound[ui]);
            };
            overVars(0);
        }
    }
    return out;
}

}  // namespace gpv
