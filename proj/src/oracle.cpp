#include "gpv/oracle.hpp"

#include <functional>
#include <set>

namespace gpv {

namespace {

struct NodeType {
    ListValue label;
    Mark mark;
    bool root;
};

struct EdgeType {
    int src, tgt;
    ListValue label;
    Mark mark;
};

}  // namespace

long long for_each_graph(const GraphUniverse& u,
                         const std::function<bool(const HostGraph&)>& fn) {
    std::vector<NodeType> nodeTypes;
    for (const auto& l : u.labels)
        for (Mark m : u.nodeMarks) {
            if (!is_node_mark(m) || m == Mark::Any) continue;
            nodeTypes.push_back({l, m, false});
            if (u.roots) nodeTypes.push_back({l, m, true});
        }

    long long count = 0;
    bool stop = false;

    // node multisets: non-decreasing sequences of node-type indices
    std::vector<int> nodeSel;
    std::function<void(int, int)> overNodes = [&](int n, int minIdx) {
        if (stop) return;
        // emit graphs for the current node multiset
        {
            HostGraph base;
            for (size_t i = 0; i < nodeSel.size(); ++i) {
                const NodeType& t = nodeTypes[nodeSel[i]];
                base.addNode({"n" + std::to_string(i + 1), t.label, t.mark, t.root});
            }
            std::vector<EdgeType> edgeTypes;
            for (int s = 0; s < (int)nodeSel.size(); ++s)
                for (int t = 0; t < (int)nodeSel.size(); ++t)
                    for (const auto& l : u.labels)
                        for (Mark m : u.edgeMarks) {
                            if (!is_edge_mark(m) || m == Mark::Any) continue;
                            edgeTypes.push_back({s, t, l, m});
                        }
            std::set<std::string> seen;  // dedup within this node class
            std::vector<int> edgeSel;
            std::function<void(int, int)> overEdges = [&](int m, int minE) {
                if (stop) return;
                HostGraph g = base;
                for (size_t i = 0; i < edgeSel.size(); ++i) {
                    const EdgeType& t = edgeTypes[edgeSel[i]];
                    g.addEdge({"e" + std::to_string(i + 1),
                               "n" + std::to_string(t.src + 1),
                               "n" + std::to_string(t.tgt + 1), t.label, t.mark});
                }
                if (seen.insert(g.canonicalKey()).second) {
                    ++count;
                    if (!fn(g)) {
                        stop = true;
                        return;
                    }
                }
                if (m == u.maxEdges || edgeTypes.empty()) return;
                for (int e = minE; e < (int)edgeTypes.size(); ++e) {
                    edgeSel.push_back(e);
                    overEdges(m + 1, e);
                    edgeSel.pop_back();
                    if (stop) return;
                }
            };
            overEdges(0, 0);
        }
        if (stop || n == u.maxNodes) return;
        for (int t = minIdx; t < (int)nodeTypes.size(); ++t) {
            nodeSel.push_back(t);
            overNodes(n + 1, t);
            nodeSel.pop_back();
            if (stop) return;
        }
    };
    overNodes(0, 0);
    return count;
}

std::vector<HostGraph> enumerate_graphs(const GraphUniverse& u) {
    std::vector<HostGraph> out;
    for_each_graph(u, [&](const HostGraph& g) {
        out.push_back(g);
        return true;
    });
    return out;
}

std::vector<SlpViolation> validate_slp(const FormulaP& c, const RuleSchema& r,
                                       const GraphUniverse& u, FormulaP slpOverride,
                                       int maxViolations) {
    FormulaP slp = slpOverride ? slpOverride : slp_rule(c, r);
    std::vector<SlpViolation> out;
    std::vector<GeneralisedRule> inverses;
    for (const auto& v : expand_bidirectional(r)) inverses.push_back(invert(generalise(v)));

    for_each_graph(u, [&](const HostGraph& G) {
        auto domG = label_domain(u.labels, G);
        // soundness: every direct successor of a c-graph satisfies slp
        if (satisfies(G, c, domG)) {
            for (auto& d : apply_rule(r, G)) {
                if (!satisfies(d.H, slp, label_domain(u.labels, d.H))) {
                    out.push_back({G, d.H, true, false});
                    if ((int)out.size() >= maxViolations) return false;
                }
            }
        }
        // strongestness: every slp-graph has a c-satisfying preimage
        if (satisfies(G, slp, domG)) {
            bool found = false;
            for (const auto& w : inverses) {
                for (auto& d : apply_generalised(w, G, domG, u.nodeMarks, u.edgeMarks)) {
                    if (satisfies(d.H, c, label_domain(u.labels, d.H))) {
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (!found) {
                out.push_back({HostGraph{}, G, false, true});
                if ((int)out.size() >= maxViolations) return false;
            }
        }
        return true;
    });
    return out;
}

std::vector<ProgramMismatch> validate_success_fail(const CmdP& P, const GraphUniverse& u,
                                                   long long fuel, int maxMismatches) {
    std::vector<ProgramMismatch> out;
    FormulaP succ = is_loop_free(P) ? success_loopfree(P) : nullptr;
    FormulaP fail = is_iteration(P) ? fail_iteration(P) : nullptr;
    for_each_graph(u, [&](const HostGraph& G) {
        ExecOutcome eo = interpret(P, G, fuel);
        if (eo.fuelExhausted) return true;  // outcome not fully known
        auto dom = label_domain(u.labels, G);
        if (succ) {
            bool f = satisfies(G, succ, dom);
            bool i = !eo.results.empty();
            if (f != i) {
                out.push_back({G, "success", f, i});
                if ((int)out.size() >= maxMismatches) return false;
            }
        }
        if (fail) {
            bool f = satisfies(G, fail, dom);
            bool i = eo.canFail;
            if (f != i) {
                out.push_back({G, "fail", f, i});
                if ((int)out.size() >= maxMismatches) return false;
            }
        }
        return true;
    });
    return out;
}

std::vector<ProgramMismatch> validate_pre(const CmdP& P, const FormulaP& c,
                                          const GraphUniverse& u, long long fuel,
                                          int maxMismatches) {
    std::vector<ProgramMismatch> out;
    FormulaP pre = pre_loopfree(P, c);
    for_each_graph(u, [&](const HostGraph& G) {
        ExecOutcome eo = interpret(P, G, fuel);
        if (eo.fuelExhausted) return true;
        bool f = satisfies(G, pre, label_domain(u.labels, G));
        bool i = false;
        for (const auto& H : eo.results)
            if (satisfies(H, c, label_domain(u.labels, H))) {
                i = true;
                break;
            }
        if (f != i) {
            out.push_back({G, "pre", f, i});
            if ((int)out.size() >= maxMismatches) return false;
        }
        return true;
    });
    return out;
}

std::vector<ProgramMismatch> validate_app(const RuleSchema& r, const GraphUniverse& u,
                                          int maxMismatches) {
    std::vector<ProgramMismatch> out;
    FormulaP app = app_rule(r);
    for_each_graph(u, [&](const HostGraph& G) {
        bool f = satisfies(G, app, label_domain(u.labels, G));
        bool i = !apply_rule(r, G).empty();
        if (f != i) {
            out.push_back({G, "app", f, i});
            if ((int)out.size() >= maxMismatches) return false;
        }
        return true;
    });
    return out;
}

}  // namespace gpv
