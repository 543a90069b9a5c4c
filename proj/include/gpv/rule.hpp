#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpv/formula.hpp"
#include "gpv/graph.hpp"
#include "gpv/value.hpp"

namespace gpv {

struct RuleNode {
    std::string id;
    std::vector<TermP> label;  // list expression, possibly with variables
    Mark mark = Mark::None;
    bool root = false;
};

struct RuleEdge {
    std::string id;
    std::string src, tgt;
    std::vector<TermP> label;
    Mark mark = Mark::None;
    bool bidirectional = false;  // (B) tag; only legal in the left graph
};

struct RuleGraph {
    std::vector<RuleNode> nodes;
    std::vector<RuleEdge> edges;
    int nodeIndex(const std::string& id) const;
    int edgeIndex(const std::string& id) const;
    int indeg(const std::string& id) const;
    int outdeg(const std::string& id) const;
};

struct RuleSchema {
    std::string name;
    std::vector<std::pair<std::string, VType>> vars;  // declaration order
    RuleGraph L, R;
    std::vector<std::string> interface;  // node ids, in both L and R
    FormulaP gamma;                      // rule condition; never null (true)
    bool unrestricted = false;           // inverted/relaxed rules

    std::map<std::string, VType> varTypes() const;
    // Edge ids present in both L and R with the same endpoints; these are
    // preserved (relabelled) rather than deleted and re-created.
    std::vector<std::string> preservedEdges() const;
    std::vector<std::string> deletedNodes() const;   // V_L minus interface
    std::vector<std::string> deletedEdges() const;   // E_L minus preserved
};

// Parses "name(decls) [ L ] => [ R ] interface = {...} [where cond]".
// Checks the schema restrictions (simple left labels, right variables a
// subset of left ones, any-marks in R only on preserved any-items) unless
// they are waived for unrestricted rules.
RuleSchema parse_rule(const std::string& text);

// Replaces every bidirectional edge by both orientations: 2^k variants.
std::vector<RuleSchema> expand_bidirectional(const RuleSchema& r);

struct LabelAssignment {
    std::map<std::string, ListValue> vars;
    std::map<std::string, Mark> nodeMarks;  // for any-marked rule items
    std::map<std::string, Mark> edgeMarks;
};

// Instantiates a rule graph into a host graph (all variables bound).
HostGraph instantiate(const RuleGraph& g, const LabelAssignment& alpha,
                      const std::map<std::string, VType>& types);

struct Match {
    Premorphism g;
    LabelAssignment alpha;
};

// Injective premorphisms L -> G whose label/mark instantiation matches.
// Simple labels are matched by unification; non-simple slots fall back to
// enumerating their unbound variables over `domain` (empty domain = exact
// evaluation only).
std::vector<Match> find_matches(const RuleGraph& L,
                                const std::map<std::string, VType>& types,
                                const HostGraph& G,
                                const std::vector<ListValue>& domain = {});

bool check_dangling(const Premorphism& g, const RuleSchema& r, const HostGraph& G);

struct Derivation {
    HostGraph H;
    Premorphism match;    // L -> G
    Premorphism comatch;  // R -> H
    LabelAssignment alpha;
};

// Direct derivations of a restricted conditional rule schema (all
// bidirectional variants included).
std::vector<Derivation> apply_rule(const RuleSchema& r, const HostGraph& G);

struct GeneralisedRule {
    RuleSchema rule;  // unconditional (gamma = true)
    FormulaP acL, acR;
};

// w = <r, Gamma as left condition, true>.
GeneralisedRule generalise(const RuleSchema& r);
// w^-1 swaps the sides and the two application conditions.
GeneralisedRule invert(const GeneralisedRule& w);

// Direct derivations of a generalised rule; `domain` bounds enumeration of
// variables unbound by matching, `marks` bounds any-marks re-created on
// the right. acL is checked on the replacement graph, acR on the comatch
// replacement graph.
std::vector<Derivation> apply_generalised(const GeneralisedRule& w,
                                          const HostGraph& G,
                                          const std::vector<ListValue>& domain,
                                          const std::vector<Mark>& nodeMarks,
                                          const std::vector<Mark>& edgeMarks);

}  // namespace gpv
