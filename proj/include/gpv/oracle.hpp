#pragma once
#include <functional>
#include <string>
#include <vector>

#include "gpv/formula.hpp"
#include "gpv/graph.hpp"
#include "gpv/program.hpp"
#include "gpv/rule.hpp"

namespace gpv {

struct GraphUniverse {
    int maxNodes = 3;
    int maxEdges = 3;
    std::vector<ListValue> labels;  // node and edge label alphabet
    std::vector<Mark> nodeMarks{Mark::None};
    std::vector<Mark> edgeMarks{Mark::None};
    bool roots = true;
};

// Calls fn once per isomorphism class of graphs within the bounds.
// Returns the number of classes; stops early if fn returns false.
long long for_each_graph(const GraphUniverse& u,
                         const std::function<bool(const HostGraph&)>& fn);
std::vector<HostGraph> enumerate_graphs(const GraphUniverse& u);

struct SlpViolation {
    HostGraph G, H;
    bool soundness = false;   // G |= c, G => H, H |/= slp
    bool strongest = false;   // H |= slp but no c-satisfying preimage
};

// Checks Slp(c, r) (or slpOverride) against rule application on every
// graph of the universe. Empty result = no violation found.
std::vector<SlpViolation> validate_slp(const FormulaP& c, const RuleSchema& r,
                                       const GraphUniverse& u,
                                       FormulaP slpOverride = nullptr,
                                       int maxViolations = 5);

struct ProgramMismatch {
    HostGraph G;
    std::string what;  // "success", "fail" or "pre"
    bool formulaSays = false, interpreterSays = false;
};

// Success/Fail formulas versus the interpreter on every universe graph.
std::vector<ProgramMismatch> validate_success_fail(const CmdP& P,
                                                   const GraphUniverse& u,
                                                   long long fuel = 100000,
                                                   int maxMismatches = 5);

// Pre(P, c) versus "some result satisfies c" for loop-free P.
std::vector<ProgramMismatch> validate_pre(const CmdP& P, const FormulaP& c,
                                          const GraphUniverse& u,
                                          long long fuel = 100000,
                                          int maxMismatches = 5);

// App(r) versus applicability of r on every universe graph.
std::vector<ProgramMismatch> validate_app(const RuleSchema& r,
                                          const GraphUniverse& u,
                                          int maxMismatches = 5);

}  // namespace gpv
