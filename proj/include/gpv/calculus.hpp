#pragma once
#include <optional>
#include <string>
#include <vector>

#include "gpv/formula.hpp"
#include "gpv/oracle.hpp"
#include "gpv/program.hpp"

namespace gpv {

struct Verdict {
    enum Kind { Proved, CounterexampleFound, UnknownUpToBound } kind;
    std::optional<HostGraph> witness;
    std::string note;
};

// Bounded implication check a => b over the universe. Proved only when the
// bound is a small-model margin for both formulas: quantifier nesting per
// sort within maxNodes/maxEdges and all label constants inside the
// universe's label closure; otherwise UnknownUpToBound.
Verdict check_implication(const FormulaP& a, const FormulaP& b, const GraphUniverse& u);

// Break(c, S, d): every break inside S reached from a c-graph holds d.
// Trivially Proved for break-free S; otherwise counterexample search.
Verdict check_break(const FormulaP& c, const CmdP& S, const FormulaP& d,
                    const GraphUniverse& u, long long fuel = 100000);

struct Obligation {
    std::string kind;  // "implies" or "break"
    FormulaP a, b;
    CmdP cmd;  // break obligations only
    Verdict verdict{Verdict::UnknownUpToBound, std::nullopt, ""};
};

struct ProofTree {
    std::string rule;  // ruleapp_slp | ruleapp_wlp | ruleset | comp | cons | if | try | alap
    FormulaP pre, post;
    CmdP prog;
    std::vector<Obligation> obligations;
    std::vector<ProofTree> premises;

    bool fullyProved() const;
    std::string toJson() const;  // schema documented in README
};

struct ProofHints {
    std::vector<FormulaP> invariants;  // consumed by loops, leftmost first
    std::vector<FormulaP> midpoints;   // consumed by sequences, leftmost first
};

// Builds the syntactic proof tree for {c} P {d}, discharging implication
// obligations against the universe. Throws on programs containing `or`
// (the calculus has no rule for it) or on missing loop invariants.
ProofTree prove(const FormulaP& c, const CmdP& P, const FormulaP& d,
                const ProofHints& hints, const GraphUniverse& u,
                long long fuel = 100000);

// Re-checks that every node instantiates its inference rule (conclusions
// and premises fit together; leaf postconditions match the transformer
// output up to canonical form). Returns an error message or "".
std::string validate_tree(const ProofTree& t);

}  // namespace gpv
