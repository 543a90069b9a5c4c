#pragma once
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gpv/formula.hpp"
#include "gpv/graph.hpp"
#include "gpv/rule.hpp"
#include "gpv/transforms.hpp"

namespace gpv {

struct Command;
using CmdP = std::shared_ptr<const Command>;

struct Command {
    enum Kind { RuleSet, Seq, If, Try, Loop, OrCmd, Break, Skip, FailCmd } kind;
    // RuleSet: the resolved schemata and their declared names. A bare rule
    // call is a singleton whose braced flag is false.
    std::vector<RuleSchema> rules;
    std::vector<std::string> ruleNames;
    bool braced = false;
    CmdP a, b, c;  // Seq: a;b   If/Try: cond a, then b, else c   Loop/Or: a(,b)
};

std::string print(const CmdP& cmd);

struct Program {
    std::map<std::string, RuleSchema> rules;
    std::map<std::string, CmdP> procedures;  // fully inlined bodies
    CmdP main;                               // null if no Main
};

// Parses rule declarations, procedure declarations (Name = command) and
// Main. Procedure calls are inlined; recursion is rejected.
Program parse_program(const std::string& text);
// Parses a bare command with rules/procedures from an existing context.
CmdP parse_command(const std::string& text, const Program& ctx);

enum class CommandClass { LoopFree, NonFailing, Iteration, Control, Invalid };
bool is_loop_free(const CmdP& c);
bool is_non_failing(const CmdP& c);
bool is_iteration(const CmdP& c);   // loop-free | non-failing | C; P
bool is_control(const CmdP& c);     // branch conditions loop-free, loop bodies iteration
bool contains_break(const CmdP& c);
bool contains_or(const CmdP& c);

struct ExecOutcome {
    std::vector<HostGraph> results;  // deduplicated up to isomorphism
    std::vector<HostGraph> breaks;   // graphs reached at an unconsumed break
    bool canFail = false;            // some execution ends in failure
    bool fuelExhausted = false;      // results may be incomplete
};

// Collecting big-step interpreter over the operational semantics. Fuel is
// decremented per small step; loops detect revisited graphs (divergence
// contributes no result). Breaks escape to the nearest loop; at top level
// a pending break behaves like skip.
ExecOutcome interpret(const CmdP& cmd, const HostGraph& G, long long fuel = 100000);

// Formula constructors for loop-free programs.
FormulaP slp_loopfree(const FormulaP& c, const CmdP& P);
FormulaP pre_loopfree(const CmdP& P, const FormulaP& d);
FormulaP success_loopfree(const CmdP& P);
FormulaP fail_loopfree(const CmdP& P);
// Fail for iteration commands (false for non-failing parts).
FormulaP fail_iteration(const CmdP& P);

}  // namespace gpv
