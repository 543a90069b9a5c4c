#pragma once
#include <string>
#include <utility>
#include <vector>

#include "gpv/formula.hpp"
#include "gpv/rule.hpp"

namespace gpv {

// Optional record of intermediate results, for the CLI's --trace.
struct PipelineTrace {
    std::vector<std::pair<std::string, FormulaP>> stages;
    void add(const std::string& name, const FormulaP& f) { stages.emplace_back(name, f); }
};

// Specification of a rule graph: variable types, labels, marks, roots,
// sources and targets, item by item.
FormulaP spec_graph(const RuleGraph& g, const std::map<std::string, VType>& types);

// No edge outside the matched left-hand side touches a deleted node:
// indeg/outdeg of each deleted node equals its degree in L.
FormulaP dang(const RuleSchema& r);

// Same for the inverse direction (degrees of created nodes in R).
FormulaP dang_inverse(const RuleSchema& r);

// Case analysis of quantifiers over the items of L. List variables of c
// clashing with rule variables are renamed apart first.
FormulaP split(const FormulaP& c, const RuleSchema& r);

// Evaluates label/mark/source/target/root/degree expressions on constants
// of L to their values, then folds ground comparisons (fixpoint).
FormulaP val(const FormulaP& c, const RuleSchema& r);

// Lift(c, w) = Val(Split(c /\ acL, r) /\ Dang(r), r).
FormulaP lift(const FormulaP& c, const GeneralisedRule& w, PipelineTrace* tr = nullptr);

// Rewrites a lifted condition over L into one over R: degree bookkeeping
// via incon/outcon elimination, facts about deleted items resolved,
// quantifiers guarded against created items.
FormulaP adj(const FormulaP& c, const RuleSchema& r);

// Shift(c, w) = Adj(Lift(c, w), r) /\ acR /\ Spec(R) /\ Dang(r^-1).
FormulaP shift(const FormulaP& c, const GeneralisedRule& w, PipelineTrace* tr = nullptr);

// Constants replaced by fresh distinct variables, existentially closed.
struct Variablised {
    FormulaP f;  // includes the pairwise-distinctness conjuncts
    std::vector<std::string> nodeVars, edgeVars;
};
Variablised variablise(const FormulaP& c);

// Post(c, w): variablised Shift, closed under exists_V, exists_E, exists_L.
FormulaP post(const FormulaP& c, const GeneralisedRule& w, PipelineTrace* tr = nullptr);

// Strongest liberal postcondition of a restricted conditional rule:
// disjunction of Post(c, v-or) over the bidirectional variants v.
FormulaP slp_rule(const FormulaP& c, const RuleSchema& r, PipelineTrace* tr = nullptr);

// Weakest liberal precondition: ~Post(~d, (v-or)^-1) over the variants.
FormulaP wlp_rule(const RuleSchema& r, const FormulaP& d, PipelineTrace* tr = nullptr);

// Applicability: variablised Spec(L) /\ Dang(r) /\ Gamma-or, closed.
FormulaP app_rule(const RuleSchema& r, PipelineTrace* tr = nullptr);

}  // namespace gpv
