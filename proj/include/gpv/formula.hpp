#pragma once
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gpv/graph.hpp"
#include "gpv/value.hpp"

namespace gpv {

enum class Sort { Node, Edge, List, MarkS };

// Subtypes of list-sorted variables (from rule declarations).
enum class VType { List, Atom, Int, Str, Char };

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
    enum Kind {
        ListConst,   // lv
        MarkConst,   // mark
        NodeConst,   // name (a node identifier)
        EdgeConst,   // name (an edge identifier)
        Var,         // name, sort, vtype (vtype only meaningful for List)
        Src, Tgt,    // a : edge -> node
        LabV, MarkV, Indeg, Outdeg, Incon, Outcon,  // a : node -> ...
        LabE, MarkE,                                // a : edge -> ...
        Length,                   // a : list -> int
        Add, Sub, Mul, Div,       // a, b
        Neg,                      // a
        Dot,                      // a . b   string concat
        Colon,                    // a : b   list concat
    } kind;

    ListValue lv;
    Mark mark = Mark::None;
    std::string name;
    Sort varSort = Sort::List;
    VType vtype = VType::List;
    TermP a, b;

    Sort sort() const;
};

TermP mkInt(long long n);
TermP mkList(ListValue v);
TermP mkMark(Mark m);
TermP mkNodeC(const std::string& id);
TermP mkEdgeC(const std::string& id);
TermP mkVar(const std::string& name, Sort s, VType vt = VType::List);
TermP mkUn(Term::Kind k, TermP a);
TermP mkBin(Term::Kind k, TermP a, TermP b);

struct Formula;
using FormulaP = std::shared_ptr<const Formula>;

struct Formula {
    enum Kind {
        True, False,
        Not,         // kids[0]
        And, Or,     // kids (flattened, >= 2)
        Eq, Ne, Lt, Le, Gt, Ge,   // t1, t2
        ExistsV, ExistsE, ExistsL,  // var, kids[0]
        PInt, PChar, PStr, PAtom,   // t1 (list-sorted)
        Root,                       // t1 (node-sorted)
    } kind;

    std::vector<FormulaP> kids;
    TermP t1, t2;
    std::string var;
};

FormulaP mkTrue();
FormulaP mkFalse();
FormulaP mkNot(FormulaP f);
FormulaP mkAnd(std::vector<FormulaP> fs);  // flattens, drops true, absorbs false
FormulaP mkOr(std::vector<FormulaP> fs);
FormulaP mkAnd2(FormulaP a, FormulaP b);
FormulaP mkOr2(FormulaP a, FormulaP b);
FormulaP mkCmp(Formula::Kind k, TermP a, TermP b);
FormulaP mkExists(Formula::Kind k, const std::string& var, FormulaP body);
FormulaP mkPred(Formula::Kind k, TermP t);

std::string print(const TermP& t);
std::string print(const FormulaP& f);

// Parses the ASCII syntax: exists_V/E/L, forall_V/E/L, ~, /\, \/, ->,
// =, !=, <, <=, >, >=, mV/mE/lV/lE/s/t/indeg/outdeg/incon/outcon/length,
// int/char/string/atom/root predicates, edge(x,y[,l][,m]) sugar, mark
// and list literals. `types` gives subtypes for free list variables.
// Bare identifiers in node/edge positions that are not bound become
// node/edge constants. Throws std::runtime_error on errors.
FormulaP parse_formula(const std::string& text,
                       const std::map<std::string, VType>& types = {});

// Parses a rule-label list expression; identifiers become typed variables.
// Returns the top-level ':'-components (empty vector for "empty").
std::vector<TermP> parse_label_expr(const std::string& text,
                                    const std::map<std::string, VType>& types);

std::set<std::string> free_list_vars(const FormulaP& f);
std::set<std::string> node_constants(const FormulaP& f);
std::set<std::string> edge_constants(const FormulaP& f);
bool mentions_con(const FormulaP& f);  // contains incon/outcon

// Capture-avoiding substitution of a list variable by a term.
FormulaP subst_list_var(const FormulaP& f, const std::string& var, TermP t);
// Replace a bound node/edge variable occurrence by a constant.
FormulaP subst_var(const FormulaP& f, const std::string& var, TermP t);
// Rename node/edge constants (used by variablise and replacement graphs).
FormulaP rename_constants(const FormulaP& f,
                          const std::map<std::string, std::string>& nodeRen,
                          const std::map<std::string, std::string>& edgeRen);
// Replace every occurrence of s(x)/t(x) for the given edge variable.
FormulaP subst_endpoint(const FormulaP& f, Term::Kind srcOrTgt,
                        const std::string& edgeVar, TermP replacement);
bool term_mentions(const TermP& t, Term::Kind srcOrTgt, const std::string& edgeVar);
bool formula_mentions_endpoint(const FormulaP& f, Term::Kind srcOrTgt,
                               const std::string& edgeVar);

// Logical simplification: constant folding, double negation, De Morgan
// (negations pushed to literals), unit/absorbing elements, x=x.
FormulaP simplify(const FormulaP& f);

// Canonical form for golden comparisons: simplify, order commutative
// children structurally, then rename bound variables to a fixed pool in
// traversal order. Two formulas print identically after canon iff they
// are equal up to commutativity, bound renaming and trivial laws.
FormulaP canon(const FormulaP& f);
std::string canon_str(const FormulaP& f);

// --- evaluation over a host graph -------------------------------------

struct Env {
    std::map<std::string, int> nodeVars;   // -> node index
    std::map<std::string, int> edgeVars;   // -> edge index
    std::map<std::string, ListValue> listVars;
    // node/edge constants map to same-id items of G unless remapped here
    std::map<std::string, std::string> nodeConsts;
    std::map<std::string, std::string> edgeConsts;
};

// Label domain used for bounded exists_L evaluation.
std::vector<ListValue> label_domain(const std::vector<ListValue>& universe,
                                    const HostGraph& G);

// Bounded satisfaction: exists_L ranges over `domain` plus values solved
// from top-level equalities in the body. Terms that fail to evaluate
// (missing constant, division by zero) make comparisons false.
// Throws if the formula mentions incon/outcon.
bool satisfies(const HostGraph& G, const FormulaP& f,
               const std::vector<ListValue>& domain, const Env& env = {});

// Evaluate a variable-free, graph-independent term (arithmetic etc).
std::optional<ListValue> eval_ground(const TermP& t,
                                     const std::map<std::string, ListValue>& vars);

}  // namespace gpv
