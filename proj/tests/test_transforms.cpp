#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gpv/program.hpp"
#include "gpv/transforms.hpp"
#include "testutil.hpp"

using namespace gpv;

// The expected strings below are the hand-derived results of running the
// transformation pipeline for the two corpus rules against the corpus
// preconditions q1 ("no edge leaves a marked node") and q2 ("some node is
// not a root"). They were worked out independently by hand and act as
// golden values; comparison is up to canonical form.

static RuleSchema delRule() { return parse_rule(corpusFile("del.gpr")); }
static RuleSchema copyRule() { return parse_rule(corpusFile("copy.gpr")); }
static const std::map<std::string, VType> kDelTypes = {{"d", VType::Int},
                                                       {"e", VType::Int}};

static void checkCanon(const FormulaP& got, const std::string& expect,
                       const std::map<std::string, VType>& types = {}) {
    FormulaP want = parse_formula(expect, types);
    CHECK_MESSAGE(canonEqual(got, want), "got:  " << canon_str(got)
                                                  << "\nwant: " << canon_str(want));
}

TEST_CASE("dangling-degree conditions") {
    checkCanon(dang(delRule()), "indeg(3) = 1 /\\ outdeg(3) = 0");
    checkCanon(dang(copyRule()), "true");
    // inverse direction: degrees of the node created by copy
    checkCanon(dang_inverse(copyRule()), "indeg(2) = 1 /\\ outdeg(2) = 0");
}

TEST_CASE("split performs case analysis over the left-hand items") {
    checkCanon(split(corpusFormula("q1.fol"), delRule()),
               "~(mV(s(e1)) != none \\/ mV(s(e2)) != none \\/ "
               "exists_E x(x != e1 /\\ x != e2 /\\ "
               "(s(x) = 1 /\\ mV(1) != none \\/ s(x) = 2 /\\ mV(2) != none \\/ "
               "s(x) = 3 /\\ mV(3) != none \\/ "
               "s(x) != 1 /\\ s(x) != 2 /\\ s(x) != 3 /\\ mV(s(x)) != none)))");
    checkCanon(split(corpusFormula("q2.fol"), copyRule()),
               "~root(1) \\/ exists_V x(x != 1 /\\ ~root(x))");
}

TEST_CASE("val evaluates left-hand constants") {
    checkCanon(val(split(corpusFormula("q1.fol"), delRule()), delRule()),
               "~exists_E x(x != e1 /\\ x != e2 /\\ s(x) != 1 /\\ s(x) != 2 /\\ "
               "s(x) != 3 /\\ mV(s(x)) != none)");
    checkCanon(val(split(corpusFormula("q2.fol"), copyRule()), copyRule()),
               "exists_V x(x != 1 /\\ ~root(x))");
    checkCanon(val(delRule().gamma, delRule()), "d >= e", kDelTypes);
    checkCanon(val(copyRule().gamma, copyRule()), "outcon(1) != 0");
}

TEST_CASE("lift combines split, rule condition and dangling degrees") {
    checkCanon(lift(corpusFormula("q1.fol"), generalise(delRule())),
               "~exists_E x(x != e1 /\\ x != e2 /\\ s(x) != 1 /\\ s(x) != 2 /\\ "
               "s(x) != 3 /\\ mV(s(x)) != none) /\\ d >= e",
               kDelTypes);
    checkCanon(lift(corpusFormula("q2.fol"), generalise(copyRule())),
               "exists_V x(x != 1 /\\ ~root(x)) /\\ outcon(1) != 0");
}

TEST_CASE("adj rewrites a lifted condition to the right-hand side") {
    checkCanon(adj(lift(corpusFormula("q1.fol"), generalise(delRule())), delRule()),
               "~exists_E x(x != e1 /\\ s(x) != 1 /\\ s(x) != 2 /\\ mV(s(x)) != none)"
               " /\\ d >= e",
               kDelTypes);
    checkCanon(adj(lift(corpusFormula("q2.fol"), generalise(copyRule())), copyRule()),
               "exists_V x(x != 1 /\\ x != 2 /\\ ~root(x)) /\\ outdeg(1) != 1");
}

TEST_CASE("shift adds the right-hand specification") {
    checkCanon(shift(corpusFormula("q1.fol"), generalise(delRule())),
               "~exists_E x(x != e1 /\\ s(x) != 1 /\\ s(x) != 2 /\\ mV(s(x)) != none)"
               " /\\ d >= e /\\ int(d) /\\ int(e)"
               " /\\ lV(1) = a /\\ lV(2) = b /\\ lE(e1) = d + e"
               " /\\ mV(1) = red /\\ mV(2) = none /\\ mE(e1) = none"
               " /\\ s(e1) = 1 /\\ t(e1) = 2 /\\ ~root(1) /\\ ~root(2)",
               kDelTypes);
    checkCanon(shift(corpusFormula("q2.fol"), generalise(copyRule())),
               "exists_V x(x != 1 /\\ x != 2 /\\ ~root(x)) /\\ outdeg(1) != 1"
               " /\\ lV(1) = a /\\ lV(2) = a /\\ lE(e1) = empty"
               " /\\ mV(1) = none /\\ mV(2) = none /\\ mE(e1) = dashed"
               " /\\ s(e1) = 1 /\\ t(e1) = 2 /\\ ~root(1) /\\ root(2)"
               " /\\ indeg(2) = 1 /\\ outdeg(2) = 0");
}

TEST_CASE("post closes the variablised shift existentially") {
    checkCanon(post(corpusFormula("q1.fol"), generalise(delRule())),
               "exists_V u(exists_V v(exists_E w(exists_L a(exists_L b(exists_L d("
               "exists_L e(u != v"
               " /\\ ~exists_E x(x != w /\\ s(x) != u /\\ s(x) != v /\\ mV(s(x)) != none)"
               " /\\ d >= e /\\ int(d) /\\ int(e)"
               " /\\ lV(u) = a /\\ mV(u) = red /\\ ~root(u)"
               " /\\ lV(v) = b /\\ mV(v) = none /\\ ~root(v)"
               " /\\ s(w) = u /\\ t(w) = v /\\ lE(w) = d + e /\\ mE(w) = none)))))))");
    checkCanon(post(corpusFormula("q2.fol"), generalise(copyRule())),
               "exists_V u(exists_V v(exists_E w(exists_L a(u != v"
               " /\\ exists_V x(x != u /\\ x != v /\\ ~root(x)) /\\ outdeg(u) != 1"
               " /\\ lV(u) = a /\\ lV(v) = a /\\ lE(w) = empty"
               " /\\ mV(u) = none /\\ mV(v) = none /\\ mE(w) = dashed"
               " /\\ s(w) = u /\\ t(w) = v /\\ ~root(u) /\\ root(v)"
               " /\\ indeg(v) = 1 /\\ outdeg(v) = 0))))");
}

TEST_CASE("slp of a rule without bidirectional edges is a single post") {
    CHECK(canonEqual(slp_rule(corpusFormula("q1.fol"), delRule()),
                     post(corpusFormula("q1.fol"), generalise(delRule()))));
}

TEST_CASE("slp of a bidirectional rule is a two-way disjunction") {
    Program p = parse_program(corpusFile("twocolouring.gp2"));
    FormulaP s = slp_rule(corpusFormula("f.fol"), p.rules.at("col_blue"));
    REQUIRE(s->kind == Formula::Or);
    CHECK(s->kids.size() == 2);
}

TEST_CASE("trivial weakest preconditions") {
    checkCanon(wlp_rule(delRule(), parse_formula("true")), "true");
}

TEST_CASE("app is the variablised applicability condition") {
    checkCanon(app_rule(copyRule()),
               "exists_V u(exists_L a(lV(u) = a /\\ mV(u) = none /\\ root(u)"
               " /\\ outdeg(u) != 0))");
}
