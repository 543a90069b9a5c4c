#include "gpv/calculus.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

namespace gpv {

namespace {

// Maximum number of simultaneously open quantifiers per sort.
void quantDepths(const FormulaP& f, int dv, int de, int& mv, int& me) {
    mv = std::max(mv, dv);
    me = std::max(me, de);
    switch (f->kind) {
        case Formula::ExistsV:
            quantDepths(f->kids[0], dv + 1, de, mv, me);
            return;
        case Formula::ExistsE:
            quantDepths(f->kids[0], dv, de + 1, mv, me);
            return;
        default:
            for (auto& k : f->kids) quantDepths(k, dv, de, mv, me);
    }
}

void collectFormulaAtoms(const FormulaP& f, std::vector<ListValue>& lists,
                         std::set<Mark>& marks, bool& hasRoot, bool& hasDegree) {
    std::function<void(const TermP&)> vt = [&](const TermP& t) {
        if (t->kind == Term::ListConst && !t->lv.empty()) lists.push_back(t->lv);
        if (t->kind == Term::MarkConst) marks.insert(t->mark);
        if (t->kind == Term::Indeg || t->kind == Term::Outdeg || t->kind == Term::Length)
            hasDegree = true;
        if (t->a) vt(t->a);
        if (t->b) vt(t->b);
    };
    std::function<void(const FormulaP&)> go = [&](const FormulaP& g) {
        if (g->kind == Formula::Root) hasRoot = true;
        if (g->t1) vt(g->t1);
        if (g->t2) vt(g->t2);
        for (auto& k : g->kids) go(k);
    };
    go(f);
}

bool withinMargin(const FormulaP& a, const FormulaP& b, const GraphUniverse& u,
                  std::string& why) {
    int mv = 0, me = 0;
    quantDepths(a, 0, 0, mv, me);
    quantDepths(b, 0, 0, mv, me);
    if (mv > u.maxNodes || me > u.maxEdges) {
        why = "quantifier nesting exceeds the universe bounds";
        return false;
    }
    std::vector<ListValue> lists;
    std::set<Mark> marks;
    bool hasRoot = false, hasDegree = false;
    collectFormulaAtoms(a, lists, marks, hasRoot, hasDegree);
    collectFormulaAtoms(b, lists, marks, hasRoot, hasDegree);
    if (hasDegree) {
        why = "degree/length terms are not covered by the bound";
        return false;
    }
    if (hasRoot && !u.roots) {
        why = "formula mentions rootedness but the universe has no roots";
        return false;
    }
    auto closure = label_domain(u.labels, HostGraph{});
    for (const auto& l : lists)
        if (std::find(closure.begin(), closure.end(), l) == closure.end()) {
            why = "label constant " + to_string(l) + " outside the universe closure";
            return false;
        }
    for (Mark m : marks) {
        if (m == Mark::None || m == Mark::Any) continue;
        bool ok = std::find(u.nodeMarks.begin(), u.nodeMarks.end(), m) != u.nodeMarks.end() ||
                  std::find(u.edgeMarks.begin(), u.edgeMarks.end(), m) != u.edgeMarks.end();
        if (!ok) {
            why = "mark " + to_string(m) + " outside the universe";
            return false;
        }
    }
    return true;
}

}  // namespace

Verdict check_implication(const FormulaP& a, const FormulaP& b, const GraphUniverse& u) {
    if (canon_str(a) == canon_str(b))
        return {Verdict::Proved, std::nullopt, "syntactically equal"};
    if (a->kind == Formula::False || b->kind == Formula::True)
        return {Verdict::Proved, std::nullopt, "trivial"};
    std::optional<HostGraph> cx;
    for_each_graph(u, [&](const HostGraph& G) {
        auto dom = label_domain(u.labels, G);
        if (satisfies(G, a, dom) && !satisfies(G, b, dom)) {
            cx = G;
            return false;
        }
        return true;
    });
    if (cx) return {Verdict::CounterexampleFound, cx, ""};
    std::string why;
    if (withinMargin(a, b, u, why)) return {Verdict::Proved, std::nullopt, "within bound"};
    return {Verdict::UnknownUpToBound, std::nullopt, why};
}

Verdict check_break(const FormulaP& c, const CmdP& S, const FormulaP& d,
                    const GraphUniverse& u, long long fuel) {
    if (!contains_break(S))
        return {Verdict::Proved, std::nullopt, "break-free body"};
    std::optional<HostGraph> cx;
    for_each_graph(u, [&](const HostGraph& G) {
        auto dom = label_domain(u.labels, G);
        if (!satisfies(G, c, dom)) return true;
        // graphs reachable at a top-level break of S
        ExecOutcome eo = interpret(S, G, fuel);
        for (const auto& H : eo.breaks)
            if (!satisfies(H, d, label_domain(u.labels, H))) {
                cx = G;
                return false;
            }
        return true;
    });
    if (cx) return {Verdict::CounterexampleFound, cx, ""};
    return {Verdict::UnknownUpToBound, std::nullopt, "no counterexample up to the bound"};
}

bool ProofTree::fullyProved() const {
    for (const auto& o : obligations)
        if (o.verdict.kind != Verdict::Proved) return false;
    for (const auto& p : premises)
        if (!p.fullyProved()) return false;
    return true;
}

std::string ProofTree::toJson() const {
    using nlohmann::json;
    std::function<json(const ProofTree&)> go = [&](const ProofTree& t) -> json {
        json j;
        j["rule"] = t.rule;
        j["conclusion"] = {{"pre", print(t.pre)}, {"prog", print(t.prog)},
                           {"post", print(t.post)}};
        j["obligations"] = json::array();
        for (const auto& o : t.obligations) {
            json jo;
            jo["kind"] = o.kind;
            jo["formulaA"] = print(o.a);
            jo["formulaB"] = print(o.b);
            jo["verdict"] = o.verdict.kind == Verdict::Proved ? "Proved"
                          : o.verdict.kind == Verdict::CounterexampleFound
                                ? "CounterexampleFound"
                                : "UnknownUpToBound";
            if (o.verdict.witness) jo["witness"] = o.verdict.witness->print();
            if (!o.verdict.note.empty()) jo["note"] = o.verdict.note;
            j["obligations"].push_back(jo);
        }
        j["premises"] = json::array();
        for (const auto& p : t.premises) j["premises"].push_back(go(p));
        return j;
    };
    return go(*this).dump(2);
}

// ---- proof construction -----------------------------------------------------

namespace {

struct Prover {
    const GraphUniverse& u;
    long long fuel;
    std::vector<FormulaP> invariants, midpoints;
    size_t invIdx = 0, midIdx = 0;

    // When more loops exist than supplied invariants, the last hint is
    // reused for the remaining loops; only an empty hint list is an error.
    FormulaP nextInvariant() {
        FormulaP f = peekInvariant();
        if (invIdx < invariants.size()) ++invIdx;
        return f;
    }
    FormulaP peekInvariant() const {
        if (invariants.empty())
            throw std::runtime_error("missing loop invariant hint");
        if (invIdx >= invariants.size()) return invariants.back();
        return invariants[invIdx];
    }
    bool haveMidpoint() const { return midIdx < midpoints.size(); }
    FormulaP nextMidpoint() { return midpoints[midIdx++]; }

    // The natural precondition P anchors to: its loop invariant when P is
    // a loop (or a sequence starting with one).
    std::optional<FormulaP> anchor(const CmdP& P) const {
        if (P->kind == Command::Loop) return peekInvariant();
        if (P->kind == Command::Seq) return anchor(P->a);
        return std::nullopt;
    }

    Obligation implies(const FormulaP& a, const FormulaP& b) {
        Obligation o;
        o.kind = "implies";
        o.a = a;
        o.b = b;
        o.verdict = check_implication(a, b, u);
        return o;
    }

    ProofTree cons(const FormulaP& c, const FormulaP& d, ProofTree premise) {
        ProofTree t;
        t.rule = "cons";
        t.pre = c;
        t.post = d;
        t.prog = premise.prog;
        t.obligations = {implies(c, premise.pre), implies(premise.post, d)};
        t.premises = {std::move(premise)};
        return t;
    }

    ProofTree ruleAppLeaf(const FormulaP& c, const RuleSchema& r, const std::string& name) {
        ProofTree t;
        t.rule = "ruleapp_slp";
        t.pre = c;
        t.post = slp_rule(c, r);
        auto cmd = std::make_shared<Command>();
        cmd->kind = Command::RuleSet;
        cmd->rules = {r};
        cmd->ruleNames = {name};
        t.prog = cmd;
        return t;
    }

    ProofTree build(const FormulaP& c, const CmdP& P, const FormulaP& d) {
        switch (P->kind) {
            case Command::OrCmd:
                throw std::runtime_error("the calculus has no inference rule for 'or'");
            case Command::Skip: case Command::Break: {
                // {d} skip {d} by the null rule, then weaken on the left
                ProofTree leaf;
                leaf.rule = "ruleapp_slp";
                leaf.pre = d;
                leaf.post = d;
                leaf.prog = P;
                ProofTree t = cons(c, d, std::move(leaf));
                t.prog = P;
                return t;
            }
            case Command::FailCmd: {
                ProofTree t;  // no proper results: any triple holds
                t.rule = "fail";
                t.pre = c;
                t.post = d;
                t.prog = P;
                return t;
            }
            case Command::RuleSet: {
                auto perRule = [&](const RuleSchema& r, const std::string& name) {
                    ProofTree leaf = ruleAppLeaf(c, r, name);
                    FormulaP slp = leaf.post;
                    ProofTree t = cons(c, d, std::move(leaf));
                    (void)slp;
                    return t;
                };
                if (P->rules.size() == 1 && !P->braced)
                    return perRule(P->rules[0], P->ruleNames[0]);
                ProofTree t;
                t.rule = "ruleset";
                t.pre = c;
                t.post = d;
                t.prog = P;
                for (size_t i = 0; i < P->rules.size(); ++i)
                    t.premises.push_back(perRule(P->rules[i], P->ruleNames[i]));
                return t;
            }
            case Command::Seq: {
                FormulaP m;
                if (haveMidpoint()) m = nextMidpoint();
                else if (auto a = anchor(P->b)) m = *a;
                else if (is_loop_free(P->a)) m = slp_loopfree(c, P->a);
                else
                    throw std::runtime_error(
                        "need a midpoint hint for the sequence " + print(P));
                ProofTree t;
                t.rule = "comp";
                t.pre = c;
                t.post = d;
                t.prog = P;
                t.premises.push_back(build(c, P->a, m));
                t.premises.push_back(build(m, P->b, d));
                return t;
            }
            case Command::If: case Command::Try: {
                FormulaP sc = success_loopfree(P->a);
                FormulaP fc = fail_loopfree(P->a);
                ProofTree t;
                t.rule = P->kind == Command::If ? "if" : "try";
                t.pre = c;
                t.post = d;
                t.prog = P;
                if (P->kind == Command::If) {
                    t.premises.push_back(build(simplify(mkAnd2(c, sc)), P->b, d));
                } else {
                    auto seqCP = std::make_shared<Command>();
                    seqCP->kind = Command::Seq;
                    seqCP->a = P->a;
                    seqCP->b = P->b;
                    t.premises.push_back(build(simplify(mkAnd2(c, sc)), seqCP, d));
                }
                t.premises.push_back(build(simplify(mkAnd2(c, fc)), P->c, d));
                return t;
            }
            case Command::Loop: {
                FormulaP inv = nextInvariant();
                FormulaP failS = fail_iteration(P->a);
                FormulaP dBrk = contains_break(P->a) ? d : mkFalse();
                ProofTree alap;
                alap.rule = "alap";
                alap.pre = inv;
                alap.post = simplify(mkOr2(mkAnd2(inv, failS), dBrk));
                alap.prog = P;
                alap.premises.push_back(build(inv, P->a, inv));
                Obligation br;
                br.kind = "break";
                br.a = inv;
                br.b = dBrk;
                br.cmd = P->a;
                br.verdict = check_break(inv, P->a, dBrk, u, fuel);
                alap.obligations.push_back(std::move(br));
                ProofTree t = cons(c, d, std::move(alap));
                return t;
            }
        }
        throw std::runtime_error("prove: unsupported command");
    }
};

}  // namespace

ProofTree prove(const FormulaP& c, const CmdP& P, const FormulaP& d,
                const ProofHints& hints, const GraphUniverse& u, long long fuel) {
    if (contains_or(P))
        throw std::runtime_error("the calculus has no inference rule for 'or'");
    if (!is_control(P))
        throw std::runtime_error("program is not a control command (check loop bodies)");
    Prover pr{u, fuel, hints.invariants, hints.midpoints};
    // Hoist strengthening to a leading loop invariant into one [cons] at
    // the root.
    std::optional<FormulaP> a;
    try {
        a = pr.anchor(P);
    } catch (const std::exception&) {
        a = std::nullopt;  // missing hints are reported when consumed
    }
    if (a && canon_str(*a) != canon_str(c)) {
        ProofTree inner = pr.build(*a, P, d);
        ProofTree root = pr.cons(c, d, std::move(inner));
        root.prog = P;
        return root;
    }
    return pr.build(c, P, d);
}

// ---- mechanical re-checking --------------------------------------------------

namespace {

bool sameF(const FormulaP& a, const FormulaP& b) { return canon_str(a) == canon_str(b); }

std::string checkNode(const ProofTree& t) {
    auto fail = [&](const std::string& msg) { return t.rule + ": " + msg; };
    if (t.rule == "ruleapp_slp") {
        if (!t.premises.empty()) return fail("leaf with premises");
        if (t.prog->kind == Command::Skip || t.prog->kind == Command::Break)
            return sameF(t.pre, t.post) ? "" : fail("skip must preserve the assertion");
        if (t.prog->kind != Command::RuleSet || t.prog->rules.size() != 1)
            return fail("not a single rule application");
        if (!sameF(t.post, slp_rule(t.pre, t.prog->rules[0])))
            return fail("postcondition is not the strongest liberal postcondition");
        return "";
    }
    if (t.rule == "fail") return t.premises.empty() ? "" : fail("leaf with premises");
    if (t.rule == "cons") {
        if (t.premises.size() != 1 || t.obligations.size() != 2)
            return fail("needs one premise and two implications");
        if (!sameF(t.obligations[0].a, t.pre) ||
            !sameF(t.obligations[0].b, t.premises[0].pre))
            return fail("left implication endpoints do not match");
        if (!sameF(t.obligations[1].a, t.premises[0].post) ||
            !sameF(t.obligations[1].b, t.post))
            return fail("right implication endpoints do not match");
        return "";
    }
    if (t.rule == "comp") {
        if (t.premises.size() != 2) return fail("needs two premises");
        if (!sameF(t.premises[0].pre, t.pre)) return fail("first premise precondition");
        if (!sameF(t.premises[1].post, t.post)) return fail("second premise postcondition");
        if (!sameF(t.premises[0].post, t.premises[1].pre)) return fail("midpoint mismatch");
        return "";
    }
    if (t.rule == "ruleset") {
        for (const auto& p : t.premises)
            if (!sameF(p.pre, t.pre) || !sameF(p.post, t.post))
                return fail("premise conclusion does not match");
        return "";
    }
    if (t.rule == "alap") {
        if (t.premises.size() != 1) return fail("needs one premise");
        if (!sameF(t.premises[0].pre, t.pre) || !sameF(t.premises[0].post, t.pre))
            return fail("body premise must preserve the invariant");
        bool hasBreak = false;
        for (const auto& o : t.obligations) hasBreak |= o.kind == "break";
        if (!hasBreak) return fail("missing break obligation");
        if (t.prog->kind != Command::Loop) return fail("program is not a loop");
        FormulaP expect = simplify(
            mkOr2(mkAnd2(t.pre, fail_iteration(t.prog->a)), t.obligations.back().b));
        if (!sameF(t.post, expect)) return fail("conclusion postcondition");
        return "";
    }
    if (t.rule == "if" || t.rule == "try") {
        if (t.premises.size() != 2) return fail("needs two premises");
        if (t.prog->kind != Command::If && t.prog->kind != Command::Try)
            return fail("program shape");
        FormulaP sc = success_loopfree(t.prog->a);
        FormulaP fc = fail_loopfree(t.prog->a);
        if (!sameF(t.premises[0].pre, simplify(mkAnd2(t.pre, sc))))
            return fail("then-branch precondition");
        if (!sameF(t.premises[1].pre, simplify(mkAnd2(t.pre, fc))))
            return fail("else-branch precondition");
        if (!sameF(t.premises[0].post, t.post) || !sameF(t.premises[1].post, t.post))
            return fail("branch postconditions");
        return "";
    }
    return "unknown rule label: " + t.rule;
}

}  // namespace

std::string validate_tree(const ProofTree& t) {
    std::string err = checkNode(t);
    if (!err.empty()) return err;
    for (const auto& p : t.premises) {
        err = validate_tree(p);
        if (!err.empty()) return err;
    }
    return "";
}

}  // namespace gpv
