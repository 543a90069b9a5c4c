#include "gpv/transforms.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gpv {
namespace {

TermP labelTerm(const std::vector<TermP>& parts) {
    if (parts.empty()) return mkList({});
    TermP t = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) t = mkBin(Term::Colon, t, parts[i]);
    return t;
}

void collectTermVars(const TermP& t, std::map<std::string, VType>& out) {
    if (t->kind == Term::Var && t->varSort == Sort::List) out[t->name] = t->vtype;
    if (t->a) collectTermVars(t->a, out);
    if (t->b) collectTermVars(t->b, out);
}

// Renames list variables of c (bound and free) that clash with rule
// variables.
FormulaP rename_apart(const FormulaP& c, const std::set<std::string>& ruleVars) {
    // free variables first
    FormulaP f = c;
    for (const auto& v : free_list_vars(c))
        if (ruleVars.count(v)) f = subst_list_var(f, v, mkVar(v + "_p", Sort::List));
    // then bound ones
    std::function<FormulaP(const FormulaP&)> go = [&](const FormulaP& g) -> FormulaP {
        switch (g->kind) {
            case Formula::Not:
                return mkNot(go(g->kids[0]));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& k : g->kids) ks.push_back(go(k));
                return g->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsV: case Formula::ExistsE:
                return mkExists(g->kind, g->var, go(g->kids[0]));
            case Formula::ExistsL: {
                FormulaP body = go(g->kids[0]);
                if (ruleVars.count(g->var)) {
                    std::string nv = g->var + "_p";
                    body = subst_list_var(body, g->var, mkVar(nv, Sort::List));
                    return mkExists(Formula::ExistsL, nv, body);
                }
                return mkExists(Formula::ExistsL, g->var, body);
            }
            default:
                return g;
        }
    };
    return go(f);
}

}  // namespace

FormulaP spec_graph(const RuleGraph& g, const std::map<std::string, VType>& types) {
    std::vector<FormulaP> conj;
    std::map<std::string, VType> used;
    for (const auto& n : g.nodes)
        for (const auto& p : n.label) collectTermVars(p, used);
    for (const auto& e : g.edges)
        for (const auto& p : e.label) collectTermVars(p, used);
    for (const auto& [name, vt] : used) {
        TermP v = mkVar(name, Sort::List, vt);
        switch (types.count(name) ? types.at(name) : vt) {
            case VType::Int: conj.push_back(mkPred(Formula::PInt, v)); break;
            case VType::Char: conj.push_back(mkPred(Formula::PChar, v)); break;
            case VType::Str: conj.push_back(mkPred(Formula::PStr, v)); break;
            case VType::Atom: conj.push_back(mkPred(Formula::PAtom, v)); break;
            case VType::List: break;
        }
    }
    for (const auto& n : g.nodes) {
        TermP v = mkNodeC(n.id);
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::LabV, v), labelTerm(n.label)));
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::MarkV, v), mkMark(n.mark)));
        FormulaP rt = mkPred(Formula::Root, v);
        conj.push_back(n.root ? rt : mkNot(rt));
    }
    for (const auto& e : g.edges) {
        TermP x = mkEdgeC(e.id);
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::Src, x), mkNodeC(e.src)));
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::Tgt, x), mkNodeC(e.tgt)));
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::LabE, x), labelTerm(e.label)));
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::MarkE, x), mkMark(e.mark)));
    }
    return mkAnd(std::move(conj));
}

FormulaP dang(const RuleSchema& r) {
    std::vector<FormulaP> conj;
    for (const auto& v : r.deletedNodes()) {
        TermP n = mkNodeC(v);
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::Indeg, n), mkInt(r.L.indeg(v))));
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::Outdeg, n), mkInt(r.L.outdeg(v))));
    }
    return mkAnd(std::move(conj));
}

FormulaP dang_inverse(const RuleSchema& r) {
    std::vector<FormulaP> conj;
    for (const auto& n : r.R.nodes) {
        if (std::find(r.interface.begin(), r.interface.end(), n.id) != r.interface.end())
            continue;
        TermP v = mkNodeC(n.id);
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::Indeg, v), mkInt(r.R.indeg(n.id))));
        conj.push_back(mkCmp(Formula::Eq, mkUn(Term::Outdeg, v), mkInt(r.R.outdeg(n.id))));
    }
    return mkAnd(std::move(conj));
}

// ---- Split -----------------------------------------------------------------

namespace {

struct Splitter {
    const RuleSchema& r;

    FormulaP go(const FormulaP& f) const {
        switch (f->kind) {
            case Formula::Not:
                return mkNot(go(f->kids[0]));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& k : f->kids) ks.push_back(go(k));
                return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsL:
                return mkExists(Formula::ExistsL, f->var, go(f->kids[0]));
            case Formula::ExistsV: {
                std::vector<FormulaP> disj;
                for (const auto& n : r.L.nodes)
                    disj.push_back(go(subst_var(f->kids[0], f->var, mkNodeC(n.id))));
                std::vector<FormulaP> guards;
                TermP x = mkVar(f->var, Sort::Node);
                for (const auto& n : r.L.nodes)
                    guards.push_back(mkCmp(Formula::Ne, x, mkNodeC(n.id)));
                guards.push_back(go(f->kids[0]));
                disj.push_back(mkExists(Formula::ExistsV, f->var, mkAnd(std::move(guards))));
                return mkOr(std::move(disj));
            }
            case Formula::ExistsE: {
                std::vector<FormulaP> disj;
                for (const auto& e : r.L.edges)
                    disj.push_back(go(subst_var(f->kids[0], f->var, mkEdgeC(e.id))));
                std::vector<FormulaP> guards;
                TermP x = mkVar(f->var, Sort::Edge);
                for (const auto& e : r.L.edges)
                    guards.push_back(mkCmp(Formula::Ne, x, mkEdgeC(e.id)));
                guards.push_back(incidence(go(f->kids[0]), f->var));
                disj.push_back(mkExists(Formula::ExistsE, f->var, mkAnd(std::move(guards))));
                return mkOr(std::move(disj));
            }
            default:
                return f;
        }
    }

    // Case analysis of s(x)/t(x) over the nodes of L for an edge variable
    // x that is not an edge of L.
    FormulaP incidence(const FormulaP& c, const std::string& x) const {
        return incOne(incOne(c, x, Term::Src), x, Term::Tgt);
    }

    FormulaP incOne(const FormulaP& c, const std::string& x, Term::Kind end) const {
        if (!formula_mentions_endpoint(c, end, x)) return c;
        TermP ex = mkVar(x, Sort::Edge);
        TermP endpoint = mkUn(end, ex);
        std::vector<FormulaP> disj;
        for (const auto& n : r.L.nodes) {
            FormulaP sub = subst_endpoint(c, end, x, mkNodeC(n.id));
            disj.push_back(mkAnd2(mkCmp(Formula::Eq, endpoint, mkNodeC(n.id)), sub));
        }
        std::vector<FormulaP> guards;
        for (const auto& n : r.L.nodes)
            guards.push_back(mkCmp(Formula::Ne, endpoint, mkNodeC(n.id)));
        guards.push_back(c);
        disj.push_back(mkAnd(std::move(guards)));
        return mkOr(std::move(disj));
    }
};

}  // namespace

FormulaP split(const FormulaP& c, const RuleSchema& r) {
    std::set<std::string> ruleVars;
    for (const auto& [n, t] : r.vars) ruleVars.insert(n);
    Splitter s{r};
    return s.go(rename_apart(c, ruleVars));
}

// ---- Val -------------------------------------------------------------------

namespace {

struct Valuer {
    const RuleSchema& r;

    TermP term(const TermP& t) const {
        TermP a = t->a ? term(t->a) : nullptr;
        TermP b = t->b ? term(t->b) : nullptr;
        TermP u = t;
        if (a != t->a || b != t->b) {
            auto w = std::make_shared<Term>(*t);
            w->a = a;
            w->b = b;
            u = w;
        }
        switch (u->kind) {
            case Term::LabV: {
                if (u->a->kind != Term::NodeConst) break;
                int i = r.L.nodeIndex(u->a->name);
                if (i >= 0) return term(labelTerm(r.L.nodes[i].label));
                break;
            }
            case Term::MarkV: {
                if (u->a->kind != Term::NodeConst) break;
                int i = r.L.nodeIndex(u->a->name);
                if (i >= 0) return mkMark(r.L.nodes[i].mark);
                break;
            }
            case Term::LabE: {
                if (u->a->kind != Term::EdgeConst) break;
                int i = r.L.edgeIndex(u->a->name);
                if (i >= 0) return term(labelTerm(r.L.edges[i].label));
                break;
            }
            case Term::MarkE: {
                if (u->a->kind != Term::EdgeConst) break;
                int i = r.L.edgeIndex(u->a->name);
                if (i >= 0) return mkMark(r.L.edges[i].mark);
                break;
            }
            case Term::Src: case Term::Tgt: {
                if (u->a->kind != Term::EdgeConst) break;
                int i = r.L.edgeIndex(u->a->name);
                if (i >= 0)
                    return mkNodeC(u->kind == Term::Src ? r.L.edges[i].src : r.L.edges[i].tgt);
                break;
            }
            case Term::Indeg: case Term::Outdeg: {
                if (u->a->kind != Term::NodeConst) break;
                const std::string& id = u->a->name;
                if (r.L.nodeIndex(id) < 0) break;
                int degL = u->kind == Term::Indeg ? r.L.indeg(id) : r.L.outdeg(id);
                bool deleted =
                    std::find(r.interface.begin(), r.interface.end(), id) == r.interface.end();
                if (deleted) return mkInt(degL);
                TermP con = mkUn(u->kind == Term::Indeg ? Term::Incon : Term::Outcon, u->a);
                return degL == 0 ? con : mkBin(Term::Add, con, mkInt(degL));
            }
            default:
                break;
        }
        return u;
    }

    FormulaP fml(const FormulaP& f) const {
        switch (f->kind) {
            case Formula::True: case Formula::False:
                return f;
            case Formula::Not:
                return mkNot(fml(f->kids[0]));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& k : f->kids) ks.push_back(fml(k));
                return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL:
                return mkExists(f->kind, f->var, fml(f->kids[0]));
            case Formula::Root: {
                TermP t = term(f->t1);
                if (t->kind == Term::NodeConst) {
                    int i = r.L.nodeIndex(t->name);
                    if (i >= 0) return r.L.nodes[i].root ? mkTrue() : mkFalse();
                }
                return mkPred(Formula::Root, t);
            }
            case Formula::PInt: case Formula::PChar: case Formula::PStr: case Formula::PAtom:
                return mkPred(f->kind, term(f->t1));
            default:
                return mkCmp(f->kind, term(f->t1), term(f->t2));
        }
    }
};

}  // namespace

FormulaP val(const FormulaP& c, const RuleSchema& r) {
    Valuer v{r};
    return simplify(v.fml(c));
}

FormulaP lift(const FormulaP& c, const GeneralisedRule& w, PipelineTrace* tr) {
    // Only the precondition is renamed apart: the variables of acL are the
    // rule's own and must stay shared with the right-hand side's labels.
    std::set<std::string> ruleVars;
    for (const auto& [n, t] : w.rule.vars) ruleVars.insert(n);
    FormulaP base = mkAnd2(rename_apart(c, ruleVars), w.acL);
    FormulaP sp = Splitter{w.rule}.go(base);
    if (tr) tr->add("split", sp);
    FormulaP withDang = mkAnd2(sp, dang(w.rule));
    if (tr) tr->add("dang", dang(w.rule));
    FormulaP out = val(withDang, w.rule);
    if (tr) tr->add("lift", out);
    return out;
}

// ---- Adj -------------------------------------------------------------------

namespace {

struct Adjuster {
    const RuleSchema& r;
    std::set<std::string> delN, delE;  // facts about these cannot transfer
    std::vector<std::string> newN, newE;

    explicit Adjuster(const RuleSchema& rr) : r(rr) {
        for (const auto& v : rr.deletedNodes()) delN.insert(v);
        for (const auto& e : rr.deletedEdges()) delE.insert(e);
        for (const auto& n : rr.R.nodes)
            if (std::find(rr.interface.begin(), rr.interface.end(), n.id) ==
                rr.interface.end())
                newN.push_back(n.id);
        auto pres = rr.preservedEdges();
        for (const auto& e : rr.R.edges)
            if (std::find(pres.begin(), pres.end(), e.id) == pres.end())
                newE.push_back(e.id);
    }

    bool mentionsDeleted(const TermP& t) const {
        if (t->kind == Term::NodeConst && delN.count(t->name)) return true;
        if (t->kind == Term::EdgeConst && delE.count(t->name)) return true;
        if (t->a && mentionsDeleted(t->a)) return true;
        if (t->b && mentionsDeleted(t->b)) return true;
        return false;
    }

    // incon(v) -> indeg(v) - indeg_R(v), then comparisons with integer
    // constants are rebalanced so the degree stands alone.
    TermP term(const TermP& t) const {
        TermP a = t->a ? term(t->a) : nullptr;
        TermP b = t->b ? term(t->b) : nullptr;
        TermP u = t;
        if (a != t->a || b != t->b) {
            auto w = std::make_shared<Term>(*t);
            w->a = a;
            w->b = b;
            u = w;
        }
        if (u->kind == Term::Incon || u->kind == Term::Outcon) {
            if (u->a->kind == Term::NodeConst) {
                const std::string& id = u->a->name;
                int degR = u->kind == Term::Incon ? r.R.indeg(id) : r.R.outdeg(id);
                TermP deg = mkUn(u->kind == Term::Incon ? Term::Indeg : Term::Outdeg, u->a);
                return degR == 0 ? deg : mkBin(Term::Sub, deg, mkInt(degR));
            }
        }
        return u;
    }

    static std::optional<long long> intConst(const TermP& t) {
        if (t->kind == Term::ListConst && t->lv.size() == 1 && t->lv[0].isInt)
            return t->lv[0].num;
        return std::nullopt;
    }

    FormulaP cmp(Formula::Kind k, TermP a, TermP b) const {
        if (mentionsDeleted(a) || mentionsDeleted(b))
            return k == Formula::Ne ? mkTrue() : mkFalse();
        // (x - n) rel c  ->  x rel c + n
        auto rebalance = [&](TermP& lhs, TermP& rhs) {
            if (lhs->kind == Term::Sub) {
                auto n = intConst(lhs->b);
                auto c = intConst(rhs);
                if (n && c) {
                    rhs = mkInt(*c + *n);
                    lhs = lhs->a;
                }
            }
        };
        rebalance(a, b);
        if (b->kind == Term::Sub) {  // c rel (x - n) -> c + n rel x
            auto n = intConst(b->b);
            auto c = intConst(a);
            if (n && c) {
                a = mkInt(*c + *n);
                b = b->a;
            }
        }
        return mkCmp(k, a, b);
    }

    FormulaP go(const FormulaP& f) const {
        switch (f->kind) {
            case Formula::True: case Formula::False:
                return f;
            case Formula::Not:
                return mkNot(go(f->kids[0]));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& k : f->kids) ks.push_back(go(k));
                return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsV: {
                std::vector<FormulaP> guards;
                TermP x = mkVar(f->var, Sort::Node);
                for (const auto& n : newN)
                    guards.push_back(mkCmp(Formula::Ne, x, mkNodeC(n)));
                guards.push_back(go(f->kids[0]));
                return mkExists(Formula::ExistsV, f->var, mkAnd(std::move(guards)));
            }
            case Formula::ExistsE: {
                std::vector<FormulaP> guards;
                TermP x = mkVar(f->var, Sort::Edge);
                for (const auto& e : newE)
                    guards.push_back(mkCmp(Formula::Ne, x, mkEdgeC(e)));
                guards.push_back(go(f->kids[0]));
                return mkExists(Formula::ExistsE, f->var, mkAnd(std::move(guards)));
            }
            case Formula::ExistsL:
                return mkExists(Formula::ExistsL, f->var, go(f->kids[0]));
            case Formula::Root:
                if (mentionsDeleted(f->t1)) return mkFalse();
                return mkPred(Formula::Root, term(f->t1));
            case Formula::PInt: case Formula::PChar: case Formula::PStr: case Formula::PAtom:
                if (mentionsDeleted(f->t1)) return mkFalse();
                return mkPred(f->kind, term(f->t1));
            default:
                return cmp(f->kind, term(f->t1), term(f->t2));
        }
    }
};

}  // namespace

FormulaP adj(const FormulaP& c, const RuleSchema& r) {
    Adjuster a(r);
    return simplify(a.go(c));
}

FormulaP shift(const FormulaP& c, const GeneralisedRule& w, PipelineTrace* tr) {
    FormulaP lifted = lift(c, w, tr);
    FormulaP adjusted = adj(lifted, w.rule);
    if (tr) tr->add("adj", adjusted);
    FormulaP out = simplify(mkAnd(
        {adjusted, w.acR, spec_graph(w.rule.R, w.rule.varTypes()), dang_inverse(w.rule)}));
    if (tr) tr->add("shift", out);
    return out;
}

Variablised variablise(const FormulaP& c) {
    Variablised out;
    // names already used in c (bound or free) must not be reused, or the
    // new quantifiers would be shadowed when c itself came out of an
    // earlier variablisation
    std::set<std::string> used;
    std::function<void(const TermP&)> scanT = [&](const TermP& t) {
        if (t->kind == Term::Var) used.insert(t->name);
        if (t->a) scanT(t->a);
        if (t->b) scanT(t->b);
    };
    std::function<void(const FormulaP&)> scanF = [&](const FormulaP& f) {
        if (f->kind == Formula::ExistsV || f->kind == Formula::ExistsE ||
            f->kind == Formula::ExistsL)
            used.insert(f->var);
        if (f->t1) scanT(f->t1);
        if (f->t2) scanT(f->t2);
        for (auto& kk : f->kids) scanF(kk);
    };
    scanF(c);
    std::map<std::string, std::string> nodeRen, edgeRen;
    auto fresh = [&](const char* stem, int& k) {
        std::string v;
        do v = stem + std::to_string(k++);
        while (used.count(v));
        return v;
    };
    int k = 0;
    for (const auto& id : node_constants(c)) {
        std::string v = fresh("_vc", k);
        nodeRen[id] = v;
        out.nodeVars.push_back(v);
    }
    k = 0;
    for (const auto& id : edge_constants(c)) {
        std::string v = fresh("_ec", k);
        edgeRen[id] = v;
        out.edgeVars.push_back(v);
    }
    std::function<FormulaP(const FormulaP&)> conv = [&](const FormulaP& f) -> FormulaP {
        std::function<TermP(const TermP&)> tmap = [&](const TermP& t) -> TermP {
            if (t->kind == Term::NodeConst && nodeRen.count(t->name))
                return mkVar(nodeRen.at(t->name), Sort::Node);
            if (t->kind == Term::EdgeConst && edgeRen.count(t->name))
                return mkVar(edgeRen.at(t->name), Sort::Edge);
            if (!t->a) return t;
            TermP a = tmap(t->a);
            TermP b = t->b ? tmap(t->b) : nullptr;
            if (a == t->a && b == t->b) return t;
            auto w = std::make_shared<Term>(*t);
            w->a = a;
            w->b = b;
            return w;
        };
        switch (f->kind) {
            case Formula::True: case Formula::False:
                return f;
            case Formula::Not:
                return mkNot(conv(f->kids[0]));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& kk : f->kids) ks.push_back(conv(kk));
                return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL:
                return mkExists(f->kind, f->var, conv(f->kids[0]));
            case Formula::Root: case Formula::PInt: case Formula::PChar:
            case Formula::PStr: case Formula::PAtom:
                return mkPred(f->kind, tmap(f->t1));
            default:
                return mkCmp(f->kind, tmap(f->t1), tmap(f->t2));
        }
    };
    FormulaP body = conv(c);
    std::vector<FormulaP> conj;
    for (size_t i = 0; i < out.nodeVars.size(); ++i)
        for (size_t j = i + 1; j < out.nodeVars.size(); ++j)
            conj.push_back(mkCmp(Formula::Ne, mkVar(out.nodeVars[i], Sort::Node),
                                 mkVar(out.nodeVars[j], Sort::Node)));
    for (size_t i = 0; i < out.edgeVars.size(); ++i)
        for (size_t j = i + 1; j < out.edgeVars.size(); ++j)
            conj.push_back(mkCmp(Formula::Ne, mkVar(out.edgeVars[i], Sort::Edge),
                                 mkVar(out.edgeVars[j], Sort::Edge)));
    conj.push_back(body);
    out.f = mkAnd(std::move(conj));
    return out;
}

FormulaP post(const FormulaP& c, const GeneralisedRule& w, PipelineTrace* tr) {
    FormulaP sh = shift(c, w, tr);
    Variablised v = variablise(sh);
    FormulaP body = v.f;
    auto lv = free_list_vars(body);
    for (auto it = lv.rbegin(); it != lv.rend(); ++it)
        body = mkExists(Formula::ExistsL, *it, body);
    for (auto it = v.edgeVars.rbegin(); it != v.edgeVars.rend(); ++it)
        body = mkExists(Formula::ExistsE, *it, body);
    for (auto it = v.nodeVars.rbegin(); it != v.nodeVars.rend(); ++it)
        body = mkExists(Formula::ExistsV, *it, body);
    FormulaP out = simplify(body);
    if (tr) tr->add("post", out);
    return out;
}

FormulaP slp_rule(const FormulaP& c, const RuleSchema& r, PipelineTrace* tr) {
    std::vector<FormulaP> disj;
    bool first = true;
    for (const auto& v : expand_bidirectional(r)) {
        disj.push_back(post(c, generalise(v), first ? tr : nullptr));
        first = false;
    }
    return simplify(mkOr(std::move(disj)));
}

FormulaP wlp_rule(const RuleSchema& r, const FormulaP& d, PipelineTrace* tr) {
    std::vector<FormulaP> disj;
    bool first = true;
    for (const auto& v : expand_bidirectional(r)) {
        disj.push_back(post(mkNot(d), invert(generalise(v)), first ? tr : nullptr));
        first = false;
    }
    return simplify(mkNot(mkOr(std::move(disj))));
}

FormulaP app_rule(const RuleSchema& r, PipelineTrace* tr) {
    std::vector<FormulaP> disj;
    for (const auto& v : expand_bidirectional(r)) {
        FormulaP base =
            mkAnd({spec_graph(v.L, v.varTypes()), dang(v), v.gamma});
        Variablised vv = variablise(base);
        FormulaP body = vv.f;
        auto lv = free_list_vars(body);
        for (auto it = lv.rbegin(); it != lv.rend(); ++it)
            body = mkExists(Formula::ExistsL, *it, body);
        for (auto it = vv.edgeVars.rbegin(); it != vv.edgeVars.rend(); ++it)
            body = mkExists(Formula::ExistsE, *it, body);
        for (auto it = vv.nodeVars.rbegin(); it != vv.nodeVars.rend(); ++it)
            body = mkExists(Formula::ExistsV, *it, body);
        disj.push_back(simplify(body));
    }
    FormulaP out = simplify(mkOr(std::move(disj)));
    if (tr) tr->add("app", out);
    return out;
}

}  // namespace gpv
