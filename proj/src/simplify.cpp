#include <algorithm>
#include <functional>
#include <set>

#include "gpv/formula.hpp"

namespace gpv {
namespace {

bool isGroundConst(const TermP& t) {
    return t->kind == Term::ListConst || t->kind == Term::MarkConst ||
           t->kind == Term::NodeConst || t->kind == Term::EdgeConst;
}

bool containsDiv(const TermP& t) {
    if (t->kind == Term::Div) return true;
    if (t->a && containsDiv(t->a)) return true;
    if (t->b && containsDiv(t->b)) return true;
    return false;
}

bool sameTerm(const TermP& a, const TermP& b) { return print(a) == print(b); }

// Fold variable-free arithmetic/concat subterms into constants.
TermP foldTerm(const TermP& t) {
    TermP a = t->a ? foldTerm(t->a) : nullptr;
    TermP b = t->b ? foldTerm(t->b) : nullptr;
    TermP u = t;
    if (a != t->a || b != t->b) {
        auto v = std::make_shared<Term>(*t);
        v->a = a;
        v->b = b;
        u = v;
    }
    switch (u->kind) {
        case Term::Add: case Term::Sub: case Term::Mul: case Term::Div:
        case Term::Neg: case Term::Dot: case Term::Colon: case Term::Length:
            if ((!u->a || u->a->kind == Term::ListConst) &&
                (!u->b || u->b->kind == Term::ListConst)) {
                if (auto v = eval_ground(u, {})) return mkList(*v);
            }
            break;
        default:
            break;
    }
    return u;
}

Formula::Kind negatedCmp(Formula::Kind k) {
    switch (k) {
        case Formula::Eq: return Formula::Ne;
        case Formula::Ne: return Formula::Eq;
        case Formula::Lt: return Formula::Ge;
        case Formula::Le: return Formula::Gt;
        case Formula::Gt: return Formula::Le;
        default: return Formula::Lt;
    }
}

bool isCmp(Formula::Kind k) {
    return k == Formula::Eq || k == Formula::Ne || k == Formula::Lt ||
           k == Formula::Le || k == Formula::Gt || k == Formula::Ge;
}

FormulaP foldCmp(Formula::Kind k, const TermP& a, const TermP& b) {
    if (isGroundConst(a) && isGroundConst(b)) {
        if (a->kind == Term::ListConst && b->kind == Term::ListConst) {
            if (k == Formula::Eq) return a->lv == b->lv ? mkTrue() : mkFalse();
            if (k == Formula::Ne) return a->lv != b->lv ? mkTrue() : mkFalse();
            if (a->lv.size() == 1 && a->lv[0].isInt && b->lv.size() == 1 && b->lv[0].isInt) {
                long long x = a->lv[0].num, y = b->lv[0].num;
                bool r = k == Formula::Lt ? x < y
                       : k == Formula::Le ? x <= y
                       : k == Formula::Gt ? x > y : x >= y;
                return r ? mkTrue() : mkFalse();
            }
            return mkFalse();  // ordering on non-integers
        }
        if (a->kind == Term::MarkConst && b->kind == Term::MarkConst) {
            bool eq = a->mark == Mark::Any ? b->mark != Mark::None
                    : b->mark == Mark::Any ? a->mark != Mark::None
                                           : a->mark == b->mark;
            if (k == Formula::Eq) return eq ? mkTrue() : mkFalse();
            if (k == Formula::Ne) return eq ? mkFalse() : mkTrue();
        }
        if ((a->kind == Term::NodeConst && b->kind == Term::NodeConst) ||
            (a->kind == Term::EdgeConst && b->kind == Term::EdgeConst)) {
            bool eq = a->name == b->name;
            if (k == Formula::Eq) return eq ? mkTrue() : mkFalse();
            if (k == Formula::Ne) return eq ? mkFalse() : mkTrue();
        }
    }
    if ((k == Formula::Eq || k == Formula::Ne) && sameTerm(a, b) && !containsDiv(a))
        return k == Formula::Eq ? mkTrue() : mkFalse();
    return mkCmp(k, a, b);
}

FormulaP simp(const FormulaP& f) {
    switch (f->kind) {
        case Formula::True: case Formula::False:
            return f;
        case Formula::Not: {
            FormulaP c = simp(f->kids[0]);
            if (c->kind == Formula::True) return mkFalse();
            if (c->kind == Formula::False) return mkTrue();
            if (c->kind == Formula::Not) return c->kids[0];
            if (isCmp(c->kind)) return foldCmp(negatedCmp(c->kind), c->t1, c->t2);
            if (c->kind == Formula::And || c->kind == Formula::Or) {
                std::vector<FormulaP> ks;
                for (auto& k : c->kids) ks.push_back(simp(mkNot(k)));
                return c->kind == Formula::And ? mkOr(std::move(ks)) : mkAnd(std::move(ks));
            }
            return mkNot(c);
        }
        case Formula::And: case Formula::Or: {
            std::vector<FormulaP> ks;
            std::set<std::string> seen;
            std::vector<FormulaP> raw;
            for (auto& k : f->kids) raw.push_back(simp(k));
            FormulaP combined = f->kind == Formula::And ? mkAnd(raw) : mkOr(raw);
            if (combined->kind != f->kind) return combined;
            bool contradiction = false;
            for (auto& k : combined->kids) {
                std::string p = print(k);
                if (seen.count(p)) continue;
                if (seen.count(print(simp(mkNot(k))))) contradiction = true;
                seen.insert(p);
                ks.push_back(k);
            }
            if (contradiction) return f->kind == Formula::And ? mkFalse() : mkTrue();
            return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
        }
        case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL: {
            FormulaP body = simp(f->kids[0]);
            if (body->kind == Formula::False) return mkFalse();
            if (body->kind == Formula::True && f->kind == Formula::ExistsL) return mkTrue();
            return mkExists(f->kind, f->var, body);
        }
        case Formula::PInt: case Formula::PChar: case Formula::PStr: case Formula::PAtom: {
            TermP t = foldTerm(f->t1);
            if (t->kind == Term::ListConst) {
                const ListValue& l = t->lv;
                bool r = false;
                if (f->kind == Formula::PInt) r = l.size() == 1 && l[0].isInt;
                else if (f->kind == Formula::PChar)
                    r = l.size() == 1 && !l[0].isInt && l[0].str.size() == 1;
                else if (f->kind == Formula::PStr) r = l.size() == 1 && !l[0].isInt;
                else r = l.size() == 1;
                return r ? mkTrue() : mkFalse();
            }
            return mkPred(f->kind, t);
        }
        case Formula::Root:
            return mkPred(f->kind, f->t1);
        default:
            return foldCmp(f->kind, foldTerm(f->t1), foldTerm(f->t2));
    }
}

}  // namespace

FormulaP simplify(const FormulaP& f) { return simp(f); }

namespace {

// Rename bound variables to per-sort, per-depth placeholders and order
// commutative children by their printed form.
FormulaP canonSort(const FormulaP& f, std::map<std::string, std::string> env,
                   int dv, int de, int dl) {
    switch (f->kind) {
        case Formula::True: case Formula::False:
            return f;
        case Formula::Not:
            return mkNot(canonSort(f->kids[0], env, dv, de, dl));
        case Formula::And: case Formula::Or: {
            std::vector<FormulaP> ks;
            for (auto& k : f->kids) ks.push_back(canonSort(k, env, dv, de, dl));
            std::sort(ks.begin(), ks.end(),
                      [](const FormulaP& a, const FormulaP& b) { return print(a) < print(b); });
            ks.erase(std::unique(ks.begin(), ks.end(),
                                 [](const FormulaP& a, const FormulaP& b) {
                                     return print(a) == print(b);
                                 }),
                     ks.end());
            return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
        }
        case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL: {
            std::string ph = f->kind == Formula::ExistsV ? "%v" + std::to_string(dv)
                           : f->kind == Formula::ExistsE ? "%e" + std::to_string(de)
                                                         : "%l" + std::to_string(dl);
            env[f->var] = ph;
            FormulaP body = canonSort(f->kids[0], env,
                                      dv + (f->kind == Formula::ExistsV),
                                      de + (f->kind == Formula::ExistsE),
                                      dl + (f->kind == Formula::ExistsL));
            return mkExists(f->kind, ph, body);
        }
        default: {
            auto ren = [&](const TermP& t) {
                return subst_var(mkCmp(Formula::Eq, t, t), "", t);  // unused
            };
            (void)ren;
            auto renameVars = [&](TermP t) {
                std::function<TermP(const TermP&)> go = [&](const TermP& u) -> TermP {
                    if (u->kind == Term::Var) {
                        auto it = env.find(u->name);
                        if (it != env.end()) return mkVar(it->second, u->varSort, u->vtype);
                        return u;
                    }
                    if (!u->a) return u;
                    TermP a = go(u->a);
                    TermP b = u->b ? go(u->b) : nullptr;
                    if (a == u->a && b == u->b) return u;
                    auto w = std::make_shared<Term>(*u);
                    w->a = a;
                    w->b = b;
                    return w;
                };
                return go(t);
            };
            if (f->kind == Formula::Root || f->kind == Formula::PInt ||
                f->kind == Formula::PChar || f->kind == Formula::PStr ||
                f->kind == Formula::PAtom)
                return mkPred(f->kind, renameVars(f->t1));
            TermP a = renameVars(f->t1), b = renameVars(f->t2);
            if ((f->kind == Formula::Eq || f->kind == Formula::Ne) && print(b) < print(a))
                std::swap(a, b);
            return mkCmp(f->kind, a, b);
        }
    }
}

void collectUsedNames(const FormulaP& f, std::set<std::string>& used) {
    if (f->kind == Formula::ExistsV || f->kind == Formula::ExistsE ||
        f->kind == Formula::ExistsL)
        collectUsedNames(f->kids[0], used);
    else
        for (auto& k : f->kids) collectUsedNames(k, used);
    for (const auto& v : free_list_vars(f)) used.insert(v);
    for (const auto& v : node_constants(f)) used.insert(v);
    for (const auto& v : edge_constants(f)) used.insert(v);
}

struct Renamer {
    std::set<std::string> used;
    int nv = 0, ne = 0, nl = 0;

    std::string fresh(Sort s) {
        static const char* nodePool[] = {"u", "v", "w"};
        static const char* edgePool[] = {"x", "y", "z"};
        static const char* listPool[] = {"a", "b", "c"};
        int& ctr = s == Sort::Node ? nv : s == Sort::Edge ? ne : nl;
        const char** pool = s == Sort::Node ? nodePool : s == Sort::Edge ? edgePool : listPool;
        while (true) {
            int i = ctr++;
            std::string cand = i < 3 ? pool[i] : std::string(pool[i % 3]) + std::to_string(i / 3);
            if (!used.count(cand)) return cand;
        }
    }

    FormulaP go(const FormulaP& f, std::map<std::string, std::string> env) {
        switch (f->kind) {
            case Formula::True: case Formula::False:
                return f;
            case Formula::Not:
                return mkNot(go(f->kids[0], env));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& k : f->kids) ks.push_back(go(k, env));
                return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL: {
                Sort s = f->kind == Formula::ExistsV ? Sort::Node
                       : f->kind == Formula::ExistsE ? Sort::Edge : Sort::List;
                std::string name = fresh(s);
                env[f->var] = name;
                return mkExists(f->kind, name, go(f->kids[0], env));
            }
            default: {
                auto renameVars = [&](const TermP& t) {
                    std::function<TermP(const TermP&)> r = [&](const TermP& u) -> TermP {
                        if (u->kind == Term::Var) {
                            auto it = env.find(u->name);
                            if (it != env.end()) return mkVar(it->second, u->varSort, u->vtype);
                            return u;
                        }
                        if (!u->a) return u;
                        TermP a = r(u->a);
                        TermP b = u->b ? r(u->b) : nullptr;
                        if (a == u->a && b == u->b) return u;
                        auto w = std::make_shared<Term>(*u);
                        w->a = a;
                        w->b = b;
                        return w;
                    };
                    return r(t);
                };
                if (f->kind == Formula::Root || f->kind == Formula::PInt ||
                    f->kind == Formula::PChar || f->kind == Formula::PStr ||
                    f->kind == Formula::PAtom)
                    return mkPred(f->kind, renameVars(f->t1));
                return mkCmp(f->kind, renameVars(f->t1), renameVars(f->t2));
            }
        }
    }
};

}  // namespace

FormulaP canon(const FormulaP& f) {
    FormulaP s = simplify(f);
    // Sorting children changes printed placeholder names of nested
    // binders only when shadowing occurs, which our formulas avoid; two
    // sort passes make the result a fixpoint in practice.
    FormulaP sorted = canonSort(s, {}, 0, 0, 0);
    sorted = canonSort(sorted, {}, 0, 0, 0);
    Renamer r;
    collectUsedNames(sorted, r.used);
    return r.go(sorted, {});
}

std::string canon_str(const FormulaP& f) { return print(canon(f)); }

}  // namespace gpv
