#include "gpv/formula.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace gpv {

Sort Term::sort() const {
    switch (kind) {
        case NodeConst: case Src: case Tgt: return Sort::Node;
        case EdgeConst: return Sort::Edge;
        case MarkConst: case MarkV: case MarkE: return Sort::MarkS;
        case Var: return varSort;
        default: return Sort::List;
    }
}

TermP mkInt(long long n) {
    auto t = std::make_shared<Term>();
    t->kind = Term::ListConst;
    t->lv = {Atom::ofInt(n)};
    return t;
}

TermP mkList(ListValue v) {
    auto t = std::make_shared<Term>();
    t->kind = Term::ListConst;
    t->lv = std::move(v);
    return t;
}

TermP mkMark(Mark m) {
    auto t = std::make_shared<Term>();
    t->kind = Term::MarkConst;
    t->mark = m;
    return t;
}

TermP mkNodeC(const std::string& id) {
    auto t = std::make_shared<Term>();
    t->kind = Term::NodeConst;
    t->name = id;
    return t;
}

TermP mkEdgeC(const std::string& id) {
    auto t = std::make_shared<Term>();
    t->kind = Term::EdgeConst;
    t->name = id;
    return t;
}

TermP mkVar(const std::string& name, Sort s, VType vt) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Var;
    t->name = name;
    t->varSort = s;
    t->vtype = vt;
    return t;
}

TermP mkUn(Term::Kind k, TermP a) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->a = std::move(a);
    return t;
}

TermP mkBin(Term::Kind k, TermP a, TermP b) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

FormulaP mkTrue() {
    static FormulaP t = [] {
        auto f = std::make_shared<Formula>();
        f->kind = Formula::True;
        return f;
    }();
    return t;
}

FormulaP mkFalse() {
    static FormulaP t = [] {
        auto f = std::make_shared<Formula>();
        f->kind = Formula::False;
        return f;
    }();
    return t;
}

FormulaP mkNot(FormulaP f) {
    if (f->kind == Formula::True) return mkFalse();
    if (f->kind == Formula::False) return mkTrue();
    if (f->kind == Formula::Not) return f->kids[0];
    auto g = std::make_shared<Formula>();
    g->kind = Formula::Not;
    g->kids = {std::move(f)};
    return g;
}

FormulaP mkAnd(std::vector<FormulaP> fs) {
    std::vector<FormulaP> flat;
    for (auto& f : fs) {
        if (f->kind == Formula::True) continue;
        if (f->kind == Formula::False) return mkFalse();
        if (f->kind == Formula::And)
            flat.insert(flat.end(), f->kids.begin(), f->kids.end());
        else
            flat.push_back(f);
    }
    if (flat.empty()) return mkTrue();
    if (flat.size() == 1) return flat[0];
    auto g = std::make_shared<Formula>();
    g->kind = Formula::And;
    g->kids = std::move(flat);
    return g;
}

FormulaP mkOr(std::vector<FormulaP> fs) {
    std::vector<FormulaP> flat;
    for (auto& f : fs) {
        if (f->kind == Formula::False) continue;
        if (f->kind == Formula::True) return mkTrue();
        if (f->kind == Formula::Or)
            flat.insert(flat.end(), f->kids.begin(), f->kids.end());
        else
            flat.push_back(f);
    }
    if (flat.empty()) return mkFalse();
    if (flat.size() == 1) return flat[0];
    auto g = std::make_shared<Formula>();
    g->kind = Formula::Or;
    g->kids = std::move(flat);
    return g;
}

FormulaP mkAnd2(FormulaP a, FormulaP b) { return mkAnd({std::move(a), std::move(b)}); }
FormulaP mkOr2(FormulaP a, FormulaP b) { return mkOr({std::move(a), std::move(b)}); }

FormulaP mkCmp(Formula::Kind k, TermP a, TermP b) {
    auto g = std::make_shared<Formula>();
    g->kind = k;
    g->t1 = std::move(a);
    g->t2 = std::move(b);
    return g;
}

FormulaP mkExists(Formula::Kind k, const std::string& var, FormulaP body) {
    auto g = std::make_shared<Formula>();
    g->kind = k;
    g->var = var;
    g->kids = {std::move(body)};
    return g;
}

FormulaP mkPred(Formula::Kind k, TermP t) {
    auto g = std::make_shared<Formula>();
    g->kind = k;
    g->t1 = std::move(t);
    return g;
}

// ---- printing -----------------------------------------------------------

namespace {

int termPrec(Term::Kind k) {
    switch (k) {
        case Term::Colon: return 1;
        case Term::Dot: return 2;
        case Term::Add: case Term::Sub: return 3;
        case Term::Mul: case Term::Div: return 4;
        case Term::Neg: return 5;
        default: return 6;
    }
}

void printTerm(std::ostream& os, const TermP& t, int parentPrec) {
    int p = termPrec(t->kind);
    auto paren = [&](auto&& body) {
        if (p < parentPrec) os << '(';
        body();
        if (p < parentPrec) os << ')';
    };
    switch (t->kind) {
        case Term::ListConst: os << to_string(t->lv); return;
        case Term::MarkConst: os << to_string(t->mark); return;
        case Term::NodeConst: case Term::EdgeConst: case Term::Var: os << t->name; return;
        case Term::Src: os << "s("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Tgt: os << "t("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::LabV: os << "lV("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::LabE: os << "lE("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::MarkV: os << "mV("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::MarkE: os << "mE("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Indeg: os << "indeg("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Outdeg: os << "outdeg("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Incon: os << "incon("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Outcon: os << "outcon("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Length: os << "length("; printTerm(os, t->a, 0); os << ')'; return;
        case Term::Neg:
            paren([&] { os << '-'; printTerm(os, t->a, p + 1); });
            return;
        case Term::Add: case Term::Sub: case Term::Mul: case Term::Div:
        case Term::Dot: case Term::Colon: {
            const char* op = t->kind == Term::Add ? " + "
                           : t->kind == Term::Sub ? " - "
                           : t->kind == Term::Mul ? " * "
                           : t->kind == Term::Div ? " / "
                           : t->kind == Term::Dot ? " . " : " : ";
            paren([&] {
                printTerm(os, t->a, p);
                os << op;
                printTerm(os, t->b, p + 1);
            });
            return;
        }
    }
}

// formula precedence: Or = 1, And = 2, unary/atom = 3
int fmlPrec(Formula::Kind k) {
    switch (k) {
        case Formula::Or: return 1;
        case Formula::And: return 2;
        default: return 3;
    }
}

void printFml(std::ostream& os, const FormulaP& f, int parentPrec) {
    int p = fmlPrec(f->kind);
    auto paren = [&](auto&& body) {
        if (p < parentPrec) os << '(';
        body();
        if (p < parentPrec) os << ')';
    };
    switch (f->kind) {
        case Formula::True: os << "true"; return;
        case Formula::False: os << "false"; return;
        case Formula::Not:
            os << '~';
            printFml(os, f->kids[0], 4);
            return;
        case Formula::And: case Formula::Or: {
            const char* op = f->kind == Formula::And ? " /\\ " : " \\/ ";
            paren([&] {
                for (size_t i = 0; i < f->kids.size(); ++i) {
                    if (i) os << op;
                    printFml(os, f->kids[i], p + 1);
                }
            });
            return;
        }
        case Formula::Eq: case Formula::Ne: case Formula::Lt:
        case Formula::Le: case Formula::Gt: case Formula::Ge: {
            const char* op = f->kind == Formula::Eq ? " = "
                           : f->kind == Formula::Ne ? " != "
                           : f->kind == Formula::Lt ? " < "
                           : f->kind == Formula::Le ? " <= "
                           : f->kind == Formula::Gt ? " > " : " >= ";
            printTerm(os, f->t1, 0);
            os << op;
            printTerm(os, f->t2, 0);
            return;
        }
        case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL: {
            const char* q = f->kind == Formula::ExistsV ? "exists_V "
                          : f->kind == Formula::ExistsE ? "exists_E " : "exists_L ";
            os << q << f->var << " (";
            printFml(os, f->kids[0], 0);
            os << ')';
            return;
        }
        case Formula::PInt: os << "int("; printTerm(os, f->t1, 0); os << ')'; return;
        case Formula::PChar: os << "char("; printTerm(os, f->t1, 0); os << ')'; return;
        case Formula::PStr: os << "string("; printTerm(os, f->t1, 0); os << ')'; return;
        case Formula::PAtom: os << "atom("; printTerm(os, f->t1, 0); os << ')'; return;
        case Formula::Root: os << "root("; printTerm(os, f->t1, 0); os << ')'; return;
    }
}

}  // namespace

std::string print(const TermP& t) {
    std::ostringstream os;
    printTerm(os, t, 0);
    return os.str();
}

std::string print(const FormulaP& f) {
    std::ostringstream os;
    printFml(os, f, 0);
    return os.str();
}

// ---- traversal helpers ----------------------------------------------------

namespace {

// Rebuild a term bottom-up through `leaf`, which may return null for
// "unchanged".
TermP mapTerm(const TermP& t, const std::function<TermP(const TermP&)>& leaf) {
    if (auto r = leaf(t)) return r;
    if (t->a) {
        TermP a = mapTerm(t->a, leaf);
        TermP b = t->b ? mapTerm(t->b, leaf) : nullptr;
        if (a != t->a || b != t->b) {
            auto u = std::make_shared<Term>(*t);
            u->a = a;
            u->b = b;
            return u;
        }
    }
    return t;
}

FormulaP mapFormulaTerms(const FormulaP& f,
                         const std::function<TermP(const TermP&)>& leaf) {
    switch (f->kind) {
        case Formula::True: case Formula::False: return f;
        case Formula::Not:
            return mkNot(mapFormulaTerms(f->kids[0], leaf));
        case Formula::And: case Formula::Or: {
            std::vector<FormulaP> ks;
            for (auto& k : f->kids) ks.push_back(mapFormulaTerms(k, leaf));
            return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
        }
        case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL:
            return mkExists(f->kind, f->var, mapFormulaTerms(f->kids[0], leaf));
        case Formula::PInt: case Formula::PChar: case Formula::PStr:
        case Formula::PAtom: case Formula::Root:
            return mkPred(f->kind, mapTerm(f->t1, leaf));
        default:
            return mkCmp(f->kind, mapTerm(f->t1, leaf), mapTerm(f->t2, leaf));
    }
}

void visitTerms(const FormulaP& f, const std::function<void(const TermP&)>& fn) {
    std::function<void(const TermP&)> vt = [&](const TermP& t) {
        fn(t);
        if (t->a) vt(t->a);
        if (t->b) vt(t->b);
    };
    switch (f->kind) {
        case Formula::True: case Formula::False: return;
        case Formula::Not: case Formula::And: case Formula::Or:
        case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL:
            for (auto& k : f->kids) visitTerms(k, fn);
            return;
        case Formula::PInt: case Formula::PChar: case Formula::PStr:
        case Formula::PAtom: case Formula::Root:
            vt(f->t1);
            return;
        default:
            vt(f->t1);
            vt(f->t2);
            return;
    }
}

Sort sortOfQuant(Formula::Kind k) {
    return k == Formula::ExistsV ? Sort::Node
         : k == Formula::ExistsE ? Sort::Edge : Sort::List;
}

}  // namespace

std::set<std::string> free_list_vars(const FormulaP& f) {
    std::set<std::string> out;
    std::function<void(const FormulaP&, std::set<std::string>)> go =
        [&](const FormulaP& g, std::set<std::string> bound) {
            if (g->kind == Formula::ExistsL) {
                bound.insert(g->var);
                go(g->kids[0], bound);
                return;
            }
            if (g->kind == Formula::ExistsV || g->kind == Formula::ExistsE) {
                go(g->kids[0], bound);
                return;
            }
            if (g->kind == Formula::Not || g->kind == Formula::And ||
                g->kind == Formula::Or) {
                for (auto& k : g->kids) go(k, bound);
                return;
            }
            visitTerms(g, [&](const TermP& t) {
                if (t->kind == Term::Var && t->varSort == Sort::List && !bound.count(t->name))
                    out.insert(t->name);
            });
        };
    go(f, {});
    return out;
}

std::set<std::string> node_constants(const FormulaP& f) {
    std::set<std::string> out;
    visitTerms(f, [&](const TermP& t) {
        if (t->kind == Term::NodeConst) out.insert(t->name);
    });
    return out;
}

std::set<std::string> edge_constants(const FormulaP& f) {
    std::set<std::string> out;
    visitTerms(f, [&](const TermP& t) {
        if (t->kind == Term::EdgeConst) out.insert(t->name);
    });
    return out;
}

bool mentions_con(const FormulaP& f) {
    bool found = false;
    visitTerms(f, [&](const TermP& t) {
        if (t->kind == Term::Incon || t->kind == Term::Outcon) found = true;
    });
    return found;
}

FormulaP subst_list_var(const FormulaP& f, const std::string& var, TermP t) {
    if (f->kind == Formula::ExistsL && f->var == var) return f;  // shadowed
    if (f->kind == Formula::Not || f->kind == Formula::And || f->kind == Formula::Or ||
        f->kind == Formula::ExistsV || f->kind == Formula::ExistsE ||
        f->kind == Formula::ExistsL) {
        std::vector<FormulaP> ks;
        for (auto& k : f->kids) ks.push_back(subst_list_var(k, var, t));
        if (f->kind == Formula::Not) return mkNot(ks[0]);
        if (f->kind == Formula::And) return mkAnd(std::move(ks));
        if (f->kind == Formula::Or) return mkOr(std::move(ks));
        return mkExists(f->kind, f->var, ks[0]);
    }
    return mapFormulaTerms(f, [&](const TermP& u) -> TermP {
        if (u->kind == Term::Var && u->varSort == Sort::List && u->name == var) return t;
        return nullptr;
    });
}

FormulaP subst_var(const FormulaP& f, const std::string& var, TermP t) {
    if ((f->kind == Formula::ExistsV || f->kind == Formula::ExistsE) && f->var == var)
        return f;
    if (f->kind == Formula::Not || f->kind == Formula::And || f->kind == Formula::Or ||
        f->kind == Formula::ExistsV || f->kind == Formula::ExistsE ||
        f->kind == Formula::ExistsL) {
        std::vector<FormulaP> ks;
        for (auto& k : f->kids) ks.push_back(subst_var(k, var, t));
        if (f->kind == Formula::Not) return mkNot(ks[0]);
        if (f->kind == Formula::And) return mkAnd(std::move(ks));
        if (f->kind == Formula::Or) return mkOr(std::move(ks));
        return mkExists(f->kind, f->var, ks[0]);
    }
    return mapFormulaTerms(f, [&](const TermP& u) -> TermP {
        if (u->kind == Term::Var && u->varSort != Sort::List && u->name == var) return t;
        return nullptr;
    });
}

FormulaP rename_constants(const FormulaP& f,
                          const std::map<std::string, std::string>& nodeRen,
                          const std::map<std::string, std::string>& edgeRen) {
    return mapFormulaTerms(f, [&](const TermP& u) -> TermP {
        if (u->kind == Term::NodeConst) {
            auto it = nodeRen.find(u->name);
            if (it != nodeRen.end()) return mkNodeC(it->second);
        }
        if (u->kind == Term::EdgeConst) {
            auto it = edgeRen.find(u->name);
            if (it != edgeRen.end()) return mkEdgeC(it->second);
        }
        return nullptr;
    });
}

bool term_mentions(const TermP& t, Term::Kind srcOrTgt, const std::string& edgeVar) {
    if (t->kind == srcOrTgt && t->a->kind == Term::Var && t->a->name == edgeVar) return true;
    if (t->a && term_mentions(t->a, srcOrTgt, edgeVar)) return true;
    if (t->b && term_mentions(t->b, srcOrTgt, edgeVar)) return true;
    return false;
}

bool formula_mentions_endpoint(const FormulaP& f, Term::Kind srcOrTgt,
                               const std::string& edgeVar) {
    bool found = false;
    std::function<void(const FormulaP&)> go = [&](const FormulaP& g) {
        if ((g->kind == Formula::ExistsE) && g->var == edgeVar) return;  // shadowed
        for (auto& k : g->kids) go(k);
        visitTerms(g, [&](const TermP& t) {
            if (t->kind == srcOrTgt && t->a && t->a->kind == Term::Var &&
                t->a->name == edgeVar)
                found = true;
        });
    };
    go(f);
    return found;
}

FormulaP subst_endpoint(const FormulaP& f, Term::Kind srcOrTgt,
                        const std::string& edgeVar, TermP replacement) {
    if (f->kind == Formula::ExistsE && f->var == edgeVar) return f;
    if (f->kind == Formula::Not || f->kind == Formula::And || f->kind == Formula::Or ||
        f->kind == Formula::ExistsV || f->kind == Formula::ExistsE ||
        f->kind == Formula::ExistsL) {
        std::vector<FormulaP> ks;
        for (auto& k : f->kids) ks.push_back(subst_endpoint(k, srcOrTgt, edgeVar, replacement));
        if (f->kind == Formula::Not) return mkNot(ks[0]);
        if (f->kind == Formula::And) return mkAnd(std::move(ks));
        if (f->kind == Formula::Or) return mkOr(std::move(ks));
        return mkExists(f->kind, f->var, ks[0]);
    }
    return mapFormulaTerms(f, [&](const TermP& u) -> TermP {
        if (u->kind == srcOrTgt && u->a->kind == Term::Var && u->a->name == edgeVar)
            return replacement;
        return nullptr;
    });
}

}  // namespace gpv
