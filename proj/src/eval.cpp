#include <algorithm>
#include <set>
#include <functional>
#include <stdexcept>

#include "gpv/formula.hpp"

namespace gpv {
namespace {

struct Val {
    Sort sort = Sort::List;
    int idx = -1;  // node/edge index
    ListValue lv;
    Mark m = Mark::None;
};

std::optional<long long> asInt(const Val& v) {
    if (v.sort != Sort::List || v.lv.size() != 1 || !v.lv[0].isInt) return std::nullopt;
    return v.lv[0].num;
}

struct Evaluator {
    const HostGraph& G;
    const std::vector<ListValue>& domain;

    std::optional<Val> term(const TermP& t, const Env& env) const {
        switch (t->kind) {
            case Term::ListConst: return Val{Sort::List, -1, t->lv, Mark::None};
            case Term::MarkConst: return Val{Sort::MarkS, -1, {}, t->mark};
            case Term::NodeConst: {
                auto it = env.nodeConsts.find(t->name);
                int i = G.nodeIndex(it != env.nodeConsts.end() ? it->second : t->name);
                if (i < 0) return std::nullopt;
                return Val{Sort::Node, i, {}, Mark::None};
            }
            case Term::EdgeConst: {
                auto it = env.edgeConsts.find(t->name);
                int i = G.edgeIndex(it != env.edgeConsts.end() ? it->second : t->name);
                if (i < 0) return std::nullopt;
                return Val{Sort::Edge, i, {}, Mark::None};
            }
            case Term::Var:
                if (t->varSort == Sort::Node) {
                    auto it = env.nodeVars.find(t->name);
                    if (it == env.nodeVars.end()) return std::nullopt;
                    return Val{Sort::Node, it->second, {}, Mark::None};
                }
                if (t->varSort == Sort::Edge) {
                    auto it = env.edgeVars.find(t->name);
                    if (it == env.edgeVars.end()) return std::nullopt;
                    return Val{Sort::Edge, it->second, {}, Mark::None};
                }
                {
                    auto it = env.listVars.find(t->name);
                    if (it == env.listVars.end()) return std::nullopt;
                    return Val{Sort::List, -1, it->second, Mark::None};
                }
            case Term::Src: case Term::Tgt: {
                auto e = term(t->a, env);
                if (!e || e->sort != Sort::Edge) return std::nullopt;
                const std::string& id =
                    t->kind == Term::Src ? G.edges[e->idx].src : G.edges[e->idx].tgt;
                return Val{Sort::Node, G.nodeIndex(id), {}, Mark::None};
            }
            case Term::LabV: case Term::MarkV: case Term::Indeg: case Term::Outdeg: {
                auto n = term(t->a, env);
                if (!n || n->sort != Sort::Node) return std::nullopt;
                if (t->kind == Term::LabV)
                    return Val{Sort::List, -1, G.nodes[n->idx].label, Mark::None};
                if (t->kind == Term::MarkV)
                    return Val{Sort::MarkS, -1, {}, G.nodes[n->idx].mark};
                long long d = t->kind == Term::Indeg ? G.indeg(n->idx) : G.outdeg(n->idx);
                return Val{Sort::List, -1, {Atom::ofInt(d)}, Mark::None};
            }
            case Term::LabE: case Term::MarkE: {
                auto e = term(t->a, env);
                if (!e || e->sort != Sort::Edge) return std::nullopt;
                if (t->kind == Term::LabE)
                    return Val{Sort::List, -1, G.edges[e->idx].label, Mark::None};
                return Val{Sort::MarkS, -1, {}, G.edges[e->idx].mark};
            }
            case Term::Incon: case Term::Outcon:
                throw std::runtime_error("incon/outcon cannot be evaluated on a host graph");
            case Term::Length: {
                auto l = term(t->a, env);
                if (!l || l->sort != Sort::List) return std::nullopt;
                return Val{Sort::List, -1, {Atom::ofInt((long long)l->lv.size())}, Mark::None};
            }
            case Term::Neg: {
                auto v = term(t->a, env);
                if (!v) return std::nullopt;
                auto n = asInt(*v);
                if (!n) return std::nullopt;
                return Val{Sort::List, -1, {Atom::ofInt(-*n)}, Mark::None};
            }
            case Term::Add: case Term::Sub: case Term::Mul: case Term::Div: {
                auto a = term(t->a, env), b = term(t->b, env);
                if (!a || !b) return std::nullopt;
                auto x = asInt(*a), y = asInt(*b);
                if (!x || !y) return std::nullopt;
                long long r;
                if (t->kind == Term::Add) r = *x + *y;
                else if (t->kind == Term::Sub) r = *x - *y;
                else if (t->kind == Term::Mul) r = *x * *y;
                else {
                    if (*y == 0) return std::nullopt;
                    r = *x / *y;  // truncates toward zero
                }
                return Val{Sort::List, -1, {Atom::ofInt(r)}, Mark::None};
            }
            case Term::Dot: {
                auto a = term(t->a, env), b = term(t->b, env);
                if (!a || !b) return std::nullopt;
                if (a->lv.size() != 1 || b->lv.size() != 1 || a->lv[0].isInt || b->lv[0].isInt)
                    return std::nullopt;
                return Val{Sort::List, -1, {Atom::ofStr(a->lv[0].str + b->lv[0].str)}, Mark::None};
            }
            case Term::Colon: {
                auto a = term(t->a, env), b = term(t->b, env);
                if (!a || !b || a->sort != Sort::List || b->sort != Sort::List)
                    return std::nullopt;
                ListValue out = a->lv;
                out.insert(out.end(), b->lv.begin(), b->lv.end());
                return Val{Sort::List, -1, out, Mark::None};
            }
        }
        return std::nullopt;
    }

    bool eqVals(const Val& a, const Val& b) const {
        if (a.sort == Sort::MarkS || b.sort == Sort::MarkS) {
            if (a.sort != Sort::MarkS || b.sort != Sort::MarkS) return false;
            if (a.m == Mark::Any) return b.m != Mark::None;
            if (b.m == Mark::Any) return a.m != Mark::None;
            return a.m == b.m;
        }
        if (a.sort != b.sort) return false;
        if (a.sort == Sort::List) return a.lv == b.lv;
        return a.idx == b.idx;
    }

    bool fml(const FormulaP& f, Env& env) const {
        switch (f->kind) {
            case Formula::True: return true;
            case Formula::False: return false;
            case Formula::Not: return !fml(f->kids[0], env);
            case Formula::And:
                for (auto& k : f->kids)
                    if (!fml(k, env)) return false;
                return true;
            case Formula::Or:
                for (auto& k : f->kids)
                    if (fml(k, env)) return true;
                return false;
            case Formula::Eq: case Formula::Ne: {
                auto a = term(f->t1, env), b = term(f->t2, env);
                bool eq = a && b && eqVals(*a, *b);
                return f->kind == Formula::Eq ? eq : !eq;
            }
            case Formula::Lt: case Formula::Le: case Formula::Gt: case Formula::Ge: {
                auto a = term(f->t1, env), b = term(f->t2, env);
                if (!a || !b) return false;
                auto x = asInt(*a), y = asInt(*b);
                if (!x || !y) return false;
                switch (f->kind) {
                    case Formula::Lt: return *x < *y;
                    case Formula::Le: return *x <= *y;
                    case Formula::Gt: return *x > *y;
                    default: return *x >= *y;
                }
            }
            case Formula::ExistsV: {
                for (size_t i = 0; i < G.nodes.size(); ++i) {
                    env.nodeVars[f->var] = (int)i;
                    if (fml(f->kids[0], env)) {
                        env.nodeVars.erase(f->var);
                        return true;
                    }
                }
                env.nodeVars.erase(f->var);
                return false;
            }
            case Formula::ExistsE: {
                for (size_t i = 0; i < G.edges.size(); ++i) {
                    env.edgeVars[f->var] = (int)i;
                    if (fml(f->kids[0], env)) {
                        env.edgeVars.erase(f->var);
                        return true;
                    }
                }
                env.edgeVars.erase(f->var);
                return false;
            }
            case Formula::ExistsL: {
                // a top-level conjunct var = t (t evaluable without var)
                // restricts the witnesses to the values of those t
                std::vector<ListValue> cands = solvedCandidates(f->kids[0], f->var, env);
                if (cands.empty())
                    for (const auto& l : domain) cands.push_back(l);
                std::vector<ListValue> seen;
                for (const auto& l : cands) {
                    if (std::find(seen.begin(), seen.end(), l) != seen.end()) continue;
                    seen.push_back(l);
                    env.listVars[f->var] = l;
                    if (fml(f->kids[0], env)) {
                        env.listVars.erase(f->var);
                        return true;
                    }
                }
                env.listVars.erase(f->var);
                return false;
            }
            case Formula::PInt: case Formula::PChar: case Formula::PStr: case Formula::PAtom: {
                auto v = term(f->t1, env);
                if (!v || v->sort != Sort::List) return false;
                if (f->kind == Formula::PInt)
                    return v->lv.size() == 1 && v->lv[0].isInt;
                if (f->kind == Formula::PChar)
                    return v->lv.size() == 1 && !v->lv[0].isInt && v->lv[0].str.size() == 1;
                if (f->kind == Formula::PStr)
                    return v->lv.size() == 1 && !v->lv[0].isInt;
                return v->lv.size() == 1;
            }
            case Formula::Root: {
                auto v = term(f->t1, env);
                return v && v->sort == Sort::Node && G.nodes[v->idx].root;
            }
        }
        return false;
    }

    // Values for `var` forced by equality conjuncts on the positive spine
    // of the body. The spine may pass through nested existentials: if the
    // body is satisfiable at all, any conjunct var = t with t independent
    // of var and of the inner bound variables pins down var's value.
    std::vector<ListValue> solvedCandidates(const FormulaP& body, const std::string& var,
                                            const Env& env) const {
        std::vector<ListValue> out;
        std::multiset<std::string> shadowed;
        std::function<bool(const TermP&)> usesShadowed = [&](const TermP& t) -> bool {
            if (t->kind == Term::Var && shadowed.count(t->name)) return true;
            if (t->a && usesShadowed(t->a)) return true;
            if (t->b && usesShadowed(t->b)) return true;
            return false;
        };
        std::function<void(const FormulaP&)> scan = [&](const FormulaP& g) {
            if (g->kind == Formula::And) {
                for (auto& k : g->kids) scan(k);
                return;
            }
            if (g->kind == Formula::ExistsV || g->kind == Formula::ExistsE ||
                g->kind == Formula::ExistsL) {
                if (g->kind == Formula::ExistsL && g->var == var) return;
                shadowed.insert(g->var);
                scan(g->kids[0]);
                shadowed.erase(shadowed.find(g->var));
                return;
            }
            if (g->kind != Formula::Eq) return;
            auto tryOne = [&](const TermP& lhs, const TermP& rhs) {
                if (lhs->kind == Term::Var && lhs->varSort == Sort::List && lhs->name == var) {
                    // var is unbound here, so rhs only evaluates if it
                    // depends on neither var nor an inner bound variable
                    if (usesShadowed(rhs)) return;
                    if (auto v = term(rhs, env); v && v->sort == Sort::List)
                        out.push_back(v->lv);
                }
            };
            tryOne(g->t1, g->t2);
            tryOne(g->t2, g->t1);
        };
        scan(body);
        return out;
    }
};

}  // namespace

std::vector<ListValue> label_domain(const std::vector<ListValue>& universe,
                                    const HostGraph& G) {
    std::vector<ListValue> out;
    auto add = [&](const ListValue& l) {
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    };
    auto addWithAtoms = [&](const ListValue& l) {
        add(l);
        for (const auto& a : l) add({a});
    };
    for (const auto& l : universe) addWithAtoms(l);
    for (const auto& n : G.nodes) addWithAtoms(n.label);
    for (const auto& e : G.edges) addWithAtoms(e.label);
    std::vector<long long> ints;
    for (const auto& l : out)
        if (l.size() == 1 && l[0].isInt) ints.push_back(l[0].num);
    for (long long a : ints)
        for (long long b : ints) {
            add({Atom::ofInt(a + b)});
            add({Atom::ofInt(a - b)});
        }
    return out;
}

bool satisfies(const HostGraph& G, const FormulaP& f,
               const std::vector<ListValue>& domain, const Env& env) {
    Evaluator ev{G, domain};
    Env e = env;
    return ev.fml(f, e);
}

std::optional<ListValue> eval_ground(const TermP& t,
                                     const std::map<std::string, ListValue>& vars) {
    static const HostGraph empty;
    Env env;
    env.listVars = vars;
    Evaluator ev{empty, {}};
    std::optional<ListValue> out;
    try {
        auto v = ev.term(t, env);
        if (v && v->sort == Sort::List) out = v->lv;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return out;
}

}  // namespace gpv
