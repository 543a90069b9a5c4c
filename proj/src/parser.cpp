#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>

#include "gpv/formula.hpp"

// Formula and term parsing for the ASCII assertion syntax, including the
// sort-resolution pass that decides whether identifiers denote node/edge
// constants or variables.

namespace gpv {
namespace {

struct Tok {
    enum K { Ident, Int, Str, Punct, End } k;
    std::string s;
    long long n = 0;
};

struct Lexer {
    std::vector<Tok> toks;
    size_t pos = 0;

    explicit Lexer(const std::string& in) {
        size_t i = 0;
        auto puncts = {"/\\", "\\/", "->", "!=", "<=", ">=", "(", ")", ",", "~",
                       "=",  "<",  ">",  "+",  "-",  "*",  "/", ".", ":", "#"};
        while (i < in.size()) {
            if (std::isspace((unsigned char)in[i])) {
                ++i;
                continue;
            }
            if (std::isdigit((unsigned char)in[i])) {
                size_t j = i;
                while (j < in.size() && std::isdigit((unsigned char)in[j])) ++j;
                toks.push_back({Tok::Int, in.substr(i, j - i), std::stoll(in.substr(i, j - i))});
                i = j;
                continue;
            }
            if (std::isalpha((unsigned char)in[i]) || in[i] == '_') {
                size_t j = i;
                while (j < in.size() && (std::isalnum((unsigned char)in[j]) || in[j] == '_')) ++j;
                toks.push_back({Tok::Ident, in.substr(i, j - i)});
                i = j;
                continue;
            }
            if (in[i] == '"') {
                size_t j = i + 1;
                while (j < in.size() && in[j] != '"') ++j;
                if (j >= in.size()) throw std::runtime_error("unterminated string");
                toks.push_back({Tok::Str, in.substr(i + 1, j - i - 1)});
                i = j + 1;
                continue;
            }
            bool matched = false;
            for (const char* p : puncts) {
                size_t len = std::string(p).size();
                if (in.compare(i, len, p) == 0) {
                    toks.push_back({Tok::Punct, p});
                    i += len;
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw std::runtime_error(std::string("unexpected character '") + in[i] + "'");
        }
        toks.push_back({Tok::End, ""});
    }

    const Tok& peek() const { return toks[pos]; }
    Tok next() { return toks[pos++]; }
    bool tryPunct(const std::string& p) {
        if (toks[pos].k == Tok::Punct && toks[pos].s == p) {
            ++pos;
            return true;
        }
        return false;
    }
    bool tryIdent(const std::string& id) {
        if (toks[pos].k == Tok::Ident && toks[pos].s == id) {
            ++pos;
            return true;
        }
        return false;
    }
    void expectPunct(const std::string& p) {
        if (!tryPunct(p)) throw std::runtime_error("expected '" + p + "' near '" + peek().s + "'");
    }
    std::string expectIdent() {
        if (peek().k != Tok::Ident) throw std::runtime_error("expected identifier near '" + peek().s + "'");
        return next().s;
    }
};

bool isUnaryFn(const std::string& id, Term::Kind& k) {
    if (id == "s") k = Term::Src;
    else if (id == "t") k = Term::Tgt;
    else if (id == "lV") k = Term::LabV;
    else if (id == "lE") k = Term::LabE;
    else if (id == "mV") k = Term::MarkV;
    else if (id == "mE") k = Term::MarkE;
    else if (id == "indeg") k = Term::Indeg;
    else if (id == "outdeg") k = Term::Outdeg;
    else if (id == "incon") k = Term::Incon;
    else if (id == "outcon") k = Term::Outcon;
    else if (id == "length") k = Term::Length;
    else return false;
    return true;
}

struct Parser {
    Lexer& lx;
    int freshEdge = 0;

    // Terms are built with placeholder variables (kind Var, sort List,
    // vtype List); the resolve pass assigns real kinds afterwards.
    TermP parseTerm() { return parseColon(); }

    TermP parseColon() {
        TermP t = parseDot();
        while (lx.tryPunct(":")) t = mkBin(Term::Colon, t, parseDot());
        return t;
    }
    TermP parseDot() {
        TermP t = parseAdd();
        while (lx.tryPunct(".")) t = mkBin(Term::Dot, t, parseAdd());
        return t;
    }
    TermP parseAdd() {
        TermP t = parseMul();
        while (true) {
            if (lx.tryPunct("+")) t = mkBin(Term::Add, t, parseMul());
            else if (lx.tryPunct("-")) t = mkBin(Term::Sub, t, parseMul());
            else return t;
        }
    }
    TermP parseMul() {
        TermP t = parseUnary();
        while (true) {
            if (lx.tryPunct("*")) t = mkBin(Term::Mul, t, parseUnary());
            else if (lx.tryPunct("/")) t = mkBin(Term::Div, t, parseUnary());
            else return t;
        }
    }
    TermP parseUnary() {
        if (lx.tryPunct("-")) return mkUn(Term::Neg, parseUnary());
        return parsePrimary();
    }
    TermP parsePrimary() {
        const Tok& t = lx.peek();
        if (t.k == Tok::Int) return mkInt(lx.next().n);
        if (t.k == Tok::Str) return mkList({Atom::ofStr(lx.next().s)});
        if (t.k == Tok::Punct && t.s == "(") {
            lx.next();
            TermP inner = parseTerm();
            lx.expectPunct(")");
            return inner;
        }
        if (t.k == Tok::Ident) {
            std::string id = lx.next().s;
            if (id == "empty") return mkList({});
            if (auto m = mark_from_string(id)) return mkMark(*m);
            Term::Kind fk;
            if (isUnaryFn(id, fk) && lx.tryPunct("(")) {
                TermP arg = parseTerm();
                lx.expectPunct(")");
                return mkUn(fk, arg);
            }
            return mkVar(id, Sort::List);  // placeholder, resolved later
        }
        throw std::runtime_error("expected term near '" + t.s + "'");
    }

    FormulaP parseFormula() { return parseImpl(); }

    FormulaP parseImpl() {
        FormulaP a = parseOr();
        if (lx.tryPunct("->")) return mkOr2(mkNot(a), parseImpl());
        return a;
    }
    FormulaP parseOr() {
        FormulaP a = parseAnd();
        std::vector<FormulaP> kids{a};
        while (lx.tryPunct("\\/")) kids.push_back(parseAnd());
        return kids.size() == 1 ? a : mkOr(std::move(kids));
    }
    FormulaP parseAnd() {
        FormulaP a = parseNot();
        std::vector<FormulaP> kids{a};
        while (lx.tryPunct("/\\")) kids.push_back(parseNot());
        return kids.size() == 1 ? a : mkAnd(std::move(kids));
    }
    FormulaP parseNot() {
        if (lx.tryPunct("~")) return mkNot(parseNot());
        return parseAtom();
    }

    FormulaP parseQuant(Formula::Kind k, bool universal) {
        std::vector<std::string> vars{lx.expectIdent()};
        while (lx.tryPunct(",")) vars.push_back(lx.expectIdent());
        lx.expectPunct("(");
        FormulaP body = parseFormula();
        lx.expectPunct(")");
        if (universal) body = mkNot(body);
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            body = mkExists(k, *it, body);
        if (universal) body = mkNot(body);
        return body;
    }

    FormulaP parseAtom() {
        const Tok& t = lx.peek();
        if (t.k == Tok::Ident) {
            if (lx.tryIdent("true")) return mkTrue();
            if (lx.tryIdent("false")) return mkFalse();
            if (lx.tryIdent("exists_V")) return parseQuant(Formula::ExistsV, false);
            if (lx.tryIdent("exists_E")) return parseQuant(Formula::ExistsE, false);
            if (lx.tryIdent("exists_L")) return parseQuant(Formula::ExistsL, false);
            if (lx.tryIdent("forall_V")) return parseQuant(Formula::ExistsV, true);
            if (lx.tryIdent("forall_E")) return parseQuant(Formula::ExistsE, true);
            if (lx.tryIdent("forall_L")) return parseQuant(Formula::ExistsL, true);
            size_t save = lx.pos;
            std::string id = lx.next().s;
            Formula::Kind pk;
            bool isPred = true;
            if (id == "int") pk = Formula::PInt;
            else if (id == "char") pk = Formula::PChar;
            else if (id == "string") pk = Formula::PStr;
            else if (id == "atom") pk = Formula::PAtom;
            else if (id == "root") pk = Formula::Root;
            else isPred = false;
            if (isPred && lx.tryPunct("(")) {
                TermP arg = parseTerm();
                lx.expectPunct(")");
                return mkPred(pk, arg);
            }
            if (id == "edge" && lx.tryPunct("(")) {
                // edge(x, y[, l][, m]) sugar
                TermP x = parseTerm();
                lx.expectPunct(",");
                TermP y = parseTerm();
                TermP l, m;
                if (lx.tryPunct(",")) {
                    TermP third = parseTerm();
                    if (third->kind == Term::MarkConst) m = third;
                    else l = third;
                    if (lx.tryPunct(",")) m = parseTerm();
                }
                lx.expectPunct(")");
                std::string ev = "_w" + std::to_string(freshEdge++);
                TermP z = mkVar(ev, Sort::Edge);
                std::vector<FormulaP> conj{mkCmp(Formula::Eq, mkUn(Term::Src, z), x),
                                           mkCmp(Formula::Eq, mkUn(Term::Tgt, z), y)};
                if (l) conj.push_back(mkCmp(Formula::Eq, mkUn(Term::LabE, z), l));
                if (m) conj.push_back(mkCmp(Formula::Eq, mkUn(Term::MarkE, z), m));
                return mkExists(Formula::ExistsE, ev, mkAnd(std::move(conj)));
            }
            lx.pos = save;  // fall through to a comparison
        }
        if (t.k == Tok::Punct && t.s == "(") {
            // Either a parenthesised formula or a comparison whose left term
            // starts with '('. Try the comparison first and backtrack.
            size_t save = lx.pos;
            try {
                return parseComparison();
            } catch (const std::exception&) {
                lx.pos = save;
            }
            lx.expectPunct("(");
            FormulaP f = parseFormula();
            lx.expectPunct(")");
            return f;
        }
        return parseComparison();
    }

    FormulaP parseComparison() {
        TermP a = parseTerm();
        Formula::Kind k;
        if (lx.tryPunct("=")) k = Formula::Eq;
        else if (lx.tryPunct("!=")) k = Formula::Ne;
        else if (lx.tryPunct("<=")) k = Formula::Le;
        else if (lx.tryPunct(">=")) k = Formula::Ge;
        else if (lx.tryPunct("<")) k = Formula::Lt;
        else if (lx.tryPunct(">")) k = Formula::Gt;
        else throw std::runtime_error("expected comparison operator near '" + lx.peek().s + "'");
        return mkCmp(k, a, parseTerm());
    }
};

// ---- sort resolution ------------------------------------------------------

struct Resolver {
    const std::map<std::string, VType>& types;

    TermP resolveT(const TermP& t, std::optional<Sort> expected,
                   const std::map<std::string, Sort>& bound) const {
        switch (t->kind) {
            case Term::Var: {
                auto it = bound.find(t->name);
                if (it != bound.end()) return mkVar(t->name, it->second, vtypeOf(t->name));
                if (expected == Sort::Node) return mkNodeC(t->name);
                if (expected == Sort::Edge) return mkEdgeC(t->name);
                return mkVar(t->name, Sort::List, vtypeOf(t->name));
            }
            case Term::ListConst:
                if (expected == Sort::Node && t->lv.size() == 1 && t->lv[0].isInt)
                    return mkNodeC(to_string(t->lv[0]));
                if (expected == Sort::Edge && t->lv.size() == 1 && t->lv[0].isInt)
                    return mkEdgeC(to_string(t->lv[0]));
                return t;
            case Term::MarkConst: case Term::NodeConst: case Term::EdgeConst:
                return t;
            case Term::Src: case Term::Tgt: case Term::LabE: case Term::MarkE:
                return mkUn(t->kind, resolveT(t->a, Sort::Edge, bound));
            case Term::LabV: case Term::MarkV: case Term::Indeg: case Term::Outdeg:
            case Term::Incon: case Term::Outcon:
                return mkUn(t->kind, resolveT(t->a, Sort::Node, bound));
            case Term::Length:
                return mkUn(t->kind, resolveT(t->a, Sort::List, bound));
            case Term::Neg:
                return mkUn(t->kind, resolveT(t->a, Sort::List, bound));
            default:
                return mkBin(t->kind, resolveT(t->a, Sort::List, bound),
                             resolveT(t->b, Sort::List, bound));
        }
    }

    VType vtypeOf(const std::string& name) const {
        auto it = types.find(name);
        return it == types.end() ? VType::List : it->second;
    }

    FormulaP resolveF(const FormulaP& f, std::map<std::string, Sort> bound) const {
        switch (f->kind) {
            case Formula::True: case Formula::False: return f;
            case Formula::Not: return mkNot(resolveF(f->kids[0], bound));
            case Formula::And: case Formula::Or: {
                std::vector<FormulaP> ks;
                for (auto& k : f->kids) ks.push_back(resolveF(k, bound));
                return f->kind == Formula::And ? mkAnd(std::move(ks)) : mkOr(std::move(ks));
            }
            case Formula::ExistsV: case Formula::ExistsE: case Formula::ExistsL: {
                bound[f->var] = f->kind == Formula::ExistsV ? Sort::Node
                              : f->kind == Formula::ExistsE ? Sort::Edge : Sort::List;
                return mkExists(f->kind, f->var, resolveF(f->kids[0], bound));
            }
            case Formula::Root:
                return mkPred(f->kind, resolveT(f->t1, Sort::Node, bound));
            case Formula::PInt: case Formula::PChar: case Formula::PStr: case Formula::PAtom:
                return mkPred(f->kind, resolveT(f->t1, Sort::List, bound));
            default: {  // comparisons: infer each side from the other
                TermP a = resolveT(f->t1, std::nullopt, bound);
                TermP b = resolveT(f->t2, std::nullopt, bound);
                if (a->sort() != b->sort()) {
                    if (a->sort() == Sort::Node || a->sort() == Sort::Edge ||
                        a->sort() == Sort::MarkS)
                        b = resolveT(f->t2, a->sort(), bound);
                    else if (b->sort() == Sort::Node || b->sort() == Sort::Edge ||
                             b->sort() == Sort::MarkS)
                        a = resolveT(f->t1, b->sort(), bound);
                }
                if (a->sort() != b->sort())
                    throw std::runtime_error("ill-sorted comparison: " +
                                             print(mkCmp(f->kind, a, b)));
                if (a->sort() != Sort::List && f->kind != Formula::Eq &&
                    f->kind != Formula::Ne)
                    throw std::runtime_error("ordering on non-list terms: " +
                                             print(mkCmp(f->kind, a, b)));
                return mkCmp(f->kind, a, b);
            }
        }
    }
};

}  // namespace

FormulaP parse_formula(const std::string& text, const std::map<std::string, VType>& types) {
    Lexer lx(text);
    Parser p{lx};
    FormulaP raw = p.parseFormula();
    if (lx.peek().k != Tok::End)
        throw std::runtime_error("trailing input after formula: '" + lx.peek().s + "'");
    Resolver r{types};
    return r.resolveF(raw, {});
}

// Parses a list expression for rule labels; identifiers become typed
// list-sorted variables.
std::vector<TermP> parse_label_expr(const std::string& text,
                                    const std::map<std::string, VType>& types) {
    Lexer lx(text);
    Parser p{lx};
    TermP raw = p.parseTerm();
    if (lx.peek().k != Tok::End)
        throw std::runtime_error("trailing input after label: '" + lx.peek().s + "'");
    Resolver r{types};
    TermP t = r.resolveT(raw, Sort::List, {});
    // split top-level ':' into components
    std::vector<TermP> parts;
    std::function<void(const TermP&)> flat = [&](const TermP& u) {
        if (u->kind == Term::Colon) {
            flat(u->a);
            flat(u->b);
        } else {
            parts.push_back(u);
        }
    };
    flat(t);
    if (parts.size() == 1 && parts[0]->kind == Term::ListConst && parts[0]->lv.empty())
        return {};  // "empty"
    return parts;
}

}  // namespace gpv
