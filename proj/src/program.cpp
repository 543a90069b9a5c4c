#include "gpv/program.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gpv {

namespace {

CmdP mkCmd(Command::Kind k) {
    auto c = std::make_shared<Command>();
    c->kind = k;
    return c;
}

CmdP mkSkip() { return mkCmd(Command::Skip); }

}  // namespace

std::string print(const CmdP& cmd) {
    auto atom = [](const CmdP& c) {
        return c->kind == Command::RuleSet || c->kind == Command::Skip ||
               c->kind == Command::Break || c->kind == Command::FailCmd ||
               c->kind == Command::Loop;
    };
    switch (cmd->kind) {
        case Command::RuleSet: {
            if (!cmd->braced && cmd->ruleNames.size() == 1) return cmd->ruleNames[0];
            std::string out = "{";
            for (size_t i = 0; i < cmd->ruleNames.size(); ++i)
                out += (i ? ", " : "") + cmd->ruleNames[i];
            return out + "}";
        }
        case Command::Seq:
            return print(cmd->a) + "; " + print(cmd->b);
        case Command::If:
            return "if " + print(cmd->a) + " then " + print(cmd->b) + " else " + print(cmd->c);
        case Command::Try:
            return "try " + print(cmd->a) + " then " + print(cmd->b) + " else " + print(cmd->c);
        case Command::Loop:
            return (atom(cmd->a) ? print(cmd->a) : "(" + print(cmd->a) + ")") + "!";
        case Command::OrCmd:
            return "(" + print(cmd->a) + " or " + print(cmd->b) + ")";
        case Command::Break: return "break";
        case Command::Skip: return "skip";
        case Command::FailCmd: return "fail";
    }
    return "?";
}

// ---- parsing --------------------------------------------------------------

namespace {

struct CmdParser {
    const std::string& s;
    size_t i = 0;
    const Program& ctx;

    void skipWs() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eof() {
        skipWs();
        return i >= s.size();
    }
    bool tryPunct(char c) {
        skipWs();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    std::string peekWord() {
        skipWs();
        size_t j = i;
        while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
        return s.substr(i, j - i);
    }
    bool tryWord(const std::string& w) {
        if (peekWord() == w) {
            i += w.size();
            return true;
        }
        return false;
    }
    std::string expectWord() {
        std::string w = peekWord();
        if (w.empty())
            throw std::runtime_error("expected identifier in command at offset " +
                                     std::to_string(i));
        i += w.size();
        return w;
    }

    CmdP resolveName(const std::string& name) {
        auto pit = ctx.procedures.find(name);
        if (pit != ctx.procedures.end()) return pit->second;
        auto rit = ctx.rules.find(name);
        if (rit != ctx.rules.end()) {
            auto c = std::make_shared<Command>();
            c->kind = Command::RuleSet;
            c->rules = {rit->second};
            c->ruleNames = {name};
            c->braced = false;
            return c;
        }
        throw std::runtime_error("unknown rule or procedure: " + name);
    }

    CmdP parseSeq() {
        CmdP a = parseOr();
        while (tryPunct(';')) {
            auto c = std::make_shared<Command>();
            c->kind = Command::Seq;
            c->a = a;
            c->b = parseOr();
            a = c;
        }
        return a;
    }

    CmdP parseOr() {
        CmdP a = parsePostfix();
        while (tryWord("or")) {
            auto c = std::make_shared<Command>();
            c->kind = Command::OrCmd;
            c->a = a;
            c->b = parsePostfix();
            a = c;
        }
        return a;
    }

    CmdP parsePostfix() {
        CmdP a = parsePrimary();
        while (tryPunct('!')) {
            auto c = std::make_shared<Command>();
            c->kind = Command::Loop;
            c->a = a;
            a = c;
        }
        return a;
    }

    CmdP parsePrimary() {
        if (tryWord("if") || (peekWord() == "try" && true)) {
            bool isTry = false;
            if (peekWord() == "try") {
                tryWord("try");
                isTry = true;
            }
            // "if" was already consumed unless this is a try
            auto c = std::make_shared<Command>();
            c->kind = isTry ? Command::Try : Command::If;
            c->a = parseSeq();
            if (tryWord("then")) c->b = parseSeq();
            else c->b = mkSkip();
            if (tryWord("else")) c->c = parseSeq();
            else c->c = mkSkip();
            return c;
        }
        if (tryWord("break")) return mkCmd(Command::Break);
        if (tryWord("skip")) return mkCmd(Command::Skip);
        if (tryWord("fail")) return mkCmd(Command::FailCmd);
        if (tryPunct('(')) {
            CmdP c = parseSeq();
            if (!tryPunct(')')) throw std::runtime_error("missing ')' in command");
            return c;
        }
        if (tryPunct('{')) {
            auto c = std::make_shared<Command>();
            c->kind = Command::RuleSet;
            c->braced = true;
            if (!tryPunct('}')) {
                do {
                    std::string name = expectWord();
                    auto rit = ctx.rules.find(name);
                    if (rit == ctx.rules.end())
                        throw std::runtime_error("unknown rule in set: " + name);
                    c->rules.push_back(rit->second);
                    c->ruleNames.push_back(name);
                } while (tryPunct(','));
                if (!tryPunct('}')) throw std::runtime_error("missing '}' in rule set");
            }
            return c;
        }
        return resolveName(expectWord());
    }
};

}  // namespace

CmdP parse_command(const std::string& text, const Program& ctx) {
    CmdParser p{text, 0, ctx};
    CmdP c = p.parseSeq();
    if (!p.eof())
        throw std::runtime_error("trailing input in command: '" + text.substr(p.i) + "'");
    return c;
}

Program parse_program(const std::string& text) {
    Program prog;
    size_t i = 0;
    auto skipWsAndComments = [&] {
        while (i < text.size()) {
            if (std::isspace((unsigned char)text[i])) {
                ++i;
            } else if (text.compare(i, 2, "//") == 0) {
                while (i < text.size() && text[i] != '\n') ++i;
            } else {
                break;
            }
        }
    };
    while (true) {
        skipWsAndComments();
        if (i >= text.size()) break;
        size_t j = i;
        while (j < text.size() && (std::isalnum((unsigned char)text[j]) || text[j] == '_')) ++j;
        if (j == i) throw std::runtime_error("expected declaration at offset " + std::to_string(i));
        std::string name = text.substr(i, j - i);
        size_t k = j;
        while (k < text.size() && std::isspace((unsigned char)text[k])) ++k;
        if (k < text.size() && text[k] == '(') {
            // rule declaration: runs through the interface clause; a
            // where-clause extends to the end of its line
            size_t end = text.find('}', text.find("interface", k));
            if (end == std::string::npos)
                throw std::runtime_error("rule " + name + " is missing its interface clause");
            ++end;
            size_t w = end;
            while (w < text.size() && std::isspace((unsigned char)text[w])) ++w;
            if (text.compare(w, 5, "where") == 0 &&
                (w + 5 >= text.size() || (!std::isalnum((unsigned char)text[w + 5]) &&
                                          text[w + 5] != '_'))) {
                end = text.find('\n', w);
                if (end == std::string::npos) end = text.size();
            }
            RuleSchema r = parse_rule(text.substr(i, end - i));
            if (prog.rules.count(r.name)) throw std::runtime_error("duplicate rule " + r.name);
            prog.rules[r.name] = std::move(r);
            i = end;
        } else if (k < text.size() && text[k] == '=' &&
                   (k + 1 >= text.size() || text[k + 1] != '>')) {
            // procedure declaration: command runs to end of line
            size_t end = text.find('\n', k);
            if (end == std::string::npos) end = text.size();
            std::string body = text.substr(k + 1, end - k - 1);
            if (prog.procedures.count(name) || prog.rules.count(name))
                throw std::runtime_error("duplicate declaration of " + name);
            // declare-before-use makes recursion impossible
            CmdP cmd = parse_command(body, prog);
            if (name == "Main") prog.main = cmd;
            prog.procedures[name] = cmd;
            i = end;
        } else {
            throw std::runtime_error("malformed declaration near '" + name + "'");
        }
    }
    return prog;
}

// ---- classification ---------------------------------------------------------

bool is_loop_free(const CmdP& c) {
    switch (c->kind) {
        case Command::Loop: return false;
        case Command::Seq: case Command::OrCmd:
            return is_loop_free(c->a) && is_loop_free(c->b);
        case Command::If: case Command::Try:
            return is_loop_free(c->a) && is_loop_free(c->b) && is_loop_free(c->c);
        default: return true;
    }
}

bool is_non_failing(const CmdP& c) {
    switch (c->kind) {
        case Command::Break: case Command::Skip: case Command::Loop: return true;
        case Command::FailCmd: return false;
        case Command::RuleSet: {
            if (c->rules.empty()) return false;
            for (const auto& r : c->rules)
                if (!r.L.nodes.empty() || !r.L.edges.empty() || r.gamma->kind != Formula::True)
                    return false;
            return true;
        }
        case Command::Seq: case Command::OrCmd:
            return is_non_failing(c->a) && is_non_failing(c->b);
        case Command::If: case Command::Try:
            return is_non_failing(c->b) && is_non_failing(c->c);
    }
    return false;
}

bool is_iteration(const CmdP& c) {
    if (is_loop_free(c) || is_non_failing(c)) return true;
    if (c->kind == Command::Seq) return is_loop_free(c->a) && is_iteration(c->b);
    return false;
}

bool is_control(const CmdP& c) {
    switch (c->kind) {
        case Command::Loop: return is_iteration(c->a) && is_control(c->a);
        case Command::Seq: case Command::OrCmd:
            return is_control(c->a) && is_control(c->b);
        case Command::If: case Command::Try:
            return is_loop_free(c->a) && is_control(c->a) && is_control(c->b) &&
                   is_control(c->c);
        default: return true;
    }
}

bool contains_break(const CmdP& c) {
    if (c->kind == Command::Break) return true;
    for (const CmdP* k : {&c->a, &c->b, &c->c})
        if (*k && contains_break(*k)) return true;
    return false;
}

bool contains_or(const CmdP& c) {
    if (c->kind == Command::OrCmd) return true;
    for (const CmdP* k : {&c->a, &c->b, &c->c})
        if (*k && contains_or(*k)) return true;
    return false;
}

// ---- interpreter ------------------------------------------------------------

namespace {

struct Out {
    std::map<std::string, HostGraph> res;  // canonical key -> graph
    std::map<std::string, HostGraph> brk;  // pending breaks
    bool fail = false;
    bool cut = false;

    void addRes(const HostGraph& g) { res.emplace(g.canonicalKey(), g); }
    void addBrk(const HostGraph& g) { brk.emplace(g.canonicalKey(), g); }
};

struct Interp {
    long long fuel;

    bool spend(long long n = 1) {
        fuel -= n;
        return fuel >= 0;
    }

    Out exec(const CmdP& cmd, const HostGraph& G) {
        Out out;
        if (!spend()) {
            out.cut = true;
            return out;
        }
        switch (cmd->kind) {
            case Command::Skip:
                out.addRes(G);
                return out;
            case Command::Break:
                out.addBrk(G);
                return out;
            case Command::FailCmd:
                out.fail = true;
                return out;
            case Command::RuleSet: {
                bool any = false;
                for (const auto& r : cmd->rules) {
                    for (auto& d : apply_rule(r, G)) {
                        if (!spend()) {
                            out.cut = true;
                            return out;
                        }
                        out.addRes(d.H);
                        any = true;
                    }
                }
                if (!any) out.fail = true;
                return out;
            }
            case Command::Seq: {
                Out A = exec(cmd->a, G);
                out.fail = A.fail;
                out.cut = A.cut;
                out.brk = A.brk;  // a pending break skips the tail
                for (auto& [k, H] : A.res) {
                    Out B = exec(cmd->b, H);
                    out.fail |= B.fail;
                    out.cut |= B.cut;
                    for (auto& [k2, H2] : B.res) out.res.emplace(k2, H2);
                    for (auto& [k2, H2] : B.brk) out.brk.emplace(k2, H2);
                }
                return out;
            }
            case Command::OrCmd: {
                Out A = exec(cmd->a, G), B = exec(cmd->b, G);
                out.fail = A.fail || B.fail;
                out.cut = A.cut || B.cut;
                out.res = A.res;
                out.brk = A.brk;
                for (auto& [k, H] : B.res) out.res.emplace(k, H);
                for (auto& [k, H] : B.brk) out.brk.emplace(k, H);
                return out;
            }
            case Command::If: case Command::Try: {
                Out C = exec(cmd->a, G);
                out.cut = C.cut;
                std::map<std::string, HostGraph> succ = C.res;
                for (auto& [k, H] : C.brk) succ.emplace(k, H);  // break acts as skip
                if (!succ.empty()) {
                    if (cmd->kind == Command::If) {
                        Out P = exec(cmd->b, G);
                        out.fail |= P.fail;
                        out.cut |= P.cut;
                        for (auto& [k, H] : P.res) out.res.emplace(k, H);
                        for (auto& [k, H] : P.brk) out.brk.emplace(k, H);
                    } else {
                        for (auto& [k, H] : succ) {
                            Out P = exec(cmd->b, H);
                            out.fail |= P.fail;
                            out.cut |= P.cut;
                            for (auto& [k2, H2] : P.res) out.res.emplace(k2, H2);
                            for (auto& [k2, H2] : P.brk) out.brk.emplace(k2, H2);
                        }
                    }
                }
                if (C.fail) {
                    Out Q = exec(cmd->c, G);
                    out.fail |= Q.fail;
                    out.cut |= Q.cut;
                    for (auto& [k, H] : Q.res) out.res.emplace(k, H);
                    for (auto& [k, H] : Q.brk) out.brk.emplace(k, H);
                }
                return out;
            }
            case Command::Loop: {
                std::set<std::string> visited{G.canonicalKey()};
                std::vector<HostGraph> stack{G};
                while (!stack.empty()) {
                    if (!spend()) {
                        out.cut = true;
                        break;
                    }
                    HostGraph H = stack.back();
                    stack.pop_back();
                    Out B = exec(cmd->a, H);
                    out.cut |= B.cut;
                    for (auto& [k, Hb] : B.brk) out.res.emplace(k, Hb);
                    if (B.fail) out.addRes(H);
                    for (auto& [k, H2] : B.res)
                        if (visited.insert(k).second) stack.push_back(H2);
                }
                return out;  // loops never fail
            }
        }
        return out;
    }
};

}  // namespace

ExecOutcome interpret(const CmdP& cmd, const HostGraph& G, long long fuel) {
    Interp in{fuel};
    Out out = in.exec(cmd, G);
    ExecOutcome eo;
    for (auto& [k, H] : out.brk) eo.breaks.push_back(H);
    for (auto& [k, H] : out.brk) out.res.emplace(k, H);  // top-level break = skip
    for (auto& [k, H] : out.res) eo.results.push_back(H);
    eo.canFail = out.fail;
    eo.fuelExhausted = out.cut;
    return eo;
}

// ---- formula constructors ----------------------------------------------------

FormulaP slp_loopfree(const FormulaP& c, const CmdP& P) {
    switch (P->kind) {
        case Command::RuleSet: {
            std::vector<FormulaP> disj;
            for (const auto& r : P->rules) disj.push_back(slp_rule(c, r));
            return simplify(mkOr(std::move(disj)));
        }
        case Command::Seq:
            return slp_loopfree(slp_loopfree(c, P->a), P->b);
        case Command::If:
            return simplify(
                mkOr2(slp_loopfree(mkAnd2(c, success_loopfree(P->a)), P->b),
                      slp_loopfree(mkAnd2(c, fail_loopfree(P->a)), P->c)));
        case Command::Try: {
            auto seqCP = std::make_shared<Command>();
            seqCP->kind = Command::Seq;
            seqCP->a = P->a;
            seqCP->b = P->b;
            return simplify(
                mkOr2(slp_loopfree(mkAnd2(c, success_loopfree(P->a)), seqCP),
                      slp_loopfree(mkAnd2(c, fail_loopfree(P->a)), P->c)));
        }
        case Command::OrCmd:
            return simplify(mkOr2(slp_loopfree(c, P->a), slp_loopfree(c, P->b)));
        case Command::Skip: case Command::Break:
            return c;
        case Command::FailCmd:
            return mkFalse();
        case Command::Loop:
            throw std::runtime_error("slp: program is not loop-free");
    }
    throw std::runtime_error("slp: unsupported command");
}

FormulaP pre_loopfree(const CmdP& P, const FormulaP& d) {
    switch (P->kind) {
        case Command::RuleSet: {
            std::vector<FormulaP> disj;
            for (const auto& r : P->rules)
                for (const auto& v : expand_bidirectional(r))
                    disj.push_back(post(d, invert(generalise(v))));
            return simplify(mkOr(std::move(disj)));
        }
        case Command::Seq:
            return pre_loopfree(P->a, pre_loopfree(P->b, d));
        case Command::If:
            return simplify(
                mkOr2(mkAnd2(success_loopfree(P->a), pre_loopfree(P->b, d)),
                      mkAnd2(fail_loopfree(P->a), pre_loopfree(P->c, d))));
        case Command::Try:
            return simplify(
                mkOr2(pre_loopfree(P->a, pre_loopfree(P->b, d)),
                      mkAnd2(fail_loopfree(P->a), pre_loopfree(P->c, d))));
        case Command::OrCmd:
            return simplify(mkOr2(pre_loopfree(P->a, d), pre_loopfree(P->b, d)));
        case Command::Skip: case Command::Break:
            return d;
        case Command::FailCmd:
            return mkFalse();
        case Command::Loop:
            throw std::runtime_error("pre: program is not loop-free");
    }
    throw std::runtime_error("pre: unsupported command");
}

FormulaP success_loopfree(const CmdP& P) {
    switch (P->kind) {
        case Command::RuleSet: {
            std::vector<FormulaP> disj;
            for (const auto& r : P->rules) disj.push_back(app_rule(r));
            return simplify(mkOr(std::move(disj)));
        }
        case Command::Seq:
            return simplify(pre_loopfree(P->a, success_loopfree(P->b)));
        case Command::If:
            return simplify(
                mkOr2(mkAnd2(success_loopfree(P->a), success_loopfree(P->b)),
                      mkAnd2(fail_loopfree(P->a), success_loopfree(P->c))));
        case Command::Try:
            return simplify(
                mkOr2(pre_loopfree(P->a, success_loopfree(P->b)),
                      mkAnd2(fail_loopfree(P->a), success_loopfree(P->c))));
        case Command::OrCmd:
            return simplify(mkOr2(success_loopfree(P->a), success_loopfree(P->b)));
        case Command::Skip: case Command::Break:
            return mkTrue();
        case Command::FailCmd:
            return mkFalse();
        case Command::Loop:
            throw std::runtime_error("success: program is not loop-free");
    }
    throw std::runtime_error("success: unsupported command");
}

FormulaP fail_loopfree(const CmdP& P) {
    switch (P->kind) {
        case Command::RuleSet: {
            if (P->rules.empty()) return mkTrue();  // the empty set always fails
            std::vector<FormulaP> disj;
            for (const auto& r : P->rules) disj.push_back(app_rule(r));
            return simplify(mkNot(mkOr(std::move(disj))));
        }
        case Command::Seq:
            return simplify(
                mkOr2(fail_loopfree(P->a), pre_loopfree(P->a, fail_loopfree(P->b))));
        case Command::If:
            return simplify(
                mkOr2(mkAnd2(success_loopfree(P->a), fail_loopfree(P->b)),
                      mkAnd2(fail_loopfree(P->a), fail_loopfree(P->c))));
        case Command::Try:
            return simplify(
                mkOr2(pre_loopfree(P->a, fail_loopfree(P->b)),
                      mkAnd2(fail_loopfree(P->a), fail_loopfree(P->c))));
        case Command::OrCmd:
            return simplify(mkOr2(fail_loopfree(P->a), fail_loopfree(P->b)));
        case Command::Skip: case Command::Break:
            return mkFalse();
        case Command::FailCmd:
            return mkTrue();
        case Command::Loop:
            throw std::runtime_error("fail: program is not loop-free");
    }
    throw std::runtime_error("fail: unsupported command");
}

FormulaP fail_iteration(const CmdP& P) {
    if (is_non_failing(P)) return mkFalse();
    if (is_loop_free(P)) return fail_loopfree(P);
    if (P->kind == Command::Seq && is_loop_free(P->a))
        return simplify(
            mkOr2(fail_loopfree(P->a), pre_loopfree(P->a, fail_iteration(P->b))));
    throw std::runtime_error("fail: program is not an iteration command");
}

}  // namespace gpv
