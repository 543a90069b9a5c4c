// Command-line frontend: constructs postconditions/preconditions and
// applicability/success/failure formulas for graph programs, runs the
// collecting interpreter, builds proof trees, and cross-checks formulas
// against exhaustive enumeration of small host graphs.
//
// Exit codes: 0 success (prove: fully proved; validate: no violations),
// 1 unproved obligation or violation found, 2 parse/input error,
// 3 command classification error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gpv/calculus.hpp"
#include "gpv/oracle.hpp"
#include "gpv/program.hpp"
#include "gpv/transforms.hpp"

using namespace gpv;

namespace {

struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FormulaP readFormula(const std::string& path) { return parse_formula(slurp(path)); }

ListValue parseLabelValue(const std::string& s) {
    if (s == "empty") return {};
    ListValue lv;
    size_t i = 0;
    while (i < s.size()) {
        size_t j = s.find(':', i);
        std::string part = s.substr(i, j == std::string::npos ? j : j - i);
        if (!part.empty() && (std::isdigit((unsigned char)part[0]) ||
                              (part[0] == '-' && part.size() > 1)))
            lv.push_back(Atom::ofInt(std::stoll(part)));
        else
            lv.push_back(Atom::ofStr(part));
        if (j == std::string::npos) break;
        i = j + 1;
    }
    return lv;
}

std::vector<std::string> splitComma(const std::string& s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i <= s.size()) {
        size_t j = s.find(',', i);
        out.push_back(s.substr(i, j == std::string::npos ? j : j - i));
        if (j == std::string::npos) break;
        i = j + 1;
    }
    return out;
}

struct UniverseFlags {
    int maxNodes = 3, maxEdges = 3;
    std::string labels = "empty";
    std::string nodeMarks = "none";
    std::string edgeMarks = "none";
    bool noRoots = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-nodes", maxNodes, "maximum nodes per enumerated graph");
        cmd->add_option("--max-edges", maxEdges, "maximum edges per enumerated graph");
        cmd->add_option("--labels", labels, "comma-separated label alphabet (empty,0,1,...)");
        cmd->add_option("--node-marks", nodeMarks, "comma-separated node marks");
        cmd->add_option("--edge-marks", edgeMarks, "comma-separated edge marks");
        cmd->add_flag("--no-roots", noRoots, "do not enumerate rooted nodes");
    }

    GraphUniverse build() const {
        GraphUniverse u;
        u.maxNodes = maxNodes;
        u.maxEdges = maxEdges;
        for (const auto& l : splitComma(labels)) u.labels.push_back(parseLabelValue(l));
        u.nodeMarks.clear();
        for (const auto& m : splitComma(nodeMarks)) {
            auto mk = mark_from_string(m);
            if (!mk) throw std::runtime_error("unknown mark: " + m);
            u.nodeMarks.push_back(*mk);
        }
        u.edgeMarks.clear();
        for (const auto& m : splitComma(edgeMarks)) {
            auto mk = mark_from_string(m);
            if (!mk) throw std::runtime_error("unknown mark: " + m);
            u.edgeMarks.push_back(*mk);
        }
        u.roots = !noRoots;
        return u;
    }
};

void printFormula(const FormulaP& f, bool json, const PipelineTrace* tr) {
    if (json) {
        nlohmann::json out;
        out["formula"] = print(f);
        if (tr) {
            out["trace"] = nlohmann::json::array();
            for (const auto& [name, g] : tr->stages)
                out["trace"].push_back({{"stage", name}, {"formula", print(g)}});
        }
        std::cout << out.dump(2) << "\n";
        return;
    }
    if (tr)
        for (const auto& [name, g] : tr->stages)
            std::cout << name << ": " << print(g) << "\n";
    std::cout << print(f) << "\n";
}

std::string verdictStr(const Verdict& v) {
    switch (v.kind) {
        case Verdict::Proved: return "Proved";
        case Verdict::CounterexampleFound: return "CounterexampleFound";
        default: return "UnknownUpToBound";
    }
}

void printTree(const ProofTree& t, int depth) {
    std::string pad(2 * depth, ' ');
    std::cout << pad << "[" << t.rule << "] {" << print(t.pre) << "} " << print(t.prog)
              << " {" << print(t.post) << "}\n";
    for (const auto& ob : t.obligations) {
        std::cout << pad << "  |- " << ob.kind << ": " << print(ob.a);
        if (ob.kind == "implies") std::cout << " => " << print(ob.b);
        std::cout << "  [" << verdictStr(ob.verdict);
        if (!ob.verdict.note.empty()) std::cout << ": " << ob.verdict.note;
        std::cout << "]\n";
        if (ob.verdict.witness)
            std::cout << pad << "     counterexample: " << ob.verdict.witness->print() << "\n";
    }
    for (const auto& p : t.premises) printTree(p, depth + 1);
}

CmdP mainCommand(const Program& prog) {
    if (!prog.main) throw std::runtime_error("program has no Main");
    return prog.main;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for rule-based graph programs"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "machine-readable output");

    std::string ruleFile, programFile, preFile, postFile, graphFile;
    std::string invList, midList;
    bool trace = false;
    long long fuel = 100000;

    auto addRule = [&](CLI::App* c) { c->add_option("--rule", ruleFile)->required(); };
    auto addProgram = [&](CLI::App* c) { c->add_option("--program", programFile)->required(); };

    auto* cSlp = app.add_subcommand("slp", "strongest postcondition of a rule");
    addRule(cSlp);
    cSlp->add_option("--pre", preFile)->required();
    cSlp->add_flag("--trace", trace);

    auto* cWlp = app.add_subcommand("wlp", "weakest precondition of a rule");
    addRule(cWlp);
    cWlp->add_option("--post", postFile)->required();
    cWlp->add_flag("--trace", trace);

    auto* cApp = app.add_subcommand("app", "applicability condition of a rule");
    addRule(cApp);
    cApp->add_flag("--trace", trace);

    auto* cSuc = app.add_subcommand("success", "success condition of a loop-free program");
    addProgram(cSuc);

    auto* cFail = app.add_subcommand("fail", "failure condition of an iteration program");
    addProgram(cFail);

    auto* cPre = app.add_subcommand("pre", "precondition of a loop-free program");
    addProgram(cPre);
    cPre->add_option("--post", postFile)->required();

    auto* cRun = app.add_subcommand("run", "run the collecting interpreter");
    addProgram(cRun);
    cRun->add_option("--graph", graphFile)->required();
    cRun->add_option("--fuel", fuel);

    UniverseFlags uf;
    auto* cProve = app.add_subcommand("prove", "build and check a proof tree");
    addProgram(cProve);
    cProve->add_option("--pre", preFile)->required();
    cProve->add_option("--post", postFile)->required();
    cProve->add_option("--inv", invList, "comma-separated invariant files, one per loop in pre-order; the last is reused if loops remain");
    cProve->add_option("--mid", midList, "comma-separated midpoint files for sequences needing hints");
    cProve->add_option("--fuel", fuel);
    uf.attach(cProve);

    auto* cVal = app.add_subcommand("validate", "cross-check formulas against enumeration");
    cVal->add_option("--rule", ruleFile);
    cVal->add_option("--program", programFile);
    cVal->add_option("--pre", preFile);
    cVal->add_option("--post", postFile);
    cVal->add_option("--fuel", fuel);
    uf.attach(cVal);

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineTrace tr;
        PipelineTrace* trp = trace ? &tr : nullptr;

        if (cSlp->parsed()) {
            RuleSchema r = parse_rule(slurp(ruleFile));
            printFormula(slp_rule(readFormula(preFile), r, trp), json, trp);
        } else if (cWlp->parsed()) {
            RuleSchema r = parse_rule(slurp(ruleFile));
            printFormula(wlp_rule(r, readFormula(postFile), trp), json, trp);
        } else if (cApp->parsed()) {
            RuleSchema r = parse_rule(slurp(ruleFile));
            printFormula(app_rule(r, trp), json, trp);
        } else if (cSuc->parsed()) {
            CmdP P = mainCommand(parse_program(slurp(programFile)));
            if (!is_loop_free(P))
                throw ClassificationError("success requires a loop-free program");
            printFormula(success_loopfree(P), json, nullptr);
        } else if (cFail->parsed()) {
            CmdP P = mainCommand(parse_program(slurp(programFile)));
            if (!is_iteration(P))
                throw ClassificationError("fail requires an iteration command");
            printFormula(fail_iteration(P), json, nullptr);
        } else if (cPre->parsed()) {
            CmdP P = mainCommand(parse_program(slurp(programFile)));
            if (!is_loop_free(P))
                throw ClassificationError("pre requires a loop-free program");
            printFormula(pre_loopfree(P, readFormula(postFile)), json, nullptr);
        } else if (cRun->parsed()) {
            CmdP P = mainCommand(parse_program(slurp(programFile)));
            HostGraph G = parse_host_graph(slurp(graphFile));
            ExecOutcome eo = interpret(P, G, fuel);
            if (json) {
                nlohmann::json out;
                out["results"] = nlohmann::json::array();
                for (const auto& H : eo.results) out["results"].push_back(H.print());
                out["canFail"] = eo.canFail;
                out["fuelExhausted"] = eo.fuelExhausted;
                std::cout << out.dump(2) << "\n";
            } else {
                for (const auto& H : eo.results) std::cout << H.print() << "\n";
                if (eo.canFail) std::cout << "(some execution fails)\n";
                if (eo.fuelExhausted) std::cout << "(fuel exhausted; results may be incomplete)\n";
            }
        } else if (cProve->parsed()) {
            CmdP P = mainCommand(parse_program(slurp(programFile)));
            if (contains_or(P))
                throw ClassificationError("the proof calculus has no rule for 'or'");
            if (!is_control(P))
                throw ClassificationError("prove requires a control command");
            ProofHints hints;
            if (!invList.empty())
                for (const auto& p : splitComma(invList)) hints.invariants.push_back(readFormula(p));
            if (!midList.empty())
                for (const auto& p : splitComma(midList)) hints.midpoints.push_back(readFormula(p));
            ProofTree t = prove(readFormula(preFile), P, readFormula(postFile), hints,
                                uf.build(), fuel);
            if (json) std::cout << t.toJson() << "\n";
            else printTree(t, 0);
            bool ok = t.fullyProved();
            if (!json) std::cout << (ok ? "fully proved\n" : "NOT fully proved\n");
            return ok ? 0 : 1;
        } else if (cVal->parsed()) {
            GraphUniverse u = uf.build();
            int violations = 0;
            if (!ruleFile.empty()) {
                RuleSchema r = parse_rule(slurp(ruleFile));
                if (!preFile.empty()) {
                    auto v = validate_slp(readFormula(preFile), r, u);
                    violations += (int)v.size();
                    for (auto& x : v)
                        std::cout << "slp violation (" << (x.soundness ? "soundness" : "strength")
                                  << ") on " << x.G.print() << "\n";
                }
                auto va = validate_app(r, u);
                violations += (int)va.size();
                for (auto& x : va) std::cout << "app mismatch on " << x.G.print() << "\n";
            }
            if (!programFile.empty()) {
                CmdP P = mainCommand(parse_program(slurp(programFile)));
                auto vs = validate_success_fail(P, u, fuel);
                violations += (int)vs.size();
                for (auto& x : vs)
                    std::cout << x.what << " mismatch on " << x.G.print() << " (formula="
                              << x.formulaSays << ", interpreter=" << x.interpreterSays << ")\n";
                if (!postFile.empty() && is_loop_free(P)) {
                    auto vp = validate_pre(P, readFormula(postFile), u, fuel);
                    violations += (int)vp.size();
                    for (auto& x : vp) std::cout << "pre mismatch on " << x.G.print() << "\n";
                }
            }
            std::cout << (violations ? "violations found\n" : "no violations\n");
            return violations ? 1 : 0;
        }
        return 0;
    } catch (const ClassificationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
