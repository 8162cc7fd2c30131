// pregax command-line front end.
//
// Exit codes: 0 success or Equal, 1 NotEqual or validation errors,
// 2 Unknown or budget exhausted, 3 usage or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pregax/bisim.hpp"
#include "pregax/export.hpp"
#include "pregax/rewrite.hpp"
#include "pregax/selftest.hpp"
#include "pregax/transform.hpp"

using namespace pregax;

namespace {

constexpr int kOk = 0, kNo = 1, kUnknown = 2, kUsage = 3;
constexpr const char *kVersion = "pregax 0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Invalid : std::runtime_error {
    Invalid() : std::runtime_error("validation failed") {}
};

std::uint32_t seed_from_env() {
    const char *s = std::getenv("PREGAX_SEED");
    if (!s || !*s) return 1;
    try {
        return static_cast<std::uint32_t>(std::stoul(s));
    } catch (const std::exception &) {
        throw UsageError(std::string("PREGAX_SEED is not a number: ") + s);
    }
}

void write_out(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

int verdict_code(Outcome o) { return o == Outcome::equal ? kOk : o == Outcome::not_equal ? kNo : kUnknown; }

std::string verdict_text(const Verdict &v) {
    std::string s = to_string(v.outcome);
    if (v.depth) s += " (depth " + std::to_string(*v.depth) + ")";
    if (v.witness) s += ": " + *v.witness;
    return s + "\n";
}

// Loads and validates; validation errors end the command with exit 1.
PregSystem load_valid(const std::string &path) {
    PregSystem s = load_spec_file(path);
    ValidationReport r = validate_preg(s);
    if (!r.ok()) {
        std::cerr << r.to_text();
        throw Invalid();
    }
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Axiomatize preg specifications and decide bisimilarity of closed terms"};
    app.require_subcommand(1);
    bool banner = false;
    app.add_flag("--banner", banner, "Print the version banner on stderr");

    std::string spec, t1, t2, out;
    bool dot = false, json = false, trace = false, check_oracle = false;
    std::size_t max_states = 10000, samples = 100;
    std::optional<std::size_t> depth, enumerate;
    std::size_t equiv_depth = 8, steps = 100000;

    auto *validate = app.add_subcommand("validate", "Check a spec against the preg format");
    validate->add_option("spec", spec, "Spec file")->required();
    validate->add_flag("--json", json, "Structured report");

    auto *lts = app.add_subcommand("lts", "Reachable transition system of a closed term");
    lts->add_option("spec", spec)->required();
    lts->add_option("-t,--term", t1, "Closed term")->required();
    auto *dot_flag = lts->add_flag("--dot", dot, "Graphviz output");
    lts->add_flag("--json", json, "Structured output")->excludes(dot_flag);
    lts->add_option("--max-states", max_states);

    auto *axz = app.add_subcommand("axiomatize", "Generate the axiom system");
    axz->add_option("spec", spec)->required();
    axz->add_option("-o,--output", out, "Output file (default stdout)");
    axz->add_flag("--json", json, "Structured output");
    axz->add_option("--enumerate-deadlock", enumerate, "List deadlock instances with at most N shaped positions");

    auto *norm = app.add_subcommand("normalize", "Rewrite a closed term to a tree");
    norm->add_option("spec", spec)->required();
    norm->add_option("-t,--term", t1)->required();
    norm->add_option("--depth", depth, "Normalize the projection at this depth");
    norm->add_flag("--trace", trace, "Print the proof trace");
    norm->add_flag("--json", json, "Structured output");
    norm->add_option("--steps", steps, "Rewrite step cap");

    auto *equiv = app.add_subcommand("equiv", "Decide t = u with the generated axioms");
    equiv->add_option("spec", spec)->required();
    equiv->add_option("-t", t1)->required();
    equiv->add_option("-u", t2)->required();
    equiv->add_option("--depth", equiv_depth, "Largest projection depth tried");
    equiv->add_option("--steps", steps, "Rewrite step cap");
    equiv->add_flag("--check-oracle", check_oracle, "Compare with the operational oracle");
    equiv->add_flag("--trace", trace, "Print the proof trace");
    equiv->add_flag("--json", json, "Structured output");

    auto *oracle = app.add_subcommand("oracle", "Decide t ~ u on the transition systems");
    oracle->add_option("spec", spec)->required();
    oracle->add_option("-t", t1)->required();
    oracle->add_option("-u", t2)->required();
    oracle->add_option("--max-states", max_states);
    oracle->add_flag("--json", json, "Structured output");

    auto *pos = app.add_subcommand("positivize", "Replace negative premises by cannot predicates");
    pos->add_option("spec", spec)->required();
    pos->add_option("-o,--output", out)->required();

    auto *self = app.add_subcommand("selftest", "Sample closed instances of every generated equation");
    self->add_option("spec", spec)->required();
    self->add_option("--samples", samples, "Instances per equation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (banner) std::cerr << kVersion << "\n";

    try {
        if (*validate) {
            PregSystem s = load_spec_file(spec);
            ValidationReport r = validate_preg(s);
            if (json) std::cout << report_json(r).dump(2) << "\n";
            else std::cerr << r.to_text();
            if (!json) std::cout << (r.ok() ? "valid" : "invalid") << "\n";
            return r.ok() ? kOk : kNo;
        }
        if (*lts) {
            PregSystem s = load_valid(spec);
            Engine e(s);
            StepBudget b;
            b.max_states = max_states;
            LTS l = e.build_lts(parse_term(t1, s.signature()), b);
            if (dot) std::cout << lts_to_dot(l);
            else if (json) std::cout << lts_json(l).dump(2) << "\n";
            else {
                for (std::size_t i = 0; i < l.states.size(); ++i) {
                    std::cout << i << ": " << l.states[i].to_string();
                    for (const auto &p : l.preds[i]) std::cout << " [" << p << "]";
                    std::cout << "\n";
                    for (const auto &[a, j] : l.succ[i]) std::cout << "  -" << a << "-> " << j << "\n";
                }
            }
            if (!l.complete) {
                std::cerr << "state budget " << max_states << " exhausted\n";
                return kUnknown;
            }
            return kOk;
        }
        if (*axz) {
            Axiomatization ax = axiomatize(load_valid(spec));
            for (const auto &w : ax.axioms.warnings) std::cerr << to_string(w.severity) << ":" << w.location << ":" << w.message << "\n";
            write_out(out, json ? axioms_json(ax.axioms, enumerate).dump(2) + "\n" : ax.axioms.to_text(enumerate));
            return kOk;
        }
        if (*norm) {
            Axiomatization ax = axiomatize(load_valid(spec));
            RewriteBudget b;
            b.max_steps = steps;
            Rewriter rw(ax, b);
            ProofTrace tr;
            Term t = parse_term(t1, ax.system.signature());
            try {
                Term n = rw.normalize_to_tree(t, depth, &tr);
                if (json) {
                    Json j = {{"term", t.to_string()}, {"tree", n.to_string()}};
                    if (trace) j["trace"] = trace_json(tr);
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << n.to_string() << "\n";
                    if (trace) std::cout << tr.to_text();
                }
                return kOk;
            } catch (const RewriteError &e) {
                std::cerr << e.what() << "\n";
                if (trace) std::cerr << e.trace.to_text();
                return kUnknown;
            }
        }
        if (*equiv) {
            Axiomatization ax = axiomatize(load_valid(spec));
            RewriteBudget b;
            b.max_depth = equiv_depth;
            b.max_steps = steps;
            Rewriter rw(ax, b);
            Term t = parse_term(t1, ax.system.signature()), u = parse_term(t2, ax.system.signature());
            ProofTrace tr;
            Verdict v = rw.prove_equal(t, u, trace ? &tr : nullptr);
            if (json) {
                Json j = verdict_json(v);
                if (trace) j["trace"] = trace_json(tr);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << verdict_text(v);
                if (trace) std::cout << tr.to_text();
            }
            for (const auto &note : v.trace) std::cerr << note << "\n";
            if (check_oracle) {
                Verdict o = bisimilar(rw.engine(), t, u);
                if (o.outcome == Outcome::unknown) {
                    std::cerr << "oracle: state budget exhausted, no comparison made\n";
                } else if (v.outcome != Outcome::unknown && v.outcome != o.outcome) {
                    std::cerr << "discrepancy: prover says " << to_string(v.outcome) << ", oracle says "
                              << verdict_text(o);
                    return kNo;
                } else {
                    std::cerr << "oracle: " << verdict_text(o);
                }
            }
            return verdict_code(v.outcome);
        }
        if (*oracle) {
            PregSystem s = load_valid(spec);
            Engine e(s);
            StepBudget b;
            b.max_states = max_states;
            Verdict v = bisimilar(e, parse_term(t1, s.signature()), parse_term(t2, s.signature()), b);
            std::cout << (json ? verdict_json(v).dump(2) + "\n" : verdict_text(v));
            return verdict_code(v.outcome);
        }
        if (*pos) {
            write_out(out, print_spec(positivize(load_valid(spec))));
            return kOk;
        }
        if (*self) {
            Axiomatization ax = axiomatize(load_valid(spec));
            SelftestResult r = selftest(ax, samples, seed_from_env());
            std::cout << "equations: " << r.equations << "\ninstances: " << r.instances
                      << "\nfailures: " << r.failures << "\nundecided: " << r.undecided << "\n";
            for (const auto &f : r.failing) std::cerr << "counterexample " << f << "\n";
            return r.failures ? kNo : r.undecided ? kUnknown : kOk;
        }
    } catch (const ParseError &e) {
        std::cerr << "parse error (" << e.code() << ") " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError &e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const Invalid &e) {
        std::cerr << e.what() << "\n";
        return kNo;
    } catch (const AxiomgenError &e) {
        std::cerr << e.what() << "\n";
        return kNo;
    } catch (const std::exception &e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
