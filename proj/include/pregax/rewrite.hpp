#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pregax/axiomgen.hpp"
#include "pregax/bisim.hpp"

namespace pregax {

using Path = std::vector<std::size_t>;

struct ProofStep {
    enum class Kind {
        law,       // instance of `equation` at `path`
        reorder,   // summands rearranged modulo A1-A4
        saturate,  // t = t + kappa(P) for a predicate P that t satisfies
    };
    Kind kind = Kind::law;
    std::string label;
    Path path;
    Substitution subst;
    Term before;  // subterm at `path`
    Term after;
    Equation equation;
};

struct ProofTrace {
    std::vector<ProofStep> steps;

    /// `step k: <label> at <path>: <before> => <after>` per line.
    std::string to_text() const;
    /// Applies every step to `initial`; throws std::logic_error on a step
    /// that does not fit.
    Term replay(const Term &initial) const;
};

class RewriteError : public std::runtime_error {
public:
    enum class Kind { budget, nesting, stuck };
    RewriteError(Kind k, const std::string &msg, ProofTrace partial)
        : std::runtime_error(msg), kind(k), trace(std::move(partial)) {}
    Kind kind;
    ProofTrace trace;
};

struct RewriteBudget {
    std::size_t max_steps = 100000;
    /// Prefix nesting allowed while normalizing to a tree.
    std::size_t max_nesting = 500;
    /// Projection depths tried by prove_equal when normalization fails.
    std::size_t max_depth = 8;
};

class Rewriter {
public:
    Rewriter(const Axiomatization &ax, RewriteBudget budget = {});

    const PregSystem &system() const { return ax_.system; }
    Engine &engine() { return engine_; }

    Term head_normalize(const Term &t, ProofTrace *trace = nullptr);
    /// Unbounded when `depth` is empty; otherwise normalizes t / hourglass(depth).
    Term normalize_to_tree(const Term &t, std::optional<std::size_t> depth = {}, ProofTrace *trace = nullptr);
    Verdict prove_equal(const Term &t, const Term &u, ProofTrace *trace = nullptr);

private:
    struct Work;
    void hnf(Work &w, const Path &p);
    void restrict_head(Work &w, const Path &p);
    void project_head(Work &w, const Path &p);
    void shape(Work &w, const Path &p);
    void op_head(Work &w, const Path &p, bool args_ready = false);
    void merge_sum(Work &w, const Path &p);
    void saturate(Work &w, const Path &p);
    void deadlock(Work &w, const Path &p, const DeadlockSchema &d, std::vector<ArgShape> shapes);
    void apply(Work &w, const Path &p, const Equation &eq);
    void record(Work &w, ProofStep step);
    void normalize(Work &w, std::size_t nesting);
    std::optional<CanonicalTree> try_tree(const Term &t, std::optional<std::size_t> depth, ProofTrace *trace,
                                          std::string &why);

    const Equation &aip(const std::string &label) const;
    Equation schema(const std::string &label, const SchemaParams &p) const;

    const Axiomatization &ax_;
    RewriteBudget budget_;
    Engine engine_;
    std::map<std::string, Equation> aip_;
    std::map<std::string, const GeneratedLaw *> laws_;
    std::map<std::string, const TranslationEquation *> translation_;
    std::size_t steps_ = 0;
    std::size_t depth_ = 0;
    ProofTrace *trace_ = nullptr;
};

/// Syntactic matching of `pattern` against `t`, extending `sub`.
bool match(const Term &pattern, const Term &t, Substitution &sub);

Term head_normalize(const Term &t, const Axiomatization &ax, ProofTrace *trace = nullptr);
Term normalize_to_tree(const Term &t, const Axiomatization &ax, std::optional<std::size_t> depth = {},
                       ProofTrace *trace = nullptr);
Verdict prove_equal(const Term &t, const Term &u, const Axiomatization &ax, const RewriteBudget &budget = {},
                    ProofTrace *trace = nullptr);

}  // namespace pregax
