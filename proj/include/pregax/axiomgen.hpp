#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pregax/ftp.hpp"
#include "pregax/transform.hpp"

namespace pregax {

class AxiomgenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument shape of a deadlock law: delta, a bare variable, kappa(P),
/// a.z, a.z + z' or kappa(P) + z.
struct ArgShape {
    enum class Kind { var, delta, witness, prefix, prefix_plus, witness_plus };
    Kind kind = Kind::var;
    std::string name;  // action or predicate

    std::string to_string() const;
    friend auto operator<=>(const ArgShape &, const ArgShape &) = default;
};

/// Premise structure of one smooth rule, by position.
struct RuleTests {
    std::string label;
    std::map<std::size_t, Action> actions;        // I+
    std::map<std::size_t, Predicate> predicates;  // J+
    std::map<std::size_t, ActionSet> neg_actions;
    std::map<std::size_t, PredicateSet> neg_predicates;
};

struct DeadlockSchema {
    std::string op;
    std::size_t arity = 0;
    std::set<std::size_t> positive;
    std::vector<RuleTests> rules;
    ActionSet actions;
    PredicateSet predicates;
    /// A_P for the implicit predicates.
    std::map<Predicate, ActionSet> implicit;

    /// Whether `shape` at position `pos` (1-based) blocks rule `k`.
    bool blocks(std::size_t k, std::size_t pos, const ArgShape &shape) const;
    bool applicable(const std::vector<ArgShape> &shapes) const;
    Equation instantiate(const std::vector<ArgShape> &shapes) const;
    /// `deadlock(f): ...` with the side condition in pseudo-notation.
    std::string text() const;
};

struct GeneratedLaw {
    enum class Family { distributivity, action, predicate };
    Family family = Family::distributivity;
    std::string op;
    Equation equation;
    std::size_t position = 0;  // distributivity only
    std::string rule;          // label of the producing rule, trigger laws only
    std::size_t line = 0;      // source line of that rule, 0 if derived
};

std::string to_string(GeneratedLaw::Family f);

struct GeneratedAxioms {
    AxiomSystem base;  // FTP with restriction
    std::vector<GeneratedLaw> laws;
    std::vector<DeadlockSchema> deadlock;
    std::vector<TranslationEquation> translation;
    AxiomSystem aip;
    std::vector<Diagnostic> warnings;
    bool soundness_conditional = false;

    const DeadlockSchema *schema_for(const std::string &op) const;
    /// Generated per-operation laws in export order; deadlock instances are
    /// included when `enumerate_bound` is set.
    std::vector<Equation> operation_equations(std::optional<std::size_t> enumerate_bound = {}) const;
    std::string to_text(std::optional<std::size_t> enumerate_bound = {}) const;
};

/// Replaces restrict{;}(x) by x everywhere.
Term drop_empty_restrictions(const Term &t);

std::vector<Equation> distributivity_laws(const PregSystem &s, const std::string &op);
Equation trigger_law(const PregSystem &s, const PregRule &r);
DeadlockSchema deadlock_schema(const PregSystem &s, const std::string &op);
/// Minimal applicable shape tuples with at most `bound` non-variable positions.
std::vector<Equation> enumerate_deadlock(const DeadlockSchema &schema, std::size_t bound);

struct Axiomatization {
    PregSystem system;
    GeneratedAxioms axioms;
};

/// Extends `s` with restriction and projection, realizes every user operation
/// by smooth and distinctive ones and generates their laws.
Axiomatization axiomatize(const PregSystem &s);

}  // namespace pregax
