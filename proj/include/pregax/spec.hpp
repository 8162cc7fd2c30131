#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pregax/core.hpp"

namespace pregax {

struct PredicateSym {
    Predicate name;
    bool implicit = false;
    ActionSet allowed_actions;  // only for implicit predicates

    friend bool operator==(const PredicateSym &, const PredicateSym &) = default;
};

struct TransPremise {
    std::size_t pos = 0;  // 1-based
    Action action;
    std::string target;

    friend auto operator<=>(const TransPremise &, const TransPremise &) = default;
};

struct PredPremise {
    std::size_t pos = 0;
    Predicate pred;

    friend auto operator<=>(const PredPremise &, const PredPremise &) = default;
};

/// One deduction rule. Premises are kept sorted so that structural equality
/// is independent of the order they were written in.
struct PregRule {
    Symbol principal;
    std::vector<std::string> sources;  // x_1 .. x_l
    std::vector<TransPremise> pos_trans;
    std::vector<PredPremise> pos_pred;
    std::map<std::size_t, ActionSet> neg_trans;
    std::map<std::size_t, PredicateSet> neg_pred;

    bool is_transition = true;
    Action action;           // transition rules
    Term target;             // transition rules
    Predicate predicate;     // predicate rules

    std::string label;
    std::size_t line = 0;

    std::size_t arity() const { return sources.size(); }
    /// Sorts premises and drops empty negative entries.
    void normalize();
    /// Variable at 1-based position.
    const std::string &source(std::size_t pos) const { return sources.at(pos - 1); }

    bool tests_positively(std::size_t pos) const;
    bool tests_negatively(std::size_t pos) const;
    std::vector<TransPremise> trans_at(std::size_t pos) const;
    std::vector<PredPremise> preds_at(std::size_t pos) const;
    const ActionSet &neg_trans_at(std::size_t pos) const;
    const PredicateSet &neg_pred_at(std::size_t pos) const;
    std::size_t premise_count() const;

    /// Concrete syntax of the rule body (without the `rule f :` prefix).
    std::string to_string() const;

    /// Content equality; labels and source lines are ignored.
    friend bool operator==(const PregRule &a, const PregRule &b);
};

struct TranslationEquation {
    enum class Kind { smoothening, distinctify };
    Equation equation;
    Kind kind = Kind::smoothening;
    std::string original;
    std::vector<std::string> derived;
};

std::string to_string(TranslationEquation::Kind k);

struct OpAnnotation {
    bool smooth = false;
    bool distinctive = false;
    friend bool operator==(const OpAnnotation &, const OpAnnotation &) = default;
};

/// Signature plus rule set. The FTP constructors are always present; their
/// rules are generated on demand by rules_for.
class PregSystem {
public:
    std::string name = "unnamed";
    ActionSet actions;
    std::map<Predicate, PredicateSym> predicates;
    std::map<std::string, OperationSym> ops;
    std::map<std::string, OpAnnotation> annotations;
    std::vector<PregRule> rules;  // rules for ops only
    std::vector<TranslationEquation> translation_equations;
    bool restriction = false;
    bool projection = false;

    Signature signature() const;
    PredicateSet predicate_names() const;
    PredicateSet implicit_predicates() const;
    bool is_implicit(const Predicate &p) const;
    /// A_P for implicit P, empty otherwise.
    const ActionSet &allowed_actions(const Predicate &p) const;

    /// All rules whose principal is `s`, including generated built-in rules.
    std::vector<PregRule> rules_for(const Symbol &s) const;
    std::vector<const PregRule *> op_rules(const std::string &op) const;

    void add_op(const std::string &name, std::size_t arity, Origin origin = Origin::user);
    void add_rule(PregRule r);
    /// Sorts rules canonically and assigns labels `<op>#k`.
    void canonicalize();

    friend bool operator==(const PregSystem &a, const PregSystem &b);
};

// -- parsing and printing --------------------------------------------------

using IncludeResolver = std::function<PregSystem(const std::string &path)>;

PregSystem parse_spec(const std::string &text, const IncludeResolver &resolve = {});
/// Reads a file; `extends` paths are resolved relative to its directory.
PregSystem load_spec_file(const std::string &path);
std::string print_spec(const PregSystem &s);

/// Parses a single rule against an existing signature (used by tests and
/// transformations that build rules textually).
PregRule parse_rule(const std::string &text, const PregSystem &s);

// -- validation -------------------------------------------------------------

struct Diagnostic {
    enum class Severity { error, warning, info };
    Severity severity = Severity::error;
    std::string code;
    std::string location;
    std::string message;
};

std::string to_string(Diagnostic::Severity s);

struct ValidationReport {
    std::vector<Diagnostic> items;

    bool ok() const;
    std::size_t error_count() const;
    std::vector<std::string> error_codes() const;
    /// `severity:location:message` lines.
    std::string to_text() const;
};

ValidationReport validate_preg(const PregSystem &s);

struct Classification {
    bool ok = true;
    std::vector<std::string> reasons;
};

Classification classify_smooth(const PregRule &r);
Classification classify_distinctive(const std::string &op, const std::vector<const PregRule *> &rules);
Classification classify_distinctive(const PregSystem &s, const std::string &op);

/// Positions tested positively by some rule of the operation.
std::set<std::size_t> positive_positions(const std::vector<const PregRule *> &rules);

class ExtensionClash : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

PregSystem disjoint_extend(const PregSystem &g, const PregSystem &g2);

std::vector<Diagnostic> check_implicit_consistency(const PregSystem &s);

}  // namespace pregax
