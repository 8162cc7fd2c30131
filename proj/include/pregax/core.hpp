#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pregax {

using Action = std::string;
using Predicate = std::string;
using ActionSet = std::set<Action>;
using PredicateSet = std::set<Predicate>;

/// The reserved clock action used by the projection operation.
inline const Action kClockAction = "tick";

enum class SymbolKind {
    delta,     // deadlock constant
    witness,   // kappa_P
    prefix,    // a . x
    choice,    // x + y
    restrict,  // restrict_{B,Q}(x)
    project,   // x / h
    op,        // user or derived operation
};

/// A function symbol. Built-in tree constructors carry their parameter
/// (action, predicate, or restriction sets) inside the symbol.
struct Symbol {
    SymbolKind kind = SymbolKind::op;
    std::string name;
    std::size_t arity = 0;
    ActionSet forbidden_actions;
    PredicateSet forbidden_predicates;

    static Symbol delta();
    static Symbol witness(const Predicate &p);
    static Symbol prefix(const Action &a);
    static Symbol choice();
    static Symbol restrict(ActionSet actions, PredicateSet predicates);
    static Symbol project();
    static Symbol op(std::string name, std::size_t arity);

    bool is_builtin() const { return kind != SymbolKind::op; }
    std::string to_string() const;

    friend bool operator==(const Symbol &, const Symbol &) = default;
    friend std::strong_ordering operator<=>(const Symbol &a, const Symbol &b);
};

enum class Origin { user, ftp, derived_smooth, derived_distinctive, derived_cannot };

std::string to_string(Origin o);

struct OperationSym {
    std::string name;
    std::size_t arity = 0;
    Origin origin = Origin::user;

    friend bool operator==(const OperationSym &, const OperationSym &) = default;
};

class Term;
using Substitution = std::map<std::string, Term>;

/// Immutable process term; copies share structure.
class Term {
public:
    Term();  // delta

    static Term var(std::string name);
    static Term app(Symbol sym, std::vector<Term> args = {});

    static Term delta();
    static Term witness(const Predicate &p);
    static Term prefix(const Action &a, Term body);
    static Term choice(Term lhs, Term rhs);
    static Term restrict(ActionSet actions, PredicateSet predicates, Term body);
    static Term project(Term body, Term hourglass);
    static Term op(const std::string &name, std::vector<Term> args = {});
    /// Left-associated sum; delta when empty.
    static Term sum(const std::vector<Term> &summands);

    bool is_var() const;
    const std::string &var_name() const;
    const Symbol &symbol() const;
    const std::vector<Term> &args() const;
    const Term &arg(std::size_t i) const { return args().at(i); }
    SymbolKind kind() const { return symbol().kind; }
    bool is(SymbolKind k) const { return !is_var() && kind() == k; }

    bool closed() const;
    std::size_t hash() const;
    std::size_t size() const;
    /// 0 for variables and constants, 1 + max over arguments otherwise.
    std::size_t height() const;

    std::set<std::string> variables() const;
    bool contains_kind(SymbolKind k) const;

    std::string to_string() const;

    friend bool operator==(const Term &a, const Term &b);
    friend std::strong_ordering operator<=>(const Term &a, const Term &b);

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term &t) const { return t.hash(); }
};

/// The operations a term may use: user operations plus enabled built-ins.
struct Signature {
    ActionSet actions;
    PredicateSet predicates;
    std::map<std::string, std::size_t> operations;
    bool restriction = false;
    bool projection = false;

    bool contains(const Symbol &s) const;
};

bool well_formed(const Term &t, const Signature &sig);

Term apply_subst(const Term &t, const Substitution &s);

/// Composition applying `first` then `second`.
Substitution compose(const Substitution &second, const Substitution &first);

/// Replace the subterm at a 1-based argument path.
Term replace_at(const Term &t, const std::vector<std::size_t> &path, const Term &with);
const Term &subterm_at(const Term &t, const std::vector<std::size_t> &path);
std::string path_to_string(const std::vector<std::size_t> &path);

/// Summands of a (possibly nested) sum; delta contributes nothing.
std::vector<Term> summands(const Term &t);

/// hourglass(n) = tick^n . delta
Term hourglass(std::size_t n, const Action &clock = kClockAction);
std::optional<std::size_t> hourglass_depth(const Term &t, const Action &clock = kClockAction);

struct Equation {
    std::string label;
    Term lhs;
    Term rhs;
    std::string condition;  // empty when unconditional

    std::string to_string() const;
};

/// Alpha-equivalence of equations: a bijective renaming of variables maps one
/// onto the other.
bool alpha_equivalent(const Equation &a, const Equation &b);
bool alpha_equivalent(const Term &a, const Term &b);

class ParseError : public std::runtime_error {
public:
    ParseError(std::string code, std::size_t line, std::size_t column, const std::string &msg);
    const std::string &code() const { return code_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string code_;
    std::size_t line_;
    std::size_t column_;
};

/// Parses the concrete term syntax. Bare identifiers that are not declared
/// constants become variables when `allow_variables` is set.
Term parse_term(const std::string &text, const Signature &sig, bool allow_variables = false);

bool is_identifier(const std::string &s);
bool is_keyword(const std::string &s);

}  // namespace pregax

template <>
struct std::hash<pregax::Term> {
    std::size_t operator()(const pregax::Term &t) const { return t.hash(); }
};
