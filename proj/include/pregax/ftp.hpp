#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pregax/semantics.hpp"

namespace pregax {

PregSystem ftp_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates);
/// ftp_system plus the restriction operators.
PregSystem ftp_partial_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates);
/// ftp_partial_system plus the projection operator; adds the clock action.
PregSystem projection_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates);

/// Every rule generated for the FTP constructors over `s` (delta, witnesses,
/// prefixes, choice).
std::vector<PregRule> ftp_rules(const PregSystem &s);

/// Parameters for instantiating a side-conditioned axiom schema.
struct SchemaParams {
    ActionSet B;
    PredicateSet Q;
    Action a;
    Action b;
    Predicate P;
};

struct AxiomSchema {
    std::string label;
    std::string text;  // `lhs = rhs if condition` in pseudo-notation
    /// nullopt when the side condition fails for these parameters.
    std::function<std::optional<Equation>(const SchemaParams &)> instantiate;
};

struct AxiomSystem {
    std::vector<Equation> equations;
    std::vector<AxiomSchema> schemas;

    std::string to_text() const;
    void append(const AxiomSystem &other);
};

/// A1-A4 plus one A5 instance per implicit P and a in A_P.
AxiomSystem ftp_axioms(const PregSystem &s);
/// ftp_axioms plus A6-A8, A10-A12 and the finite A9 family.
AxiomSystem ftp_partial_axioms(const PregSystem &s);
/// Laws for the projection operator.
AxiomSystem aip_axioms(const PregSystem &s);

/// The A9.3 instance exactly as printed in the source table; it is not sound
/// when x can satisfy an explicit predicate outside Q. Kept for tests.
std::optional<Equation> a93_verbatim(const PregSystem &s, const SchemaParams &p);

/// Saturated head normal form of a finite tree.
struct CanonicalTree {
    std::vector<std::pair<Action, CanonicalTree>> actions;  // sorted, no duplicates
    PredicateSet witnesses;

    Term to_term() const;
    std::string to_string() const { return to_term().to_string(); }

    friend bool operator==(const CanonicalTree &a, const CanonicalTree &b);
    friend bool operator<(const CanonicalTree &a, const CanonicalTree &b);
};

/// Requires a term built from delta, witnesses, prefixes and choice only.
CanonicalTree canonical_tree(Engine &e, const Term &t);
bool trees_equal(Engine &e, const Term &t, const Term &u);

bool is_ftp_term(const Term &t);

/// Removes every restriction from a closed term over FTP plus restriction.
Term eliminate_restriction(const Term &t, const PregSystem &s);
/// Removes every projection (and restriction) from a closed term whose
/// projection arguments are FTP terms.
Term eliminate_projection(const Term &t, const PregSystem &s);

}  // namespace pregax
