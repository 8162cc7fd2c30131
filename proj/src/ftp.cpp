#include "pregax/ftp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pregax {

namespace {

PregSystem base_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates) {
    PregSystem s;
    s.name = "ftp";
    s.actions = actions;
    for (const auto &p : predicates) s.predicates[p.name] = p;
    return s;
}

Term x() { return Term::var("x"); }
Term y() { return Term::var("y"); }
Term z() { return Term::var("z"); }

Equation eq(std::string label, Term lhs, Term rhs, std::string cond = "") {
    return Equation{std::move(label), std::move(lhs), std::move(rhs), std::move(cond)};
}

// Sum that drops delta summands.
Term plus(const Term &a, const Term &b) {
    if (a.is(SymbolKind::delta)) return b;
    if (b.is(SymbolKind::delta)) return a;
    return Term::choice(a, b);
}

// Predicates that survive a prefix a.b.(.) : implicit, with a and b both allowed.
PredicateSet not_propagated(const PregSystem &s, const Action &a, const Action &b) {
    PredicateSet out;
    for (const auto &[n, p] : s.predicates)
        if (!(p.implicit && p.allowed_actions.count(a) && p.allowed_actions.count(b))) out.insert(n);
    return out;
}

bool propagates(const PregSystem &s, const Predicate &p, const Action &a) {
    return s.is_implicit(p) && s.allowed_actions(p).count(a);
}

bool any_implicit_over(const PregSystem &s, const Action &a) {
    for (const auto &[n, p] : s.predicates)
        if (propagates(s, n, a)) return true;
    return false;
}

PredicateSet implicit_part(const PregSystem &s, const PredicateSet &q) {
    PredicateSet out;
    for (const auto &p : q)
        if (s.is_implicit(p)) out.insert(p);
    return out;
}

}  // namespace

PregSystem ftp_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates) {
    return base_system(actions, predicates);
}

PregSystem ftp_partial_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates) {
    PregSystem s = base_system(actions, predicates);
    s.name = "ftp_partial";
    s.restriction = true;
    return s;
}

PregSystem projection_system(const ActionSet &actions, const std::vector<PredicateSym> &predicates) {
    PregSystem s = ftp_partial_system(actions, predicates);
    s.name = "ftp_projection";
    s.actions.insert(kClockAction);
    s.projection = true;
    return s;
}

std::vector<PregRule> ftp_rules(const PregSystem &s) {
    std::vector<PregRule> out;
    auto add = [&](const Symbol &sym) {
        for (auto &r : s.rules_for(sym)) out.push_back(std::move(r));
    };
    add(Symbol::delta());
    for (const auto &[p, _] : s.predicates) add(Symbol::witness(p));
    for (const auto &a : s.actions) add(Symbol::prefix(a));
    add(Symbol::choice());
    return out;
}

// -- axioms -------------------------------------------------------------------

std::string AxiomSystem::to_text() const {
    std::ostringstream out;
    for (const auto &e : equations) out << e.to_string() << "\n";
    for (const auto &s : schemas) out << s.label << ": " << s.text << "\n";
    return out.str();
}

void AxiomSystem::append(const AxiomSystem &other) {
    equations.insert(equations.end(), other.equations.begin(), other.equations.end());
    schemas.insert(schemas.end(), other.schemas.begin(), other.schemas.end());
}

AxiomSystem ftp_axioms(const PregSystem &s) {
    AxiomSystem ax;
    ax.equations.push_back(eq("A1", Term::choice(x(), y()), Term::choice(y(), x())));
    ax.equations.push_back(
        eq("A2", Term::choice(Term::choice(x(), y()), z()), Term::choice(x(), Term::choice(y(), z()))));
    ax.equations.push_back(eq("A3", Term::choice(x(), x()), x()));
    ax.equations.push_back(eq("A4", Term::choice(x(), Term::delta()), x()));
    for (const auto &[n, p] : s.predicates) {
        if (!p.implicit) continue;
        for (const auto &a : p.allowed_actions) {
            Term lhs = Term::prefix(a, Term::choice(x(), Term::witness(n)));
            ax.equations.push_back(eq("A5(" + n + "," + a + ")", lhs, Term::choice(lhs, Term::witness(n))));
        }
    }
    return ax;
}

std::optional<Equation> a93_verbatim(const PregSystem &s, const SchemaParams &p) {
    if (!p.B.count(p.a)) return std::nullopt;
    return eq("A9.3", Term::restrict(p.B, p.Q, Term::prefix(p.a, Term::prefix(p.b, x()))),
              Term::restrict(s.actions, p.Q, x()), "a in B");
}

AxiomSystem ftp_partial_axioms(const PregSystem &s) {
    AxiomSystem ax = ftp_axioms(s);
    const PregSystem sys = s;
    auto add = [&](std::string label, std::string text,
                   std::function<std::optional<Equation>(const SchemaParams &)> f) {
        ax.schemas.push_back({std::move(label), std::move(text), std::move(f)});
    };
    add("A6", "restrict{B;Q}(delta) = delta",
        [](const SchemaParams &p) { return eq("A6", Term::restrict(p.B, p.Q, Term::delta()), Term::delta()); });
    add("A7", "restrict{B;Q}(kappa(P)) = delta if P in Q", [](const SchemaParams &p) -> std::optional<Equation> {
        if (!p.Q.count(p.P)) return std::nullopt;
        return eq("A7", Term::restrict(p.B, p.Q, Term::witness(p.P)), Term::delta(), "P in Q");
    });
    add("A8", "restrict{B;Q}(kappa(P)) = kappa(P) if P not in Q",
        [](const SchemaParams &p) -> std::optional<Equation> {
            if (p.Q.count(p.P)) return std::nullopt;
            return eq("A8", Term::restrict(p.B, p.Q, Term::witness(p.P)), Term::witness(p.P), "P not in Q");
        });
    add("A9.1", "restrict{B;Q}(a . delta) = delta if a in B",
        [](const SchemaParams &p) -> std::optional<Equation> {
            if (!p.B.count(p.a)) return std::nullopt;
            return eq("A9.1", Term::restrict(p.B, p.Q, Term::prefix(p.a, Term::delta())), Term::delta(), "a in B");
        });
    add("A9.2",
        "restrict{B;Q}(a . kappa(P)) = kappa(P) if a in B, P implicit, P not in Q, a in A_P; delta otherwise "
        "when a in B",
        [sys](const SchemaParams &p) -> std::optional<Equation> {
            if (!p.B.count(p.a)) return std::nullopt;
            bool keep = propagates(sys, p.P, p.a) && !p.Q.count(p.P);
            return eq("A9.2", Term::restrict(p.B, p.Q, Term::prefix(p.a, Term::witness(p.P))),
                      keep ? Term::witness(p.P) : Term::delta(), "a in B");
        });
    add("A9.3",
        "restrict{B;Q}(a . b . x) = restrict{A;Q'}(x) if a in B, where Q' adds to Q every predicate "
        "that is not implicit over both a and b",
        [sys](const SchemaParams &p) -> std::optional<Equation> {
            if (!p.B.count(p.a)) return std::nullopt;
            PredicateSet q = p.Q;
            for (const auto &n : not_propagated(sys, p.a, p.b)) q.insert(n);
            return eq("A9.3", Term::restrict(p.B, p.Q, Term::prefix(p.a, Term::prefix(p.b, x()))),
                      Term::restrict(sys.actions, q, x()), "a in B");
        });
    add("A9.4", "restrict{B;Q}(a . (x + y)) = restrict{B;Q}(a . x) + restrict{B;Q}(a . y) if a in B",
        [](const SchemaParams &p) -> std::optional<Equation> {
            if (!p.B.count(p.a)) return std::nullopt;
            return eq("A9.4", Term::restrict(p.B, p.Q, Term::prefix(p.a, Term::choice(x(), y()))),
                      Term::choice(Term::restrict(p.B, p.Q, Term::prefix(p.a, x())),
                                   Term::restrict(p.B, p.Q, Term::prefix(p.a, y()))),
                      "a in B");
        });
    add("A10", "restrict{B;Q}(a . x) = restrict{;Q}(a . x) if a not in B",
        [](const SchemaParams &p) -> std::optional<Equation> {
            if (p.B.count(p.a)) return std::nullopt;
            return eq("A10", Term::restrict(p.B, p.Q, Term::prefix(p.a, x())),
                      Term::restrict({}, p.Q, Term::prefix(p.a, x())), "a not in B");
        });
    add("A11", "restrict{;Q}(a . x) = a . restrict{;Q & implicit}(x)", [sys](const SchemaParams &p) {
        return eq("A11", Term::restrict({}, p.Q, Term::prefix(p.a, x())),
                  Term::prefix(p.a, Term::restrict({}, implicit_part(sys, p.Q), x())));
    });
    add("A12", "restrict{B;Q}(x + y) = restrict{B;Q}(x) + restrict{B;Q}(y)", [](const SchemaParams &p) {
        return eq("A12", Term::restrict(p.B, p.Q, Term::choice(x(), y())),
                  Term::choice(Term::restrict(p.B, p.Q, x()), Term::restrict(p.B, p.Q, y())));
    });
    return ax;
}

AxiomSystem aip_axioms(const PregSystem &s) {
    AxiomSystem ax;
    ax.equations.push_back(eq("A13", Term::project(Term::choice(x(), y()), z()),
                              Term::choice(Term::project(x(), z()), Term::project(y(), z()))));
    ax.equations.push_back(eq("A14", Term::project(x(), Term::choice(y(), z())),
                              Term::choice(Term::project(x(), y()), Term::project(x(), z()))));
    for (const auto &a : s.actions)
        ax.equations.push_back(eq("A15(" + a + ")", Term::project(Term::prefix(a, x()), Term::prefix(kClockAction, y())),
                                  Term::prefix(a, Term::project(x(), y()))));
    ax.equations.push_back(eq("A16", Term::project(Term::delta(), y()), Term::delta()));
    // Without a clock step the projection only keeps the predicates of a.x;
    // with no implicit predicate over a this is delta.
    for (const auto &a : s.actions) {
        Term ax_ = Term::prefix(a, x());
        Term stuck = any_implicit_over(s, a) ? Term::restrict(s.actions, {}, ax_) : Term::delta();
        ax.equations.push_back(eq("A17(" + a + ")", Term::project(ax_, Term::delta()), stuck));
        for (const auto &[p, _] : s.predicates)
            ax.equations.push_back(eq("A17(" + a + "," + p + ")", Term::project(ax_, Term::witness(p)), stuck));
        for (const auto &b : s.actions)
            if (b != kClockAction)
                ax.equations.push_back(
                    eq("A17(" + a + "," + b + ")", Term::project(ax_, Term::prefix(b, y())), stuck));
    }
    for (const auto &[p, _] : s.predicates)
        ax.equations.push_back(eq("A18(" + p + ")", Term::project(Term::witness(p), y()), Term::witness(p)));
    return ax;
}

// -- canonical trees --------------------------------------------------------------

bool operator==(const CanonicalTree &a, const CanonicalTree &b) {
    return a.witnesses == b.witnesses && a.actions == b.actions;
}

bool operator<(const CanonicalTree &a, const CanonicalTree &b) {
    if (a.actions != b.actions)
        return std::lexicographical_compare(a.actions.begin(), a.actions.end(), b.actions.begin(), b.actions.end(),
                                            [](const auto &l, const auto &r) {
                                                if (l.first != r.first) return l.first < r.first;
                                                return l.second < r.second;
                                            });
    return a.witnesses < b.witnesses;
}

Term CanonicalTree::to_term() const {
    std::vector<Term> parts;
    for (const auto &[a, c] : actions) parts.push_back(Term::prefix(a, c.to_term()));
    for (const auto &p : witnesses) parts.push_back(Term::witness(p));
    if (parts.empty()) return Term::delta();
    Term t = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) t = Term::choice(parts[i], t);
    return t;
}

bool is_ftp_term(const Term &t) {
    if (t.is_var()) return false;
    switch (t.kind()) {
    case SymbolKind::delta:
    case SymbolKind::witness: return true;
    case SymbolKind::prefix:
    case SymbolKind::choice:
        return std::all_of(t.args().begin(), t.args().end(), [](const Term &a) { return is_ftp_term(a); });
    default: return false;
    }
}

namespace {

void collect_prefixes(Engine &e, const Term &t, std::vector<std::pair<Action, CanonicalTree>> &out) {
    switch (t.kind()) {
    case SymbolKind::prefix: out.emplace_back(t.symbol().name, canonical_tree(e, t.arg(0))); break;
    case SymbolKind::choice:
        collect_prefixes(e, t.arg(0), out);
        collect_prefixes(e, t.arg(1), out);
        break;
    default: break;
    }
}

}  // namespace

CanonicalTree canonical_tree(Engine &e, const Term &t) {
    if (!is_ftp_term(t)) throw std::invalid_argument("canonical_tree: not a finite tree: " + t.to_string());
    CanonicalTree c;
    collect_prefixes(e, t, c.actions);
    std::sort(c.actions.begin(), c.actions.end(), [](const auto &l, const auto &r) {
        if (l.first != r.first) return l.first < r.first;
        return l.second < r.second;
    });
    c.actions.erase(std::unique(c.actions.begin(), c.actions.end()), c.actions.end());
    c.witnesses = e.predicates_of(t);
    return c;
}

bool trees_equal(Engine &e, const Term &t, const Term &u) { return canonical_tree(e, t) == canonical_tree(e, u); }

// -- elimination --------------------------------------------------------------

namespace {

class Eliminator {
public:
    Eliminator(const PregSystem &s, bool projections) : s_(s), projections_(projections) {}

    Term run(const Term &t) {
        if (t.is_var()) throw std::invalid_argument("elimination needs a closed term");
        switch (t.kind()) {
        case SymbolKind::delta:
        case SymbolKind::witness: return t;
        case SymbolKind::prefix: return Term::prefix(t.symbol().name, run(t.arg(0)));
        case SymbolKind::choice: return plus(run(t.arg(0)), run(t.arg(1)));
        case SymbolKind::restrict:
            return push(t.symbol().forbidden_actions, t.symbol().forbidden_predicates, run(t.arg(0)));
        case SymbolKind::project:
            if (!projections_) break;
            return project(run(t.arg(0)), run(t.arg(1)));
        case SymbolKind::op: break;
        }
        throw std::invalid_argument("cannot eliminate operators from " + t.to_string());
    }

private:
    // restrict{B;Q}(u) for a tree u
    Term push(const ActionSet &B, const PredicateSet &Q, const Term &u) {
        switch (u.kind()) {
        case SymbolKind::delta: return u;                                         // A6
        case SymbolKind::witness: return Q.count(u.symbol().name) ? Term::delta() : u;  // A7, A8
        case SymbolKind::choice: return plus(push(B, Q, u.arg(0)), push(B, Q, u.arg(1)));  // A12
        case SymbolKind::prefix: {
            const Action &a = u.symbol().name;
            if (!B.count(a)) return Term::prefix(a, push({}, implicit_part(s_, Q), u.arg(0)));  // A10, A11
            return blocked(a, Q, u.arg(0));
        }
        default: throw std::invalid_argument("not a tree: " + u.to_string());
        }
    }

    // restrict{B;Q}(a . u) with a in B
    Term blocked(const Action &a, const PredicateSet &Q, const Term &u) {
        switch (u.kind()) {
        case SymbolKind::delta: return Term::delta();  // A9.1
        case SymbolKind::witness: {                    // A9.2
            const Predicate &p = u.symbol().name;
            return propagates(s_, p, a) && !Q.count(p) ? u : Term::delta();
        }
        case SymbolKind::prefix: {  // A9.3
            PredicateSet q = Q;
            for (const auto &n : not_propagated(s_, a, u.symbol().name)) q.insert(n);
            return push(s_.actions, q, u.arg(0));
        }
        case SymbolKind::choice: return plus(blocked(a, Q, u.arg(0)), blocked(a, Q, u.arg(1)));  // A9.4
        default: throw std::invalid_argument("not a tree: " + u.to_string());
        }
    }

    // u / h for trees u and h
    Term project(const Term &u, const Term &h) {
        switch (u.kind()) {
        case SymbolKind::delta: return u;                                                    // A16
        case SymbolKind::witness: return u;                                                  // A18
        case SymbolKind::choice: return plus(project(u.arg(0), h), project(u.arg(1), h));  // A13
        case SymbolKind::prefix: {
            Term out = Term::delta();
            bool stuck = false;
            for (const Term &hs : summands(h)) {  // A14
                if (hs.is(SymbolKind::prefix) && hs.symbol().name == kClockAction)
                    out = plus(out, Term::prefix(u.symbol().name, project(u.arg(0), hs.arg(0))));  // A15
                else
                    stuck = true;
            }
            if (stuck || summands(h).empty()) out = plus(out, push(s_.actions, {}, u));  // A17
            return out;
        }
        default: throw std::invalid_argument("not a tree: " + u.to_string());
        }
    }

    const PregSystem &s_;
    bool projections_;
};

}  // namespace

Term eliminate_restriction(const Term &t, const PregSystem &s) { return Eliminator(s, false).run(t); }

Term eliminate_projection(const Term &t, const PregSystem &s) { return Eliminator(s, true).run(t); }

}  // namespace pregax
