#include "pregax/axiomgen.hpp"

#include <algorithm>
#include <sstream>

namespace pregax {

namespace {

Term xvar(std::size_t i) { return Term::var("x" + std::to_string(i)); }

std::string join(const std::vector<std::string> &parts, const std::string &sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

template <class Set>
std::string braces(const Set &s) {
    return "{" + join(std::vector<std::string>(s.begin(), s.end()), ", ") + "}";
}

void require_smooth_distinctive(const PregSystem &s, const std::string &op) {
    if (!s.ops.count(op)) throw AxiomgenError("unknown operation '" + op + "'");
    if (!smooth_and_distinctive(s, op)) throw AxiomgenError("operation '" + op + "' is not smooth and distinctive");
}

}  // namespace

std::string ArgShape::to_string() const {
    switch (kind) {
    case Kind::var: return "x";
    case Kind::delta: return "delta";
    case Kind::witness: return "kappa(" + name + ")";
    case Kind::prefix: return name + " . z";
    case Kind::prefix_plus: return name + " . z + w";
    case Kind::witness_plus: return "kappa(" + name + ") + z";
    }
    return "?";
}

std::string to_string(GeneratedLaw::Family f) {
    switch (f) {
    case GeneratedLaw::Family::distributivity: return "distributivity";
    case GeneratedLaw::Family::action: return "action";
    case GeneratedLaw::Family::predicate: return "predicate";
    }
    return "?";
}

Term drop_empty_restrictions(const Term &t) {
    if (t.is_var()) return t;
    if (t.is(SymbolKind::restrict) && t.symbol().forbidden_actions.empty() && t.symbol().forbidden_predicates.empty())
        return drop_empty_restrictions(t.arg(0));
    if (t.args().empty()) return t;
    std::vector<Term> args;
    for (const auto &a : t.args()) args.push_back(drop_empty_restrictions(a));
    return Term::app(t.symbol(), std::move(args));
}

// -- deadlock schema ------------------------------------------------------------

bool DeadlockSchema::blocks(std::size_t k, std::size_t pos, const ArgShape &shape) const {
    using K = ArgShape::Kind;
    const RuleTests &r = rules.at(k);
    if (auto it = r.actions.find(pos); it != r.actions.end()) {
        return shape.kind == K::delta || shape.kind == K::witness ||
               (shape.kind == K::prefix && shape.name != it->second);
    }
    if (auto it = r.predicates.find(pos); it != r.predicates.end()) {
        if (shape.kind == K::delta) return true;
        if (shape.kind == K::witness) return shape.name != it->second;
        if (shape.kind == K::prefix) {
            // b.z may still satisfy an implicit P_j through z
            auto imp = implicit.find(it->second);
            return imp == implicit.end() || !imp->second.count(shape.name);
        }
        return false;
    }
    if (auto it = r.neg_actions.find(pos); it != r.neg_actions.end())
        if ((shape.kind == K::prefix || shape.kind == K::prefix_plus) && it->second.count(shape.name)) return true;
    if (auto it = r.neg_predicates.find(pos); it != r.neg_predicates.end())
        if ((shape.kind == K::witness || shape.kind == K::witness_plus) && it->second.count(shape.name)) return true;
    return false;
}

bool DeadlockSchema::applicable(const std::vector<ArgShape> &shapes) const {
    if (shapes.size() != arity) return false;
    for (std::size_t k = 0; k < rules.size(); ++k) {
        bool blocked = false;
        for (std::size_t j = 1; j <= arity && !blocked; ++j) blocked = blocks(k, j, shapes[j - 1]);
        if (!blocked) return false;
    }
    return true;
}

Equation DeadlockSchema::instantiate(const std::vector<ArgShape> &shapes) const {
    using K = ArgShape::Kind;
    std::vector<Term> args;
    for (std::size_t j = 1; j <= arity; ++j) {
        const ArgShape &sh = shapes.at(j - 1);
        Term z = Term::var("z" + std::to_string(j)), w = Term::var("w" + std::to_string(j));
        switch (sh.kind) {
        case K::var: args.push_back(xvar(j)); break;
        case K::delta: args.push_back(Term::delta()); break;
        case K::witness: args.push_back(Term::witness(sh.name)); break;
        case K::prefix: args.push_back(Term::prefix(sh.name, z)); break;
        case K::prefix_plus: args.push_back(Term::choice(Term::prefix(sh.name, z), w)); break;
        case K::witness_plus: args.push_back(Term::choice(Term::witness(sh.name), z)); break;
        }
    }
    return Equation{"deadlock(" + op + ")", Term::op(op, std::move(args)), Term::delta(), ""};
}

std::string DeadlockSchema::text() const {
    std::vector<std::string> xs;
    for (std::size_t j = 1; j <= arity; ++j) xs.push_back("X" + std::to_string(j));
    std::vector<std::string> per_rule;
    for (const auto &r : rules) {
        std::vector<std::string> alts;
        for (const auto &[j, a] : r.actions)
            alts.push_back("X" + std::to_string(j) + " in {delta, b . z (b != " + a + "), kappa(Q)}");
        for (const auto &[j, p] : r.predicates) {
            std::string pre = "b . z";
            if (auto imp = implicit.find(p); imp != implicit.end()) pre += " (b not in " + braces(imp->second) + ")";
            alts.push_back("X" + std::to_string(j) + " in {delta, kappa(Q) (Q != " + p + "), " + pre + "}");
        }
        for (const auto &[j, b] : r.neg_actions)
            alts.push_back("X" + std::to_string(j) + " = b . z + w (b in " + braces(b) + ")");
        for (const auto &[j, q] : r.neg_predicates)
            alts.push_back("X" + std::to_string(j) + " = kappa(Q) + z (Q in " + braces(q) + ")");
        per_rule.push_back(r.label + ": " + (alts.empty() ? "never" : join(alts, " or ")));
    }
    return op + "(" + join(xs, ", ") + ") = delta if every rule is blocked [" + join(per_rule, "; ") + "]";
}

DeadlockSchema deadlock_schema(const PregSystem &s, const std::string &op) {
    require_smooth_distinctive(s, op);
    DeadlockSchema d;
    d.op = op;
    d.arity = s.ops.at(op).arity;
    auto rules = s.op_rules(op);
    d.positive = positive_positions(rules);
    d.actions = s.actions;
    d.predicates = s.predicate_names();
    for (const auto &[n, p] : s.predicates)
        if (p.implicit) d.implicit[n] = p.allowed_actions;
    for (const auto *r : rules) {
        RuleTests t;
        t.label = r->label;
        for (const auto &p : r->pos_trans) t.actions[p.pos] = p.action;
        for (const auto &p : r->pos_pred) t.predicates[p.pos] = p.pred;
        t.neg_actions = r->neg_trans;
        t.neg_predicates = r->neg_pred;
        d.rules.push_back(std::move(t));
    }
    return d;
}

std::vector<Equation> enumerate_deadlock(const DeadlockSchema &d, std::size_t bound) {
    using K = ArgShape::Kind;
    // candidate non-variable shapes per position
    std::vector<std::vector<ArgShape>> cand(d.arity + 1);
    for (std::size_t j = 1; j <= d.arity; ++j) {
        if (d.positive.count(j)) {
            cand[j].push_back({K::delta, ""});
            for (const auto &p : d.predicates) cand[j].push_back({K::witness, p});
            for (const auto &a : d.actions) cand[j].push_back({K::prefix, a});
            continue;
        }
        ActionSet bs;
        PredicateSet qs;
        for (const auto &r : d.rules) {
            if (auto it = r.neg_actions.find(j); it != r.neg_actions.end()) bs.insert(it->second.begin(), it->second.end());
            if (auto it = r.neg_predicates.find(j); it != r.neg_predicates.end())
                qs.insert(it->second.begin(), it->second.end());
        }
        for (const auto &b : bs) cand[j].push_back({K::prefix_plus, b});
        for (const auto &q : qs) cand[j].push_back({K::witness_plus, q});
    }
    std::vector<std::size_t> open;
    for (std::size_t j = 1; j <= d.arity; ++j)
        if (!cand[j].empty()) open.push_back(j);

    std::vector<std::vector<ArgShape>> emitted;
    auto subsumed = [&](const std::vector<ArgShape> &t) {
        for (const auto &e : emitted) {
            bool all = true;
            for (std::size_t j = 0; j < t.size() && all; ++j) all = e[j].kind == K::var || e[j] == t[j];
            if (all) return true;
        }
        return false;
    };
    std::vector<Equation> out;
    for (std::size_t k = 0; k <= std::min(bound, open.size()); ++k) {
        // position subsets of size k in lexicographic order
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<std::size_t> idx(k, 0);
            while (true) {
                std::vector<ArgShape> shapes(d.arity);
                for (std::size_t i = 0; i < k; ++i) shapes[open[pick[i]] - 1] = cand[open[pick[i]]][idx[i]];
                if (!subsumed(shapes) && d.applicable(shapes)) {
                    emitted.push_back(shapes);
                    out.push_back(d.instantiate(shapes));
                }
                std::size_t i = 0;
                while (i < k && ++idx[i] == cand[open[pick[i]]].size()) idx[i++] = 0;
                if (i == k) break;
            }
            // next subset
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == open.size() - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t m = i; m < k; ++m) pick[m] = pick[m - 1] + 1;
        }
    }
    return out;
}

// -- distributivity and trigger laws ----------------------------------------------

std::vector<Equation> distributivity_laws(const PregSystem &s, const std::string &op) {
    require_smooth_distinctive(s, op);
    const std::size_t l = s.ops.at(op).arity;
    std::vector<Equation> out;
    for (std::size_t i : positive_positions(s.op_rules(op))) {
        std::vector<Term> both, left, right;
        for (std::size_t j = 1; j <= l; ++j) {
            if (j != i) {
                both.push_back(xvar(j));
                left.push_back(xvar(j));
                right.push_back(xvar(j));
                continue;
            }
            Term a = Term::var("x" + std::to_string(j) + "_1"), b = Term::var("x" + std::to_string(j) + "_2");
            both.push_back(Term::choice(a, b));
            left.push_back(a);
            right.push_back(b);
        }
        out.push_back({"distr(" + op + "," + std::to_string(i) + ")", Term::op(op, both),
                       Term::choice(Term::op(op, left), Term::op(op, right)), ""});
    }
    return out;
}

Equation trigger_law(const PregSystem &s, const PregRule &r) {
    if (r.principal.kind != SymbolKind::op) throw AxiomgenError("trigger laws are generated for operations only");
    if (!classify_smooth(r).ok) throw AxiomgenError("rule " + r.label + " is not smooth");
    (void)s;
    std::vector<Term> xs;
    Substitution negative;
    for (std::size_t i = 1; i <= r.arity(); ++i) {
        auto ts = r.trans_at(i);
        auto ps = r.preds_at(i);
        if (!ts.empty()) {
            xs.push_back(Term::prefix(ts[0].action, Term::var(ts[0].target)));
        } else if (!ps.empty()) {
            xs.push_back(Term::witness(ps[0].pred));
        } else {
            Term x = Term::restrict(r.neg_trans_at(i), r.neg_pred_at(i), Term::var(r.source(i)));
            negative[r.source(i)] = x;
            xs.push_back(x);
        }
    }
    Term lhs = Term::op(r.principal.name, xs);
    std::string kind = r.is_transition ? "action(" : "pred(";
    std::string label = kind + r.label + ")";
    if (r.is_transition) return {label, lhs, Term::prefix(r.action, apply_subst(r.target, negative)), ""};
    return {label, lhs, Term::witness(r.predicate), ""};
}

// -- assembly -------------------------------------------------------------------

const DeadlockSchema *GeneratedAxioms::schema_for(const std::string &op) const {
    for (const auto &d : deadlock)
        if (d.op == op) return &d;
    return nullptr;
}

std::vector<Equation> GeneratedAxioms::operation_equations(std::optional<std::size_t> bound) const {
    std::set<std::string> ops;
    for (const auto &l : laws) ops.insert(l.op);
    for (const auto &d : deadlock) ops.insert(d.op);
    std::vector<Equation> out;
    for (const auto &op : ops) {
        for (auto fam : {GeneratedLaw::Family::distributivity, GeneratedLaw::Family::action,
                         GeneratedLaw::Family::predicate})
            for (const auto &l : laws)
                if (l.op == op && l.family == fam) out.push_back(l.equation);
        if (bound)
            if (const auto *d = schema_for(op))
                for (auto &e : enumerate_deadlock(*d, *bound)) out.push_back(std::move(e));
    }
    return out;
}

std::string GeneratedAxioms::to_text(std::optional<std::size_t> bound) const {
    std::ostringstream out;
    if (soundness_conditional) {
        out << "# soundness conditional: implicit predicates are not consistently propagated\n";
        for (const auto &w : warnings) out << "# " << w.location << ": " << w.message << "\n";
    }
    out << base.to_text();
    std::set<std::string> ops;
    for (const auto &l : laws) ops.insert(l.op);
    for (const auto &d : deadlock) ops.insert(d.op);
    for (const auto &op : ops) {
        for (auto fam : {GeneratedLaw::Family::distributivity, GeneratedLaw::Family::action,
                         GeneratedLaw::Family::predicate})
            for (const auto &l : laws)
                if (l.op == op && l.family == fam) {
                    Equation e = l.equation;
                    e.lhs = drop_empty_restrictions(e.lhs);
                    e.rhs = drop_empty_restrictions(e.rhs);
                    out << e.to_string() << "\n";
                }
        if (const auto *d = schema_for(op)) {
            if (bound)
                for (const auto &e : enumerate_deadlock(*d, *bound)) out << e.to_string() << "\n";
            else
                out << "deadlock(" << op << "): " << d->text() << "\n";
        }
    }
    for (const auto &t : translation) out << t.equation.to_string() << "\n";
    out << aip.to_text();
    return out.str();
}

Axiomatization axiomatize(const PregSystem &s) {
    ValidationReport report = validate_preg(s);
    if (!report.ok()) throw AxiomgenError("specification has errors:\n" + report.to_text());

    std::vector<PredicateSym> preds;
    for (const auto &[_, p] : s.predicates) preds.push_back(p);
    PregSystem ext = disjoint_extend(s, projection_system(s.actions, preds));
    ext.name = s.name;
    ext.restriction = true;
    ext.projection = true;

    Axiomatization res;
    res.system = make_smooth_distinctive_all(ext).system;
    const PregSystem &g = res.system;
    GeneratedAxioms &ax = res.axioms;
    // the split operations can lose a covering predicate rule the original had
    std::set<std::pair<std::string, std::string>> seen;
    for (const PregSystem *sys : {&s, &g})
        for (const auto &d : check_implicit_consistency(*sys))
            if (d.severity == Diagnostic::Severity::warning && seen.emplace(d.location, d.message).second)
                ax.warnings.push_back(d);
    ax.soundness_conditional = !ax.warnings.empty();
    ax.base = ftp_partial_axioms(g);
    ax.aip = aip_axioms(g);
    ax.translation = g.translation_equations;

    std::set<std::string> replaced;
    for (const auto &t : g.translation_equations) replaced.insert(t.original);
    for (const auto &[name, _] : g.ops) {
        if (replaced.count(name)) continue;
        if (!smooth_and_distinctive(g, name))
            throw AxiomgenError("internal: operation '" + name + "' has no smooth and distinctive realization");
        auto distr = distributivity_laws(g, name);
        auto positive = positive_positions(g.op_rules(name));
        auto pit = positive.begin();
        for (auto &e : distr) ax.laws.push_back({GeneratedLaw::Family::distributivity, name, std::move(e), *pit++, "", 0});
        for (const auto *r : g.op_rules(name))
            ax.laws.push_back({r->is_transition ? GeneratedLaw::Family::action : GeneratedLaw::Family::predicate, name,
                               trigger_law(g, *r), 0, r->label, r->line});
        ax.deadlock.push_back(deadlock_schema(g, name));
    }
    return res;
}

}  // namespace pregax
