#include "pregax/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace pregax {

namespace {

Path operator+(Path p, std::size_t i) {
    p.push_back(i);
    return p;
}

Path concat(Path a, const Path &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

bool is_prefix_of(const Term &t, const Action &a) { return t.is(SymbolKind::prefix) && t.symbol().name == a; }

bool sum_equal_modulo_aci(const Term &a, const Term &b) {
    auto sa = summands(a), sb = summands(b);
    std::set<Term> x(sa.begin(), sa.end()), y(sb.begin(), sb.end());
    return x == y;
}

// Paths of the summands of a left-associated sum.
void summand_paths(const Term &t, const Path &p, std::vector<Path> &out) {
    if (t.is(SymbolKind::choice)) {
        summand_paths(t.arg(0), p + 1, out);
        summand_paths(t.arg(1), p + 2, out);
    } else if (!t.is(SymbolKind::delta)) {
        out.push_back(p);
    }
}

}  // namespace

bool match(const Term &pattern, const Term &t, Substitution &sub) {
    if (pattern.is_var()) {
        auto [it, fresh] = sub.emplace(pattern.var_name(), t);
        return fresh || it->second == t;
    }
    if (t.is_var() || !(pattern.symbol() == t.symbol())) return false;
    for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match(pattern.arg(i), t.arg(i), sub)) return false;
    return true;
}

// -- traces -------------------------------------------------------------------------

std::string ProofTrace::to_text() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto &s = steps[k];
        out << "step " << k + 1 << ": " << s.label << " at " << path_to_string(s.path) << ": "
            << s.before.to_string() << " => " << s.after.to_string() << "\n";
    }
    return out.str();
}

Term ProofTrace::replay(const Term &initial) const {
    Term cur = initial;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto &s = steps[k];
        auto fail = [&](const std::string &why) {
            throw std::logic_error("step " + std::to_string(k + 1) + " (" + s.label + "): " + why);
        };
        if (!(subterm_at(cur, s.path) == s.before)) fail("redex differs");
        switch (s.kind) {
        case ProofStep::Kind::law: {
            Substitution sub;
            if (!match(s.equation.lhs, s.before, sub)) fail("lhs does not match");
            for (const auto &[v, t] : s.subst) sub.try_emplace(v, t);
            if (!(apply_subst(s.equation.rhs, sub) == s.after)) fail("rhs instance differs");
            break;
        }
        case ProofStep::Kind::reorder:
            if (!sum_equal_modulo_aci(s.before, s.after)) fail("summands differ");
            break;
        case ProofStep::Kind::saturate:
            if (!s.after.is(SymbolKind::choice) || !(s.after.arg(0) == s.before) || !s.after.arg(1).is(SymbolKind::witness))
                fail("not a witness addition");
            break;
        }
        cur = replace_at(cur, s.path, s.after);
    }
    return cur;
}

// -- rewriter --------------------------------------------------------------------------

struct Rewriter::Work {
    Term root;
    Path base;
    const Term &at(const Path &p) const { return subterm_at(root, p); }
};

Rewriter::Rewriter(const Axiomatization &ax, RewriteBudget budget)
    : ax_(ax), budget_(budget), engine_(ax.system) {
    for (const auto &e : ax_.axioms.aip.equations) aip_.emplace(e.label, e);
    for (const auto &l : ax_.axioms.laws) {
        if (l.family == GeneratedLaw::Family::distributivity)
            laws_.emplace("distr(" + l.op + "," + std::to_string(l.position) + ")", &l);
        else
            laws_.emplace(l.rule, &l);
    }
    for (const auto &t : ax_.axioms.translation) translation_.emplace(t.original, &t);
}

const Equation &Rewriter::aip(const std::string &label) const {
    auto it = aip_.find(label);
    if (it == aip_.end()) throw std::logic_error("missing projection law " + label);
    return it->second;
}

Equation Rewriter::schema(const std::string &label, const SchemaParams &p) const {
    for (const auto &s : ax_.axioms.base.schemas)
        if (s.label == label)
            if (auto e = s.instantiate(p)) return *e;
    throw std::logic_error("schema " + label + " does not apply");
}

void Rewriter::record(Work &w, ProofStep step) {
    if (++steps_ > budget_.max_steps)
        throw RewriteError(RewriteError::Kind::budget,
                           "rewrite step cap " + std::to_string(budget_.max_steps) +
                               " exceeded; the term may have infinite behaviour, try a projection depth",
                           trace_ ? *trace_ : ProofTrace{});
    w.root = replace_at(w.root, step.path, step.after);
    step.path = concat(w.base, step.path);
    if (trace_) trace_->steps.push_back(std::move(step));
}

void Rewriter::apply(Work &w, const Path &p, const Equation &eq) {
    const Term &redex = w.at(p);
    Substitution sub;
    if (!match(eq.lhs, redex, sub)) throw std::logic_error(eq.label + " does not match " + redex.to_string());
    Term after = apply_subst(eq.rhs, sub);
    ProofStep s{ProofStep::Kind::law, eq.label, p, std::move(sub), redex, std::move(after), eq};
    record(w, std::move(s));
}

void Rewriter::merge_sum(Work &w, const Path &p) {
    const Term t = w.at(p);
    std::vector<Term> out;
    for (const auto &s : summands(t))
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    Term merged = Term::sum(out);
    if (merged == t) return;
    record(w, {ProofStep::Kind::reorder, "A1-A4", p, {}, t, merged, {}});
}

void Rewriter::saturate(Work &w, const Path &p) {
    const Term t = w.at(p);
    PredicateSet have;
    for (const auto &s : summands(t))
        if (s.is(SymbolKind::witness)) have.insert(s.symbol().name);
    for (const auto &q : engine_.predicates_of(t)) {
        if (have.count(q)) continue;
        const Term cur = w.at(p);
        record(w, {ProofStep::Kind::saturate, "saturate(" + q + ")", p, {}, cur, Term::choice(cur, Term::witness(q)), {}});
    }
}

void Rewriter::hnf(Work &w, const Path &p) {
    struct Depth {
        std::size_t &d;
        explicit Depth(std::size_t &x) : d(x) { ++d; }
        ~Depth() { --d; }
    } guard(depth_);
    if (depth_ > budget_.max_nesting * 4)
        throw RewriteError(RewriteError::Kind::nesting, "head normalization recursion too deep",
                           trace_ ? *trace_ : ProofTrace{});
    const Term &t = w.at(p);
    if (t.is_var()) throw std::invalid_argument("head normalization needs a closed term");
    switch (t.kind()) {
    case SymbolKind::delta:
    case SymbolKind::witness: return;
    case SymbolKind::prefix: saturate(w, p); return;
    case SymbolKind::choice:
        hnf(w, p + 1);
        hnf(w, p + 2);
        merge_sum(w, p);
        return;
    case SymbolKind::restrict: restrict_head(w, p); return;
    case SymbolKind::project: project_head(w, p); return;
    case SymbolKind::op: op_head(w, p); return;
    }
}

namespace {

bool head_shaped(const Term &t) {
    switch (t.kind()) {
    case SymbolKind::delta:
    case SymbolKind::witness:
    case SymbolKind::prefix: return true;
    case SymbolKind::choice: return head_shaped(t.arg(0)) && head_shaped(t.arg(1));
    default: return false;
    }
}

}  // namespace

// Restriction and projection laws only need the head shape of their body.
// Saturating a prefix there would be split off again by A12 or A13.
void Rewriter::shape(Work &w, const Path &p) {
    if (!head_shaped(w.at(p))) hnf(w, p);
}

void Rewriter::restrict_head(Work &w, const Path &p) {
    const PregSystem &g = ax_.system;
    while (true) {
        const Term t = w.at(p);
        if (!t.is(SymbolKind::restrict)) {
            hnf(w, p);
            return;
        }
        SchemaParams par;
        par.B = t.symbol().forbidden_actions;
        par.Q = t.symbol().forbidden_predicates;
        if (par.B == g.actions && par.Q == g.predicate_names()) {
            // nothing observable survives
            apply(w, p, {"restrict-all", Term::restrict(par.B, par.Q, Term::var("x")), Term::delta(), ""});
            return;
        }
        shape(w, p + 1);
        const Term u = w.at(p + 1);
        switch (u.kind()) {
        case SymbolKind::delta: apply(w, p, schema("A6", par)); return;
        case SymbolKind::witness:
            par.P = u.symbol().name;
            apply(w, p, schema(par.Q.count(par.P) ? "A7" : "A8", par));
            return;
        case SymbolKind::choice:
            apply(w, p, schema("A12", par));
            shape(w, p + 1);
            shape(w, p + 2);
            merge_sum(w, p);
            return;
        case SymbolKind::prefix: break;
        default: throw std::logic_error("restriction body is not in head normal form");
        }
        par.a = u.symbol().name;
        if (!par.B.count(par.a)) {
            if (!par.B.empty()) apply(w, p, schema("A10", par));
            apply(w, p, schema("A11", par));
            saturate(w, p);
            return;
        }
        shape(w, concat(p, {1, 1}));
        const Term x = w.at(concat(p, {1, 1}));
        switch (x.kind()) {
        case SymbolKind::delta: apply(w, p, schema("A9.1", par)); return;
        case SymbolKind::witness:
            par.P = x.symbol().name;
            apply(w, p, schema("A9.2", par));
            return;
        case SymbolKind::choice:
            apply(w, p, schema("A9.4", par));
            shape(w, p + 1);
            shape(w, p + 2);
            merge_sum(w, p);
            return;
        case SymbolKind::prefix:
            par.b = x.symbol().name;
            apply(w, p, schema("A9.3", par));
            continue;  // a restriction again
        default: throw std::logic_error("restriction body is not in head normal form");
        }
    }
}

void Rewriter::project_head(Work &w, const Path &p) {
    shape(w, p + 1);
    const Term u = w.at(p + 1);
    switch (u.kind()) {
    case SymbolKind::delta: apply(w, p, aip("A16")); return;
    case SymbolKind::witness: apply(w, p, aip("A18(" + u.symbol().name + ")")); return;
    case SymbolKind::choice:
        apply(w, p, aip("A13"));
        shape(w, p + 1);
        shape(w, p + 2);
        merge_sum(w, p);
        return;
    case SymbolKind::prefix: break;
    default: throw std::logic_error("projection body is not in head normal form");
    }
    const Action &a = u.symbol().name;
    shape(w, p + 2);
    const Term h = w.at(p + 2);
    switch (h.kind()) {
    case SymbolKind::delta: apply(w, p, aip("A17(" + a + ")")); break;
    case SymbolKind::witness: apply(w, p, aip("A17(" + a + "," + h.symbol().name + ")")); break;
    case SymbolKind::choice:
        apply(w, p, aip("A14"));
        shape(w, p + 1);
        shape(w, p + 2);
        merge_sum(w, p);
        return;
    case SymbolKind::prefix:
        if (h.symbol().name == kClockAction) {
            apply(w, p, aip("A15(" + a + ")"));
            saturate(w, p);
            return;
        }
        apply(w, p, aip("A17(" + a + "," + h.symbol().name + ")"));
        break;
    default: throw std::logic_error("hourglass is not in head normal form");
    }
    hnf(w, p);  // delta or a full restriction
}

void Rewriter::deadlock(Work &w, const Path &p, const DeadlockSchema &d, std::vector<ArgShape> shapes) {
    using K = ArgShape::Kind;
    // bring a blocking summand of a sum argument to the front
    for (std::size_t j = 1; j <= d.arity; ++j) {
        const ArgShape &sh = shapes[j - 1];
        if (sh.kind != K::prefix_plus && sh.kind != K::witness_plus) continue;
        const Term arg = w.at(p + j);
        auto ss = summands(arg);
        auto it = std::find_if(ss.begin(), ss.end(), [&](const Term &s) {
            return sh.kind == K::prefix_plus ? is_prefix_of(s, sh.name)
                                             : s.is(SymbolKind::witness) && s.symbol().name == sh.name;
        });
        Term first = *it;
        ss.erase(it);
        Term arranged = Term::choice(first, Term::sum(ss));
        if (!(arranged == arg)) record(w, {ProofStep::Kind::reorder, "A1-A4", p + j, {}, arg, arranged, {}});
    }
    apply(w, p, d.instantiate(shapes));
}

void Rewriter::op_head(Work &w, const Path &p, bool args_ready) {
    using K = ArgShape::Kind;
    const std::string name = w.at(p).symbol().name;
    if (auto it = translation_.find(name); it != translation_.end()) {
        apply(w, p, it->second->equation);
        hnf(w, p);
        return;
    }
    const DeadlockSchema *d = ax_.axioms.schema_for(name);
    if (!d) throw std::logic_error("no laws for operation '" + name + "'");

    // a prefix is already head normal up to saturation, and saturating it
    // here would only be split off again by distributivity
    if (!args_ready)
        for (std::size_t j : d->positive)
            if (!w.at(p + j).is(SymbolKind::prefix)) hnf(w, p + j);
    for (std::size_t j : d->positive) {
        if (!w.at(p + j).is(SymbolKind::choice)) continue;
        // the pieces keep head normal arguments; normalizing them again
        // would re-saturate a split-off prefix
        apply(w, p, laws_.at("distr(" + name + "," + std::to_string(j) + ")")->equation);
        op_head(w, p + 1, true);
        op_head(w, p + 2, true);
        merge_sum(w, p);
        return;
    }
    std::vector<ArgShape> shapes(d->arity);
    for (std::size_t j : d->positive) {
        const Term &x = w.at(p + j);
        if (x.is(SymbolKind::delta)) shapes[j - 1] = {K::delta, ""};
        else if (x.is(SymbolKind::witness)) shapes[j - 1] = {K::witness, x.symbol().name};
        else shapes[j - 1] = {K::prefix, x.symbol().name};
    }
    for (std::size_t j : d->positive)
        if (shapes[j - 1].kind == K::delta) {
            std::vector<ArgShape> only(d->arity);
            only[j - 1] = shapes[j - 1];
            deadlock(w, p, *d, only);
            return;
        }

    // rules not excluded by their positive premises
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < d->rules.size(); ++k) {
        bool blocked = false;
        for (std::size_t j : d->positive) blocked = blocked || d->blocks(k, j, shapes[j - 1]);
        if (!blocked) open.push_back(k);
    }
    if (open.empty()) {
        deadlock(w, p, *d, shapes);
        return;
    }
    if (open.size() > 1) {
        throw RewriteError(RewriteError::Kind::stuck,
                           "cannot decide by shape which rule of '" + name +
                               "' applies: an argument of the form b.z may satisfy an implicit predicate",
                           trace_ ? *trace_ : ProofTrace{});
    }
    const RuleTests &rule = d->rules[open.front()];
    for (const auto &[j, q] : rule.predicates) {
        const Term &x = w.at(p + j);
        if (!(x.is(SymbolKind::witness) && x.symbol().name == q))
            throw RewriteError(RewriteError::Kind::stuck,
                               "argument " + std::to_string(j) + " of '" + name + "' is " + x.to_string() +
                                   ", which may satisfy the implicit predicate " + q,
                               trace_ ? *trace_ : ProofTrace{});
    }

    // negative premises of the unique candidate
    for (const auto &[j, bs] : rule.neg_actions) {
        hnf(w, p + j);
        for (const auto &s : summands(w.at(p + j)))
            if (s.is(SymbolKind::prefix) && bs.count(s.symbol().name)) {
                shapes[j - 1] = {K::prefix_plus, s.symbol().name};
                deadlock(w, p, *d, shapes);
                return;
            }
    }
    for (const auto &[j, qs] : rule.neg_predicates) {
        hnf(w, p + j);
        for (const auto &s : summands(w.at(p + j)))
            if (s.is(SymbolKind::witness) && qs.count(s.symbol().name)) {
                shapes[j - 1] = {K::witness_plus, s.symbol().name};
                deadlock(w, p, *d, shapes);
                return;
            }
    }

    // trigger law with the restriction wrappers dropped; the guard is the
    // check just made on the head normal forms
    const GeneratedLaw *law = laws_.at(rule.label);
    Equation guarded = law->equation;
    std::vector<Term> args = guarded.lhs.args();
    std::set<std::string> wrapped;
    std::string cond;
    for (auto &a : args) {
        if (!a.is(SymbolKind::restrict)) continue;
        if (!a.symbol().forbidden_actions.empty() || !a.symbol().forbidden_predicates.empty())
            cond += (cond.empty() ? "" : ", ") + a.arg(0).to_string() + " has no summand forbidden by " +
                    a.symbol().to_string();
        wrapped.insert(a.arg(0).var_name());
        a = a.arg(0);
    }
    std::function<Term(const Term &)> strip = [&](const Term &t) -> Term {
        if (t.is_var() || t.args().empty()) return t;
        if (t.is(SymbolKind::restrict) && t.arg(0).is_var() && wrapped.count(t.arg(0).var_name())) return t.arg(0);
        std::vector<Term> xs;
        for (const auto &c : t.args()) xs.push_back(strip(c));
        return Term::app(t.symbol(), xs);
    };
    guarded.rhs = strip(guarded.rhs);
    guarded.condition = cond;
    guarded.lhs = Term::op(name, args);
    apply(w, p, guarded);
    hnf(w, p);
}

void Rewriter::normalize(Work &w, std::size_t nesting) {
    if (nesting > budget_.max_nesting)
        throw RewriteError(RewriteError::Kind::nesting,
                           "prefix nesting exceeds " + std::to_string(budget_.max_nesting) +
                               "; the term may have infinite behaviour, try a projection depth",
                           trace_ ? *trace_ : ProofTrace{});
    hnf(w, {});
    std::vector<Path> paths;
    summand_paths(w.root, {}, paths);
    for (const auto &sp : paths) {
        if (!w.at(sp).is(SymbolKind::prefix)) continue;
        Work inner{w.at(sp + 1), concat(w.base, sp + 1)};
        normalize(inner, nesting + 1);
        w.root = replace_at(w.root, sp + 1, inner.root);
    }
}

Term Rewriter::head_normalize(const Term &t, ProofTrace *trace) {
    steps_ = 0;
    depth_ = 0;
    trace_ = trace;
    Work w{t, {}};
    hnf(w, {});
    trace_ = nullptr;
    return w.root;
}

Term Rewriter::normalize_to_tree(const Term &t, std::optional<std::size_t> depth, ProofTrace *trace) {
    steps_ = 0;
    depth_ = 0;
    trace_ = trace;
    Work w{depth ? Term::project(t, hourglass(*depth)) : t, {}};
    try {
        normalize(w, 0);
    } catch (...) {
        trace_ = nullptr;
        throw;
    }
    trace_ = nullptr;
    return w.root;
}

std::optional<CanonicalTree> Rewriter::try_tree(const Term &t, std::optional<std::size_t> depth, ProofTrace *trace,
                                                std::string &why) {
    try {
        return canonical_tree(engine_, normalize_to_tree(t, depth, trace));
    } catch (const RewriteError &e) {
        why = e.what();
        return std::nullopt;
    }
}

Verdict Rewriter::prove_equal(const Term &t, const Term &u, ProofTrace *trace) {
    Verdict v;
    std::string why;
    auto a = try_tree(t, {}, trace, why);
    auto b = a ? try_tree(u, {}, trace, why) : std::nullopt;
    if (a && b) {
        v.trace.push_back("normal form of lhs: " + a->to_string());
        v.trace.push_back("normal form of rhs: " + b->to_string());
        if (*a == *b) {
            v.outcome = Outcome::equal;
        } else {
            v.outcome = Outcome::not_equal;
            Verdict w = bisimilar(engine_, a->to_term(), b->to_term());
            v.witness = w.witness;
            v.depth = w.depth;
        }
        return v;
    }
    v.trace.push_back("unbounded normalization failed: " + why);
    for (std::size_t n = 1; n <= budget_.max_depth; ++n) {
        auto pa = try_tree(t, n, nullptr, why);
        auto pb = pa ? try_tree(u, n, nullptr, why) : std::nullopt;
        if (!pa || !pb) {
            v.trace.push_back("projection at depth " + std::to_string(n) + " failed: " + why);
            v.outcome = Outcome::unknown;
            v.depth = n - 1;
            return v;
        }
        if (!(*pa == *pb)) {
            v.outcome = Outcome::not_equal;
            v.depth = n;
            v.witness = "projections at depth " + std::to_string(n) + " differ: " + pa->to_string() + " vs " +
                        pb->to_string();
            return v;
        }
        v.trace.push_back("projections at depth " + std::to_string(n) + " agree: " + pa->to_string());
    }
    v.outcome = Outcome::unknown;
    v.depth = budget_.max_depth;
    return v;
}

Term head_normalize(const Term &t, const Axiomatization &ax, ProofTrace *trace) {
    return Rewriter(ax).head_normalize(t, trace);
}

Term normalize_to_tree(const Term &t, const Axiomatization &ax, std::optional<std::size_t> depth, ProofTrace *trace) {
    return Rewriter(ax).normalize_to_tree(t, depth, trace);
}

Verdict prove_equal(const Term &t, const Term &u, const Axiomatization &ax, const RewriteBudget &budget,
                    ProofTrace *trace) {
    return Rewriter(ax, budget).prove_equal(t, u, trace);
}

}  // namespace pregax
