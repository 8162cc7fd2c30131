#include <random>

#include "doctest.h"
#include "pregax/bisim.hpp"
#include "pregax/transform.hpp"
#include "pregax/sampling.hpp"

using namespace pregax;

namespace {

PregSystem corpus(const std::string &name) { return load_spec_file("corpus/" + name + ".preg"); }

// Closed instances of a translation equation must be bisimilar.
int unsound_instances(const PregSystem &s, const Equation &eq, int samples, unsigned seed) {
    Engine e(s);
    std::mt19937 rng(seed);
    int bad = 0;
    for (int k = 0; k < samples; ++k) {
        Substitution sub;
        for (const auto &v : eq.lhs.variables()) sub[v] = sampling::random_term(rng, s, 2);
        if (bisimilar(e, apply_subst(eq.lhs, sub), apply_subst(eq.rhs, sub)).outcome != Outcome::equal) ++bad;
    }
    return bad;
}

}  // namespace

TEST_CASE("barb values") {
    PregSystem f = corpus("rho");
    const PregRule &rho = f.rules[0];
    // two action premises, two predicate premises, both negative families, target occurrence
    CHECK(barb(rho, 1) == 2 + 2 + 2 + 1);

    PregSystem ex = corpus("seqr");
    for (const auto &r : ex.rules)
        for (std::size_t i = 1; i <= r.arity(); ++i) CHECK(barb(r, i) <= 1);

    PregSystem g = parse_spec("actions a ; op g / 2 ; rule g : ==> g(x1, x2) -a-> delta ;");
    CHECK(barb(g.rules[0], 1) == 0);
    CHECK(barb(g.rules[0], 2) == 0);
}

TEST_CASE("smoothen the example rule") {
    PregSystem f = corpus("rho");
    SmoothenResult res = smoothen(f, "f");
    CHECK(res.derived == "f_smooth");
    CHECK(res.system.ops.at("f_smooth").arity == 7);
    CHECK(res.system.ops.at("f_smooth").origin == Origin::derived_smooth);
    auto rules = res.system.op_rules("f_smooth");
    REQUIRE(rules.size() == 1);
    PregRule expected = parse_rule(
        "x1 -a-> y1, x2 -b-> y2, x3 -/d->, P1(x4), P2(x5), not P3(x6) ==> "
        "f_smooth(x1, x2, x3, x4, x5, x6, x7) -c-> x7 + y1",
        res.system);
    CHECK(*rules[0] == expected);
    CHECK(classify_smooth(*rules[0]).ok);
    CHECK(res.equation.equation.to_string() == "smooth(f): f(x1) = f_smooth(x1, x1, x1, x1, x1, x1, x1)");
    CHECK(validate_preg(res.system).ok());
    CHECK(unsound_instances(res.system, res.equation.equation, 200, 1) == 0);

    // instances where the rule fires
    Engine e(res.system);
    Term x = parse_term("a . kappa(P1) + b . delta + kappa(P1) + kappa(P2)", res.system.signature());
    Term lhs = Term::op("f", {x});
    CHECK(e.outgoing(lhs).size() == 1);
    CHECK(bisimilar(e, lhs, apply_subst(res.equation.equation.rhs, {{"x1", x}})).outcome == Outcome::equal);
}

TEST_CASE("smoothen rejects smooth operations") {
    CHECK_THROWS_AS(smoothen(corpus("seqr"), "seqr"), TransformError);
}

TEST_CASE("smoothen keeps unused copies unconstrained") {
    PregSystem p = corpus("priority");
    SmoothenResult res = smoothen(p, "theta");
    CHECK(res.system.ops.at("theta_smooth").arity == 2);
    for (const auto *r : res.system.op_rules("theta_smooth")) CHECK(classify_smooth(*r).ok);
    CHECK(classify_distinctive(res.system, "theta_smooth").ok);
    CHECK(unsound_instances(res.system, res.equation.equation, 200, 2) == 0);
}

TEST_CASE("distinctify") {
    PregSystem b = corpus("bccsp_user");
    DistinctifyResult d = distinctify(b, "plus");
    REQUIRE(d.derived.size() == 2);
    CHECK_FALSE(d.noop);
    for (const auto &n : d.derived) CHECK(classify_distinctive(d.system, n).ok);
    auto r1 = d.system.op_rules(d.derived[0]);
    auto r2 = d.system.op_rules(d.derived[1]);
    for (const auto *r : r1) CHECK(r->tests_positively(1));
    for (const auto *r : r2) CHECK(r->tests_positively(2));
    CHECK(d.equation.equation.to_string() == "distinct(plus): plus(x1, x2) = plus_d1(x1, x2) + plus_d2(x1, x2)");
    CHECK(unsound_instances(d.system, d.equation.equation, 200, 3) == 0);

    DistinctifyResult same = distinctify(corpus("seqr"), "seqr");
    CHECK(same.noop);
    CHECK(same.derived.empty());

    PregSystem w = parse_spec(
        "actions a, b ; op g / 1 ;"
        "rule g : x1 -a-> y ==> g(x1) -a-> y ;"
        "rule g : x1 -a-> y ==> g(x1) -b-> y ;");
    DistinctifyResult single = distinctify(w, "g");
    CHECK(single.derived.size() == 2);
    CHECK(unsound_instances(single.system, single.equation.equation, 200, 4) == 0);

    CHECK_THROWS_AS(distinctify(corpus("rho"), "f"), TransformError);
}

TEST_CASE("make_smooth_distinctive_all") {
    PregSystem ex = corpus("seqr");
    auto r = make_smooth_distinctive_all(ex);
    CHECK(r.equations.empty());
    CHECK(r.system == ex);

    PregSystem b = corpus("bccsp_user");
    auto rb = make_smooth_distinctive_all(b);
    REQUIRE(rb.equations.size() == 1);
    CHECK(rb.equations[0].kind == TranslationEquation::Kind::distinctify);
    CHECK(rb.system.ops.size() == b.ops.size() + 2);
    auto again = make_smooth_distinctive_all(rb.system);
    CHECK(again.equations.empty());
    CHECK(again.system == rb.system);

    for (const char *name : {"priority", "rho", "parallel"}) {
        PregSystem s = corpus(name);
        auto out = make_smooth_distinctive_all(s);
        CHECK_NOTHROW(disjoint_extend(s, out.system));
        CHECK(validate_preg(out.system).ok());
        for (const auto &eq : out.equations) {
            for (const auto &d : eq.derived) CHECK(smooth_and_distinctive(out.system, d));
            CHECK_MESSAGE(unsound_instances(out.system, eq.equation, 200, 5) == 0, eq.equation.to_string());
        }
    }
}

TEST_CASE("choice functions") {
    ChoiceFunctions two({2, 3});
    std::vector<std::size_t> f;
    int n = 0;
    while (two.next(f)) ++n;
    CHECK(n == 6);
    ChoiceFunctions none({});
    n = 0;
    while (none.next(f)) {
        CHECK(f.empty());
        ++n;
    }
    CHECK(n == 1);
    ChoiceFunctions empty_rule({2, 0});
    CHECK_FALSE(empty_rule.next(f));
}

TEST_CASE("positivize") {
    PregSystem p = corpus("priority");
    PregSystem q = positivize(p);
    CHECK(validate_preg(q).ok());
    CHECK_FALSE(q.is_implicit("cannot_a"));
    CHECK(q.predicates.count("cannot_b"));
    // the negative premise of theta became cannot_b
    bool found = false;
    for (const auto *r : q.op_rules("theta"))
        if (r->is_transition && r->action == "a") {
            CHECK(r->neg_trans.empty());
            REQUIRE(r->pos_pred.size() == 1);
            CHECK(r->pos_pred[0].pred == "cannot_b");
            found = true;
        }
    CHECK(found);
    // no b-rule for pa: one premise-free cannot_b rule
    std::size_t vacuous = 0;
    for (const auto *r : q.op_rules("pa"))
        if (!r->is_transition && r->predicate == "cannot_b" && r->premise_count() == 0) ++vacuous;
    CHECK(vacuous == 1);
    CHECK_THROWS_AS(positivize(corpus("seqr")), TransformError);

    Engine g(p), gp(q);
    sampling::GenOptions o;
    o.actions_only_user = true;
    auto terms = sampling::enumerate_terms(p, 2, o);
    CHECK(terms.size() > 20);
    for (const auto &t : terms) {
        CHECK(g.outgoing(t) == gp.outgoing(t));
        for (const auto &a : p.actions) CHECK(gp.predicates_of(t).count(cannot_predicate(a)) == !g.can(t, a));
    }
}
