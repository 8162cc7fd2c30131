#include "doctest.h"
#include "pregax/core.hpp"

using namespace pregax;

namespace {

Signature seq_signature() {
    Signature sig;
    sig.actions = {"a", "b"};
    sig.predicates = {"term", "div"};
    sig.operations = {{"seqr", 2}};
    return sig;
}

}  // namespace

TEST_CASE("well_formed") {
    Signature sig = seq_signature();
    CHECK(well_formed(Term::delta(), sig));
    CHECK_FALSE(well_formed(Term::op("f", {Term::delta()}), sig));
    CHECK(well_formed(Term::op("seqr", {Term::witness("term"), Term::prefix("a", Term::delta())}), sig));
    CHECK_FALSE(well_formed(Term::prefix("c", Term::delta()), sig));
    CHECK_FALSE(well_formed(Term::restrict({"a"}, {}, Term::delta()), sig));
    sig.restriction = true;
    CHECK(well_formed(Term::restrict({"a"}, {}, Term::delta()), sig));
}

TEST_CASE("apply_subst") {
    Term x = Term::var("x"), y = Term::var("y");
    CHECK(apply_subst(Term::choice(x, y), {{"x", Term::delta()}}) == Term::choice(Term::delta(), y));
    CHECK(apply_subst(Term::prefix("a", x), {{"x", Term::witness("P")}}) ==
          Term::prefix("a", Term::witness("P")));
    // action-law target of the seqr rule is the bare target y
    CHECK(apply_subst(Term::prefix("a", y), {{"y", Term::delta()}}) == Term::prefix("a", Term::delta()));
}

TEST_CASE("substitution composition") {
    Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
    Substitution s1{{"x", Term::prefix("a", y)}};
    Substitution s2{{"y", Term::witness("P")}, {"z", Term::delta()}};
    Term t = Term::choice(x, Term::choice(y, z));
    CHECK(apply_subst(apply_subst(t, s1), s2) == apply_subst(t, compose(s2, s1)));
}

TEST_CASE("height") {
    Term d = Term::delta();
    CHECK(d.height() == 0);
    CHECK(Term::witness("P").height() == 0);
    CHECK(Term::prefix("a", d).height() == 1);
    // by hand: 1 + max(1, 2)
    CHECK(Term::choice(Term::prefix("a", d), Term::prefix("b", Term::prefix("a", d))).height() == 3);
    Term t = Term::prefix("a", Term::prefix("b", d));
    CHECK(t.arg(0).height() < t.height());
}

TEST_CASE("hourglass") {
    CHECK(hourglass(0) == Term::delta());
    CHECK(hourglass(2) == Term::prefix("tick", Term::prefix("tick", Term::delta())));
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(hourglass(n).height() == n);
        CHECK(hourglass_depth(hourglass(n)) == n);
    }
    CHECK_FALSE(hourglass_depth(Term::prefix("a", Term::delta())).has_value());
}

TEST_CASE("term syntax roundtrip") {
    Signature sig = seq_signature();
    sig.restriction = true;
    sig.projection = true;
    sig.actions.insert("tick");
    sig.operations["omega"] = 0;
    for (const char *text : {"delta", "kappa(term)", "a . b . delta", "a . delta + b . kappa(div)",
                             "a . (delta + b . delta)", "delta + (a . delta + delta)", "seqr(kappa(term), a . delta)",
                             "restrict{a,b;term}(a . delta)", "restrict{;}(delta)", "proj(omega, 3)",
                             "proj(a . delta, a . delta)", "seqr(x, y + z)"}) {
        Term t = parse_term(text, sig, true);
        CHECK(t.to_string() == text);
        CHECK(parse_term(t.to_string(), sig, true) == t);
    }
    CHECK(parse_term("a.b.delta", sig) == Term::prefix("a", Term::prefix("b", Term::delta())));
    CHECK(parse_term("delta + delta + delta", sig) ==
          Term::choice(Term::choice(Term::delta(), Term::delta()), Term::delta()));
    CHECK(parse_term("proj(omega, 2)", sig).arg(1) == hourglass(2));
}

TEST_CASE("term syntax errors") {
    Signature sig = seq_signature();
    auto code = [&](const char *text) {
        try {
            parse_term(text, sig);
        } catch (const ParseError &e) {
            return e.code();
        }
        return std::string("none");
    };
    CHECK(code("c . delta") == "undeclared-action");
    CHECK(code("kappa(Q)") == "undeclared-predicate");
    CHECK(code("f(delta)") == "undeclared-operation");
    CHECK(code("seqr(delta)") == "arity-mismatch");
    CHECK(code("a . ") == "syntax");
    CHECK(code("delta delta") == "syntax");
    CHECK(code("x") == "undeclared-operation");
}

TEST_CASE("alpha equivalence and summands") {
    Signature sig = seq_signature();
    Equation e1{"l", parse_term("seqr(x, a . y)", sig, true), parse_term("a . y", sig, true), ""};
    Equation e2{"m", parse_term("seqr(u, a . v)", sig, true), parse_term("a . v", sig, true), ""};
    Equation e3{"m", parse_term("seqr(u, a . v)", sig, true), parse_term("a . u", sig, true), ""};
    CHECK(alpha_equivalent(e1, e2));
    CHECK_FALSE(alpha_equivalent(e1, e3));
    CHECK_FALSE(alpha_equivalent(parse_term("seqr(x, x)", sig, true), parse_term("seqr(x, y)", sig, true)));
    CHECK(summands(parse_term("a . delta + delta + kappa(term)", sig)).size() == 2);
    CHECK(summands(Term::delta()).empty());
}

TEST_CASE("paths") {
    Signature sig = seq_signature();
    Term t = parse_term("seqr(a . delta, kappa(term) + b . delta)", sig);
    CHECK(subterm_at(t, {2, 1}) == Term::witness("term"));
    CHECK(replace_at(t, {1, 1}, Term::witness("div")).to_string() == "seqr(a . kappa(div), kappa(term) + b . delta)");
    CHECK(path_to_string({}) == "root");
    CHECK(path_to_string({2, 1}) == "2.1");
}
