#include <random>

#include "doctest.h"
#include "pregax/bisim.hpp"

using namespace pregax;

namespace {

// Largest bisimulation by enumerating every reflexive symmetric relation.
std::vector<std::vector<bool>> brute_force_bisimilarity(const LTS &l) {
    const std::size_t n = l.states.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::vector<std::vector<bool>> best(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) best[i][i] = true;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
        std::vector<std::vector<bool>> R(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) R[i][i] = true;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (mask >> k & 1) R[pairs[k].first][pairs[k].second] = R[pairs[k].second][pairs[k].first] = true;
        bool ok = true;
        for (std::size_t s = 0; s < n && ok; ++s)
            for (std::size_t t = 0; t < n && ok; ++t) {
                if (!R[s][t]) continue;
                if (l.preds[s] != l.preds[t]) ok = false;
                for (const auto &[a, s2] : l.succ[s]) {
                    bool found = false;
                    for (const auto &[b, t2] : l.succ[t])
                        if (a == b && R[s2][t2]) found = true;
                    if (!found) ok = false;
                }
            }
        if (!ok) continue;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t)
                if (R[s][t]) best[s][t] = true;
    }
    return best;
}

LTS random_lts(std::mt19937 &rng, std::size_t n) {
    LTS l;
    l.complete = true;
    std::uniform_int_distribution<int> coin(0, 3);
    for (std::size_t i = 0; i < n; ++i) {
        l.states.push_back(Term::op("s" + std::to_string(i)));
        l.preds.push_back(coin(rng) == 0 ? PredicateSet{"P"} : PredicateSet{});
        l.expanded.push_back(true);
        l.succ.emplace_back();
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const char *a : {"a", "b"})
                if (coin(rng) == 0) l.succ[i].push_back({a, j});
    return l;
}

PregSystem ftp2() {
    PregSystem s;
    s.actions = {"a", "b"};
    s.predicates["P"] = {"P", false, {}};
    s.predicates["ev"] = {"ev", true, {"a"}};
    return s;
}

Term random_tree(std::mt19937 &rng, int h) {
    std::uniform_int_distribution<int> pick(0, h == 0 ? 2 : 5);
    switch (pick(rng)) {
    case 0: return Term::delta();
    case 1: return Term::witness("P");
    case 2: return Term::witness("ev");
    case 3: return Term::prefix("a", random_tree(rng, h - 1));
    case 4: return Term::prefix("b", random_tree(rng, h - 1));
    default: return Term::choice(random_tree(rng, h - 1), random_tree(rng, h - 1));
    }
}

}  // namespace

TEST_CASE("partition refinement agrees with brute-force relation enumeration") {
    std::mt19937 rng(11);
    for (int k = 0; k < 300; ++k) {
        LTS l = random_lts(rng, 1 + k % 5);
        auto classes = bisimulation_classes(l);
        auto truth = brute_force_bisimilarity(l);
        for (std::size_t s = 0; s < l.states.size(); ++s)
            for (std::size_t t = 0; t < l.states.size(); ++t) CHECK((classes[s] == classes[t]) == truth[s][t]);
    }
}

TEST_CASE("bisimilar on small trees agrees with brute force") {
    std::mt19937 rng(5);
    PregSystem s = ftp2();
    Engine e(s);
    int checked = 0;
    for (int k = 0; k < 400; ++k) {
        Term t = random_tree(rng, 2), u = random_tree(rng, 2);
        std::size_t off = 0;
        LTS un = lts_union(e.build_lts(t), e.build_lts(u), off);
        if (un.states.size() > 6) continue;
        ++checked;
        bool truth = brute_force_bisimilarity(un)[0][off];
        Verdict v = bisimilar(e, t, u);
        CHECK(v.outcome == (truth ? Outcome::equal : Outcome::not_equal));
    }
    CHECK(checked > 100);
}

TEST_CASE("bisimilar examples") {
    PregSystem s = ftp2();
    Engine e(s);
    Term ad = Term::prefix("a", Term::delta());
    CHECK(bisimilar(e, Term::choice(ad, ad), ad).outcome == Outcome::equal);

    Verdict v = bisimilar(e, Term::witness("P"), Term::delta());
    CHECK(v.outcome == Outcome::not_equal);
    CHECK(v.witness == "predicate P (left only)");
    CHECK(v.depth == 0);

    Verdict w = bisimilar(e, Term::prefix("a", Term::prefix("b", Term::delta())), ad);
    CHECK(w.outcome == Outcome::not_equal);
    CHECK(w.witness == "a . action b (left only)");
    CHECK(w.depth == 2);

    Verdict r = bisimilar(e, ad, Term::prefix("a", Term::witness("P")));
    CHECK(r.witness == "a . predicate P (right only)");
    CHECK(r.depth == 1);

    // a.ev satisfies ev, a.delta does not
    CHECK(bisimilar(e, Term::prefix("a", Term::witness("ev")), ad).witness == "predicate ev (left only)");
}

TEST_CASE("omega loops") {
    PregSystem s = load_spec_file("corpus/omega.preg");
    Engine e(s);
    Term w = Term::op("omega"), w2 = Term::op("omega2");
    CHECK(bisimilar(e, w, Term::prefix("a", w2)).outcome == Outcome::equal);
    CHECK(bisimilar(e, w, w2).outcome == Outcome::equal);
    Term aad = Term::prefix("a", Term::prefix("a", Term::delta()));
    CHECK(n_bisimilar(e, w, aad, 0));
    CHECK(n_bisimilar(e, w, aad, 1));
    CHECK(n_bisimilar(e, w, aad, 2));
    CHECK_FALSE(n_bisimilar(e, w, aad, 3));
    Verdict v = bisimilar(e, w, aad);
    CHECK(v.outcome == Outcome::not_equal);
    CHECK(v.depth == 3);
}

TEST_CASE("n-bisimilarity") {
    PregSystem s = ftp2();
    Engine e(s);
    CHECK(n_bisimilar(e, Term::prefix("a", Term::delta()), Term::prefix("b", Term::delta()), 0));
    CHECK_FALSE(n_bisimilar(e, Term::prefix("a", Term::delta()), Term::prefix("b", Term::delta()), 1));
    CHECK_FALSE(n_bisimilar(e, Term::witness("P"), Term::delta(), 0));

    std::mt19937 rng(3);
    for (int k = 0; k < 200; ++k) {
        Term t = random_tree(rng, 3), u = random_tree(rng, 3);
        for (std::size_t n = 0; n < 4; ++n)
            if (n_bisimilar(e, t, u, n + 1)) CHECK(n_bisimilar(e, t, u, n));
        // trees of height <= 3 are bisimilar iff 4-bisimilar
        CHECK(n_bisimilar(e, t, u, 4) == (bisimilar(e, t, u).outcome == Outcome::equal));
    }
}

TEST_CASE("budget fallback") {
    PregSystem g = parse_spec("actions a ; op f / 1 ; rule f : ==> f(x1) -a-> f(a . x1) ;");
    Engine e(g);
    Term t = Term::op("f", {Term::delta()});
    Verdict v = bisimilar(e, t, Term::op("f", {Term::prefix("a", Term::delta())}), {20, 5});
    CHECK(v.outcome == Outcome::unknown);
    CHECK(v.depth == 5);
    Verdict n = bisimilar(e, t, Term::prefix("a", Term::delta()), {20, 5});
    CHECK(n.outcome == Outcome::not_equal);
    CHECK(n.depth == 2);
    CHECK(n.witness == "a . action a (left only)");
}

TEST_CASE("congruence on sampled contexts") {
    PregSystem s = load_spec_file("corpus/seqr.preg");
    Engine e(s);
    std::mt19937 rng(17);
    std::vector<Term> pool{Term::delta(), Term::witness("term"), Term::witness("div"),
                           Term::prefix("a", Term::delta()), Term::prefix("b", Term::witness("term"))};
    for (int k = 0; k < 200; ++k) {
        Term t = Term::choice(pool[rng() % pool.size()], pool[rng() % pool.size()]);
        Term u = Term::choice(summands(t).empty() ? Term::delta() : summands(t).back(), t);
        REQUIRE(bisimilar(e, t, u).outcome == Outcome::equal);
        Term c = pool[rng() % pool.size()];
        CHECK(bisimilar(e, Term::op("seqr", {t, c}), Term::op("seqr", {u, c})).outcome == Outcome::equal);
        CHECK(bisimilar(e, Term::op("seqr", {c, t}), Term::op("seqr", {c, u})).outcome == Outcome::equal);
        CHECK(bisimilar(e, Term::prefix("a", Term::op("seqr", {c, t})), Term::prefix("a", Term::op("seqr", {c, u})))
                  .outcome == Outcome::equal);
    }
}
