#include "pregax/selftest.hpp"

#include <random>

#include "pregax/bisim.hpp"
#include "pregax/sampling.hpp"

namespace pregax {

SelftestResult selftest(const Axiomatization &ax, std::size_t samples, std::uint32_t seed,
                        std::size_t deadlock_bound) {
    const PregSystem &g = ax.system;
    const GeneratedAxioms &a = ax.axioms;
    std::vector<Equation> eqs = a.base.equations;
    for (const auto &l : a.laws) eqs.push_back(l.equation);
    for (const auto &t : a.translation) eqs.push_back(t.equation);
    for (const auto &d : a.deadlock)
        for (auto &e : enumerate_deadlock(d, deadlock_bound)) eqs.push_back(std::move(e));
    eqs.insert(eqs.end(), a.aip.equations.begin(), a.aip.equations.end());

    Engine engine(g);
    std::mt19937 rng(seed);
    sampling::GenOptions o;
    o.restriction = true;
    o.projection = true;
    SelftestResult r;
    r.equations = eqs.size();
    for (const auto &e : eqs) {
        auto vars = e.lhs.variables();
        for (const auto &v : e.rhs.variables()) vars.insert(v);
        for (std::size_t k = 0; k < samples; ++k) {
            Substitution sub;
            for (const auto &v : vars) sub[v] = sampling::random_term(rng, g, 2, o);
            Term l = apply_subst(e.lhs, sub), rhs = apply_subst(e.rhs, sub);
            ++r.instances;
            Outcome out = bisimilar(engine, l, rhs).outcome;
            if (out == Outcome::unknown) ++r.undecided;
            if (out != Outcome::not_equal) continue;
            ++r.failures;
            if (r.failing.size() < 20) r.failing.push_back(e.label + ": " + l.to_string() + " vs " + rhs.to_string());
        }
    }
    return r;
}

}  // namespace pregax
