#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pregax/spec.hpp"

namespace pregax {

struct StepBudget {
    std::size_t max_states = 10000;
    std::size_t max_depth = 8;
};

using Successors = std::vector<std::pair<Action, Term>>;

/// Finite reachable fragment. State 0 is the root. When `complete` is false
/// the exploration hit the state budget and unexplored states have no
/// recorded successors.
struct LTS {
    std::vector<Term> states;
    std::unordered_map<Term, std::size_t, TermHash> index;
    std::vector<std::vector<std::pair<Action, std::size_t>>> succ;
    std::vector<PredicateSet> preds;
    std::vector<bool> expanded;
    bool complete = false;

    const Term &root() const { return states.front(); }
    std::size_t transition_count() const;
    bool budget_exceeded() const { return !complete; }
};

/// Computes the sound and supported relations by structural recursion over
/// closed terms. Results are memoized per instance.
class Engine {
public:
    explicit Engine(PregSystem s);

    const PregSystem &system() const { return sys_; }

    const Successors &outgoing(const Term &t);
    const PredicateSet &predicates_of(const Term &t);
    bool can(const Term &t, const Action &a);

    /// Closed substitutions satisfying all premises of `r` with x_i bound to args.
    std::vector<Substitution> rule_matches(const PregRule &r, const std::vector<Term> &args);

    LTS build_lts(const Term &t, const StepBudget &b = {});

    const std::vector<PregRule> &rules_for(const Symbol &s);

private:
    PregSystem sys_;
    std::map<Symbol, std::vector<PregRule>> rules_;
    std::unordered_map<Term, Successors, TermHash> out_cache_;
    std::unordered_map<Term, PredicateSet, TermHash> pred_cache_;
};

std::string lts_to_dot(const LTS &lts);

}  // namespace pregax
