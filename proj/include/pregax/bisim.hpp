#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pregax/semantics.hpp"

namespace pregax {

enum class Outcome { equal, not_equal, unknown };

std::string to_string(Outcome o);

struct Verdict {
    Outcome outcome = Outcome::unknown;
    /// Distinguishing observation for NotEqual, e.g. "a . b . predicate P (left only)".
    std::optional<std::string> witness;
    /// Distinguishing depth for NotEqual; exhausted bound for Unknown.
    std::optional<std::size_t> depth;
    std::vector<std::string> trace;
};

/// Block index per state of a complete LTS under strong bisimilarity with
/// predicates, computed by Kanellakis-Smolka refinement.
std::vector<std::size_t> bisimulation_classes(const LTS &lts);

/// Disjoint union of two LTSs; the second root sits at `offset`.
LTS lts_union(const LTS &a, const LTS &b, std::size_t &offset);

Verdict bisimilar(Engine &engine, const Term &t, const Term &u, const StepBudget &budget = {});

bool n_bisimilar(Engine &engine, const Term &t, const Term &u, std::size_t n);

}  // namespace pregax
