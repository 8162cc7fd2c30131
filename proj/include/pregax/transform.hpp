#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pregax/spec.hpp"

namespace pregax {

class TransformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// |A_i| + |P_i| + C1 + C2 for position `pos` of rule `r`.
std::size_t barb(const PregRule &r, std::size_t pos);

struct SmoothenResult {
    PregSystem system;
    std::string derived;
    TranslationEquation equation;
};

/// Adds a smooth f' with one argument per premise role and the equation
/// f(x1..xl) = f'(x1,..,x1,x2,..). Throws TransformError if f is smooth.
SmoothenResult smoothen(const PregSystem &s, const std::string &op);

struct DistinctifyResult {
    PregSystem system;
    std::vector<std::string> derived;  // empty for a no-op
    TranslationEquation equation;
    bool noop = false;
};

/// Greedy first-fit partition of the rules of a smooth f into distinctive
/// blocks f_d1..f_dn, with f(x) = f_d1(x) + ... + f_dn(x).
DistinctifyResult distinctify(const PregSystem &s, const std::string &op);

struct SmoothDistinctiveResult {
    PregSystem system;
    std::vector<TranslationEquation> equations;  // added in this run
};

/// Every user operation gets a smooth and distinctive realization.
/// Operations already covered by a translation equation are skipped.
SmoothDistinctiveResult make_smooth_distinctive_all(const PregSystem &s);

/// True when every rule of `op` is smooth and the rule set is distinctive.
bool smooth_and_distinctive(const PregSystem &s, const std::string &op);

/// Name of the predicate used for "cannot perform a".
std::string cannot_predicate(const Action &a);

/// Replaces negative transition premises by explicit cannot predicates and
/// adds their defining rules. Input must declare no predicates.
PregSystem positivize(const PregSystem &s);

/// Enumerates maps choosing one premise index per rule; `counts[k]` is the
/// number of premises of rule k. No rules gives one empty function.
class ChoiceFunctions {
public:
    explicit ChoiceFunctions(std::vector<std::size_t> counts);
    /// Advances to the next function; false once exhausted.
    bool next(std::vector<std::size_t> &out);

private:
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> cur_;
    bool done_ = false;
};

}  // namespace pregax
