#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pregax/axiomgen.hpp"

namespace pregax {

struct SelftestResult {
    std::size_t equations = 0;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::size_t undecided = 0;  // oracle ran out of states
    std::vector<std::string> failing;  // `label: lhs-instance vs rhs-instance`
};

/// Checks `samples` random closed instances of every generated equation,
/// the base and projection equations, and the deadlock instances up to
/// `deadlock_bound` against the operational oracle.
SelftestResult selftest(const Axiomatization &ax, std::size_t samples, std::uint32_t seed,
                        std::size_t deadlock_bound = 2);

}  // namespace pregax
