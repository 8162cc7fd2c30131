#pragma once

#include <optional>

#include "json.hpp"
#include "pregax/axiomgen.hpp"
#include "pregax/rewrite.hpp"

namespace pregax {

using Json = nlohmann::ordered_json;

/// `states`, `transitions`, `predicates`, `complete`.
Json lts_json(const LTS &lts);
Json verdict_json(const Verdict &v);
Json trace_json(const ProofTrace &t);
Json report_json(const ValidationReport &r);
Json equation_json(const Equation &e);
/// Every law with provenance: the producing rule label and source line for
/// trigger laws, the position for distributivity laws.
Json axioms_json(const GeneratedAxioms &g, std::optional<std::size_t> enumerate_bound = {});

}  // namespace pregax
