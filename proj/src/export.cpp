#include "pregax/export.hpp"

namespace pregax {

Json lts_json(const LTS &lts) {
    Json states = Json::array(), transitions = Json::array(), preds = Json::array();
    for (std::size_t i = 0; i < lts.states.size(); ++i) {
        states.push_back({{"id", i}, {"term", lts.states[i].to_string()}});
        for (const auto &[a, j] : lts.succ[i]) transitions.push_back({{"from", i}, {"action", a}, {"to", j}});
        for (const auto &p : lts.preds[i]) preds.push_back({{"state", i}, {"predicate", p}});
    }
    return {{"states", states}, {"transitions", transitions}, {"predicates", preds}, {"complete", lts.complete}};
}

Json verdict_json(const Verdict &v) {
    Json j = {{"outcome", to_string(v.outcome)}, {"witness", nullptr}, {"depth", nullptr}};
    if (v.witness) j["witness"] = *v.witness;
    if (v.depth) j["depth"] = *v.depth;
    if (!v.trace.empty()) j["notes"] = v.trace;
    return j;
}

Json equation_json(const Equation &e) {
    Json j = {{"label", e.label}, {"lhs", e.lhs.to_string()}, {"rhs", e.rhs.to_string()}};
    if (!e.condition.empty()) j["condition"] = e.condition;
    return j;
}

Json trace_json(const ProofTrace &t) {
    Json steps = Json::array();
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
        const auto &s = t.steps[k];
        const char *kind = s.kind == ProofStep::Kind::law ? "law" : s.kind == ProofStep::Kind::reorder ? "reorder" : "saturate";
        Json j = {{"step", k + 1},        {"kind", kind},
                  {"label", s.label},     {"path", path_to_string(s.path)},
                  {"before", s.before.to_string()}, {"after", s.after.to_string()}};
        if (s.kind == ProofStep::Kind::law) {
            Json sub = Json::object();
            for (const auto &[v, term] : s.subst) sub[v] = term.to_string();
            j["equation"] = equation_json(s.equation);
            j["substitution"] = sub;
        }
        steps.push_back(std::move(j));
    }
    return {{"steps", steps}};
}

Json report_json(const ValidationReport &r) {
    Json items = Json::array();
    for (const auto &d : r.items)
        items.push_back({{"severity", to_string(d.severity)}, {"code", d.code}, {"location", d.location}, {"message", d.message}});
    return {{"ok", r.ok()}, {"errors", r.error_count()}, {"diagnostics", items}};
}

namespace {

Json system_json(const AxiomSystem &s) {
    Json eqs = Json::array(), schemas = Json::array();
    for (const auto &e : s.equations) eqs.push_back(equation_json(e));
    for (const auto &x : s.schemas) schemas.push_back({{"label", x.label}, {"text", x.text}});
    return {{"equations", eqs}, {"schemas", schemas}};
}

}  // namespace

Json axioms_json(const GeneratedAxioms &g, std::optional<std::size_t> enumerate_bound) {
    Json laws = Json::array();
    for (const auto &l : g.laws) {
        Json j = {{"family", to_string(l.family)}, {"op", l.op}, {"equation", equation_json(l.equation)}};
        Json prov = Json::object();
        if (l.family == GeneratedLaw::Family::distributivity) prov["position"] = l.position;
        else {
            prov["rule"] = l.rule;
            prov["line"] = l.line;
        }
        j["provenance"] = prov;
        laws.push_back(std::move(j));
    }
    Json deadlock = Json::array();
    for (const auto &d : g.deadlock) {
        Json j = {{"op", d.op}, {"arity", d.arity}, {"schema", d.text()}};
        Json rules = Json::array();
        for (const auto &r : d.rules) rules.push_back(r.label);
        j["rules"] = rules;
        if (enumerate_bound) {
            Json inst = Json::array();
            for (const auto &e : enumerate_deadlock(d, *enumerate_bound)) inst.push_back(equation_json(e));
            j["instances"] = inst;
        }
        deadlock.push_back(std::move(j));
    }
    Json translation = Json::array();
    for (const auto &t : g.translation)
        translation.push_back({{"kind", to_string(t.kind)},
                               {"original", t.original},
                               {"derived", t.derived},
                               {"equation", equation_json(t.equation)}});
    Json warnings = Json::array();
    for (const auto &d : g.warnings)
        warnings.push_back({{"severity", to_string(d.severity)}, {"code", d.code}, {"location", d.location}, {"message", d.message}});
    return {{"soundness_conditional", g.soundness_conditional},
            {"warnings", warnings},
            {"base", system_json(g.base)},
            {"laws", laws},
            {"deadlock", deadlock},
            {"translation", translation},
            {"aip", system_json(g.aip)}};
}

}  // namespace pregax
