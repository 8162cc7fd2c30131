#include "pregax/semantics.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace pregax {

std::size_t LTS::transition_count() const {
    std::size_t n = 0;
    for (const auto &s : succ) n += s.size();
    return n;
}

Engine::Engine(PregSystem s) : sys_(std::move(s)) {}

const std::vector<PregRule> &Engine::rules_for(const Symbol &s) {
    auto it = rules_.find(s);
    if (it == rules_.end()) it = rules_.emplace(s, sys_.rules_for(s)).first;
    return it->second;
}

std::vector<Substitution> Engine::rule_matches(const PregRule &r, const std::vector<Term> &args) {
    std::vector<Substitution> out;
    if (args.size() != r.arity()) return out;
    Substitution base;
    for (std::size_t i = 0; i < args.size(); ++i) base[r.sources[i]] = args[i];

    // predicate and negative premises first: they do not bind anything
    for (const auto &p : r.pos_pred)
        if (!predicates_of(args[p.pos - 1]).count(p.pred)) return out;
    for (const auto &[pos, ps] : r.neg_pred) {
        const auto &have = predicates_of(args[pos - 1]);
        for (const auto &p : ps)
            if (have.count(p)) return out;
    }
    for (const auto &[pos, as] : r.neg_trans)
        for (const auto &a : as)
            if (can(args[pos - 1], a)) return out;

    // one substitution per choice of successor for each positive premise
    std::vector<std::vector<Term>> choices;
    for (const auto &p : r.pos_trans) {
        std::vector<Term> targets;
        for (const auto &[a, t] : outgoing(args[p.pos - 1]))
            if (a == p.action) targets.push_back(t);
        if (targets.empty()) return out;
        choices.push_back(std::move(targets));
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
        Substitution s = base;
        bool consistent = true;
        for (std::size_t k = 0; k < choices.size() && consistent; ++k) {
            const std::string &y = r.pos_trans[k].target;
            auto [it, fresh] = s.emplace(y, choices[k][idx[k]]);
            if (!fresh && !(it->second == choices[k][idx[k]])) consistent = false;
        }
        if (consistent) out.push_back(std::move(s));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return out;
}

const Successors &Engine::outgoing(const Term &t) {
    if (auto it = out_cache_.find(t); it != out_cache_.end()) return it->second;
    std::vector<std::pair<Action, Term>> result;
    if (!t.is_var()) {
        const auto &rules = rules_for(t.symbol());
        for (const auto &r : rules) {
            if (!r.is_transition) continue;
            for (const auto &s : rule_matches(r, t.args())) result.emplace_back(r.action, apply_subst(r.target, s));
        }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return out_cache_.emplace(t, std::move(result)).first->second;
}

const PredicateSet &Engine::predicates_of(const Term &t) {
    if (auto it = pred_cache_.find(t); it != pred_cache_.end()) return it->second;
    PredicateSet result;
    if (!t.is_var()) {
        const auto &rules = rules_for(t.symbol());
        for (const auto &r : rules) {
            if (r.is_transition || result.count(r.predicate)) continue;
            if (!rule_matches(r, t.args()).empty()) result.insert(r.predicate);
        }
    }
    return pred_cache_.emplace(t, std::move(result)).first->second;
}

bool Engine::can(const Term &t, const Action &a) {
    const auto &out = outgoing(t);
    return std::any_of(out.begin(), out.end(), [&](const auto &p) { return p.first == a; });
}

LTS Engine::build_lts(const Term &t, const StepBudget &b) {
    LTS lts;
    auto intern = [&](const Term &s) {
        auto [it, fresh] = lts.index.emplace(s, lts.states.size());
        if (fresh) {
            lts.states.push_back(s);
            lts.succ.emplace_back();
            lts.preds.push_back(predicates_of(s));
            lts.expanded.push_back(false);
        }
        return it->second;
    };
    intern(t);
    std::deque<std::size_t> queue{0};
    lts.complete = true;
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        const Term s = lts.states[i];
        const auto &out = outgoing(s);
        // stop before adding states beyond the budget
        std::size_t fresh = 0;
        for (const auto &[a, u] : out)
            if (!lts.index.count(u)) ++fresh;
        if (lts.states.size() + fresh > b.max_states) {
            lts.complete = false;
            break;
        }
        for (const auto &[a, u] : out) {
            std::size_t before = lts.states.size();
            std::size_t j = intern(u);
            if (j == before) queue.push_back(j);
            lts.succ[i].emplace_back(a, j);
        }
        lts.expanded[i] = true;
    }
    return lts;
}

std::string lts_to_dot(const LTS &lts) {
    auto escape = [](const std::string &s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out;
    };
    std::ostringstream out;
    out << "digraph lts {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < lts.states.size(); ++i) {
        std::string label = escape(lts.states[i].to_string());
        if (!lts.preds[i].empty()) {
            std::string ps;
            for (const auto &p : lts.preds[i]) ps += (ps.empty() ? "" : ",") + escape(p);
            label += "\\n{" + ps + "}";
        }
        out << "  s" << i << " [label=\"" << label << "\""
            << (i == 0 ? ", style=bold" : "") << "];\n";
    }
    for (std::size_t i = 0; i < lts.states.size(); ++i)
        for (const auto &[a, j] : lts.succ[i]) out << "  s" << i << " -> s" << j << " [label=\"" << escape(a) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace pregax
