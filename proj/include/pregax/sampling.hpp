#pragma once

// Closed-term generators used by selftest, the test suites and the
// acceptance binary.

#include <random>
#include <vector>

#include "pregax/spec.hpp"

namespace pregax::sampling {

struct GenOptions {
    bool user_ops = true;
    bool restriction = false;
    bool projection = false;
    bool actions_only_user = false;  // skip built-in prefix/choice/witnesses
};

struct Constructor {
    Symbol sym;
    std::size_t arity;
};

inline std::vector<Constructor> constructors(const PregSystem &s, const GenOptions &o) {
    std::vector<Constructor> out;
    if (!o.actions_only_user) {
        out.push_back({Symbol::delta(), 0});
        for (const auto &[p, _] : s.predicates) out.push_back({Symbol::witness(p), 0});
        for (const auto &a : s.actions)
            if (a != kClockAction) out.push_back({Symbol::prefix(a), 1});
        out.push_back({Symbol::choice(), 2});
    }
    if (o.user_ops)
        for (const auto &[n, op] : s.ops) out.push_back({Symbol::op(n, op.arity), op.arity});
    if (o.restriction) {
        std::vector<Action> acts;
        for (const auto &a : s.actions)
            if (a != kClockAction) acts.push_back(a);
        std::vector<Predicate> preds;
        for (const auto &[p, _] : s.predicates) preds.push_back(p);
        for (std::size_t am = 0; am < (std::size_t{1} << acts.size()); ++am)
            for (std::size_t pm = 0; pm < (std::size_t{1} << preds.size()); ++pm) {
                ActionSet B;
                PredicateSet Q;
                for (std::size_t i = 0; i < acts.size(); ++i)
                    if (am >> i & 1) B.insert(acts[i]);
                for (std::size_t i = 0; i < preds.size(); ++i)
                    if (pm >> i & 1) Q.insert(preds[i]);
                out.push_back({Symbol::restrict(B, Q), 1});
            }
    }
    return out;
}

inline Term build(const Constructor &c, std::vector<Term> args) {
    switch (c.sym.kind) {
    case SymbolKind::delta: return Term::delta();
    case SymbolKind::witness: return Term::witness(c.sym.name);
    case SymbolKind::prefix: return Term::prefix(c.sym.name, args[0]);
    case SymbolKind::choice: return Term::choice(args[0], args[1]);
    case SymbolKind::restrict:
        return Term::restrict(c.sym.forbidden_actions, c.sym.forbidden_predicates, args[0]);
    default: return Term::app(c.sym, std::move(args));
    }
}

/// Every closed term of height <= max_height, ordered by height then
/// construction order.
inline std::vector<Term> enumerate_terms(const PregSystem &s, std::size_t max_height, const GenOptions &o = {}) {
    auto cons = constructors(s, o);
    std::vector<std::vector<Term>> by_height(max_height + 1);
    std::vector<Term> upto;  // all terms of height < h
    for (const auto &c : cons)
        if (c.arity == 0) by_height[0].push_back(build(c, {}));
    for (std::size_t h = 1; h <= max_height; ++h) {
        upto.insert(upto.end(), by_height[h - 1].begin(), by_height[h - 1].end());
        const std::size_t fresh_from = upto.size() - by_height[h - 1].size();
        for (const auto &c : cons) {
            if (c.arity == 0) continue;
            // tuples over `upto` with at least one component of height h-1
            std::vector<std::size_t> idx(c.arity, 0);
            while (true) {
                bool has_fresh = false;
                for (auto i : idx) has_fresh |= i >= fresh_from;
                if (has_fresh) {
                    std::vector<Term> args;
                    for (auto i : idx) args.push_back(upto[i]);
                    by_height[h].push_back(build(c, std::move(args)));
                }
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == upto.size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
        }
    }
    std::vector<Term> all;
    for (auto &v : by_height) all.insert(all.end(), v.begin(), v.end());
    return all;
}

/// A random closed term of height <= h.
inline Term random_term(std::mt19937 &rng, const PregSystem &s, std::size_t h, const GenOptions &o = {}) {
    auto cons = constructors(s, o);
    std::vector<Constructor> leaves, inner;
    for (auto &c : cons) (c.arity == 0 ? leaves : inner).push_back(c);
    auto pick = [&](const std::vector<Constructor> &v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    Term t;
    if (h == 0 || inner.empty() || std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        t = build(pick(leaves), {});
    } else {
        Constructor c = pick(inner);
        std::vector<Term> args;
        for (std::size_t i = 0; i < c.arity; ++i) args.push_back(random_term(rng, s, h - 1, o));
        t = build(c, std::move(args));
    }
    if (o.projection && h > 0 && std::uniform_int_distribution<int>(0, 5)(rng) == 0) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        t = Term::project(t, hourglass(n));
    }
    return t;
}

}  // namespace pregax::sampling
