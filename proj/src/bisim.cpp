#include "pregax/bisim.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace pregax {

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::equal: return "Equal";
    case Outcome::not_equal: return "NotEqual";
    case Outcome::unknown: return "Unknown";
    }
    return "?";
}

LTS lts_union(const LTS &a, const LTS &b, std::size_t &offset) {
    LTS u;
    offset = a.states.size();
    u.states = a.states;
    u.succ = a.succ;
    u.preds = a.preds;
    u.expanded = a.expanded;
    for (std::size_t i = 0; i < b.states.size(); ++i) {
        u.states.push_back(b.states[i]);
        auto edges = b.succ[i];
        for (auto &e : edges) e.second += offset;
        u.succ.push_back(std::move(edges));
        u.preds.push_back(b.preds[i]);
        u.expanded.push_back(b.expanded[i]);
    }
    // index maps a term to its first occurrence; states of the second part may repeat terms
    for (std::size_t i = u.states.size(); i-- > 0;) u.index[u.states[i]] = i;
    u.complete = a.complete && b.complete;
    return u;
}

namespace {

// Partition by predicate sets, numbered in order of first occurrence.
std::vector<std::size_t> initial_partition(const LTS &lts) {
    std::map<PredicateSet, std::size_t> ids;
    std::vector<std::size_t> block(lts.states.size());
    for (std::size_t i = 0; i < block.size(); ++i)
        block[i] = ids.emplace(lts.preds[i], ids.size()).first->second;
    return block;
}

// One round of full signature refinement; used for the level-wise witness.
std::vector<std::size_t> refine_once(const LTS &lts, const std::vector<std::size_t> &block) {
    using Sig = std::pair<std::size_t, std::set<std::pair<Action, std::size_t>>>;
    std::map<Sig, std::size_t> ids;
    std::vector<std::size_t> out(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) {
        Sig s{block[i], {}};
        for (const auto &[a, j] : lts.succ[i]) s.second.insert({a, block[j]});
        out[i] = ids.emplace(std::move(s), ids.size()).first->second;
    }
    return out;
}

std::size_t count_blocks(const std::vector<std::size_t> &block) {
    return block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;
}

std::string join_set(const PredicateSet &s) {
    std::string out;
    for (const auto &p : s) out += (out.empty() ? "" : ",") + p;
    return out;
}

std::string predicate_witness(const PredicateSet &l, const PredicateSet &r) {
    for (const auto &p : l)
        if (!r.count(p)) return "predicate " + p + " (left only)";
    for (const auto &p : r)
        if (!l.count(p)) return "predicate " + p + " (right only)";
    return "predicates {" + join_set(l) + "} vs {" + join_set(r) + "}";
}

// Distinguishing path between states s and t of `lts`, given the level
// partitions levels[0..k] with levels[k][s] != levels[k][t].
std::string lts_witness(const LTS &lts, const std::vector<std::vector<std::size_t>> &levels, std::size_t s,
                        std::size_t t, std::size_t k, bool swapped = false) {
    if (lts.preds[s] != lts.preds[t])
        return swapped ? predicate_witness(lts.preds[t], lts.preds[s]) : predicate_witness(lts.preds[s], lts.preds[t]);
    // first level where they separate
    std::size_t lvl = 0;
    while (lvl < k && levels[lvl][s] == levels[lvl][t]) ++lvl;
    const auto &prev = levels[lvl - 1];
    for (int side = 0; side < 2; ++side) {
        std::size_t p = side ? t : s, q = side ? s : t;
        bool sw = swapped != (side == 1);
        for (const auto &[a, p2] : lts.succ[p]) {
            bool matched = false;
            std::size_t best = lts.states.size();
            std::size_t best_level = 0;
            for (const auto &[b, q2] : lts.succ[q]) {
                if (b != a) continue;
                if (prev[p2] == prev[q2]) {
                    matched = true;
                    break;
                }
                std::size_t agree = 0;
                while (agree < lvl - 1 && levels[agree][p2] == levels[agree][q2]) ++agree;
                if (best == lts.states.size() || agree > best_level) {
                    best = q2;
                    best_level = agree;
                }
            }
            if (matched) continue;
            if (best == lts.states.size()) return "action " + a + (sw ? " (right only)" : " (left only)");
            return a + " . " + lts_witness(lts, levels, p2, best, lvl - 1, sw);
        }
    }
    return "unexplained difference";
}

struct PairKey {
    Term t, u;
    std::size_t n;
    bool operator<(const PairKey &o) const { return std::tie(t, u, n) < std::tie(o.t, o.u, o.n); }
};

class Approximation {
public:
    explicit Approximation(Engine &e) : e_(e) {}

    bool holds(const Term &t, const Term &u, std::size_t n) {
        if (t == u) return true;
        if (e_.predicates_of(t) != e_.predicates_of(u)) return false;
        if (n == 0) return true;
        PairKey key{t, u, n};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool ok = covers(t, u, n) && covers(u, t, n);
        memo_.emplace(std::move(key), ok);
        return ok;
    }

    // Assumes !holds(t, u, n).
    std::string witness(const Term &t, const Term &u, std::size_t n, bool swapped = false) {
        const auto &pt = e_.predicates_of(t), &pu = e_.predicates_of(u);
        if (pt != pu) return swapped ? predicate_witness(pu, pt) : predicate_witness(pt, pu);
        for (int side = 0; side < 2; ++side) {
            const Term &p = side ? u : t, &q = side ? t : u;
            bool sw = swapped != (side == 1);
            Successors ps = e_.outgoing(p), qs = e_.outgoing(q);
            for (const auto &[a, p2] : ps) {
                bool any = false, matched = false;
                for (const auto &[b, q2] : qs) {
                    if (b != a) continue;
                    any = true;
                    if (holds(p2, q2, n - 1)) {
                        matched = true;
                        break;
                    }
                }
                if (matched) continue;
                if (!any) return "action " + a + (sw ? " (right only)" : " (left only)");
                // pick the a-successor that agrees longest
                const Term *best = nullptr;
                std::size_t best_level = 0;
                for (const auto &[b, q2] : qs) {
                    if (b != a) continue;
                    std::size_t agree = 0;
                    while (agree + 1 < n && holds(p2, q2, agree)) ++agree;
                    if (!best || agree > best_level) {
                        best = &q2;
                        best_level = agree;
                    }
                }
                std::size_t lvl = 0;
                while (holds(p2, *best, lvl)) ++lvl;
                return a + " . " + witness(p2, *best, lvl, sw);
            }
        }
        return "unexplained difference";
    }

private:
    bool covers(const Term &t, const Term &u, std::size_t n) {
        Successors ts = e_.outgoing(t), us = e_.outgoing(u);
        for (const auto &[a, t2] : ts) {
            bool found = false;
            for (const auto &[b, u2] : us)
                if (a == b && holds(t2, u2, n - 1)) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    }

    Engine &e_;
    std::map<PairKey, bool> memo_;
};

}  // namespace

std::vector<std::size_t> bisimulation_classes(const LTS &lts) {
    std::vector<std::size_t> block = initial_partition(lts);
    const std::size_t n = lts.states.size();
    // reverse edges per action
    std::map<Action, std::vector<std::vector<std::size_t>>> rev;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto &[a, j] : lts.succ[i]) {
            auto &r = rev[a];
            if (r.empty()) r.resize(n);
            r[j].push_back(i);
        }
    std::vector<std::vector<std::size_t>> members(count_blocks(block));
    for (std::size_t i = 0; i < n; ++i) members[block[i]].push_back(i);

    // Splitters (action, block) in order of action then block id; a pass
    // without any split means the partition is stable.
    bool changed = true;
    std::vector<std::size_t> mark(n, 0);
    std::size_t stamp = 0;
    while (changed) {
        changed = false;
        for (const auto &[a, r] : rev) {
            for (std::size_t sp = 0; sp < members.size(); ++sp) {
                ++stamp;
                std::vector<std::size_t> hit;
                for (std::size_t j : members[sp])
                    for (std::size_t i : r[j])
                        if (mark[i] != stamp) {
                            mark[i] = stamp;
                            hit.push_back(i);
                        }
                std::map<std::size_t, std::vector<std::size_t>> by_block;
                for (std::size_t i : hit) by_block[block[i]].push_back(i);
                for (auto &[b, inside] : by_block) {
                    if (inside.size() == members[b].size()) continue;
                    std::size_t nb = members.size();
                    members.emplace_back();
                    for (std::size_t i : inside) block[i] = nb;
                    std::vector<std::size_t> rest;
                    for (std::size_t i : members[b])
                        (block[i] == nb ? members[nb] : rest).push_back(i);
                    members[b] = std::move(rest);
                    changed = true;
                }
            }
        }
    }
    std::map<std::size_t, std::size_t> ren;
    for (auto &b : block) b = ren.emplace(b, ren.size()).first->second;
    return block;
}

Verdict bisimilar(Engine &engine, const Term &t, const Term &u, const StepBudget &budget) {
    Verdict v;
    LTS lt = engine.build_lts(t, budget);
    LTS lu = lt.complete ? engine.build_lts(u, budget) : LTS{};
    if (lt.complete && lu.complete) {
        std::size_t off = 0;
        LTS un = lts_union(lt, lu, off);
        auto classes = bisimulation_classes(un);
        v.trace.push_back("partition refinement on " + std::to_string(un.states.size()) + " states, " +
                          std::to_string(count_blocks(classes)) + " blocks");
        if (classes[0] == classes[off]) {
            v.outcome = Outcome::equal;
            return v;
        }
        std::vector<std::vector<std::size_t>> levels{initial_partition(un)};
        while (levels.back()[0] == levels.back()[off]) levels.push_back(refine_once(un, levels.back()));
        v.outcome = Outcome::not_equal;
        v.depth = levels.size() - 1;
        v.witness = lts_witness(un, levels, 0, off, levels.size() - 1);
        return v;
    }
    v.trace.push_back("state budget " + std::to_string(budget.max_states) +
                      " exceeded; falling back to bounded approximation");
    Approximation approx(engine);
    for (std::size_t n = 0; n <= budget.max_depth; ++n) {
        if (!approx.holds(t, u, n)) {
            v.outcome = Outcome::not_equal;
            v.depth = n;
            v.witness = approx.witness(t, u, n);
            return v;
        }
    }
    v.outcome = Outcome::unknown;
    v.depth = budget.max_depth;
    v.trace.push_back("bisimilar up to depth " + std::to_string(budget.max_depth));
    return v;
}

bool n_bisimilar(Engine &engine, const Term &t, const Term &u, std::size_t n) {
    Approximation approx(engine);
    return approx.holds(t, u, n);
}

}  // namespace pregax
