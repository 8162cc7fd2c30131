#include "pregax/transform.hpp"

#include <algorithm>
#include <set>

namespace pregax {

namespace {

std::string fresh_op_name(const PregSystem &s, const std::string &base) {
    std::string name = base;
    for (int k = 2; s.ops.count(name) || s.predicates.count(name); ++k) name = base + "_" + std::to_string(k);
    return name;
}

std::vector<Term> source_vars(std::size_t n, const std::string &prefix = "x") {
    std::vector<Term> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(Term::var(prefix + std::to_string(i)));
    return out;
}

// Renames premise targets to y1..ym so that fresh sources x1.. cannot clash.
PregRule rename_targets(const PregRule &r) {
    PregRule out = r;
    Substitution ren;
    std::size_t k = 0;
    for (auto &p : out.pos_trans) {
        std::string y = "y" + std::to_string(++k);
        ren[p.target] = Term::var(y);
        p.target = y;
    }
    if (out.is_transition) out.target = apply_subst(out.target, ren);
    return out;
}

bool mentions(const Term &t, const std::string &var) { return t.variables().count(var) > 0; }

}  // namespace

std::size_t barb(const PregRule &r, std::size_t pos) {
    std::size_t n = r.trans_at(pos).size() + r.preds_at(pos).size();
    n += r.neg_trans_at(pos).empty() ? 0 : 1;
    n += r.neg_pred_at(pos).empty() ? 0 : 1;
    if (r.is_transition && mentions(r.target, r.source(pos))) ++n;
    return n;
}

bool smooth_and_distinctive(const PregSystem &s, const std::string &op) {
    auto rules = s.op_rules(op);
    for (const auto *r : rules)
        if (!classify_smooth(*r).ok) return false;
    return classify_distinctive(op, rules).ok;
}

SmoothenResult smoothen(const PregSystem &s, const std::string &op) {
    auto it = s.ops.find(op);
    if (it == s.ops.end()) throw TransformError("unknown operation '" + op + "'");
    auto rules = s.op_rules(op);
    if (std::all_of(rules.begin(), rules.end(), [](const PregRule *r) { return classify_smooth(*r).ok; }))
        throw TransformError("operation '" + op + "' is already smooth");

    const std::size_t l = it->second.arity;
    std::vector<std::size_t> width(l + 1, 0), base(l + 2, 0);
    for (std::size_t i = 1; i <= l; ++i)
        for (const auto *r : rules) width[i] = std::max(width[i], barb(*r, i));
    for (std::size_t i = 1; i <= l; ++i) base[i + 1] = base[i] + width[i];
    const std::size_t arity = base[l + 1];

    SmoothenResult res;
    res.system = s;
    res.derived = fresh_op_name(s, op + "_smooth");
    res.system.add_op(res.derived, arity, Origin::derived_smooth);
    const Symbol derived = Symbol::op(res.derived, arity);

    for (const auto *orig : rules) {
        PregRule r = rename_targets(*orig);
        PregRule q;
        q.principal = derived;
        for (const auto &v : source_vars(arity)) q.sources.push_back(v.var_name());
        q.is_transition = r.is_transition;
        q.action = r.action;
        q.predicate = r.predicate;
        Substitution target_map;
        for (std::size_t i = 1; i <= l; ++i) {
            // copies in role order: action premises, negative actions,
            // predicate premises, negative predicates, target occurrence
            std::size_t next = base[i] + 1;
            for (const auto &p : r.trans_at(i)) q.pos_trans.push_back({next++, p.action, p.target});
            if (!r.neg_trans_at(i).empty()) q.neg_trans[next++] = r.neg_trans_at(i);
            for (const auto &p : r.preds_at(i)) q.pos_pred.push_back({next++, p.pred});
            if (!r.neg_pred_at(i).empty()) q.neg_pred[next++] = r.neg_pred_at(i);
            if (r.is_transition && mentions(r.target, r.source(i)))
                target_map[r.source(i)] = Term::var(q.source(next++));
        }
        if (q.is_transition) q.target = apply_subst(r.target, target_map);
        q.normalize();
        if (!classify_smooth(q).ok) throw TransformError("internal: smoothened rule is not smooth: " + q.to_string());
        res.system.add_rule(std::move(q));
    }
    res.system.canonicalize();

    std::vector<Term> xs = source_vars(l), args;
    for (std::size_t i = 1; i <= l; ++i)
        for (std::size_t k = 0; k < width[i]; ++k) args.push_back(xs[i - 1]);
    res.equation.kind = TranslationEquation::Kind::smoothening;
    res.equation.original = op;
    res.equation.derived = {res.derived};
    res.equation.equation = {"smooth(" + op + ")", Term::op(op, xs), Term::op(res.derived, args), ""};
    res.system.translation_equations.push_back(res.equation);
    return res;
}

DistinctifyResult distinctify(const PregSystem &s, const std::string &op) {
    auto it = s.ops.find(op);
    if (it == s.ops.end()) throw TransformError("unknown operation '" + op + "'");
    auto rules = s.op_rules(op);
    for (const auto *r : rules)
        if (!classify_smooth(*r).ok) throw TransformError("operation '" + op + "' is not smooth");
    const std::size_t l = it->second.arity;
    std::vector<Term> xs = source_vars(l);

    DistinctifyResult res;
    res.system = s;
    res.equation.kind = TranslationEquation::Kind::distinctify;
    res.equation.original = op;
    if (classify_distinctive(op, rules).ok) {
        res.noop = true;
        res.equation.equation = {"distinct(" + op + ")", Term::op(op, xs), Term::op(op, xs), ""};
        return res;
    }

    std::vector<std::vector<const PregRule *>> blocks;
    for (const auto *r : rules) {
        bool placed = false;
        for (auto &b : blocks) {
            b.push_back(r);
            if (classify_distinctive(op, b).ok) {
                placed = true;
                break;
            }
            b.pop_back();
        }
        if (!placed) blocks.push_back({r});
    }

    std::vector<Term> parts;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        std::string name = fresh_op_name(res.system, op + "_d" + std::to_string(k + 1));
        res.system.add_op(name, l, Origin::derived_distinctive);
        res.derived.push_back(name);
        for (const auto *r : blocks[k]) {
            PregRule q = *r;
            q.principal = Symbol::op(name, l);
            res.system.add_rule(std::move(q));
        }
        parts.push_back(Term::op(name, xs));
    }
    res.system.canonicalize();
    res.equation.derived = res.derived;
    res.equation.equation = {"distinct(" + op + ")", Term::op(op, xs), Term::sum(parts), ""};
    res.system.translation_equations.push_back(res.equation);
    return res;
}

SmoothDistinctiveResult make_smooth_distinctive_all(const PregSystem &s) {
    SmoothDistinctiveResult res;
    res.system = s;
    std::set<std::string> covered;
    for (const auto &e : s.translation_equations) covered.insert(e.original);
    std::vector<std::string> ops;
    for (const auto &[n, o] : s.ops)
        if (o.origin == Origin::user) ops.push_back(n);
    for (const auto &op : ops) {
        if (covered.count(op) || smooth_and_distinctive(res.system, op)) continue;
        std::string smooth_op = op;
        auto rules = res.system.op_rules(op);
        if (!std::all_of(rules.begin(), rules.end(), [](const PregRule *r) { return classify_smooth(*r).ok; })) {
            SmoothenResult sm = smoothen(res.system, op);
            res.system = std::move(sm.system);
            res.equations.push_back(sm.equation);
            smooth_op = sm.derived;
        }
        if (!smooth_and_distinctive(res.system, smooth_op)) {
            DistinctifyResult d = distinctify(res.system, smooth_op);
            res.system = std::move(d.system);
            res.equations.push_back(d.equation);
        }
    }
    return res;
}

// -- positivization -----------------------------------------------------------

std::string cannot_predicate(const Action &a) { return "cannot_" + a; }

namespace {

struct FlatPremise {
    bool positive;
    std::size_t pos;
    Action action;
};

std::vector<FlatPremise> flat_premises(const PregRule &r) {
    std::vector<FlatPremise> out;
    for (const auto &p : r.pos_trans) out.push_back({true, p.pos, p.action});
    for (const auto &[pos, as] : r.neg_trans)
        for (const auto &a : as) out.push_back({false, pos, a});
    return out;
}

}  // namespace

ChoiceFunctions::ChoiceFunctions(std::vector<std::size_t> counts) : counts_(std::move(counts)) {
    cur_.assign(counts_.size(), 0);
    done_ = std::any_of(counts_.begin(), counts_.end(), [](std::size_t c) { return c == 0; });
}

bool ChoiceFunctions::next(std::vector<std::size_t> &out) {
    if (done_) return false;
    out = cur_;
    std::size_t k = 0;
    while (k < cur_.size() && ++cur_[k] == counts_[k]) cur_[k++] = 0;
    if (k == cur_.size()) done_ = true;
    return true;
}

PregSystem positivize(const PregSystem &s) {
    if (!s.predicates.empty()) throw TransformError("positivize expects a system without predicates");
    PregSystem out = s;
    out.rules.clear();
    for (const auto &a : s.actions) {
        std::string name = cannot_predicate(a);
        if (s.ops.count(name)) throw TransformError("name '" + name + "' is already an operation");
        out.predicates[name] = {name, false, {}};
    }
    // (1) negative premises become cannot predicates
    for (const auto &r : s.rules) {
        PregRule q = r;
        for (const auto &[pos, as] : r.neg_trans)
            for (const auto &a : as) q.pos_pred.push_back({pos, cannot_predicate(a)});
        q.neg_trans.clear();
        q.normalize();
        out.rules.push_back(std::move(q));
    }
    // (2) cannot rules from choice functions over the a-rules of each operation
    for (const auto &[name, op] : s.ops) {
        auto rules = s.op_rules(name);
        for (const auto &a : s.actions) {
            std::vector<std::vector<FlatPremise>> premises;
            for (const auto *r : rules)
                if (r->is_transition && r->action == a) premises.push_back(flat_premises(*r));
            std::vector<std::size_t> counts;
            for (const auto &p : premises) counts.push_back(p.size());
            ChoiceFunctions phi(counts);
            std::set<std::pair<std::set<std::pair<std::size_t, Action>>, std::set<std::pair<std::size_t, Action>>>>
                seen;
            std::vector<std::size_t> choice;
            while (phi.next(choice)) {
                // neg(x -a-> y) = cannot_a(x); neg(x -/b->) = x -b-> y'
                std::set<std::pair<std::size_t, Action>> cannots, moves;
                for (std::size_t k = 0; k < premises.size(); ++k) {
                    const FlatPremise &p = premises[k][choice[k]];
                    (p.positive ? cannots : moves).insert({p.pos, p.action});
                }
                if (!seen.insert({cannots, moves}).second) continue;
                PregRule q;
                q.principal = Symbol::op(name, op.arity);
                for (std::size_t i = 1; i <= op.arity; ++i) q.sources.push_back("x" + std::to_string(i));
                for (const auto &[pos, b] : cannots) q.pos_pred.push_back({pos, cannot_predicate(b)});
                std::size_t k = 0;
                for (const auto &[pos, b] : moves) q.pos_trans.push_back({pos, b, "y" + std::to_string(++k)});
                q.is_transition = false;
                q.predicate = cannot_predicate(a);
                q.normalize();
                out.rules.push_back(std::move(q));
            }
        }
    }
    out.canonicalize();
    return out;
}

}  // namespace pregax
