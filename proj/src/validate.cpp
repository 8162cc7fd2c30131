#include <algorithm>
#include <sstream>

#include "pregax/spec.hpp"

namespace pregax {

namespace {

std::string rule_location(const PregRule &r) {
    std::string loc = "rule " + (r.label.empty() ? r.principal.name : r.label);
    if (r.line) loc += " (line " + std::to_string(r.line) + ")";
    return loc;
}

void add(ValidationReport &rep, Diagnostic::Severity sev, std::string code, std::string loc, std::string msg) {
    rep.items.push_back(Diagnostic{sev, std::move(code), std::move(loc), std::move(msg)});
}

void check_term_symbols(const Term &t, const PregSystem &s, ValidationReport &rep, const std::string &loc) {
    if (t.is_var()) return;
    const Symbol &sym = t.symbol();
    switch (sym.kind) {
    case SymbolKind::prefix:
        if (!s.actions.count(sym.name))
            add(rep, Diagnostic::Severity::error, "undeclared-action", loc, "undeclared action '" + sym.name + "'");
        break;
    case SymbolKind::witness:
        if (!s.predicates.count(sym.name))
            add(rep, Diagnostic::Severity::error, "undeclared-predicate", loc,
                "undeclared predicate '" + sym.name + "'");
        break;
    case SymbolKind::op: {
        auto it = s.ops.find(sym.name);
        if (it == s.ops.end()) {
            add(rep, Diagnostic::Severity::error, "undeclared-operation", loc,
                "undeclared operation '" + sym.name + "'");
        } else if (it->second.arity != t.args().size()) {
            add(rep, Diagnostic::Severity::error, "arity-mismatch", loc,
                "operation '" + sym.name + "' used with " + std::to_string(t.args().size()) + " arguments");
        }
        break;
    }
    default: break;
    }
    for (const auto &a : t.args()) check_term_symbols(a, s, rep, loc);
}

void validate_rule(const PregRule &r, const PregSystem &s, ValidationReport &rep) {
    using S = Diagnostic::Severity;
    const std::string loc = rule_location(r);
    if (r.principal.kind == SymbolKind::op) {
        auto op = s.ops.find(r.principal.name);
        if (op == s.ops.end()) {
            add(rep, S::error, "undeclared-operation", loc, "undeclared operation '" + r.principal.name + "'");
        } else if (op->second.arity != r.arity()) {
            add(rep, S::error, "arity-mismatch", loc,
                "operation '" + r.principal.name + "' has arity " + std::to_string(op->second.arity) + ", rule has " +
                    std::to_string(r.arity()) + " arguments");
        }
    }

    // pairwise distinct x_1..x_l and y_ij
    std::map<std::string, int> seen;
    for (const auto &x : r.sources) ++seen[x];
    for (const auto &p : r.pos_trans) ++seen[p.target];
    for (const auto &[v, n] : seen)
        if (n > 1)
            add(rep, S::error, "variable-clash", loc,
                "variable '" + v + "' occurs " + std::to_string(n) +
                    " times among source and premise-target variables; they must be pairwise distinct");

    auto in_range = [&](std::size_t pos) { return pos >= 1 && pos <= r.arity(); };
    auto bad_pos = [&](std::size_t pos) {
        add(rep, S::error, "position-range", loc,
            "premise position " + std::to_string(pos) + " outside 1.." + std::to_string(r.arity()));
    };
    for (const auto &p : r.pos_trans) {
        if (!in_range(p.pos)) bad_pos(p.pos);
        if (!s.actions.count(p.action))
            add(rep, S::error, "undeclared-action", loc, "undeclared action '" + p.action + "'");
    }
    for (const auto &p : r.pos_pred) {
        if (!in_range(p.pos)) bad_pos(p.pos);
        if (!s.predicates.count(p.pred))
            add(rep, S::error, "undeclared-predicate", loc, "undeclared predicate '" + p.pred + "'");
    }
    for (const auto &[pos, as] : r.neg_trans) {
        if (!in_range(pos)) bad_pos(pos);
        for (const auto &a : as)
            if (!s.actions.count(a)) add(rep, S::error, "undeclared-action", loc, "undeclared action '" + a + "'");
    }
    for (const auto &[pos, ps] : r.neg_pred) {
        if (!in_range(pos)) bad_pos(pos);
        for (const auto &p : ps)
            if (!s.predicates.count(p))
                add(rep, S::error, "undeclared-predicate", loc, "undeclared predicate '" + p + "'");
    }

    if (r.is_transition) {
        if (!s.actions.count(r.action))
            add(rep, S::error, "undeclared-action", loc, "undeclared action '" + r.action + "'");
        check_term_symbols(r.target, s, rep, loc);
        for (const auto &v : r.target.variables())
            if (!seen.count(v))
                add(rep, S::error, "unbound-variable", loc,
                    "target variable '" + v + "' is neither a source nor a premise target");
    } else if (!s.predicates.count(r.predicate)) {
        add(rep, S::error, "undeclared-predicate", loc, "undeclared predicate '" + r.predicate + "'");
    }
}

/// Premise formulas keyed by argument position so that rules with different
/// variable names can be compared.
std::set<std::string> position_formulas(const PregRule &r) {
    std::set<std::string> out;
    for (const auto &p : r.pos_trans) out.insert("T" + std::to_string(p.pos) + ":" + p.action);
    for (const auto &p : r.pos_pred) out.insert("P" + std::to_string(p.pos) + ":" + p.pred);
    for (const auto &[pos, as] : r.neg_trans)
        for (const auto &a : as) out.insert("N" + std::to_string(pos) + ":" + a);
    for (const auto &[pos, ps] : r.neg_pred)
        for (const auto &p : ps) out.insert("Q" + std::to_string(pos) + ":" + p);
    return out;
}

}  // namespace

std::string to_string(Diagnostic::Severity s) {
    switch (s) {
    case Diagnostic::Severity::error: return "error";
    case Diagnostic::Severity::warning: return "warning";
    case Diagnostic::Severity::info: return "info";
    }
    return "?";
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const Diagnostic &d) {
        return d.severity == Diagnostic::Severity::error;
    }));
}

std::vector<std::string> ValidationReport::error_codes() const {
    std::vector<std::string> out;
    for (const auto &d : items)
        if (d.severity == Diagnostic::Severity::error) out.push_back(d.code);
    return out;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto &d : items) out << to_string(d.severity) << ":" << d.location << ":" << d.message << "\n";
    return out.str();
}

ValidationReport validate_preg(const PregSystem &s) {
    using S = Diagnostic::Severity;
    ValidationReport rep;
    if (s.actions.empty()) add(rep, S::error, "empty-actions", "system " + s.name, "the action set must be nonempty");
    if (s.actions.count(kClockAction) && !s.projection)
        add(rep, S::error, "reserved-name", "actions", "action '" + kClockAction + "' is reserved for the projection clock");
    for (const auto &a : s.actions)
        if (is_keyword(a)) add(rep, S::error, "reserved-name", "actions", "'" + a + "' is a keyword");
    for (const auto &[n, p] : s.predicates) {
        const std::string loc = "predicate " + n;
        if (is_keyword(n)) add(rep, S::error, "reserved-name", loc, "'" + n + "' is a keyword");
        if (s.ops.count(n)) add(rep, S::error, "duplicate-declaration", loc, "'" + n + "' is also an operation");
        if (!p.implicit && !p.allowed_actions.empty())
            add(rep, S::error, "invalid-predicate", loc, "explicit predicates carry no allowed actions");
        for (const auto &a : p.allowed_actions)
            if (!s.actions.count(a)) add(rep, S::error, "undeclared-action", loc, "undeclared action '" + a + "'");
        if (p.implicit && p.allowed_actions.empty())
            add(rep, S::info, "empty-allowed-actions", loc,
                "implicit predicate with no allowed actions never propagates through prefixes");
    }
    for (const auto &[n, op] : s.ops)
        if (is_keyword(n)) add(rep, S::error, "reserved-name", "op " + n, "'" + n + "' is a keyword");

    for (const auto &r : s.rules) validate_rule(r, s, rep);

    for (const auto &[n, ann] : s.annotations) {
        if (!s.ops.count(n)) continue;
        auto rules = s.op_rules(n);
        if (ann.smooth) {
            for (const auto *r : rules) {
                auto c = classify_smooth(*r);
                for (const auto &why : c.reasons)
                    add(rep, S::error, "not-smooth", rule_location(*r), "declared smooth but " + why);
            }
        }
        if (ann.distinctive) {
            bool all_smooth = std::all_of(rules.begin(), rules.end(), [](const PregRule *r) {
                return classify_smooth(*r).ok;
            });
            if (all_smooth) {
                auto c = classify_distinctive(n, rules);
                for (const auto &why : c.reasons)
                    add(rep, S::error, "not-distinctive", "op " + n, "declared distinctive but " + why);
            }
        }
    }

    if (rep.ok())
        for (auto &w : check_implicit_consistency(s)) rep.items.push_back(std::move(w));
    return rep;
}

Classification classify_smooth(const PregRule &r) {
    Classification c;
    auto fail = [&](std::string why) {
        c.ok = false;
        c.reasons.push_back(std::move(why));
    };
    std::set<std::string> target_vars;
    if (r.is_transition) target_vars = r.target.variables();
    for (std::size_t i = 1; i <= r.arity(); ++i) {
        std::size_t npos = r.trans_at(i).size() + r.preds_at(i).size();
        const std::string p = "position " + std::to_string(i);
        if (npos > 0 && r.tests_negatively(i)) fail(p + " is tested positively and negatively");
        if (npos > 1) fail(p + " has " + std::to_string(npos) + " positive premises");
        if (!r.neg_trans_at(i).empty() && !r.neg_pred_at(i).empty())
            fail(p + " is tested negatively for both actions and predicates");
        if (npos > 0 && target_vars.count(r.source(i)))
            fail("positively tested variable '" + r.source(i) + "' occurs in the target");
    }
    return c;
}

std::set<std::size_t> positive_positions(const std::vector<const PregRule *> &rules) {
    std::set<std::size_t> out;
    for (const auto *r : rules) {
        for (const auto &p : r->pos_trans) out.insert(p.pos);
        for (const auto &p : r->pos_pred) out.insert(p.pos);
    }
    return out;
}

Classification classify_distinctive(const std::string &op, const std::vector<const PregRule *> &rules) {
    Classification c;
    auto fail = [&](std::string why) {
        c.ok = false;
        c.reasons.push_back(std::move(why));
    };
    for (const auto *r : rules)
        if (!classify_smooth(*r).ok) fail("rule " + (r->label.empty() ? op : r->label) + " is not smooth");
    if (!c.ok) return c;

    for (std::size_t i : positive_positions(rules)) {
        std::size_t n = static_cast<std::size_t>(
            std::count_if(rules.begin(), rules.end(), [&](const PregRule *r) { return r->tests_positively(i); }));
        if (n != rules.size())
            fail("position " + std::to_string(i) + " is tested positively by " + std::to_string(n) + " of " +
                 std::to_string(rules.size()) + " rules");
    }
    for (std::size_t a = 0; a < rules.size(); ++a) {
        for (std::size_t b = a + 1; b < rules.size(); ++b) {
            const PregRule &r1 = *rules[a];
            const PregRule &r2 = *rules[b];
            bool separated = false;
            for (std::size_t i = 1; i <= r1.arity() && !separated; ++i) {
                auto t1 = r1.trans_at(i), t2 = r2.trans_at(i);
                auto p1 = r1.preds_at(i), p2 = r2.preds_at(i);
                if (!t1.empty() && !t2.empty()) separated = t1[0].action != t2[0].action;
                else if (!p1.empty() && !p2.empty()) separated = p1[0].pred != p2[0].pred;
                else if ((!t1.empty() && !p2.empty()) || (!p1.empty() && !t2.empty())) separated = true;
            }
            if (!separated) {
                std::string l1 = r1.label.empty() ? "#" + std::to_string(a + 1) : r1.label;
                std::string l2 = r2.label.empty() ? "#" + std::to_string(b + 1) : r2.label;
                fail("rules " + l1 + " and " + l2 + " are not separated by a positive position");
            }
        }
    }
    return c;
}

Classification classify_distinctive(const PregSystem &s, const std::string &op) {
    return classify_distinctive(op, s.op_rules(op));
}

PregSystem disjoint_extend(const PregSystem &g, const PregSystem &g2) {
    PregSystem out = g;
    if (g2.name != "unnamed") out.name = g2.name;
    out.actions.insert(g2.actions.begin(), g2.actions.end());
    for (const auto &[n, p] : g2.predicates) {
        auto it = out.predicates.find(n);
        if (it != out.predicates.end() && !(it->second == p))
            throw ExtensionClash("predicate '" + n + "' is declared differently in the two systems");
        out.predicates[n] = p;
    }
    for (const auto &[n, op] : g2.ops) {
        auto it = out.ops.find(n);
        if (it != out.ops.end() && it->second.arity != op.arity)
            throw ExtensionClash("operation '" + n + "' has different arities in the two systems");
        if (it == out.ops.end()) out.ops[n] = op;
    }
    for (const auto &[n, a] : g2.annotations) out.annotations[n] = a;

    for (const auto &r : g2.rules) {
        if (r.principal.is_builtin()) {
            auto existing = g.rules_for(r.principal);
            if (std::find(existing.begin(), existing.end(), r) == existing.end())
                throw ExtensionClash("new rule for built-in operation " + r.principal.to_string());
            continue;
        }
        if (g.ops.count(r.principal.name)) {
            auto existing = g.op_rules(r.principal.name);
            bool found = std::any_of(existing.begin(), existing.end(), [&](const PregRule *e) { return *e == r; });
            if (!found) throw ExtensionClash("new rule for operation '" + r.principal.name + "' of the base system");
            continue;
        }
        out.rules.push_back(r);
    }
    // the second system must not gain rules for its own operations either
    for (const auto &[n, _] : g2.ops) {
        if (!g.ops.count(n)) continue;
        for (const auto *r : g.op_rules(n)) {
            auto theirs = g2.op_rules(n);
            if (std::none_of(theirs.begin(), theirs.end(), [&](const PregRule *e) { return *e == *r; }))
                throw ExtensionClash("operation '" + n + "' has rules in the base system that the extension lacks");
        }
    }
    for (const auto &e : g2.translation_equations) out.translation_equations.push_back(e);
    out.restriction = g.restriction || g2.restriction;
    out.projection = g.projection || g2.projection;
    out.canonicalize();
    return out;
}

std::vector<Diagnostic> check_implicit_consistency(const PregSystem &s) {
    std::vector<Diagnostic> out;
    const PredicateSet implicit = s.implicit_predicates();
    if (implicit.empty()) return out;

    for (const auto &r : s.rules) {
        if (!r.is_transition || r.principal.kind != SymbolKind::op) continue;
        const std::set<std::string> own = position_formulas(r);
        std::map<std::string, std::size_t> pos_of;
        for (std::size_t i = 1; i <= r.arity(); ++i) pos_of[r.source(i)] = i;

        auto covered = [&](const Predicate &p, const std::set<std::string> &needed) {
            std::set<std::string> avail = own;
            avail.insert(needed.begin(), needed.end());
            for (const auto *q : s.op_rules(r.principal.name)) {
                if (q->is_transition || q->predicate != p) continue;
                auto h = position_formulas(*q);
                if (std::includes(avail.begin(), avail.end(), h.begin(), h.end())) return true;
            }
            return false;
        };
        // a premise about variable v, rewritten to a position when v is a source
        auto lift = [&](const std::string &v, const std::string &kind, const std::string &label) {
            auto it = pos_of.find(v);
            if (it == pos_of.end()) return "Y" + v + ":" + kind + label;
            return kind + std::to_string(it->second) + ":" + label;
        };

        for (const auto &p : implicit) {
            if (!s.allowed_actions(p).count(r.action)) continue;
            const std::string loc = rule_location(r);
            const Term &c = r.target;
            std::vector<std::set<std::string>> ruloids;
            if (c.is_var()) {
                ruloids.push_back({lift(c.var_name(), "P", p)});
            } else {
                std::vector<std::string> zs;
                for (const auto &a : c.args())
                    if (a.is_var()) zs.push_back(a.var_name());
                std::set<std::string> distinct(zs.begin(), zs.end());
                if (zs.size() != c.args().size() || distinct.size() != zs.size()) {
                    out.push_back({Diagnostic::Severity::warning, "unchecked-target", loc,
                                   "unchecked target shape for implicit predicate '" + p + "'"});
                    continue;
                }
                for (const auto &g : s.rules_for(c.symbol())) {
                    if (g.is_transition || g.predicate != p) continue;
                    std::set<std::string> h;
                    for (const auto &q : g.pos_trans) h.insert(lift(zs[q.pos - 1], "T", q.action));
                    for (const auto &q : g.pos_pred) h.insert(lift(zs[q.pos - 1], "P", q.pred));
                    for (const auto &[pos, as] : g.neg_trans)
                        for (const auto &a : as) h.insert(lift(zs[pos - 1], "N", a));
                    for (const auto &[pos, ps] : g.neg_pred)
                        for (const auto &q : ps) h.insert(lift(zs[pos - 1], "Q", q));
                    ruloids.push_back(std::move(h));
                }
            }
            for (const auto &h : ruloids) {
                if (covered(p, h)) continue;
                out.push_back({Diagnostic::Severity::warning, "implicit-consistency", loc,
                               "target may satisfy implicit predicate '" + p + "' without a covering rule for " +
                                   p + "(" + r.principal.name + "(...))"});
                break;
            }
        }
    }
    return out;
}

}  // namespace pregax
