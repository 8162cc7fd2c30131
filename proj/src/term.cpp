#include "pregax/core.hpp"

#include <algorithm>
#include <sstream>

namespace pregax {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_symbol(const Symbol &s) {
    std::size_t h = std::hash<int>{}(static_cast<int>(s.kind));
    h = mix(h, std::hash<std::string>{}(s.name));
    h = mix(h, s.arity);
    for (const auto &a : s.forbidden_actions) h = mix(h, std::hash<std::string>{}(a));
    h = mix(h, 0x51);
    for (const auto &p : s.forbidden_predicates) h = mix(h, std::hash<std::string>{}(p));
    return h;
}

std::string join(const std::set<std::string> &xs, const char *sep) {
    std::string out;
    for (const auto &x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

}  // namespace

Symbol Symbol::delta() { return Symbol{SymbolKind::delta, "delta", 0, {}, {}}; }
Symbol Symbol::witness(const Predicate &p) { return Symbol{SymbolKind::witness, p, 0, {}, {}}; }
Symbol Symbol::prefix(const Action &a) { return Symbol{SymbolKind::prefix, a, 1, {}, {}}; }
Symbol Symbol::choice() { return Symbol{SymbolKind::choice, "+", 2, {}, {}}; }
Symbol Symbol::restrict(ActionSet actions, PredicateSet predicates) {
    return Symbol{SymbolKind::restrict, "restrict", 1, std::move(actions), std::move(predicates)};
}
Symbol Symbol::project() { return Symbol{SymbolKind::project, "proj", 2, {}, {}}; }
Symbol Symbol::op(std::string name, std::size_t arity) {
    return Symbol{SymbolKind::op, std::move(name), arity, {}, {}};
}

std::strong_ordering operator<=>(const Symbol &a, const Symbol &b) {
    if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.arity <=> b.arity; c != 0) return c;
    if (a.forbidden_actions != b.forbidden_actions)
        return a.forbidden_actions < b.forbidden_actions ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.forbidden_predicates != b.forbidden_predicates)
        return a.forbidden_predicates < b.forbidden_predicates ? std::strong_ordering::less
                                                               : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Symbol::to_string() const {
    switch (kind) {
    case SymbolKind::delta: return "delta";
    case SymbolKind::witness: return "kappa(" + name + ")";
    case SymbolKind::prefix: return name + ".";
    case SymbolKind::choice: return "+";
    case SymbolKind::restrict:
        return "restrict{" + join(forbidden_actions, ",") + ";" + join(forbidden_predicates, ",") + "}";
    case SymbolKind::project: return "proj";
    case SymbolKind::op: return name;
    }
    return name;
}

std::string to_string(Origin o) {
    switch (o) {
    case Origin::user: return "user";
    case Origin::ftp: return "ftp";
    case Origin::derived_smooth: return "derived-smooth";
    case Origin::derived_distinctive: return "derived-distinctive";
    case Origin::derived_cannot: return "derived-cannot";
    }
    return "user";
}

struct Term::Node {
    bool is_var = false;
    std::string var;
    Symbol sym;
    std::vector<Term> args;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t height = 0;
    bool closed = true;
};

Term::Term() : Term(Term::delta()) {}

Term Term::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->hash = mix(0xabcdefULL, std::hash<std::string>{}(name));
    n->var = std::move(name);
    n->closed = false;
    return Term(std::move(n));
}

Term Term::app(Symbol sym, std::vector<Term> args) {
    if (args.size() != sym.arity)
        throw std::invalid_argument("arity mismatch for " + sym.to_string() + ": expected " +
                                    std::to_string(sym.arity) + " arguments, got " + std::to_string(args.size()));
    auto n = std::make_shared<Node>();
    std::size_t h = hash_symbol(sym);
    std::size_t height = 0;
    for (const auto &a : args) {
        h = mix(h, a.hash());
        n->size += a.size();
        height = std::max(height, a.height() + 1);
        n->closed = n->closed && a.closed();
    }
    n->hash = h;
    n->height = height;
    n->sym = std::move(sym);
    n->args = std::move(args);
    return Term(std::move(n));
}

Term Term::delta() {
    static const Term d = Term(std::shared_ptr<const Node>([] {
        auto n = std::make_shared<Node>();
        n->sym = Symbol::delta();
        n->hash = hash_symbol(n->sym);
        return n;
    }()));
    return d;
}
Term Term::witness(const Predicate &p) { return app(Symbol::witness(p)); }
Term Term::prefix(const Action &a, Term body) { return app(Symbol::prefix(a), {std::move(body)}); }
Term Term::choice(Term lhs, Term rhs) { return app(Symbol::choice(), {std::move(lhs), std::move(rhs)}); }
Term Term::restrict(ActionSet actions, PredicateSet predicates, Term body) {
    return app(Symbol::restrict(std::move(actions), std::move(predicates)), {std::move(body)});
}
Term Term::project(Term body, Term hourglass) {
    return app(Symbol::project(), {std::move(body), std::move(hourglass)});
}
Term Term::op(const std::string &name, std::vector<Term> args) {
    std::size_t n = args.size();
    return app(Symbol::op(name, n), std::move(args));
}
Term Term::sum(const std::vector<Term> &parts) {
    if (parts.empty()) return delta();
    Term acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = choice(acc, parts[i]);
    return acc;
}

bool Term::is_var() const { return node_->is_var; }
const std::string &Term::var_name() const { return node_->var; }
const Symbol &Term::symbol() const {
    if (node_->is_var) throw std::logic_error("variable has no symbol");
    return node_->sym;
}
const std::vector<Term> &Term::args() const { return node_->args; }
bool Term::closed() const { return node_->closed; }
std::size_t Term::hash() const { return node_->hash; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::height() const { return node_->height; }

std::set<std::string> Term::variables() const {
    std::set<std::string> out;
    std::vector<const Term *> stack{this};
    while (!stack.empty()) {
        const Term *t = stack.back();
        stack.pop_back();
        if (t->closed()) continue;
        if (t->is_var()) {
            out.insert(t->var_name());
            continue;
        }
        for (const auto &a : t->args()) stack.push_back(&a);
    }
    return out;
}

bool Term::contains_kind(SymbolKind k) const {
    if (is_var()) return false;
    if (kind() == k) return true;
    return std::any_of(args().begin(), args().end(), [k](const Term &a) { return a.contains_kind(k); });
}

bool operator==(const Term &a, const Term &b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    if (a.is_var() || b.is_var()) return a.is_var() && b.is_var() && a.var_name() == b.var_name();
    if (!(a.symbol() == b.symbol())) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!(a.args()[i] == b.args()[i])) return false;
    return true;
}

std::strong_ordering operator<=>(const Term &a, const Term &b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_var()) return a.var_name() <=> b.var_name();
    if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

bool Signature::contains(const Symbol &s) const {
    switch (s.kind) {
    case SymbolKind::delta: return true;
    case SymbolKind::choice: return s.arity == 2;
    case SymbolKind::witness: return predicates.count(s.name) > 0;
    case SymbolKind::prefix: return actions.count(s.name) > 0;
    case SymbolKind::restrict:
        return restriction &&
               std::includes(actions.begin(), actions.end(), s.forbidden_actions.begin(), s.forbidden_actions.end()) &&
               std::includes(predicates.begin(), predicates.end(), s.forbidden_predicates.begin(),
                             s.forbidden_predicates.end());
    case SymbolKind::project: return projection;
    case SymbolKind::op: {
        auto it = operations.find(s.name);
        return it != operations.end() && it->second == s.arity;
    }
    }
    return false;
}

bool well_formed(const Term &t, const Signature &sig) {
    if (t.is_var()) return true;
    if (!sig.contains(t.symbol()) || t.args().size() != t.symbol().arity) return false;
    return std::all_of(t.args().begin(), t.args().end(), [&](const Term &a) { return well_formed(a, sig); });
}

Term apply_subst(const Term &t, const Substitution &s) {
    if (t.closed()) return t;
    if (t.is_var()) {
        auto it = s.find(t.var_name());
        return it == s.end() ? t : it->second;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto &a : t.args()) {
        args.push_back(apply_subst(a, s));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::app(t.symbol(), std::move(args)) : t;
}

Substitution compose(const Substitution &second, const Substitution &first) {
    Substitution out;
    for (const auto &[v, t] : first) out.emplace(v, apply_subst(t, second));
    for (const auto &[v, t] : second) out.emplace(v, t);
    return out;
}

const Term &subterm_at(const Term &t, const std::vector<std::size_t> &path) {
    const Term *cur = &t;
    for (std::size_t p : path) cur = &cur->arg(p - 1);
    return *cur;
}

Term replace_at(const Term &t, const std::vector<std::size_t> &path, const Term &with) {
    if (path.empty()) return with;
    std::vector<Term> args = t.args();
    std::vector<std::size_t> rest(path.begin() + 1, path.end());
    args.at(path.front() - 1) = replace_at(args.at(path.front() - 1), rest, with);
    return Term::app(t.symbol(), std::move(args));
}

std::string path_to_string(const std::vector<std::size_t> &path) {
    if (path.empty()) return "root";
    std::string out;
    for (std::size_t p : path) {
        if (!out.empty()) out += ".";
        out += std::to_string(p);
    }
    return out;
}

std::vector<Term> summands(const Term &t) {
    std::vector<Term> out;
    std::vector<Term> stack{t};
    while (!stack.empty()) {
        Term cur = stack.back();
        stack.pop_back();
        if (cur.is(SymbolKind::choice)) {
            stack.push_back(cur.arg(1));
            stack.push_back(cur.arg(0));
        } else if (!cur.is(SymbolKind::delta)) {
            out.push_back(cur);
        }
    }
    return out;
}

Term hourglass(std::size_t n, const Action &clock) {
    Term t = Term::delta();
    for (std::size_t i = 0; i < n; ++i) t = Term::prefix(clock, t);
    return t;
}

std::optional<std::size_t> hourglass_depth(const Term &t, const Action &clock) {
    std::size_t n = 0;
    const Term *cur = &t;
    while (cur->is(SymbolKind::prefix) && cur->symbol().name == clock) {
        ++n;
        cur = &cur->arg(0);
    }
    if (cur->is(SymbolKind::delta)) return n;
    return std::nullopt;
}

std::string Equation::to_string() const {
    std::string out = label + ": " + lhs.to_string() + " = " + rhs.to_string();
    if (!condition.empty()) out += " if " + condition;
    return out;
}

namespace {

bool alpha_match(const Term &a, const Term &b, std::map<std::string, std::string> &fwd,
                 std::map<std::string, std::string> &bwd) {
    if (a.is_var() || b.is_var()) {
        if (!a.is_var() || !b.is_var()) return false;
        auto f = fwd.find(a.var_name());
        auto g = bwd.find(b.var_name());
        if (f == fwd.end() && g == bwd.end()) {
            fwd[a.var_name()] = b.var_name();
            bwd[b.var_name()] = a.var_name();
            return true;
        }
        return f != fwd.end() && g != bwd.end() && f->second == b.var_name() && g->second == a.var_name();
    }
    if (!(a.symbol() == b.symbol())) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!alpha_match(a.arg(i), b.arg(i), fwd, bwd)) return false;
    return true;
}

}  // namespace

bool alpha_equivalent(const Term &a, const Term &b) {
    std::map<std::string, std::string> fwd, bwd;
    return alpha_match(a, b, fwd, bwd);
}

bool alpha_equivalent(const Equation &a, const Equation &b) {
    std::map<std::string, std::string> fwd, bwd;
    return alpha_match(a.lhs, b.lhs, fwd, bwd) && alpha_match(a.rhs, b.rhs, fwd, bwd);
}

ParseError::ParseError(std::string code, std::size_t line, std::size_t column, const std::string &msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      code_(std::move(code)),
      line_(line),
      column_(column) {}

}  // namespace pregax
