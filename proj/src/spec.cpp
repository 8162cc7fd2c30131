#include "pregax/spec.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lexer.hpp"
#include "term_parser.hpp"

namespace pregax {

namespace {

const ActionSet kNoActions;
const PredicateSet kNoPredicates;

std::string join(const std::set<std::string> &xs, const char *sep = ", ") {
    std::string out;
    for (const auto &x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

PregRule make_rule(Symbol principal, std::vector<std::string> sources) {
    PregRule r;
    r.principal = std::move(principal);
    r.sources = std::move(sources);
    return r;
}

}  // namespace

// -- PregRule -------------------------------------------------------------

void PregRule::normalize() {
    std::sort(pos_trans.begin(), pos_trans.end());
    pos_trans.erase(std::unique(pos_trans.begin(), pos_trans.end()), pos_trans.end());
    std::sort(pos_pred.begin(), pos_pred.end());
    pos_pred.erase(std::unique(pos_pred.begin(), pos_pred.end()), pos_pred.end());
    std::erase_if(neg_trans, [](const auto &kv) { return kv.second.empty(); });
    std::erase_if(neg_pred, [](const auto &kv) { return kv.second.empty(); });
}

bool PregRule::tests_positively(std::size_t pos) const {
    return std::any_of(pos_trans.begin(), pos_trans.end(), [&](const auto &p) { return p.pos == pos; }) ||
           std::any_of(pos_pred.begin(), pos_pred.end(), [&](const auto &p) { return p.pos == pos; });
}

bool PregRule::tests_negatively(std::size_t pos) const {
    return !neg_trans_at(pos).empty() || !neg_pred_at(pos).empty();
}

std::vector<TransPremise> PregRule::trans_at(std::size_t pos) const {
    std::vector<TransPremise> out;
    for (const auto &p : pos_trans)
        if (p.pos == pos) out.push_back(p);
    return out;
}

std::vector<PredPremise> PregRule::preds_at(std::size_t pos) const {
    std::vector<PredPremise> out;
    for (const auto &p : pos_pred)
        if (p.pos == pos) out.push_back(p);
    return out;
}

const ActionSet &PregRule::neg_trans_at(std::size_t pos) const {
    auto it = neg_trans.find(pos);
    return it == neg_trans.end() ? kNoActions : it->second;
}

const PredicateSet &PregRule::neg_pred_at(std::size_t pos) const {
    auto it = neg_pred.find(pos);
    return it == neg_pred.end() ? kNoPredicates : it->second;
}

std::size_t PregRule::premise_count() const {
    std::size_t n = pos_trans.size() + pos_pred.size();
    for (const auto &[_, s] : neg_trans) n += s.size();
    for (const auto &[_, s] : neg_pred) n += s.size();
    return n;
}

std::string PregRule::to_string() const {
    std::vector<std::string> prem;
    auto var = [&](std::size_t pos) {
        return pos >= 1 && pos <= sources.size() ? sources[pos - 1] : "?" + std::to_string(pos);
    };
    for (const auto &p : pos_trans) prem.push_back(var(p.pos) + " -" + p.action + "-> " + p.target);
    for (const auto &p : pos_pred) prem.push_back(p.pred + "(" + var(p.pos) + ")");
    for (const auto &[pos, as] : neg_trans)
        for (const auto &a : as) prem.push_back(var(pos) + " -/" + a + "->");
    for (const auto &[pos, ps] : neg_pred)
        for (const auto &p : ps) prem.push_back("not " + p + "(" + var(pos) + ")");

    std::vector<Term> args;
    for (const auto &x : sources) args.push_back(Term::var(x));
    std::string source;
    if (principal.kind == SymbolKind::op) {
        source = Term::op(principal.name, args).to_string();
    } else {
        Symbol sym = principal;
        source = Term::app(sym, args).to_string();
    }

    std::string out;
    for (std::size_t i = 0; i < prem.size(); ++i) {
        if (i) out += ", ";
        out += prem[i];
    }
    if (!out.empty()) out += " ";
    out += "==> ";
    if (is_transition) {
        out += source + " -" + action + "-> " + target.to_string();
    } else {
        out += predicate + "(" + source + ")";
    }
    return out;
}

bool operator==(const PregRule &a, const PregRule &b) {
    return a.principal == b.principal && a.sources == b.sources && a.pos_trans == b.pos_trans &&
           a.pos_pred == b.pos_pred && a.neg_trans == b.neg_trans && a.neg_pred == b.neg_pred &&
           a.is_transition == b.is_transition && a.action == b.action && a.target == b.target &&
           a.predicate == b.predicate;
}

std::string to_string(TranslationEquation::Kind k) {
    return k == TranslationEquation::Kind::smoothening ? "smoothening" : "distinctify";
}

// -- PregSystem -----------------------------------------------------------

Signature PregSystem::signature() const {
    Signature sig;
    sig.actions = actions;
    sig.predicates = predicate_names();
    for (const auto &[n, op] : ops) sig.operations[n] = op.arity;
    sig.restriction = restriction;
    sig.projection = projection;
    return sig;
}

PredicateSet PregSystem::predicate_names() const {
    PredicateSet out;
    for (const auto &[n, _] : predicates) out.insert(n);
    return out;
}

PredicateSet PregSystem::implicit_predicates() const {
    PredicateSet out;
    for (const auto &[n, p] : predicates)
        if (p.implicit) out.insert(n);
    return out;
}

bool PregSystem::is_implicit(const Predicate &p) const {
    auto it = predicates.find(p);
    return it != predicates.end() && it->second.implicit;
}

const ActionSet &PregSystem::allowed_actions(const Predicate &p) const {
    auto it = predicates.find(p);
    return it == predicates.end() ? kNoActions : it->second.allowed_actions;
}

std::vector<PregRule> PregSystem::rules_for(const Symbol &s) const {
    std::vector<PregRule> out;
    switch (s.kind) {
    case SymbolKind::delta: break;
    case SymbolKind::witness: {
        PregRule r = make_rule(s, {});
        r.is_transition = false;
        r.predicate = s.name;
        r.label = "rl4(" + s.name + ")";
        out.push_back(std::move(r));
        break;
    }
    case SymbolKind::prefix: {
        PregRule r = make_rule(s, {"x1"});
        r.action = s.name;
        r.target = Term::var("x1");
        r.label = "rl1(" + s.name + ")";
        out.push_back(std::move(r));
        for (const auto &[p, sym] : predicates) {
            if (!sym.implicit || !sym.allowed_actions.count(s.name)) continue;
            PregRule q = make_rule(s, {"x1"});
            q.pos_pred.push_back({1, p});
            q.is_transition = false;
            q.predicate = p;
            q.label = "rl7(" + p + "," + s.name + ")";
            out.push_back(std::move(q));
        }
        break;
    }
    case SymbolKind::choice:
        for (std::size_t side = 1; side <= 2; ++side) {
            for (const auto &a : actions) {
                PregRule r = make_rule(s, {"x1", "x2"});
                r.pos_trans.push_back({side, a, "y"});
                r.action = a;
                r.target = Term::var("y");
                r.label = (side == 1 ? "rl2(" : "rl3(") + a + ")";
                out.push_back(std::move(r));
            }
        }
        for (std::size_t side = 1; side <= 2; ++side) {
            for (const auto &[p, _] : predicates) {
                PregRule r = make_rule(s, {"x1", "x2"});
                r.pos_pred.push_back({side, p});
                r.is_transition = false;
                r.predicate = p;
                r.label = (side == 1 ? "rl5(" : "rl6(") + p + ")";
                out.push_back(std::move(r));
            }
        }
        break;
    case SymbolKind::restrict: {
        PredicateSet kept;
        for (const auto &q : s.forbidden_predicates)
            if (is_implicit(q)) kept.insert(q);
        for (const auto &a : actions) {
            if (s.forbidden_actions.count(a)) continue;
            PregRule r = make_rule(s, {"x1"});
            r.pos_trans.push_back({1, a, "y"});
            r.action = a;
            r.target = Term::restrict({}, kept, Term::var("y"));
            r.label = "rl8(" + a + ")";
            out.push_back(std::move(r));
        }
        for (const auto &[p, _] : predicates) {
            if (s.forbidden_predicates.count(p)) continue;
            PregRule r = make_rule(s, {"x1"});
            r.pos_pred.push_back({1, p});
            r.is_transition = false;
            r.predicate = p;
            r.label = "rl9(" + p + ")";
            out.push_back(std::move(r));
        }
        break;
    }
    case SymbolKind::project:
        for (const auto &a : actions) {
            PregRule r = make_rule(s, {"x1", "x2"});
            r.pos_trans.push_back({1, a, "y1"});
            r.pos_trans.push_back({2, kClockAction, "y2"});
            r.action = a;
            r.target = Term::project(Term::var("y1"), Term::var("y2"));
            r.label = "rl10(" + a + ")";
            out.push_back(std::move(r));
        }
        for (const auto &[p, _] : predicates) {
            PregRule r = make_rule(s, {"x1", "x2"});
            r.pos_pred.push_back({1, p});
            r.is_transition = false;
            r.predicate = p;
            r.label = "rl11(" + p + ")";
            out.push_back(std::move(r));
        }
        break;
    case SymbolKind::op:
        for (const auto &r : rules)
            if (r.principal == s) out.push_back(r);
        break;
    }
    return out;
}

std::vector<const PregRule *> PregSystem::op_rules(const std::string &op) const {
    std::vector<const PregRule *> out;
    for (const auto &r : rules)
        if (r.principal.kind == SymbolKind::op && r.principal.name == op) out.push_back(&r);
    return out;
}

void PregSystem::add_op(const std::string &n, std::size_t arity, Origin origin) {
    ops[n] = OperationSym{n, arity, origin};
}

void PregSystem::add_rule(PregRule r) {
    r.normalize();
    rules.push_back(std::move(r));
}

void PregSystem::canonicalize() {
    for (auto &r : rules) r.normalize();
    std::stable_sort(rules.begin(), rules.end(), [](const PregRule &a, const PregRule &b) {
        if (a.principal.name != b.principal.name) return a.principal.name < b.principal.name;
        return a.to_string() < b.to_string();
    });
    std::map<std::string, std::size_t> counter;
    for (auto &r : rules) r.label = r.principal.name + "#" + std::to_string(++counter[r.principal.name]);
}

bool operator==(const PregSystem &a, const PregSystem &b) {
    if (a.name != b.name || a.actions != b.actions || a.predicates != b.predicates || a.ops != b.ops ||
        a.annotations != b.annotations || a.rules != b.rules || a.restriction != b.restriction ||
        a.projection != b.projection || a.translation_equations.size() != b.translation_equations.size())
        return false;
    for (std::size_t i = 0; i < a.translation_equations.size(); ++i)
        if (a.translation_equations[i].equation.to_string() != b.translation_equations[i].equation.to_string())
            return false;
    return true;
}

// -- parser -----------------------------------------------------------------

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

class SpecParser {
public:
    SpecParser(const std::string &text, const IncludeResolver &resolve)
        : toks_(detail::tokenize(text)), ts_(toks_), resolve_(resolve) {}

    PregSystem run() {
        std::vector<std::size_t> rule_starts;
        while (!ts_.at_end()) {
            const Token &kw = ts_.peek();
            if (kw.kind != Tok::ident) ts_.fail("expected a declaration");
            if (kw.text == "system") {
                ts_.next();
                sys_.name = ts_.expect_ident();
                ts_.expect(";");
            } else if (kw.text == "actions") {
                ts_.next();
                for (const auto &[a, tok] : ident_list()) declare_action(a, tok);
                ts_.expect(";");
            } else if (kw.text == "predicates") {
                ts_.next();
                for (const auto &[p, tok] : ident_list()) declare_predicate(PredicateSym{p, false, {}}, tok);
                ts_.expect(";");
            } else if (kw.text == "predicate") {
                ts_.next();
                Token tok = ts_.peek();
                PredicateSym p{ts_.expect_ident(), false, {}};
                if (ts_.is_ident("implicit")) {
                    ts_.next();
                    p.implicit = true;
                    if (ts_.is_ident("over")) {
                        ts_.next();
                        for (const auto &[a, atok] : ident_list()) {
                            pending_allowed_.push_back({a, atok});
                            p.allowed_actions.insert(a);
                        }
                    }
                } else if (ts_.is_ident("explicit")) {
                    ts_.next();
                }
                declare_predicate(p, tok);
                ts_.expect(";");
            } else if (kw.text == "op") {
                ts_.next();
                Token tok = ts_.peek();
                std::string n = ts_.expect_ident();
                ts_.expect("/");
                if (ts_.peek().kind != Tok::number) ts_.fail("expected arity");
                std::size_t arity = std::stoul(ts_.next().text);
                OpAnnotation ann;
                while (ts_.peek().kind == Tok::ident) {
                    const Token &a = ts_.next();
                    if (a.text == "smooth") {
                        ann.smooth = true;
                    } else if (a.text == "distinctive") {
                        ann.smooth = ann.distinctive = true;
                    } else {
                        ts_.fail_at(a, "syntax", "unknown operation annotation '" + a.text + "'");
                    }
                }
                ts_.expect(";");
                if (sys_.ops.count(n) || sys_.predicates.count(n))
                    ts_.fail_at(tok, "duplicate-declaration", "duplicate declaration of '" + n + "'");
                sys_.add_op(n, arity);
                if (ann.smooth) sys_.annotations[n] = ann;
            } else if (kw.text == "extends") {
                ts_.next();
                Token path = ts_.next();
                if (path.kind != Tok::string) ts_.fail_at(path, "syntax", "expected a quoted path");
                ts_.expect(";");
                if (!resolve_) ts_.fail_at(path, "syntax", "extends is not supported here");
                bases_.push_back(resolve_(path.text));
                merge_base(bases_.back());
            } else if (kw.text == "rule") {
                rule_starts.push_back(ts_.position());
                int depth = 0;
                while (!ts_.at_end() && !(depth == 0 && ts_.is_punct(";"))) {
                    if (ts_.is_punct("{")) ++depth;
                    if (ts_.is_punct("}")) --depth;
                    ts_.next();
                }
                ts_.expect(";");
            } else {
                ts_.fail_at(kw, "syntax", "unknown declaration '" + kw.text + "'");
            }
        }
        for (const auto &[a, tok] : pending_allowed_)
            if (!sys_.actions.count(a)) ts_.fail_at(tok, "undeclared-action", "undeclared action '" + a + "'");

        for (std::size_t start : rule_starts) {
            TokenStream rs(std::vector<Token>(toks_.begin() + static_cast<std::ptrdiff_t>(start), toks_.end()));
            sys_.add_rule(parse_rule_stmt(rs));
        }
        sys_.canonicalize();
        // base operations are visible for rule parsing but belong to the base
        for (const auto &n : base_ops_) {
            if (!sys_.op_rules(n).empty()) continue;
            sys_.ops.erase(n);
            sys_.annotations.erase(n);
        }
        for (const auto &base : bases_) {
            try {
                sys_ = disjoint_extend(base, sys_);
            } catch (const ExtensionClash &e) {
                throw ParseError("extension-clash", 0, 0, e.what());
            }
        }
        return sys_;
    }

    PregRule parse_rule_stmt(TokenStream &ts) {
        ts.next();  // rule
        Token optok = ts.peek();
        std::string op = ts.expect_ident();
        ts.expect(":");
        PregRule r = parse_rule_body(ts, sys_, &op);
        r.line = optok.line;
        ts.expect(";");
        return r;
    }

    static PregRule parse_rule_body(TokenStream &ts, const PregSystem &sys, const std::string *expected_op) {
        struct RawPremise {
            Token var;
            enum { trans, neg_trans, pred, neg_pred } kind;
            std::string label;
            std::string target;
        };
        std::vector<RawPremise> raw;
        if (!ts.is_punct("==>")) {
            do {
                RawPremise p;
                if (ts.is_ident("not")) {
                    ts.next();
                    p.kind = RawPremise::neg_pred;
                    Token pt = ts.peek();
                    p.label = ts.expect_ident();
                    check_pred(ts, sys, p.label, pt);
                    ts.expect("(");
                    p.var = ts.peek();
                    ts.expect_ident();
                    ts.expect(")");
                } else if (ts.peek().kind == Tok::ident && ts.is_punct("(", 1)) {
                    Token pt = ts.next();
                    p.kind = RawPremise::pred;
                    p.label = pt.text;
                    check_pred(ts, sys, p.label, pt);
                    ts.expect("(");
                    p.var = ts.peek();
                    ts.expect_ident();
                    ts.expect(")");
                } else {
                    p.var = ts.peek();
                    ts.expect_ident();
                    if (ts.accept("-/")) {
                        p.kind = RawPremise::neg_trans;
                        Token at = ts.peek();
                        p.label = ts.expect_ident();
                        check_action(ts, sys, p.label, at);
                        ts.expect("->");
                    } else {
                        ts.expect("-");
                        p.kind = RawPremise::trans;
                        Token at = ts.peek();
                        p.label = ts.expect_ident();
                        check_action(ts, sys, p.label, at);
                        ts.expect("->");
                        p.target = ts.expect_ident();
                    }
                }
                raw.push_back(std::move(p));
            } while (ts.accept(","));
        }
        ts.expect("==>");

        PregRule r;
        Token head = ts.peek();
        std::string first = ts.expect_ident();
        std::string opname;
        bool pred_conclusion = false;
        // P(f(...)) is a predicate conclusion; f(x1, ...) never nests an application
        bool nested = ts.is_punct("(") && ts.peek(1).kind == Tok::ident && ts.is_punct("(", 2);
        if ((sys.predicates.count(first) || nested) && ts.is_punct("(")) {
            check_pred(ts, sys, first, head);
            pred_conclusion = true;
            ts.expect("(");
            head = ts.peek();
            opname = ts.expect_ident();
        } else {
            opname = first;
        }
        auto op = sys.ops.find(opname);
        if (op == sys.ops.end())
            ts.fail_at(head, "undeclared-operation", "undeclared operation '" + opname + "'");
        if (expected_op && *expected_op != opname)
            ts.fail_at(head, "syntax", "rule declared for '" + *expected_op + "' concludes about '" + opname + "'");
        if (ts.accept("(")) {
            if (!ts.is_punct(")")) {
                do {
                    Token v = ts.peek();
                    r.sources.push_back(ts.expect_ident());
                    if (!ts.is_punct(",") && !ts.is_punct(")"))
                        ts.fail_at(v, "syntax", "operation arguments in a rule conclusion must be variables");
                } while (ts.accept(","));
            }
            ts.expect(")");
        }
        if (r.sources.size() != op->second.arity)
            ts.fail_at(head, "arity-mismatch",
                       "operation '" + opname + "' expects " + std::to_string(op->second.arity) + " arguments, got " +
                           std::to_string(r.sources.size()));
        r.principal = Symbol::op(opname, op->second.arity);
        if (pred_conclusion) {
            ts.expect(")");
            r.is_transition = false;
            r.predicate = first;
        } else {
            ts.expect("-");
            Token at = ts.peek();
            r.action = ts.expect_ident();
            check_action(ts, sys, r.action, at);
            ts.expect("->");
            r.target = detail::parse_term(ts, sys.signature(), true);
        }

        for (const auto &p : raw) {
            auto it = std::find(r.sources.begin(), r.sources.end(), p.var.text);
            if (it == r.sources.end())
                ts.fail_at(p.var, "unbound-variable",
                           "premise variable '" + p.var.text + "' is not an argument of the conclusion");
            std::size_t pos = static_cast<std::size_t>(it - r.sources.begin()) + 1;
            switch (p.kind) {
            case RawPremise::trans: r.pos_trans.push_back({pos, p.label, p.target}); break;
            case RawPremise::neg_trans: r.neg_trans[pos].insert(p.label); break;
            case RawPremise::pred: r.pos_pred.push_back({pos, p.label}); break;
            case RawPremise::neg_pred: r.neg_pred[pos].insert(p.label); break;
            }
        }
        r.normalize();
        return r;
    }

private:
    static void check_action(const TokenStream &ts, const PregSystem &sys, const std::string &a, const Token &t) {
        if (!sys.actions.count(a)) ts.fail_at(t, "undeclared-action", "undeclared action '" + a + "'");
    }
    static void check_pred(const TokenStream &ts, const PregSystem &sys, const std::string &p, const Token &t) {
        if (!sys.predicates.count(p)) ts.fail_at(t, "undeclared-predicate", "undeclared predicate '" + p + "'");
    }

    std::vector<std::pair<std::string, Token>> ident_list() {
        std::vector<std::pair<std::string, Token>> out;
        if (ts_.is_punct(";")) return out;
        do {
            Token t = ts_.peek();
            out.push_back({ts_.expect_ident(), t});
        } while (ts_.accept(","));
        return out;
    }

    void declare_action(const std::string &a, const Token &tok) {
        if (sys_.actions.count(a) && !base_actions_.count(a))
            ts_.fail_at(tok, "duplicate-declaration", "duplicate action '" + a + "'");
        sys_.actions.insert(a);
    }

    void declare_predicate(const PredicateSym &p, const Token &tok) {
        if ((sys_.predicates.count(p.name) && !base_predicates_.count(p.name)) || sys_.ops.count(p.name))
            ts_.fail_at(tok, "duplicate-declaration", "duplicate declaration of '" + p.name + "'");
        sys_.predicates[p.name] = p;
    }

    void merge_base(const PregSystem &base) {
        for (const auto &a : base.actions) {
            sys_.actions.insert(a);
            base_actions_.insert(a);
        }
        for (const auto &[n, p] : base.predicates) {
            sys_.predicates[n] = p;
            base_predicates_.insert(n);
        }
        for (const auto &[n, o] : base.ops) {
            sys_.ops[n] = o;
            base_ops_.insert(n);
        }
        for (const auto &[n, a] : base.annotations) sys_.annotations[n] = a;
    }

    std::vector<Token> toks_;
    TokenStream ts_;
    const IncludeResolver &resolve_;
    PregSystem sys_;
    std::vector<PregSystem> bases_;
    std::set<std::string> base_actions_;
    std::set<std::string> base_predicates_;
    std::set<std::string> base_ops_;
    std::vector<std::pair<std::string, Token>> pending_allowed_;
};

}  // namespace

PregSystem parse_spec(const std::string &text, const IncludeResolver &resolve) {
    SpecParser p(text, resolve);
    return p.run();
}

PregSystem load_spec_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("io", 0, 0, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    IncludeResolver resolve = [dir](const std::string &rel) { return load_spec_file((dir / rel).string()); };
    return parse_spec(buf.str(), resolve);
}

PregRule parse_rule(const std::string &text, const PregSystem &s) {
    TokenStream ts(detail::tokenize(text));
    PregRule r = SpecParser::parse_rule_body(ts, s, nullptr);
    if (!ts.at_end()) ts.fail("trailing input after rule");
    return r;
}

std::string print_spec(const PregSystem &s) {
    std::ostringstream out;
    out << "system " << s.name << " ;\n";
    if (!s.actions.empty()) out << "actions " << join(s.actions) << " ;\n";
    PredicateSet explicit_preds;
    for (const auto &[n, p] : s.predicates)
        if (!p.implicit) explicit_preds.insert(n);
    if (!explicit_preds.empty()) out << "predicates " << join(explicit_preds) << " ;\n";
    for (const auto &[n, p] : s.predicates) {
        if (!p.implicit) continue;
        out << "predicate " << n << " implicit";
        if (!p.allowed_actions.empty()) out << " over " << join(p.allowed_actions);
        out << " ;\n";
    }
    for (const auto &[n, op] : s.ops) {
        out << "op " << n << " / " << op.arity;
        auto ann = s.annotations.find(n);
        if (ann != s.annotations.end()) {
            if (ann->second.distinctive) {
                out << " distinctive";
            } else if (ann->second.smooth) {
                out << " smooth";
            }
        }
        out << " ;\n";
    }
    PregSystem sorted = s;
    sorted.canonicalize();
    for (const auto &r : sorted.rules) out << "rule " << r.principal.name << " : " << r.to_string() << " ;\n";
    return out.str();
}

}  // namespace pregax
