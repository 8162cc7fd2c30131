#include <algorithm>
#include <array>

#include "pregax/core.hpp"
#include "term_parser.hpp"

namespace pregax {

namespace {

constexpr std::array<const char *, 7> kKeywords = {"delta", "kappa", "restrict", "proj", "not", "tick_", "rule"};

std::string join(const std::set<std::string> &xs) {
    std::string out;
    for (const auto &x : xs) {
        if (!out.empty()) out += ",";
        out += x;
    }
    return out;
}

void print(const Term &t, std::string &out);

void print_operand(const Term &t, std::string &out) {
    if (t.is(SymbolKind::choice)) {
        out += "(";
        print(t, out);
        out += ")";
    } else {
        print(t, out);
    }
}

void print(const Term &t, std::string &out) {
    if (t.is_var()) {
        out += t.var_name();
        return;
    }
    const Symbol &s = t.symbol();
    switch (s.kind) {
    case SymbolKind::delta: out += "delta"; return;
    case SymbolKind::witness: out += "kappa(" + s.name + ")"; return;
    case SymbolKind::prefix:
        out += s.name + " . ";
        print_operand(t.arg(0), out);
        return;
    case SymbolKind::choice:
        print(t.arg(0), out);
        out += " + ";
        print_operand(t.arg(1), out);
        return;
    case SymbolKind::restrict:
        out += "restrict{" + join(s.forbidden_actions) + ";" + join(s.forbidden_predicates) + "}(";
        print(t.arg(0), out);
        out += ")";
        return;
    case SymbolKind::project: {
        out += "proj(";
        print(t.arg(0), out);
        out += ", ";
        if (auto n = hourglass_depth(t.arg(1))) {
            out += std::to_string(*n);
        } else {
            print(t.arg(1), out);
        }
        out += ")";
        return;
    }
    case SymbolKind::op:
        out += s.name;
        if (!t.args().empty()) {
            out += "(";
            for (std::size_t i = 0; i < t.args().size(); ++i) {
                if (i) out += ", ";
                print(t.arg(i), out);
            }
            out += ")";
        }
        return;
    }
}

}  // namespace

std::string Term::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

bool is_keyword(const std::string &s) {
    return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

bool is_identifier(const std::string &s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

namespace detail {

namespace {

struct TermParser {
    TokenStream &ts;
    const Signature &sig;
    bool allow_variables;

    Term sum() {
        Term acc = prefix_term();
        while (ts.accept("+")) acc = Term::choice(acc, prefix_term());
        return acc;
    }

    Term prefix_term() {
        if (ts.peek().kind == Tok::ident && ts.is_punct(".", 1)) {
            const Token &tok = ts.next();
            if (!sig.actions.count(tok.text)) ts.fail_at(tok, "undeclared-action", "undeclared action '" + tok.text + "'");
            ts.next();  // '.'
            return Term::prefix(tok.text, prefix_term());
        }
        return atom();
    }

    std::set<std::string> name_list(const char *terminator) {
        std::set<std::string> out;
        if (ts.is_punct(terminator)) return out;
        do {
            out.insert(ts.expect_ident());
        } while (ts.accept(","));
        return out;
    }

    Term atom() {
        const Token &tok = ts.peek();
        if (ts.accept("(")) {
            Term t = sum();
            ts.expect(")");
            return t;
        }
        if (tok.kind != Tok::ident) ts.fail("expected a term");
        Token id = ts.next();
        if (id.text == "delta") return Term::delta();
        if (id.text == "kappa") {
            ts.expect("(");
            Token p = ts.peek();
            std::string name = ts.expect_ident();
            ts.expect(")");
            if (!sig.predicates.count(name)) ts.fail_at(p, "undeclared-predicate", "undeclared predicate '" + name + "'");
            return Term::witness(name);
        }
        if (id.text == "restrict") {
            ts.expect("{");
            auto actions = name_list(";");
            ts.expect(";");
            auto preds = name_list("}");
            ts.expect("}");
            for (const auto &a : actions)
                if (!sig.actions.count(a)) ts.fail_at(id, "undeclared-action", "undeclared action '" + a + "'");
            for (const auto &p : preds)
                if (!sig.predicates.count(p)) ts.fail_at(id, "undeclared-predicate", "undeclared predicate '" + p + "'");
            ts.expect("(");
            Term body = sum();
            ts.expect(")");
            return Term::restrict(std::move(actions), std::move(preds), body);
        }
        if (id.text == "proj") {
            ts.expect("(");
            Term body = sum();
            ts.expect(",");
            Term h;
            if (ts.peek().kind == Tok::number) {
                h = hourglass(std::stoul(ts.next().text));
            } else {
                h = sum();
            }
            ts.expect(")");
            return Term::project(body, h);
        }
        auto op = sig.operations.find(id.text);
        if (ts.accept("(")) {
            std::vector<Term> args;
            if (!ts.is_punct(")")) {
                do {
                    args.push_back(sum());
                } while (ts.accept(","));
            }
            ts.expect(")");
            if (op == sig.operations.end())
                ts.fail_at(id, "undeclared-operation", "undeclared operation '" + id.text + "'");
            if (op->second != args.size())
                ts.fail_at(id, "arity-mismatch",
                           "operation '" + id.text + "' expects " + std::to_string(op->second) + " arguments, got " +
                               std::to_string(args.size()));
            return Term::op(id.text, std::move(args));
        }
        if (op != sig.operations.end()) {
            if (op->second != 0)
                ts.fail_at(id, "arity-mismatch",
                           "operation '" + id.text + "' expects " + std::to_string(op->second) + " arguments");
            return Term::op(id.text);
        }
        if (!allow_variables) ts.fail_at(id, "undeclared-operation", "unknown constant '" + id.text + "'");
        if (is_keyword(id.text)) ts.fail_at(id, "syntax", "keyword '" + id.text + "' used as variable");
        return Term::var(id.text);
    }
};

}  // namespace

Term parse_term(TokenStream &ts, const Signature &sig, bool allow_variables) {
    TermParser p{ts, sig, allow_variables};
    return p.sum();
}

}  // namespace detail

Term parse_term(const std::string &text, const Signature &sig, bool allow_variables) {
    detail::TokenStream ts(detail::tokenize(text));
    Term t = detail::parse_term(ts, sig, allow_variables);
    if (!ts.at_end()) ts.fail("trailing input after term");
    return t;
}

}  // namespace pregax
