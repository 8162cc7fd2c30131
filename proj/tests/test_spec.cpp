#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pregax/spec.hpp"

using namespace pregax;

namespace {

const char *kSeqr = R"(
system seq ;
actions a, b ;
predicates term, div ;
op seqr / 2 ;
rule seqr : term(x1), x2 -a-> y  ==>  seqr(x1,x2) -a-> y ;
rule seqr : term(x1), term(x2)   ==>  term(seqr(x1,x2)) ;
rule seqr : term(x1), div(x2)    ==>  div(seqr(x1,x2)) ;
)";

bool has_code(const ValidationReport &r, const std::string &code) {
    auto codes = r.error_codes();
    return std::find(codes.begin(), codes.end(), code) != codes.end();
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Random systems for the print/parse roundtrip.
PregSystem random_system(std::mt19937 &rng) {
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    PregSystem s;
    s.name = "gen";
    s.actions = {"a", "b", "c"};
    s.predicates["P"] = {"P", false, {}};
    s.predicates["Q"] = {"Q", true, {"a", "c"}};
    std::vector<Action> acts(s.actions.begin(), s.actions.end());
    std::vector<Predicate> preds{"P", "Q"};
    std::size_t nops = 1 + pick(3);
    for (std::size_t k = 0; k < nops; ++k) s.add_op("g" + std::to_string(k), pick(3));
    for (std::size_t k = 0; k < nops; ++k) {
        std::string name = "g" + std::to_string(k);
        std::size_t ar = s.ops[name].arity;
        for (std::size_t n = 1 + pick(3); n > 0; --n) {
            PregRule r;
            r.principal = Symbol::op(name, ar);
            for (std::size_t i = 1; i <= ar; ++i) r.sources.push_back("x" + std::to_string(i));
            std::vector<Term> pool;
            for (auto &x : r.sources) pool.push_back(Term::var(x));
            std::size_t ycount = 0;
            for (std::size_t i = 1; i <= ar; ++i) {
                switch (pick(5)) {
                case 0: {
                    std::string y = "y" + std::to_string(++ycount);
                    r.pos_trans.push_back({i, acts[pick(acts.size())], y});
                    pool.push_back(Term::var(y));
                    break;
                }
                case 1: r.pos_pred.push_back({i, preds[pick(2)]}); break;
                case 2: r.neg_trans[i].insert(acts[pick(acts.size())]); break;
                case 3: r.neg_pred[i].insert(preds[pick(2)]); break;
                default: break;
                }
            }
            if (pick(2) == 0) {
                r.is_transition = true;
                r.action = acts[pick(acts.size())];
                Term t = pool.empty() ? Term::delta() : pool[pick(pool.size())];
                if (pick(2) == 0) t = Term::prefix(acts[pick(acts.size())], t);
                if (pick(3) == 0 && !pool.empty()) t = Term::choice(t, pool[pick(pool.size())]);
                r.target = t;
            } else {
                r.is_transition = false;
                r.predicate = preds[pick(2)];
            }
            s.add_rule(std::move(r));
        }
    }
    s.canonicalize();
    return s;
}

}  // namespace

TEST_CASE("parse the sequential composition spec") {
    PregSystem s = parse_spec(kSeqr);
    CHECK(s.name == "seq");
    REQUIRE(s.rules.size() == 3);
    auto n_trans = std::count_if(s.rules.begin(), s.rules.end(), [](const PregRule &r) { return r.is_transition; });
    CHECK(n_trans == 1);
    CHECK(validate_preg(s).error_count() == 0);
    CHECK(validate_preg(s).items.empty());
}

TEST_CASE("empty declarations") {
    PregSystem s = parse_spec("actions a ;");
    CHECK(s.rules.empty());
    CHECK(s.ops.empty());
    CHECK(print_spec(s).find("rule") == std::string::npos);
}

TEST_CASE("print/parse roundtrip") {
    PregSystem s = parse_spec(kSeqr);
    std::string p = print_spec(s);
    CHECK(parse_spec(p) == s);
    CHECK(print_spec(parse_spec(p)) == p);

    std::mt19937 rng(7);
    for (int k = 0; k < 200; ++k) {
        PregSystem g = random_system(rng);
        std::string text = print_spec(g);
        PregSystem back = parse_spec(text);
        CHECK_MESSAGE(back == g, text);
    }
}

TEST_CASE("parse errors carry codes and positions") {
    auto code_of = [](const std::string &text) {
        try {
            parse_spec(text);
        } catch (const ParseError &e) {
            return e.code();
        }
        return std::string("none");
    };
    CHECK(code_of("actions a ; op f / 1 ; rule f : x1 -c-> y ==> f(x1) -a-> y ;") == "undeclared-action");
    CHECK(code_of("actions a ; op f / 2 ; rule f : ==> f(x1) -a-> x1 ;") == "arity-mismatch");
    CHECK(code_of("actions a ; op f / 1 ; rule f : ==> term(f(x1)) ;") == "undeclared-predicate");
    CHECK(code_of("actions a ; op f / 1 ; rule f x1 ;") == "syntax");
    try {
        parse_spec("actions a ;\nop f / 1 ;\nrule f : ==> f(x1) -q-> x1 ;");
        FAIL("expected error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("validation: variable clashes and scoping") {
    auto report = [](const std::string &text) { return validate_preg(parse_spec(text)); };
    CHECK(has_code(report("actions a, b ; op f / 1 ; rule f : x1 -a-> y, x1 -b-> y ==> f(x1) -a-> y ;"),
                   "variable-clash"));
    CHECK(has_code(report("actions a ; op f / 2 ; rule f : ==> f(x, x) -a-> x ;"), "variable-clash"));
    CHECK(has_code(report("actions a ; op f / 1 ; rule f : x1 -a-> y ==> f(x1) -a-> z ;"), "unbound-variable"));
}

TEST_CASE("implicit predicate with empty allowed set is accepted") {
    PregSystem s = parse_spec("actions a ; predicate ev implicit ;");
    ValidationReport r = validate_preg(s);
    CHECK(r.ok());
    bool info = std::any_of(r.items.begin(), r.items.end(),
                            [](const Diagnostic &d) { return d.severity == Diagnostic::Severity::info; });
    CHECK(info);
}

TEST_CASE("classify_smooth") {
    PregSystem f = load_spec_file("corpus/rho.preg");
    REQUIRE(f.rules.size() == 1);
    Classification c = classify_smooth(f.rules[0]);
    CHECK_FALSE(c.ok);
    auto mentions = [&](const std::string &needle) {
        return std::any_of(c.reasons.begin(), c.reasons.end(),
                           [&](const std::string &r) { return r.find(needle) != std::string::npos; });
    };
    CHECK(mentions("tested positively and negatively"));
    CHECK(mentions("positive premises"));
    CHECK(mentions("occurs in the target"));

    PregSystem s = parse_spec(kSeqr);
    for (const auto &r : s.rules) CHECK(classify_smooth(r).ok);

    PregSystem nil = parse_spec("actions a ; op nil / 0 ; op g / 2 ; rule g : ==> g(x1, x2) -a-> delta ;");
    CHECK(classify_smooth(nil.rules[0]).ok);
}

TEST_CASE("classify_distinctive") {
    PregSystem s = parse_spec(kSeqr);
    CHECK(classify_distinctive(s, "seqr").ok);

    PregSystem ftp;
    ftp.actions = {"a"};
    auto plus = ftp.rules_for(Symbol::choice());
    std::vector<const PregRule *> ptrs;
    for (const auto &r : plus) ptrs.push_back(&r);
    Classification c = classify_distinctive("+", ptrs);
    CHECK_FALSE(c.ok);

    PregSystem one = parse_spec("actions a ; op g / 1 ; rule g : x1 -a-> y ==> g(x1) -a-> y ;");
    CHECK(classify_distinctive(one, "g").ok);

    // same positive position and same action: not separated
    PregSystem two = parse_spec(
        "actions a, b ; op g / 1 ;"
        "rule g : x1 -a-> y ==> g(x1) -a-> y ;"
        "rule g : x1 -a-> y ==> g(x1) -b-> y ;");
    CHECK_FALSE(classify_distinctive(two, "g").ok);
}

TEST_CASE("annotations are checked") {
    PregSystem s = parse_spec("actions a, b ; op g / 1 smooth ; rule g : x1 -a-> y, x1 -b-> z ==> g(x1) -a-> y ;");
    CHECK(has_code(validate_preg(s), "not-smooth"));
    PregSystem e = parse_spec(std::string(kSeqr) + "op h / 1 distinctive ; rule h : x1 -a-> y ==> h(x1) -a-> y ;");
    CHECK(validate_preg(e).ok());
}

TEST_CASE("disjoint_extend") {
    PregSystem ftp;
    ftp.name = "ftp";
    ftp.actions = {"a", "b"};
    ftp.predicates["term"] = {"term", false, {}};
    ftp.predicates["div"] = {"div", false, {}};
    PregSystem ex = parse_spec(kSeqr);
    PregSystem both = disjoint_extend(ftp, ex);
    CHECK(both.rules.size() == 3);
    CHECK(both.ops.count("seqr"));

    CHECK(disjoint_extend(ex, ex) == ex);

    // a second system adding a rule for seqr clashes
    PregSystem extra = parse_spec(std::string(kSeqr) + "rule seqr : div(x1) ==> div(seqr(x1, x2)) ;");
    CHECK_THROWS_AS(disjoint_extend(ex, extra), ExtensionClash);

    // an arity change clashes
    PregSystem other = parse_spec("actions a, b ; predicates term, div ; op seqr / 1 ;");
    CHECK_THROWS_AS(disjoint_extend(ex, other), ExtensionClash);
}

TEST_CASE("extends resolves and rejects new rules for base operations") {
    PregSystem p = load_spec_file("corpus/priority.preg");
    CHECK(p.ops.count("plus"));
    CHECK(p.ops.count("theta"));
    CHECK(validate_preg(p).ok());

    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "pregax_extends";
    fs::create_directories(dir);
    fs::copy_file("corpus/bccsp_user.preg", dir / "bccsp_user.preg", fs::copy_options::overwrite_existing);
    {
        std::ofstream out(dir / "bad.preg");
        out << "extends \"bccsp_user.preg\" ;\nrule plus : ==> plus(x1, x2) -a-> delta ;\n";
    }
    bool clash = false;
    try {
        load_spec_file((dir / "bad.preg").string());
    } catch (const ParseError &e) {
        clash = e.code() == "extension-clash";
    }
    CHECK(clash);
}

TEST_CASE("implicit-predicate consistency") {
    PregSystem ex = parse_spec(kSeqr);
    CHECK(check_implicit_consistency(ex).empty());

    const char *with = R"(
actions c ;
predicate ev implicit over c ;
op f / 1 ;
rule f : ==> f(x1) -c-> x1 ;
rule f : ev(x1) ==> ev(f(x1)) ;
)";
    CHECK(check_implicit_consistency(parse_spec(with)).empty());

    const char *without = R"(
actions c ;
predicate ev implicit over c ;
op f / 1 ;
rule f : ==> f(x1) -c-> x1 ;
)";
    auto w = check_implicit_consistency(parse_spec(without));
    REQUIRE(w.size() == 1);
    CHECK(w[0].code == "implicit-consistency");

    // deeper targets are flagged, not analyzed
    const char *deep = R"(
actions c ;
predicate ev implicit over c ;
op f / 1 ;
rule f : ==> f(x1) -c-> c . (x1 + x1) ;
)";
    auto d = check_implicit_consistency(parse_spec(deep));
    REQUIRE(d.size() == 1);
    CHECK(d[0].code == "unchecked-target");
}

TEST_CASE("corpus systems validate") {
    for (const char *f : {"seqr", "bccsp_user", "priority", "parallel", "rho", "omega", "implicit"}) {
        PregSystem s = load_spec_file(std::string("corpus/") + f + ".preg");
        CHECK_MESSAGE(validate_preg(s).error_count() == 0, f);
    }
    CHECK(read_file("corpus/seqr.preg").find("seqr") != std::string::npos);
}
