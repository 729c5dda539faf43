#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcde/calculus.hpp"
#include "mcde/randomgen.hpp"
#include "mcde/specdsl.hpp"

#include <random>

using namespace mcde;

TEST_CASE("parse_spec builds the declared tables") {
    RuleSet r = parse_spec(SpecSource{
        "slots 2; diff d up 1 down 1; atom phi n [0,0] m [0,0];\n"
        "maxorder d on phi = 2; maxpower [d]phi = 3;\n"});
    CHECK(r.decls.slot_count == 2);
    REQUIRE(r.decls.labels.size() == 1);
    CHECK(r.decls.labels[0].name == "d");
    REQUIRE(r.decls.atoms.size() == 1);
    REQUIRE(r.max_orders.size() == 1);
    CHECK(r.max_orders[0].bound == 2);
    REQUIRE(r.max_powers.size() == 1);
    CHECK(r.max_powers[0].bound == 3);
    REQUIRE(r.max_powers[0].pattern.word.has_value());
    CHECK(r.max_powers[0].pattern.word->letters.size() == 1);
}

TEST_CASE("ideal declarations form arity-counted member multisets") {
    RuleSet r = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1;\n"
        "atom phi n [0] m [0]; atom psi n [0] m [0];\n"
        "ideal { phi, psi }; ideal { [d]phi, [d]phi };\n"});
    REQUIRE(r.ideals.size() == 2);
    CHECK(r.ideals[0].arity() == 2);
    CHECK(r.ideals[0].members.size() == 2);
    CHECK(r.ideals[1].arity() == 2);
    CHECK(r.ideals[1].members.size() == 1); // repeated member
}

TEST_CASE("commute statements are directional") {
    RuleSet r = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1; diff e up 1 down 1;\n"
        "atom phi n [0] m [0];\n"
        "commute e d = 0;\n"});
    LabelId d = *r.decls.label_id("d"), e = *r.decls.label_id("e");
    REQUIRE(r.commutation.lookup(e, d) != nullptr);
    CHECK(r.commutation.lookup(e, d)->is_zero());
    CHECK(r.commutation.lookup(d, e) == nullptr); // zero derives no inverse

    RuleSet r2 = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1; diff e up 1 down 1;\n"
        "atom phi n [0] m [0];\n"
        "commute e d = 2;\n"});
    REQUIRE(r2.commutation.lookup(*r2.decls.label_id("d"), *r2.decls.label_id("e")) != nullptr);
    CHECK(*r2.commutation.lookup(*r2.decls.label_id("d"), *r2.decls.label_id("e")) ==
          Scalar(Rational(1, 2)));
}

TEST_CASE("parse_expr handles coefficients, powers and words") {
    RuleSet r = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1; diff e up 1 down 1; atom phi n [0] m [0];\n"});
    Expression e = parse_expr(r, "3*{[d]phi, phi^2}");
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].coeff == Scalar(3));
    CHECK(e.terms[0].total_slots() == 3);

    Expression w = parse_expr(r, "{[d^2 e]phi}");
    REQUIRE(w.terms.size() == 1);
    const OperatorWord& word = w.terms[0].factors[0].factor.word;
    REQUIRE(word.letters.size() == 2);
    CHECK(word.letters[0].order == 2);
    CHECK(word.letters[1].order == 1);

    CHECK(parse_expr(r, "0").is_zero());
    CHECK(parse_expr(r, "{phi} - {phi}").is_zero());
    Expression g = parse_expr(r, "(1+2i)*{phi}");
    CHECK(g.terms[0].coeff == Scalar(Rational(1), Rational(2)));

    CHECK_THROWS_AS(parse_expr(r, "{phi^0}"), SemanticError);
    CHECK_THROWS_AS(parse_expr(r, "{unknown}"), SemanticError);
    CHECK_THROWS_AS(parse_expr(r, "{phi"), ParseError);
}

TEST_CASE("parse errors carry the offending position") {
    try {
        parse_spec(SpecSource{"slots 1;\ndiff d up 1 down 1;\natom phi n [0] m [0];\nmaxorder ? on phi = 2;\n"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 10);
        CHECK(e.snippet() == "maxorder ? on phi = 2;");
    }
    try {
        parse_spec(SpecSource{"slots 1;\ndiff d up 9 down 1;\n"});
        FAIL("expected SemanticError");
    } catch (const SemanticError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("semantic validation rejects bad declarations") {
    CHECK_THROWS_AS(parse_spec(SpecSource{"slots 1; diff d up 1 down 1; diff d up 1 down 1;"}),
                    SemanticError);
    CHECK_THROWS_AS(
        parse_spec(SpecSource{"slots 1; diff d up 1 down 1; atom phi n [0,0] m [0];"}),
        SemanticError);
    CHECK_THROWS_AS(
        parse_spec(SpecSource{"slots 1; diff d up 1 down 1; atom phi n [0] m [0];"
                              " maxpower phi = 0;"}),
        SemanticError);
    CHECK_THROWS_AS(
        parse_spec(SpecSource{"slots 1; diff d up 1 down 1; atom phi n [0] m [0];"
                              " ideal { phi };"}),
        SemanticError);
    CHECK_THROWS_AS(
        parse_spec(SpecSource{"slots 1; diff d up 1 down 1; diff e up 1 down 1;"
                              " atom phi n [0] m [0]; commute d e = 1; commute d e = 2;"}),
        SemanticError);
    // index-incoherent condition
    CHECK_THROWS_AS(
        parse_spec(SpecSource{"slots 1; diff d up 1 down 1; atom phi n [0] m [0];"
                              " atom gamma n [0] m [0]; condition [d]gamma = {phi^2};"}),
        SemanticError);
}

TEST_CASE("numeric limits surface as semantic errors") {
    RuleSet r = parse_spec(SpecSource{
        "slots 1; diff d up 1 down 1; diff e up 1 down 1;\n"
        "atom phi n [0] m [0]; commute e d = 2;\n"});
    CHECK_THROWS_AS(parse_expr(r, "{[d^99999999]phi}"), SemanticError);
    // the fold of 2^900 while sorting the word overflows 64-bit exact
    // arithmetic; reported, never silently wrong
    CHECK_THROWS_AS(parse_expr(r, "{[e^30 d^30]phi}"), SemanticError);
}

TEST_CASE("expression rendering round-trips through the parser") {
    RandomGen gen(41);
    for (int trial = 0; trial < 100; ++trial) {
        RuleSet rules = gen.random_rules();
        Monomial m = gen.random_monomial(rules, 3, 3, 2, 8);
        for (LabelId label = 0; label < rules.decls.labels.size(); ++label) {
            Expression e = differentiate(rules, label, Expression::single(m));
            std::string text = render_expression(rules.decls, e);
            Expression back = parse_expr(rules, text);
            CHECK(render_expression(rules.decls, back) == text);
            CHECK(back == e);
        }
    }
}

TEST_CASE("ruleset rendering round-trips through parse_spec") {
    RandomGen gen(43);
    for (int trial = 0; trial < 100; ++trial) {
        RuleSet rules = gen.random_rules(true);
        std::string text = render_ruleset(rules);
        RuleSet back = parse_spec(SpecSource{text});
        CHECK(render_ruleset(back) == text);
        CHECK(back.fingerprint() == rules.fingerprint());
    }
}

TEST_CASE("fuzzed specs never crash the parser") {
    RandomGen gen(47);
    std::mt19937_64 rng(53);
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::string text = render_ruleset(gen.random_rules(true));
        for (int mut = 0; mut < 3; ++mut) {
            std::string mutated = text;
            std::size_t edits = 1 + rng() % 4;
            for (std::size_t k = 0; k < edits && !mutated.empty(); ++k) {
                std::size_t pos = rng() % mutated.size();
                switch (rng() % 3) {
                    case 0: mutated[pos] = static_cast<char>(32 + rng() % 95); break;
                    case 1: mutated.erase(pos, 1); break;
                    default:
                        mutated.insert(pos, 1, static_cast<char>(32 + rng() % 95));
                        break;
                }
            }
            try {
                parse_spec(SpecSource{mutated});
                ++parsed;
            } catch (const ParseError&) {
                ++rejected;
            } catch (const SemanticError&) {
                ++rejected;
            }
        }
    }
    CHECK(parsed + rejected == 300);
}
