#include <doctest.h>

#include "fstm/llm.hpp"
#include "fstm/parse.hpp"
#include "test_helpers.hpp"

using namespace fstm;
using namespace fstm::testing;

TEST_SUITE_BEGIN("parsing");

namespace {

Vocabulary fol_vocab() {
    VocabParams p;
    p.seed = 1;
    return make_vocabulary(p);
}

} // namespace

TEST_CASE("published logic examples") {
    ParseOutcome p = parse_logic("(¬p11 ∧ ¬p8)", LogicMode::Pl);
    REQUIRE(p.ok());
    auto expected = Formula::conjunction(
        {Formula::negation(Formula::prop("p11")), Formula::negation(Formula::prop("p8"))});
    CHECK(structurally_equal(*p.formula, *expected));

    Vocabulary vocab = fol_vocab();
    ParseOutcome bad = parse_logic("∃p7.¬pred5(p7)", LogicMode::Fol, &vocab);
    REQUIRE(!bad.ok());
    CHECK(bad.error->reason == ParseErrorReason::UnboundVariable);
    CHECK(bad.error->detail.find("p7") != std::string::npos);

    ParseOutcome empty = parse_logic("", LogicMode::Pl);
    REQUIRE(!empty.ok());
    CHECK(empty.error->reason == ParseErrorReason::EmptyOutput);
}

TEST_CASE("published regex examples") {
    ParseOutcome p = parse_regex("1*0", 2);
    REQUIRE(p.ok());
    auto expected = RegexAst::concat({RegexAst::star(RegexAst::sym('1')), RegexAst::sym('0')});
    CHECK(structurally_equal(*p.regex, *expected));

    ParseOutcome q = parse_regex("(1*)*0", 2);
    REQUIRE(q.ok());
    auto nested = RegexAst::concat(
        {RegexAst::star(RegexAst::group(RegexAst::star(RegexAst::sym('1')))), RegexAst::sym('0')});
    CHECK(structurally_equal(*q.regex, *nested));

    ParseOutcome bad = parse_regex("(.*)", 2);
    REQUIRE(!bad.ok());
    CHECK(bad.error->reason == ParseErrorReason::UnknownSymbol);
    CHECK(bad.error->detail.find('.') != std::string::npos);
}

TEST_CASE("operator spellings and rejected tokens") {
    ParseOutcome ascii = parse_logic("(~p1 & p2) | !p3", LogicMode::Pl);
    REQUIRE(ascii.ok());
    CHECK(print_formula(*ascii.formula) ==
          "((¬p1 ∧ p2) ∨ ¬p3)");

    ParseOutcome quant = parse_logic("all x1 x2. pred1_2(x1, x2)", LogicMode::Fol);
    REQUIRE(quant.ok());
    CHECK(quant.formula->kind == FormulaKind::Forall);
    CHECK(quant.formula->body()->kind == FormulaKind::Forall);

    // implication is outside the dialect
    for (const std::string& text : {std::string("p1 → p2"), std::string("p1 -> p2"),
                                    std::string("p1 = p2")}) {
        ParseOutcome p = parse_logic(text, LogicMode::Pl);
        REQUIRE(!p.ok());
        CHECK(p.error->reason == ParseErrorReason::UnknownSymbol);
    }

    ParseOutcome pl_quant = parse_logic("∀x1. p1", LogicMode::Pl);
    REQUIRE(!pl_quant.ok());
    CHECK(pl_quant.error->reason == ParseErrorReason::GrammarError);
}

TEST_CASE("predicate validation against the vocabulary") {
    Vocabulary vocab = fol_vocab();
    const PredicateEntry& pred = vocab.predicates.front();

    std::string good = pred.name + "(p1";
    for (int i = 1; i < pred.arity; ++i) good += ", p2";
    good += ")";
    CHECK(parse_logic(good, LogicMode::Fol, &vocab).ok());

    std::string extra = pred.name + "(p1";
    for (int i = 0; i < pred.arity; ++i) extra += ", p2";
    extra += ")";
    ParseOutcome arity = parse_logic(extra, LogicMode::Fol, &vocab);
    REQUIRE(!arity.ok());
    CHECK(arity.error->reason == ParseErrorReason::ArityMismatch);

    ParseOutcome unknown = parse_logic("nosuchpred(p1)", LogicMode::Fol, &vocab);
    REQUIRE(!unknown.ok());
    CHECK(unknown.error->reason == ParseErrorReason::UnknownSymbol);
}

TEST_CASE("prose and markdown are stripped around formulas") {
    Vocabulary vocab;
    vocab.propositions = {{"p1", ""}, {"p2", ""}};
    ParseOutcome p =
        parse_logic("The formula is (p1 ∧ p2), which always holds.", LogicMode::Pl, &vocab);
    REQUIRE(p.ok());
    CHECK(print_formula(*p.formula) == "(p1 ∧ p2)");

    ParseOutcome fenced = parse_logic("```\n(p1 ∨ p2)\n```", LogicMode::Pl, &vocab);
    REQUIRE(fenced.ok());

    ParseOutcome atom = parse_logic("The answer is p2.", LogicMode::Pl, &vocab);
    REQUIRE(atom.ok());
    CHECK(print_formula(*atom.formula) == "p2");

    // formal glyphs outside the best span mean the output is malformed
    ParseOutcome bad = parse_logic("∃p7. ¬pred5(p7)", LogicMode::Fol, &vocab);
    CHECK(!bad.ok());

    ParseOutcome rx = parse_regex("The regex is 1*0 as requested.", 2);
    REQUIRE(rx.ok());
    CHECK(print_regex(*rx.regex) == "1*0");
}

TEST_CASE("observed model outputs parse or fail with the right reasons") {
    // shapes that chat models actually produce for these tasks
    Vocabulary vocab = fol_vocab();

    ParseOutcome a = parse_logic("(¬(p11 ∧ p8))", LogicMode::Pl);
    REQUIRE(a.ok());
    CHECK(print_formula(*a.formula) == "¬(p11 ∧ p8)");

    ParseOutcome b = parse_logic("¬(p10 ∧ (¬p9 ∨ p7))", LogicMode::Pl);
    REQUIRE(b.ok());

    ParseOutcome c = parse_logic("(p2 ∨ p3) ∧ ¬¬p2", LogicMode::Pl);
    REQUIRE(c.ok());
    CHECK(print_formula(*c.formula) == "((p2 ∨ p3) ∧ ¬¬p2)");

    // renamed propositions still parse; the verifier settles the rest
    ParseOutcome d = parse_logic("(¬p ∧ q ∧ ¬r)", LogicMode::Pl);
    REQUIRE(d.ok());

    Vocabulary fol;
    fol.predicates = {{"pred8", 1, ""}, {"pred6", 1, ""}, {"pred2", 2, ""}};
    ParseOutcome e = parse_logic(
        "¬(pred8(p10) ∧ pred8(p5) ∧ pred6(p8))", LogicMode::Fol, &fol);
    REQUIRE(e.ok());

    // binding object names is the recorded failure mode, not a formula
    ParseOutcome f = parse_logic("∃p3 p5. pred2(p3, p5)", LogicMode::Fol, &fol);
    REQUIRE(!f.ok());
    CHECK(f.error->reason == ParseErrorReason::UnboundVariable);

    ParseOutcome g = parse_regex("(1*)10", 2);
    REQUIRE(g.ok());
    CHECK(print_regex(*g.regex) == "(1*)10");

    ParseOutcome h = parse_regex("((1*)0)*", 2);
    REQUIRE(h.ok());

    ParseOutcome plus = parse_regex("1+0", 2);
    REQUIRE(!plus.ok());
    CHECK(plus.error->reason == ParseErrorReason::UnknownSymbol);
}

TEST_CASE("totality on hostile inputs") {
    Rng rng(555);
    for (int i = 0; i < 2000; ++i) {
        std::string junk;
        size_t len = rng.index(60);
        for (size_t j = 0; j < len; ++j) junk += static_cast<char>(rng.index(256));
        parse_logic(junk, LogicMode::Pl);
        parse_logic(junk, LogicMode::Fol);
        parse_regex(junk, 2);
    }
    // deep nesting hits the recursion cap rather than the stack
    std::string deep(20000, '(');
    ParseOutcome p = parse_logic(deep + "p1", LogicMode::Pl);
    CHECK(!p.ok());
    ParseOutcome r = parse_regex(std::string(20000, '(') + "0", 2);
    CHECK(!r.ok());
}

TEST_CASE("leakage: vocabulary names alone are fine") {
    LeakageResult ok = leakage_check("The proposition p5 or the negation of p12", GrammarKind::Pl);
    CHECK(!ok.violation);
}

TEST_CASE("leakage: copied formulas and glyphs are violations") {
    LeakageResult sub = leakage_check("The formula (p5 ∨ ¬p12) holds", GrammarKind::Pl);
    CHECK(sub.violation);

    LeakageResult glyph = leakage_check("p1 ∧ p1 simplifies to p1", GrammarKind::Pl);
    CHECK(glyph.violation);
    CHECK(glyph.what == "operator glyph");

    LeakageResult star = leakage_check("one or more 1s: 1* basically", GrammarKind::Regex);
    CHECK(star.violation);

    LeakageResult digits = leakage_check("the string must start with 10", GrammarKind::Regex);
    CHECK(digits.violation);

    LeakageResult single = leakage_check("starts with the digit '0'", GrammarKind::Regex);
    CHECK(!single.violation);
}

TEST_CASE("leakage: printed formulas with operators always violate") {
    Rng rng(246);
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f = random_pl_formula(rng, 4, 6);
        LeakageResult r = leakage_check(print_formula(*f), GrammarKind::Pl);
        CHECK(r.violation == (complexity_of(*f).operator_count >= 1));
    }
}

TEST_CASE("leakage: the oracle descriptions stay clean") {
    Rng rng(135);
    for (int i = 0; i < 200; ++i) {
        FormulaPtr f = random_pl_formula(rng, 4, 6);
        CHECK(!leakage_check(oracle_describe(*f), GrammarKind::Pl).violation);
    }
    for (int i = 0; i < 200; ++i) {
        RegexPtr r = random_regex(rng, 3, 2);
        CHECK(!leakage_check(oracle_describe(*r), GrammarKind::Regex).violation);
    }
}

TEST_SUITE_END();
