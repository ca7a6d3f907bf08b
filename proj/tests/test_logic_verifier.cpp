#include <doctest.h>

#include "fstm/logic_verifier.hpp"
#include "fstm/parse.hpp"
#include "test_helpers.hpp"

using namespace fstm;
using namespace fstm::testing;

TEST_SUITE_BEGIN("logic_verifier");

namespace {

FormulaPtr pl(const std::string& text) {
    ParseOutcome p = parse_logic(text, LogicMode::Pl);
    REQUIRE(p.ok());
    return p.formula;
}

} // namespace

TEST_CASE("De Morgan pair is equivalent") {
    CHECK(pl_equivalent(*pl("¬(p1 ∧ p2)"), *pl("(¬p1 ∨ ¬p2)")).equivalent());
}

TEST_CASE("idempotent conjunction is equivalent") {
    CHECK(pl_equivalent(*pl("p1 ∧ p2 ∧ p1"), *pl("p1 ∧ p2")).equivalent());
}

TEST_CASE("a dropped outer negation is caught with its witness") {
    Verdict v = pl_equivalent(*pl("(¬p11 ∧ ¬p8)"), *pl("¬(p11 ∧ p8)"));
    REQUIRE(v.not_equivalent());
    REQUIRE(v.falsifying_assignment.has_value());
    CHECK(v.falsifying_assignment->at("p11") == true);
    CHECK(v.falsifying_assignment->at("p8") == false);
}

TEST_CASE("agreement with the brute-force oracle, both decision routes") {
    Rng rng(314159);
    int not_equivalent = 0;
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f1 = random_pl_formula(rng, 4, 6);
        FormulaPtr f2 = rng.chance(0.25) ? f1 : random_pl_formula(rng, 4, 6);
        bool truth = oracle_pl_equivalent(*f1, *f2);
        Verdict table = pl_equivalent(*f1, *f2, PlMethod::TruthTable);
        Verdict dpll = pl_equivalent(*f1, *f2, PlMethod::Dpll);
        CHECK(table.equivalent() == truth);
        CHECK(dpll.equivalent() == truth);
        if (!truth) {
            ++not_equivalent;
            // both witnesses falsify under the independent evaluator
            for (const Verdict* v : {&table, &dpll}) {
                REQUIRE(v->falsifying_assignment.has_value());
                std::map<std::string, bool> a = *v->falsifying_assignment;
                std::set<std::string> atoms;
                oracle_atoms(*f1, atoms);
                oracle_atoms(*f2, atoms);
                for (const auto& name : atoms)
                    if (!a.count(name)) a[name] = false;
                CHECK(oracle_eval(*f1, a) != oracle_eval(*f2, a));
            }
        }
    }
    CHECK(not_equivalent > 50); // the sample must exercise both outcomes
}

TEST_CASE("wide formulas take the solver route and still agree") {
    // above twenty atoms the decision switches from table enumeration to
    // the CNF solver; build both-route-checkable pairs just below the cap
    Rng rng(808080);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FormulaPtr> left, right;
        for (int i = 0; i < 13; ++i) {
            FormulaPtr atom = Formula::prop("p" + std::to_string(i + 1));
            FormulaPtr wide = Formula::prop("q" + std::to_string(i + 1));
            left.push_back(Formula::disjunction({atom, wide}));
            right.push_back(Formula::disjunction({wide, atom})); // commuted
        }
        FormulaPtr f1 = Formula::conjunction(std::move(left));   // 26 atoms
        FormulaPtr f2 = Formula::conjunction(std::move(right));
        CHECK(pl_equivalent(*f1, *f2).equivalent());

        // flip one literal: must be caught with a checkable witness
        int flipped = static_cast<int>(rng.index(13));
        std::vector<FormulaPtr> broken;
        for (int i = 0; i < 13; ++i) {
            FormulaPtr atom = Formula::prop("p" + std::to_string(i + 1));
            FormulaPtr wide = Formula::prop("q" + std::to_string(i + 1));
            if (i == flipped)
                broken.push_back(Formula::disjunction({Formula::negation(atom), wide}));
            else
                broken.push_back(Formula::disjunction({atom, wide}));
        }
        Verdict v = pl_equivalent(*f1, *Formula::conjunction(std::move(broken)));
        REQUIRE(v.not_equivalent());
        REQUIRE(v.falsifying_assignment.has_value());
    }
}

TEST_CASE("algebraic first-order laws are proved within budget") {
    auto px = [](const char* var) { return Formula::pred("P", {Term::variable(var)}); };
    auto qx = [](const char* var) { return Formula::pred("Q", {Term::variable(var)}); };

    // commuting a universal prefix
    auto swap_lhs = Formula::forall(
        "x1", Formula::forall("x2", Formula::pred("R", {Term::variable("x1"),
                                                        Term::variable("x2")})));
    auto swap_rhs = Formula::forall(
        "x2", Formula::forall("x1", Formula::pred("R", {Term::variable("x1"),
                                                        Term::variable("x2")})));
    CHECK(fol_equivalent(*swap_lhs, *swap_rhs).equivalent());

    // distributing a universal over a conjunction
    auto dist_lhs = Formula::forall("x1", Formula::conjunction({px("x1"), qx("x1")}));
    auto dist_rhs = Formula::conjunction(
        {Formula::forall("x1", px("x1")), Formula::forall("x2", qx("x2"))});
    CHECK(fol_equivalent(*dist_lhs, *dist_rhs).equivalent());

    // the existential analogue of distribution is NOT a law
    auto bad_lhs = Formula::exists("x1", Formula::conjunction({px("x1"), qx("x1")}));
    auto bad_rhs = Formula::conjunction(
        {Formula::exists("x1", px("x1")), Formula::exists("x2", qx("x2"))});
    Verdict v = fol_equivalent(*bad_lhs, *bad_rhs);
    REQUIRE(v.not_equivalent());
    REQUIRE(v.countermodel.has_value());
    CHECK(eval_in_model(*bad_lhs, *v.countermodel) != eval_in_model(*bad_rhs, *v.countermodel));

    // swapping unlike quantifiers is one-directional only
    auto ae = Formula::exists(
        "x1", Formula::forall("x2", Formula::pred("R", {Term::variable("x1"),
                                                        Term::variable("x2")})));
    auto ea = Formula::forall(
        "x2", Formula::exists("x1", Formula::pred("R", {Term::variable("x1"),
                                                        Term::variable("x2")})));
    Verdict swap = fol_equivalent(*ae, *ea);
    CHECK(!swap.equivalent()); // NotEquivalent or Unknown, never proved
}

TEST_CASE("equivalence is reflexive and symmetric") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        FormulaPtr f1 = random_pl_formula(rng, 4, 5);
        FormulaPtr f2 = random_pl_formula(rng, 4, 5);
        CHECK(pl_equivalent(*f1, *f1).equivalent());
        CHECK(pl_equivalent(*f1, *f2).equivalent() == pl_equivalent(*f2, *f1).equivalent());
    }
}

TEST_CASE("clause form of the standard examples") {
    auto clauses = clausify(*pl("p1 ∧ p2"));
    REQUIRE(clauses.size() == 2);
    CHECK(to_string(clauses[0]) == "{p1}");
    CHECK(to_string(clauses[1]) == "{p2}");

    auto ex = clausify(*Formula::exists("x1", Formula::pred("P", {Term::variable("x1")})));
    REQUIRE(ex.size() == 1);
    REQUIRE(ex[0].size() == 1);
    CHECK(ex[0][0].pred == "P");
    REQUIRE(ex[0][0].args.size() == 1);
    CHECK(ex[0][0].args[0].kind == FolTerm::Kind::Const); // Skolem constant
    CHECK(ex[0][0].args[0].name.starts_with("sk"));

    auto all = clausify(*Formula::forall(
        "x1", Formula::disjunction({Formula::pred("P", {Term::variable("x1")}),
                                    Formula::negation(Formula::pred("Q", {Term::variable("x1")}))})));
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].size() == 2);
    // one shared universal variable across both literals
    CHECK(all[0][0].args[0].kind == FolTerm::Kind::Var);
    CHECK(all[0][0].args[0] == all[0][1].args[0]);
}

TEST_CASE("quantifier duality is proved equivalent") {
    auto lhs = Formula::negation(
        Formula::forall("x1", Formula::pred("Man", {Term::variable("x1")})));
    auto rhs = Formula::exists(
        "x2", Formula::negation(Formula::pred("Man", {Term::variable("x2")})));
    Verdict v = fol_equivalent(*lhs, *rhs);
    CHECK(v.equivalent());
    REQUIRE(v.proof_steps.has_value());
    CHECK(*v.proof_steps > 0);
}

TEST_CASE("constant versus variable under an existential is caught with a countermodel") {
    auto lhs = Formula::exists(
        "x1", Formula::negation(Formula::pred("pred2", {Term::object("p4")})));
    auto rhs = Formula::exists(
        "x1", Formula::negation(Formula::pred("pred2", {Term::variable("x1")})));
    Verdict v = fol_equivalent(*lhs, *rhs);
    REQUIRE(v.not_equivalent());
    REQUIRE(v.countermodel.has_value());
    CHECK(v.countermodel->universe_size == 2);
    CHECK(eval_in_model(*lhs, *v.countermodel) != eval_in_model(*rhs, *v.countermodel));
}

TEST_CASE("reflexivity for closed sentences") {
    Rng rng(23);
    for (int i = 0; i < 40; ++i) {
        FormulaPtr f = random_fol_sentence(rng, 3, 3, 3);
        CHECK(fol_equivalent(*f, *f).equivalent());
    }
}

TEST_CASE("exhausted budgets produce Unknown, never a guess") {
    auto lhs = Formula::forall("x1", Formula::pred("P", {Term::variable("x1")}));
    auto rhs = Formula::forall("x1", Formula::pred("Q", {Term::variable("x1")}));
    FolBudget starved;
    starved.max_model_size = 0;
    starved.max_proof_steps = 0;
    Verdict v = fol_equivalent(*lhs, *rhs, starved);
    CHECK(v.unknown());
    CHECK(v.reason == "budget");

    FolBudget instant;
    instant.timeout = std::chrono::milliseconds(0);
    Verdict t = fol_equivalent(*lhs, *rhs, instant);
    CHECK(t.unknown());
}

TEST_CASE("verdicts never contradict the small-model oracle") {
    // ground-able setting: two predicates, two objects, arity fixed by the
    // predicate name suffix, quantifier prefixes up to two variables
    Rng rng(4242);
    int unknown = 0, checked = 0;
    for (int i = 0; i < 60; ++i) {
        FormulaPtr f1 = random_fol_sentence(rng, 2, 2, 2);
        FormulaPtr f2 = rng.chance(0.3) ? f1 : random_fol_sentence(rng, 2, 2, 2);

        // oracle: equivalence over every interpretation with 1 or 2
        // elements, objects mapped in all (also coinciding) ways
        bool differ = false;
        for (int k = 1; k <= 2 && !differ; ++k) {
            std::set<std::string> constants;
            std::map<std::string, int> preds;
            auto collect = [&](const Formula& f, auto&& self) -> void {
                if (f.kind == FormulaKind::Pred) {
                    preds[f.name + "/" + std::to_string(f.args.size())] =
                        static_cast<int>(f.args.size());
                    for (const Term& t : f.args)
                        if (t.kind == Term::Kind::Object) constants.insert(t.name);
                }
                for (const auto& c : f.children) self(*c, self);
            };
            collect(*f1, collect);
            collect(*f2, collect);

            std::vector<std::string> cs(constants.begin(), constants.end());
            long obj_maps = 1;
            for (size_t c = 0; c < cs.size(); ++c) obj_maps *= k;
            long rows_total = 0;
            std::vector<std::pair<std::string, int>> pred_list(preds.begin(), preds.end());
            std::vector<long> rows_per;
            for (const auto& [key, arity] : pred_list) {
                long rows = 1;
                for (int a = 0; a < arity; ++a) rows *= k;
                rows_per.push_back(rows);
                rows_total += rows;
            }
            REQUIRE(rows_total <= 20);
            for (long om = 0; om < obj_maps && !differ; ++om) {
                FiniteModel m;
                m.universe_size = k;
                long code = om;
                for (const auto& name : cs) {
                    m.objects[name] = static_cast<int>(code % k);
                    code /= k;
                }
                for (uint64_t tables = 0; tables < (uint64_t(1) << rows_total); ++tables) {
                    uint64_t bits = tables;
                    for (size_t pi = 0; pi < pred_list.size(); ++pi) {
                        std::vector<bool> table(rows_per[pi]);
                        for (long r = 0; r < rows_per[pi]; ++r) {
                            table[r] = bits & 1;
                            bits >>= 1;
                        }
                        m.predicate_tables[pred_list[pi].first] = std::move(table);
                    }
                    if (eval_in_model(*f1, m) != eval_in_model(*f2, m)) {
                        differ = true;
                        break;
                    }
                }
            }
        }

        Verdict v = fol_equivalent(*f1, *f2);
        ++checked;
        if (v.unknown()) {
            ++unknown;
            continue;
        }
        if (differ) CHECK(!v.equivalent());
        if (v.not_equivalent()) {
            REQUIRE(v.countermodel.has_value());
            CHECK(eval_in_model(*f1, *v.countermodel) != eval_in_model(*f2, *v.countermodel));
        }
    }
    CHECK(checked == 60);
    CHECK(unknown < checked / 5);
}

TEST_CASE("equality is identity for the model checker") {
    auto eq_same = Formula::pred("=", {Term::object("a"), Term::object("a")});
    auto eq_diff = Formula::pred("=", {Term::object("a"), Term::object("b")});
    FiniteModel m;
    m.universe_size = 2;
    m.objects = {{"a", 0}, {"b", 1}};
    CHECK(eval_in_model(*eq_same, m));
    CHECK(!eval_in_model(*eq_diff, m));
}

TEST_SUITE_END();
