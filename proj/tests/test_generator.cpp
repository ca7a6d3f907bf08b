#include <doctest.h>

#include <algorithm>
#include <set>

#include "fstm/generator.hpp"
#include "fstm/dataset_io.hpp"
#include "fstm/parse.hpp"
#include "test_helpers.hpp"

using namespace fstm;

TEST_SUITE_BEGIN("generator");

namespace {

std::string rule_text(const CfgRule& r) {
    std::string s = r.lhs + " ->";
    for (const auto& sym : r.rhs) s += " " + sym.text;
    return s;
}

std::set<std::string> leaf_texts(const std::vector<CfgExpression>& leaves) {
    std::set<std::string> out;
    for (const auto& l : leaves) out.insert(l.text());
    return out;
}

// exhaustive level-synchronous expansion for tiny grammars, mirroring the
// depth convention (epsilon resolves at creation); used as the coverage
// oracle
void exhaustive_expand(const Cfg& g, int depth, std::set<std::string>* leaves,
                       std::map<std::string, int>* leaf_depths) {
    struct Sym {
        std::string text;
        bool terminal;
        int depth;
    };
    using Form = std::vector<Sym>;
    std::vector<Form> frontier{{{g.start, false, 0}}};
    auto is_complete = [](const Form& f) {
        return std::all_of(f.begin(), f.end(), [](const Sym& s) { return s.terminal; });
    };
    auto emit = [&](const Form& f) {
        std::string text;
        int d = 0;
        for (const auto& s : f) {
            text += s.text;
            d = std::max(d, s.depth);
        }
        leaves->insert(text);
        if (leaf_depths && !leaf_depths->count(text)) (*leaf_depths)[text] = d;
    };
    for (int level = 1; level <= depth && !frontier.empty(); ++level) {
        std::vector<Form> next;
        for (const Form& form : frontier) {
            // one child per combination of rule choices (and per epsilon
            // decision for fresh nonterminals that allow one)
            std::vector<Form> partial{{}};
            for (const auto& sym : form) {
                std::vector<Form> grown;
                if (sym.terminal) {
                    for (Form p : partial) {
                        p.push_back(sym);
                        grown.push_back(std::move(p));
                    }
                } else {
                    for (const CfgRule* rule : g.rules_for(sym.text)) {
                        std::vector<Form> expansions{{}};
                        for (const auto& rs : rule->rhs) {
                            std::vector<Form> acc;
                            for (const Form& e : expansions) {
                                if (!rs.terminal && g.has_epsilon_rule(rs.text)) {
                                    acc.push_back(e); // vanished now
                                    Form kept = e;
                                    kept.push_back({rs.text, false, sym.depth + 1});
                                    acc.push_back(std::move(kept));
                                } else {
                                    Form kept = e;
                                    kept.push_back({rs.text, rs.terminal, sym.depth + 1});
                                    acc.push_back(std::move(kept));
                                }
                            }
                            expansions = std::move(acc);
                        }
                        for (const Form& p : partial)
                            for (const Form& e : expansions) {
                                Form merged = p;
                                merged.insert(merged.end(), e.begin(), e.end());
                                grown.push_back(std::move(merged));
                            }
                    }
                }
                partial = std::move(grown);
            }
            for (Form& child : partial) {
                if (is_complete(child))
                    emit(child);
                else
                    next.push_back(std::move(child));
            }
        }
        std::sort(next.begin(), next.end(), [](const Form& a, const Form& b) {
            auto key = [](const Form& f) {
                std::string s;
                for (const auto& x : f) s += x.text + "\x01" + std::to_string(x.depth) + "\x02";
                return s;
            };
            return key(a) < key(b);
        });
        next.erase(std::unique(next.begin(), next.end(),
                               [](const Form& a, const Form& b) {
                                   if (a.size() != b.size()) return false;
                                   for (size_t i = 0; i < a.size(); ++i)
                                       if (a[i].text != b[i].text || a[i].depth != b[i].depth)
                                           return false;
                                   return true;
                               }),
                   next.end());
        frontier = std::move(next);
    }
}

} // namespace

TEST_CASE("builtin grammars match the published productions") {
    Cfg ksat = builtin_grammar(GrammarKind::Ksat, 3);
    std::set<std::string> rules;
    for (const auto& r : ksat.rules) rules.insert(rule_text(r));
    CHECK(rules.count("S -> S ∧ S"));
    CHECK(rules.count("S -> ( P ∨ P ∨ P P ) ") == 0); // sanity: no malformed clause
    CHECK(rules.count("S -> ( P ∨ P ∨ P )"));
    CHECK(rules.count("P -> ¬ v"));
    CHECK(rules.count("P -> v"));
    CHECK(ksat.rules.size() == 4);

    Cfg pl = builtin_grammar(GrammarKind::Pl);
    CHECK(pl.rules.size() == 5);

    Cfg fol = builtin_grammar(GrammarKind::FolSynthetic);
    std::set<std::string> fol_rules;
    for (const auto& r : fol.rules) fol_rules.insert(rule_text(r));
    CHECK(fol_rules.count("Q -> F"));
    CHECK(fol_rules.count("Q -> ( ∀ f . Q )"));
    CHECK(fol_rules.count("Q -> ( ∃ f . Q )"));

    Cfg regex = builtin_grammar(GrammarKind::Regex);
    std::set<std::string> re_rules;
    for (const auto& r : regex.rules) re_rules.insert(rule_text(r));
    CHECK(re_rules.count("S -> ( S ) K"));
    CHECK(re_rules.count("S -> S sigma K"));
    CHECK(re_rules.count("S -> sigma K"));
    CHECK(re_rules.count("K -> *"));
    CHECK(re_rules.count("K ->")); // epsilon

    CHECK_THROWS(builtin_grammar(GrammarKind::Ksat, 0));
}

TEST_CASE("expansion of a*b to depth 2 reaches ab and b") {
    Cfg g = parse_cfg_file("S -> A B\nA -> a A | eps\nB -> b\n");
    GenParams p;
    p.depth = 2;
    p.branching = 64;
    p.seed = 5;
    std::vector<CfgExpression> leaves = expand_tree(g, p);
    std::set<std::string> texts = leaf_texts(leaves);
    CHECK(texts.count("ab"));
    CHECK(texts.count("b"));
    for (const auto& l : leaves)
        if (l.text() == "ab") CHECK(l.depth == 2);
}

TEST_CASE("expansion depth semantics ignore epsilon leaves") {
    // oracle agreement at tiny scale: sampled leaves stay inside the
    // exhaustive depth-bounded set, with the same recorded depths
    Cfg g = parse_cfg_file("S -> A B\nA -> a A | eps\nB -> b\n");
    std::set<std::string> oracle;
    std::map<std::string, int> oracle_depths;
    exhaustive_expand(g, 3, &oracle, &oracle_depths);
    CHECK(oracle.count("ab"));
    CHECK(oracle_depths["ab"] == 2);
    CHECK(oracle.count("aab"));
    CHECK(oracle_depths["aab"] == 3);

    GenParams p;
    p.depth = 3;
    p.branching = 50;
    p.seed = 17;
    for (const auto& leaf : expand_tree(g, p)) {
        CHECK(oracle.count(leaf.text()));
        CHECK(oracle_depths[leaf.text()] == leaf.depth);
    }
}

TEST_CASE("propositional grammar at depth 1 yields only atomic leaves") {
    GenParams p;
    p.depth = 1;
    p.branching = 50;
    p.seed = 3;
    std::set<std::string> texts = leaf_texts(expand_tree(builtin_grammar(GrammarKind::Pl), p));
    CHECK(texts == std::set<std::string>{"v", "¬v"});
}

TEST_CASE("expansion is deterministic for a seed") {
    GenParams p;
    p.depth = 6;
    p.branching = 12;
    p.seed = 21;
    auto a = expand_tree(builtin_grammar(GrammarKind::Pl), p);
    auto b = expand_tree(builtin_grammar(GrammarKind::Pl), p);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].text() == b[i].text());
        CHECK(a[i].depth == b[i].depth);
    }
    p.seed = 22;
    auto c = expand_tree(builtin_grammar(GrammarKind::Pl), p);
    CHECK(leaf_texts(a) != leaf_texts(c));
}

TEST_CASE("datasets are reproducible byte for byte") {
    GenerateSpec spec;
    spec.kind = GrammarKind::Pl;
    spec.gen = {6, 12, 5, BucketMetric::OperatorCount, 77};
    spec.vocab.seed = 9;
    spec.batches = 2;
    Dataset a = generate_from_spec(spec);
    Dataset b = generate_from_spec(spec);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i)
        CHECK(sample_to_json(a.samples[i]).dump() == sample_to_json(b.samples[i]).dump());
}

TEST_CASE("bucket sizes are exactly min(sample_count, population)") {
    GenParams gp{8, 16, 10, BucketMetric::OperatorCount, 123};
    VocabParams vp;
    vp.seed = 1;
    Dataset ds = sample_dataset(GrammarKind::Pl, gp, vp, 1);
    std::map<int, int> emitted;
    for (const auto& s : ds.samples) emitted[s.bucket_value]++;
    for (const auto& census : ds.batches[0].census) {
        if (census.population == 0) {
            CHECK(census.underfilled);
            CHECK(!emitted.count(census.value));
            continue;
        }
        CHECK(census.emitted == std::min(10, census.population));
        CHECK(emitted[census.value] == census.emitted);
        CHECK(census.underfilled == (census.population < 10));
    }
}

TEST_CASE("ksat samples are conjunctions of width-k clauses") {
    GenParams gp{8, 16, 10, BucketMetric::OperatorCount, 5};
    VocabParams vp;
    Dataset ds = sample_dataset(GrammarKind::Ksat, gp, vp, 1, 3);
    REQUIRE(!ds.samples.empty());
    for (const auto& s : ds.samples) {
        ParseOutcome p = parse_logic(s.expression, LogicMode::Pl);
        REQUIRE(p.ok());
        auto is_literal = [](const Formula& f) {
            return f.kind == FormulaKind::Prop ||
                   (f.kind == FormulaKind::Not && f.children[0]->kind == FormulaKind::Prop);
        };
        auto is_clause = [&](const Formula& f) {
            if (f.kind != FormulaKind::Or || f.children.size() != 3) return false;
            return std::all_of(f.children.begin(), f.children.end(),
                               [&](const FormulaPtr& c) { return is_literal(*c); });
        };
        const Formula& f = *p.formula;
        bool ok = is_clause(f) ||
                  (f.kind == FormulaKind::And &&
                   std::all_of(f.children.begin(), f.children.end(),
                               [&](const FormulaPtr& c) { return is_clause(*c); }));
        CHECK(ok);
    }
}

TEST_CASE("every sample round-trips through the parser") {
    GenParams gp{8, 16, 8, BucketMetric::OperatorCount, 31};
    VocabParams vp;
    vp.seed = 2;
    for (GrammarKind kind : {GrammarKind::Pl, GrammarKind::FolSynthetic, GrammarKind::Regex}) {
        GenParams g = gp;
        if (kind == GrammarKind::Regex) g.metric = BucketMetric::CfgDepth;
        Dataset ds = sample_dataset(kind, g, vp, 1);
        REQUIRE(!ds.samples.empty());
        for (const auto& s : ds.samples) {
            if (kind == GrammarKind::Regex) {
                ParseOutcome p = parse_regex(s.expression, vp.alphabet_size);
                REQUIRE(p.ok());
                CHECK(print_regex(*p.regex) == s.expression);
            } else {
                Vocabulary vocab;
                vocab.predicates = s.predicate_entries;
                ParseOutcome p = parse_logic(
                    s.expression, kind == GrammarKind::Pl ? LogicMode::Pl : LogicMode::Fol,
                    &vocab);
                REQUIRE(p.ok());
                CHECK(print_formula(*p.formula) == s.expression);
                // stored complexity is recomputable from the expression
                CHECK(complexity_of(*p.formula, s.complexity.cfg_depth) == s.complexity);
            }
        }
    }
}

TEST_CASE("tiny-scale coverage: sampled expressions come from the exhaustive enumeration") {
    Cfg pl = builtin_grammar(GrammarKind::Pl);
    std::set<std::string> shapes;
    exhaustive_expand(pl, 3, &shapes, nullptr);
    std::set<std::string> enumerated = fstm::testing::enumerate_pl_groundings(shapes, 2);
    REQUIRE(!enumerated.empty());

    GenParams gp{3, 40, 1000000, BucketMetric::OperatorCount, 4242};
    VocabParams vp;
    vp.num_propositions = 2;
    Dataset ds = sample_dataset(GrammarKind::Pl, gp, vp, 2);
    REQUIRE(!ds.samples.empty());
    for (const auto& s : ds.samples) CHECK(enumerated.count(s.expression));
}

TEST_CASE("custom grammar with an undeclared symbol names it") {
    CHECK_THROWS_WITH_AS(parse_cfg_file("S -> A b\n"),
                         doctest::Contains("undeclared symbol 'A'"), std::runtime_error);
}

TEST_SUITE_END();
