#include "fstm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fstm/regex_verifier.hpp"
#include "fstm/rng.hpp"

namespace fstm {

std::string to_string(BucketMetric m) {
    switch (m) {
    case BucketMetric::OperatorCount: return "operator_count";
    case BucketMetric::CfgDepth: return "cfg_depth";
    case BucketMetric::AndCount: return "and_count";
    case BucketMetric::OrCount: return "or_count";
    case BucketMetric::NotCount: return "not_count";
    case BucketMetric::DfaNodes: return "dfa_nodes";
    case BucketMetric::DfaEdges: return "dfa_edges";
    case BucketMetric::DfaDensity: return "dfa_density";
    }
    return "?";
}

BucketMetric bucket_metric_from_string(const std::string& s) {
    if (s == "operator_count") return BucketMetric::OperatorCount;
    if (s == "cfg_depth") return BucketMetric::CfgDepth;
    if (s == "and_count") return BucketMetric::AndCount;
    if (s == "or_count") return BucketMetric::OrCount;
    if (s == "not_count") return BucketMetric::NotCount;
    if (s == "dfa_nodes") return BucketMetric::DfaNodes;
    if (s == "dfa_edges") return BucketMetric::DfaEdges;
    if (s == "dfa_density") return BucketMetric::DfaDensity;
    throw std::runtime_error("unknown bucket metric '" + s + "'");
}

std::string GenParams::validate() const {
    if (depth < 1) return "depth must be >= 1";
    if (branching < 1) return "branching must be >= 1";
    if (sample_count < 1) return "sample_count must be >= 1";
    return "";
}

namespace {

// Interned-symbol view of a grammar for fast expansion.
struct InternedGrammar {
    std::vector<CfgSymbol> symbols; // id -> symbol
    std::map<CfgSymbol, int> ids;
    std::vector<std::vector<std::vector<int>>> rules_by_nt; // nt id -> rules -> rhs ids
    std::vector<bool> is_nonterminal;
    std::vector<bool> has_epsilon;
    int start = 0;

    int intern(const CfgSymbol& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(symbols.size());
        ids.emplace(s, id);
        symbols.push_back(s);
        is_nonterminal.push_back(!s.terminal);
        has_epsilon.push_back(false);
        rules_by_nt.emplace_back();
        return id;
    }

    explicit InternedGrammar(const Cfg& g) {
        start = intern({g.start, false});
        for (const auto& r : g.rules) {
            int lhs = intern({r.lhs, false});
            std::vector<int> rhs;
            for (const auto& s : r.rhs) rhs.push_back(intern(s));
            if (rhs.empty()) has_epsilon[lhs] = true;
            rules_by_nt[lhs].push_back(std::move(rhs));
        }
    }
};

struct SymAt {
    int sym;
    int depth;
};

using Form = std::vector<SymAt>;

bool all_terminal(const InternedGrammar& ig, const Form& f) {
    for (const auto& s : f)
        if (ig.is_nonterminal[s.sym]) return false;
    return true;
}

// One synchronous rewrite: every nonterminal picks a uniform production.
// Fresh nonterminals whose grammar slot has an epsilon production get an
// immediate uniform draw and may vanish on the spot, which keeps the
// recorded depth equal to the epsilon-free parse-tree depth.
Form rewrite_all(const InternedGrammar& ig, const Form& form, Rng& rng) {
    Form out;
    out.reserve(form.size() + 4);
    for (const auto& s : form) {
        if (!ig.is_nonterminal[s.sym]) {
            out.push_back(s);
            continue;
        }
        const auto& rules = ig.rules_by_nt[s.sym];
        const auto& rhs = rules[rng.index(rules.size())];
        for (int child : rhs) {
            if (ig.is_nonterminal[child] && ig.has_epsilon[child]) {
                const auto& crules = ig.rules_by_nt[child];
                if (crules[rng.index(crules.size())].empty()) continue; // vanished
            }
            out.push_back({child, s.depth + 1});
        }
    }
    return out;
}

} // namespace

std::vector<CfgExpression> expand_tree(const Cfg& grammar, const GenParams& params) {
    if (auto err = params.validate(); !err.empty()) throw std::runtime_error(err);
    if (auto err = grammar.validate(); !err.empty()) throw std::runtime_error(err);

    InternedGrammar ig(grammar);
    Rng rng(params.seed);

    std::vector<CfgExpression> leaves;
    std::set<std::string> seen;
    auto collect = [&](const Form& f) {
        CfgExpression e;
        e.depth = 0;
        for (const auto& s : f) {
            e.tokens.push_back(ig.symbols[s.sym]);
            e.depth = std::max(e.depth, s.depth);
        }
        if (seen.insert(e.text()).second) leaves.push_back(std::move(e));
    };

    std::vector<Form> prev{Form{{ig.start, 0}}};
    for (int level = 1; level <= params.depth && !prev.empty(); ++level) {
        std::vector<Form> cur;
        for (int pick = 0; pick < params.branching; ++pick) {
            const Form& node = prev[prev.size() == 1 ? 0 : rng.index(prev.size())];
            for (int child = 0; child < params.branching; ++child) {
                Form next = rewrite_all(ig, node, rng);
                if (all_terminal(ig, next))
                    collect(next);
                else
                    cur.push_back(std::move(next));
            }
        }
        prev = std::move(cur);
    }
    return leaves;
}

namespace {

int metric_value(BucketMetric metric, const CfgExpression& leaf, GrammarKind kind,
                 const GroundExpression* grounded, int alphabet_size) {
    switch (metric) {
    case BucketMetric::OperatorCount:
        return leaf.operator_tokens();
    case BucketMetric::CfgDepth:
        return leaf.depth;
    case BucketMetric::AndCount:
    case BucketMetric::OrCount:
    case BucketMetric::NotCount: {
        auto m = leaf.per_operator();
        const char* key = metric == BucketMetric::AndCount  ? "and"
                          : metric == BucketMetric::OrCount ? "or"
                                                            : "not";
        auto it = m.find(key);
        return it == m.end() ? 0 : it->second;
    }
    case BucketMetric::DfaNodes:
    case BucketMetric::DfaEdges:
    case BucketMetric::DfaDensity: {
        if (kind != GrammarKind::Regex || !grounded || !grounded->regex)
            throw std::runtime_error("DFA metrics apply to regex datasets only");
        DfaStats st = dfa_stats(minimal_dfa(*grounded->regex, alphabet_size));
        if (metric == BucketMetric::DfaNodes) return st.nodes;
        if (metric == BucketMetric::DfaEdges) return st.edges;
        return static_cast<int>(std::lround(st.density * 10.0));
    }
    }
    return 0;
}

bool needs_grounding_first(BucketMetric m) {
    return m == BucketMetric::DfaNodes || m == BucketMetric::DfaEdges ||
           m == BucketMetric::DfaDensity;
}

} // namespace

Dataset sample_dataset(GrammarKind kind, const GenParams& gparams, const VocabParams& vparams,
                       int batches, int ksat_k, const Cfg* custom_grammar) {
    if (auto err = gparams.validate(); !err.empty()) throw std::runtime_error(err);
    if (auto err = vparams.validate(); !err.empty()) throw std::runtime_error(err);
    if (batches < 1) throw std::runtime_error("batches must be >= 1");

    Cfg grammar = custom_grammar ? *custom_grammar : builtin_grammar(kind, ksat_k);
    Dataset ds;
    ds.kind = kind;
    ds.vocabulary = make_vocabulary(vparams);

    for (int b = 0; b < batches; ++b) {
        DatasetBatch batch;
        batch.index = b;
        batch.seed = Rng::derive(gparams.seed, static_cast<uint64_t>(b));

        GenParams bp = gparams;
        bp.seed = batch.seed;
        std::vector<CfgExpression> leaves = expand_tree(grammar, bp);

        // per-leaf grounding seeds are derived from the batch seed so a
        // leaf's grounding does not depend on what else was sampled
        std::vector<GroundExpression> grounded(leaves.size());
        std::vector<bool> has_ground(leaves.size(), false);
        auto ground_leaf = [&](size_t i) -> const GroundExpression& {
            if (!has_ground[i]) {
                Rng grng(Rng::derive(batch.seed, 0x47524e44ULL + i));
                grounded[i] =
                    ground_expression(leaves[i], ds.vocabulary, vparams, kind, grng);
                has_ground[i] = true;
            }
            return grounded[i];
        };

        std::map<int, std::vector<size_t>> buckets;
        for (size_t i = 0; i < leaves.size(); ++i) {
            const GroundExpression* g = nullptr;
            if (needs_grounding_first(gparams.metric)) g = &ground_leaf(i);
            buckets[metric_value(gparams.metric, leaves[i], kind, g, vparams.alphabet_size)]
                .push_back(i);
        }

        Rng pick_rng(Rng::derive(batch.seed, 0x5049434bULL));
        for (auto& [value, members] : buckets) {
            BucketCensus census;
            census.value = value;
            census.population = static_cast<int>(members.size());
            std::vector<size_t> chosen = members;
            pick_rng.shuffle(chosen);
            size_t take = std::min<size_t>(gparams.sample_count, chosen.size());
            chosen.resize(take);
            std::sort(chosen.begin(), chosen.end());
            census.emitted = static_cast<int>(take);
            census.underfilled = census.population < gparams.sample_count;

            for (size_t idx : chosen) {
                const GroundExpression& g = ground_leaf(idx);
                Sample s;
                s.kind = kind;
                s.batch = b;
                s.bucket_metric = gparams.metric;
                s.bucket_value = value;
                s.expression = g.text;
                s.alphabet_size = vparams.alphabet_size;
                if (g.formula) {
                    s.complexity = complexity_of(*g.formula, leaves[idx].depth);
                    s.names = occurring_names(*g.formula);
                    for (const auto& pname : s.names.predicates)
                        if (const PredicateEntry* e = ds.vocabulary.find_predicate(pname))
                            s.predicate_entries.push_back(*e);
                    for (const auto& prop : s.names.propositions)
                        for (const auto& entry : ds.vocabulary.propositions)
                            if (entry.name == prop && !entry.gloss.empty())
                                s.proposition_glosses.emplace_back(prop, entry.gloss);
                } else {
                    s.complexity.cfg_depth = leaves[idx].depth;
                    s.complexity.per_operator["star"] = star_count(*g.regex);
                    s.complexity.operator_count = s.complexity.per_operator["star"];
                }
                s.id = to_string(kind) + "_b" + std::to_string(b) + "_" +
                       std::to_string(ds.samples.size());
                ds.samples.push_back(std::move(s));
            }
            batch.census.push_back(census);
        }

        // flag integer metric gaps as unreachable-at-this-depth warnings
        if (!batch.census.empty()) {
            std::vector<BucketCensus> with_gaps;
            int lo = batch.census.front().value, hi = batch.census.back().value;
            size_t at = 0;
            for (int v = lo; v <= hi; ++v) {
                if (at < batch.census.size() && batch.census[at].value == v) {
                    with_gaps.push_back(batch.census[at++]);
                } else {
                    BucketCensus gap;
                    gap.value = v;
                    gap.underfilled = true;
                    with_gaps.push_back(gap);
                }
            }
            batch.census = std::move(with_gaps);
        }
        ds.batches.push_back(std::move(batch));
    }
    return ds;
}

} // namespace fstm
