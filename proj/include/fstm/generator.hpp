#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fstm/cfg.hpp"
#include "fstm/formula.hpp"
#include "fstm/grounding.hpp"
#include "fstm/vocabulary.hpp"

namespace fstm {

enum class BucketMetric {
    OperatorCount,
    CfgDepth,
    AndCount,
    OrCount,
    NotCount,
    DfaNodes,
    DfaEdges,
    DfaDensity, // bucketed by the rounded tenth, keyed as 10 * density
};

std::string to_string(BucketMetric m);
BucketMetric bucket_metric_from_string(const std::string& s);

struct GenParams {
    int depth = 40;
    int branching = 200;
    int sample_count = 50;
    BucketMetric metric = BucketMetric::OperatorCount;
    uint64_t seed = 0;

    std::string validate() const;
};

struct Sample {
    std::string id;
    GrammarKind kind = GrammarKind::Pl;
    std::string expression; // canonical text
    ComplexityProfile complexity;
    BucketMetric bucket_metric = BucketMetric::OperatorCount;
    int bucket_value = 0;
    int batch = 0;
    // self-contained vocabulary snapshot: the names occurring in the
    // expression plus what prompts need to describe them
    OccurringNames names;
    std::vector<PredicateEntry> predicate_entries; // occurring predicates with arity/gloss
    std::vector<std::pair<std::string, std::string>> proposition_glosses;
    int alphabet_size = 2;
};

// Level-by-level expansion per the branching/depth schedule: at each level
// up to `branching` frontier forms are sampled and each is rewritten
// `branching` times; completed all-terminal forms are collected at every
// level.  Epsilon productions resolve at symbol-creation time so recorded
// depths equal parse-tree depth with invisible epsilon leaves.
// Deterministic for a given seed; leaves are deduplicated by text.
std::vector<CfgExpression> expand_tree(const Cfg& grammar, const GenParams& params);

struct BucketCensus {
    int value = 0;
    int population = 0;
    int emitted = 0;
    bool underfilled = false; // population below sample_count (reported, never padded)
};

struct DatasetBatch {
    int index = 0;
    uint64_t seed = 0;
    std::vector<BucketCensus> census;
};

struct Dataset {
    GrammarKind kind = GrammarKind::Pl;
    std::vector<Sample> samples;
    std::vector<DatasetBatch> batches;
    Vocabulary vocabulary;
};

// Algorithm: expand, categorize leaves by the metric, uniformly sample up
// to sample_count per bucket without replacement, then ground with the
// vocabulary.  Batches use independently derived seeds.
Dataset sample_dataset(GrammarKind kind, const GenParams& gparams, const VocabParams& vparams,
                       int batches, int ksat_k = 3, const Cfg* custom_grammar = nullptr);

} // namespace fstm
