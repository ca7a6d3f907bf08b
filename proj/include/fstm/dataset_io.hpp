#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fstm/generator.hpp"
#include "fstm/pipeline.hpp"

namespace fstm {

using ojson = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Everything needed to regenerate a dataset byte for byte.
struct GenerateSpec {
    GrammarKind kind = GrammarKind::Pl;
    int ksat_k = 3;
    GenParams gen;
    VocabParams vocab;
    int batches = 1;
    std::string custom_grammar; // grammar-file text, empty for builtin
    bool gzip = false;

    ojson to_json() const;
    static GenerateSpec from_json(const ojson& j);
};

Dataset generate_from_spec(const GenerateSpec& spec);

ojson sample_to_json(const Sample& s);
Sample sample_from_json(const ojson& j);

ojson record_to_json(const SequenceRecord& r);
SequenceRecord record_from_json(const ojson& j);

ojson verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const ojson& j);

// Writes dataset.jsonl (or dataset.jsonl.gz) plus manifest.json into dir.
// Returns the dataset file path.
std::string write_dataset(const Dataset& ds, const GenerateSpec& spec, const std::string& dir);

std::vector<Sample> read_dataset(const std::string& jsonl_path);
GenerateSpec read_manifest(const std::string& manifest_path);

void append_record(const std::string& jsonl_path, const SequenceRecord& r);
std::vector<SequenceRecord> read_records(const std::string& jsonl_path);

// Aggregated outputs for one evaluation run: report.csv (per bucket),
// long.csv (plot-ready long format), scores.csv (correlate input) and
// summary.json.  Deterministic for a given record set.
void write_reports(const std::vector<SequenceRecord>& records, const std::string& dir,
                   const std::string& model);

// Plain or gzip file helpers (gzip variants require zlib at build time).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
bool gzip_supported();

} // namespace fstm
