#pragma once

#include <string>
#include <vector>

namespace fstm {

struct ScoreRow {
    std::string model;
    std::string benchmark;
    double score = 0.0;
};

struct ScoreTable {
    std::vector<ScoreRow> rows;

    std::vector<std::string> benchmarks() const;
    // rows for one benchmark, keyed by model
    std::vector<std::pair<std::string, double>> scores_for(const std::string& benchmark) const;
};

// CSV with header "model,benchmark,score"; (model, benchmark) must be
// unique and scores numeric.
ScoreTable parse_score_table(const std::string& csv_text);
ScoreTable read_score_table(const std::string& path);

// CSV with header "model,bucket_value,accuracy": per-bucket scores from
// evaluation reports for several models.
struct OurScoreRow {
    std::string model;
    int bucket_value = 0;
    double accuracy = 0.0;
};
std::vector<OurScoreRow> parse_our_scores(const std::string& csv_text);
std::vector<OurScoreRow> read_our_scores(const std::string& path);

} // namespace fstm
