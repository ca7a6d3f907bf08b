#include "fstm/score_table.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fstm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        size_t b = field.find_first_not_of(" \t\r");
        size_t e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("non-numeric score '" + s + "' in " + context);
    }
}

} // namespace

std::vector<std::string> ScoreTable::benchmarks() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& r : rows)
        if (seen.insert(r.benchmark).second) out.push_back(r.benchmark);
    return out;
}

std::vector<std::pair<std::string, double>> ScoreTable::scores_for(
    const std::string& benchmark) const {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& r : rows)
        if (r.benchmark == benchmark) out.emplace_back(r.model, r.score);
    return out;
}

ScoreTable parse_score_table(const std::string& csv_text) {
    ScoreTable table;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty score table");
    auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "model" || header[1] != "benchmark" ||
        header[2] != "score")
        throw std::runtime_error("score table header must be 'model,benchmark,score'");
    std::set<std::pair<std::string, std::string>> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw std::runtime_error("score table line " + std::to_string(line_no) +
                                     " must have 3 fields");
        if (!seen.insert({fields[0], fields[1]}).second)
            throw std::runtime_error("duplicate (model, benchmark) pair: " + fields[0] + ", " +
                                     fields[1]);
        table.rows.push_back(
            {fields[0], fields[1], parse_number(fields[2], "line " + std::to_string(line_no))});
    }
    return table;
}

ScoreTable read_score_table(const std::string& path) { return parse_score_table(slurp(path)); }

std::vector<OurScoreRow> parse_our_scores(const std::string& csv_text) {
    std::vector<OurScoreRow> rows;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty score file");
    auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "model" || header[1] != "bucket_value" ||
        header[2] != "accuracy")
        throw std::runtime_error("our-score header must be 'model,bucket_value,accuracy'");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw std::runtime_error("score line " + std::to_string(line_no) +
                                     " must have 3 fields");
        OurScoreRow r;
        r.model = fields[0];
        r.bucket_value = static_cast<int>(
            parse_number(fields[1], "line " + std::to_string(line_no)));
        r.accuracy = parse_number(fields[2], "line " + std::to_string(line_no));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<OurScoreRow> read_our_scores(const std::string& path) {
    return parse_our_scores(slurp(path));
}

} // namespace fstm
