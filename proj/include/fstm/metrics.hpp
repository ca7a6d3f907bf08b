#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fstm {

// ---------------------------------------------------------------------
// Aggregation over evaluation records (see pipeline.hpp for records).

struct BucketReport {
    int bucket_value = 0;
    int total = 0;
    int compliant = 0;       // parsed and leak-free at every step taken
    int equivalent = 0;      // status maintained
    int unknown = 0;         // stopped on an Unknown verdict
    double compliance = 0.0; // compliant / total
    double accuracy = 0.0;   // equivalent / total
    double accuracy_over_compliant = 0.0;
    double batch_mean_accuracy = 0.0;
    double batch_std_accuracy = 0.0; // population convention across batches
    int batches = 0;
};

// What aggregation needs to know about one evaluated sample.
struct RecordSummary {
    std::string sample_id;
    int bucket_value = 0;
    int batch = 0;
    bool compliant = false;
    bool equivalent = false;
    bool unknown = false;
};

// Groups records by bucket value; Unknown outcomes stay in the
// denominator but never count toward accuracy.
std::vector<BucketReport> aggregate(const std::vector<RecordSummary>& records);

// ---------------------------------------------------------------------
// Judge scoring (positives = Equivalent).

struct JudgeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false; // a denominator was zero
};

enum class JudgeAnswer { Yes, No, Unparseable };

// Unparseable answers count as wrong for whichever class the pair is in.
JudgeScore judge_f1(const std::vector<JudgeAnswer>& answers,
                    const std::vector<bool>& ground_truth_equivalent);

// ---------------------------------------------------------------------
// Correlation and predictive power.

struct PearsonResult {
    double rho = 0.0;
    double p_value = 1.0;
    bool defined = false; // false for constant series or fewer than 3 points
};

// Sample correlation; two-sided p-value from the t-distribution with
// n - 2 degrees of freedom, or an exact permutation test when requested
// (available for n <= 8).
PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys,
                      bool exact_permutation = false);

// MLE of P(x_i >= x_j | y_i >= y_j) over ordered pairs; ties in y
// contribute both orders.  strict_y demands y_i > y_j instead.
std::optional<double> predictive_power(const std::vector<double>& xs,
                                       const std::vector<double>& ys, bool strict_y = false);

struct FalsePositiveModel {
    double p_informalize = 0.0; // probability the NL description is faithful
    double p_autoformalize = 0.0;
    double p_hallucinate = 0.0; // wrong NL still autoformalized back to an equivalent
    int n = 1;
};

// (1 - p_I)^n (1 - p_A)^n p_H^n
double false_positive_bound(const FalsePositiveModel& m);

} // namespace fstm
