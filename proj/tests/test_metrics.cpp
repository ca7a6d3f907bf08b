#include <doctest.h>

#include <cmath>
#include <limits>

#include "fstm/metrics.hpp"
#include "fstm/rng.hpp"

using namespace fstm;

TEST_SUITE_BEGIN("metrics");

namespace {

RecordSummary rec(int bucket, int batch, bool compliant, bool equivalent, bool unknown = false) {
    return {"s", bucket, batch, compliant, equivalent, unknown};
}

} // namespace

TEST_CASE("aggregation ratios") {
    std::vector<RecordSummary> all_good;
    for (int b = 0; b < 3; ++b)
        for (int i = 0; i < 4; ++i) all_good.push_back(rec(b, 0, true, true));
    for (const auto& report : aggregate(all_good)) {
        CHECK(report.compliance == 1.0);
        CHECK(report.accuracy == 1.0);
    }

    std::vector<RecordSummary> mixed{rec(2, 0, true, true), rec(2, 0, true, true),
                                     rec(2, 0, true, true), rec(2, 0, true, false)};
    auto reports = aggregate(mixed);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].accuracy == doctest::Approx(0.75));

    // batch accuracies 1.0 and 0.5: population convention
    std::vector<RecordSummary> batched{rec(1, 0, true, true), rec(1, 0, true, true),
                                       rec(1, 1, true, true), rec(1, 1, true, false)};
    auto by_batch = aggregate(batched);
    REQUIRE(by_batch.size() == 1);
    CHECK(by_batch[0].batch_mean_accuracy == doctest::Approx(0.75));
    CHECK(by_batch[0].batch_std_accuracy == doctest::Approx(0.25));

    // unknown stays in the denominator, never the numerator
    std::vector<RecordSummary> with_unknown{rec(0, 0, true, true),
                                            rec(0, 0, true, false, true)};
    auto u = aggregate(with_unknown);
    CHECK(u[0].accuracy == doctest::Approx(0.5));
    CHECK(u[0].unknown == 1);
    CHECK(u[0].compliance == doctest::Approx(1.0));
}

TEST_CASE("re-aggregation is idempotent") {
    Rng rng(5);
    std::vector<RecordSummary> records;
    for (int i = 0; i < 200; ++i) {
        bool compliant = rng.chance(0.8);
        records.push_back(rec(static_cast<int>(rng.index(5)), static_cast<int>(rng.index(3)),
                              compliant, compliant && rng.chance(0.6)));
    }
    auto once = aggregate(records);
    auto twice = aggregate(records);
    REQUIRE(once.size() == twice.size());
    for (size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].accuracy == twice[i].accuracy);
        CHECK(once[i].compliance == twice[i].compliance);
        // ratios recompute from the counts
        CHECK(once[i].accuracy ==
              doctest::Approx(static_cast<double>(once[i].equivalent) / once[i].total));
    }
}

TEST_CASE("judge F1 fixtures") {
    std::vector<JudgeAnswer> perfect{JudgeAnswer::Yes, JudgeAnswer::No, JudgeAnswer::Yes};
    std::vector<bool> truth{true, false, true};
    JudgeScore p = judge_f1(perfect, truth);
    CHECK(p.f1 == doctest::Approx(1.0));

    // all-yes on a half/half set: precision 1/2, recall 1, F1 = 2/3
    std::vector<JudgeAnswer> all_yes(10, JudgeAnswer::Yes);
    std::vector<bool> half(10, false);
    for (int i = 0; i < 5; ++i) half[i] = true;
    JudgeScore h = judge_f1(all_yes, half);
    CHECK(h.precision == 0.5);
    CHECK(h.recall == 1.0);
    CHECK(h.f1 == 2.0 / 3.0);

    std::vector<JudgeAnswer> silent(6, JudgeAnswer::Unparseable);
    std::vector<bool> mixed{true, true, true, false, false, false};
    JudgeScore s = judge_f1(silent, mixed);
    CHECK(s.recall == 0.0);
    // unparseable answers are wrong for both classes: the negatives count
    // as false positives, so precision collapses too
    CHECK(s.precision == 0.0);
    CHECK(s.f1 == 0.0);
}

TEST_CASE("pearson fixtures") {
    PearsonResult perfect = pearson({1, 2, 3}, {2, 4, 6});
    REQUIRE(perfect.defined);
    CHECK(perfect.rho == doctest::Approx(1.0));
    CHECK(perfect.p_value == doctest::Approx(0.0).epsilon(1e-9));

    PearsonResult four = pearson({1, 2, 3, 4}, {1, 3, 2, 4});
    REQUIRE(four.defined);
    CHECK(std::fabs(four.rho - 0.8) < 1e-12);
    CHECK(four.p_value == doctest::Approx(0.2)); // closed form for df = 2

    PearsonResult anti = pearson({1, 2, 3}, {6, 4, 2});
    CHECK(anti.rho == doctest::Approx(-1.0));

    PearsonResult constant = pearson({1, 1, 1}, {2, 3, 4});
    CHECK(!constant.defined);
    CHECK(!pearson({1, 2}, {3, 4}).defined); // too short

    PearsonResult exact = pearson({1, 2, 3, 4}, {1, 3, 2, 4}, true);
    CHECK(exact.p_value == doctest::Approx(8.0 / 24.0));
}

TEST_CASE("pearson of a series with itself is one") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs;
        for (int i = 0; i < 10; ++i) xs.push_back(rng.real() * 100.0);
        PearsonResult r = pearson(xs, xs);
        REQUIRE(r.defined);
        CHECK(r.rho == doctest::Approx(1.0));
    }
}

TEST_CASE("predictive power fixtures") {
    CHECK(*predictive_power({0.9, 0.5, 0.1}, {0.8, 0.6, 0.2}) == 1.0);
    CHECK(*predictive_power({3, 2, 1}, {3, 1, 2}) == doctest::Approx(2.0 / 3.0));
    CHECK(*predictive_power({1, 2}, {2, 1}) == 0.0); // anti-monotone two points
}

TEST_CASE("predictive power is invariant under monotone transforms") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> xs, ys;
        for (int i = 0; i < 8; ++i) {
            xs.push_back(rng.real());
            ys.push_back(rng.real());
        }
        auto base = predictive_power(xs, ys);
        std::vector<double> tx, ty;
        for (double v : xs) tx.push_back(std::exp(3.0 * v) + 7.0);
        for (double v : ys) ty.push_back(std::sqrt(v) * 100.0);
        CHECK(*base == *predictive_power(tx, ty));
    }
}

TEST_CASE("false positive bound") {
    CHECK(false_positive_bound({0.5, 0.5, 0.1, 1}) == 0.025);
    // 0.000625 is not a dyadic rational; exact means within one ulp
    double two_step = false_positive_bound({0.5, 0.5, 0.1, 2});
    CHECK(std::fabs(two_step - 0.000625) <=
          std::numeric_limits<double>::epsilon() * 0.000625);
    for (int n = 1; n < 6; ++n) CHECK(false_positive_bound({1.0, 0.3, 0.5, n}) == 0.0);

    Rng rng(88);
    for (int trial = 0; trial < 50; ++trial) {
        FalsePositiveModel m{rng.real(), rng.real(), rng.real(), 1};
        double prev = false_positive_bound(m);
        for (int n = 2; n <= 5; ++n) {
            m.n = n;
            double cur = false_positive_bound(m);
            CHECK(cur <= prev + 1e-18); // non-increasing in n
            prev = cur;
        }
    }
    CHECK_THROWS(false_positive_bound({1.5, 0.0, 0.0, 1}));
}

TEST_SUITE_END();
