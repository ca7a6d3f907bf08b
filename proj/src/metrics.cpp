#include "fstm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fstm {

std::vector<BucketReport> aggregate(const std::vector<RecordSummary>& records) {
    std::map<int, std::vector<const RecordSummary*>> buckets;
    for (const auto& r : records) buckets[r.bucket_value].push_back(&r);

    std::vector<BucketReport> out;
    for (const auto& [value, rs] : buckets) {
        BucketReport rep;
        rep.bucket_value = value;
        rep.total = static_cast<int>(rs.size());
        std::map<int, std::pair<int, int>> per_batch; // batch -> (equivalent, total)
        for (const RecordSummary* r : rs) {
            rep.compliant += r->compliant;
            rep.equivalent += r->equivalent;
            rep.unknown += r->unknown;
            auto& [eq, tot] = per_batch[r->batch];
            eq += r->equivalent;
            tot += 1;
        }
        rep.compliance = static_cast<double>(rep.compliant) / rep.total;
        rep.accuracy = static_cast<double>(rep.equivalent) / rep.total;
        rep.accuracy_over_compliant =
            rep.compliant ? static_cast<double>(rep.equivalent) / rep.compliant : 0.0;

        std::vector<double> batch_acc;
        for (const auto& [batch, counts] : per_batch)
            batch_acc.push_back(static_cast<double>(counts.first) / counts.second);
        rep.batches = static_cast<int>(batch_acc.size());
        double mean = std::accumulate(batch_acc.begin(), batch_acc.end(), 0.0) / batch_acc.size();
        double var = 0.0;
        for (double a : batch_acc) var += (a - mean) * (a - mean);
        var /= batch_acc.size(); // population convention
        rep.batch_mean_accuracy = mean;
        rep.batch_std_accuracy = std::sqrt(var);
        out.push_back(rep);
    }
    return out;
}

JudgeScore judge_f1(const std::vector<JudgeAnswer>& answers,
                    const std::vector<bool>& ground_truth_equivalent) {
    if (answers.size() != ground_truth_equivalent.size())
        throw std::invalid_argument("answers and ground truth must align");
    int tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < answers.size(); ++i) {
        bool truth = ground_truth_equivalent[i];
        // an unparseable answer is marked wrong for its pair's class
        bool predicted_yes =
            answers[i] == JudgeAnswer::Yes || (answers[i] == JudgeAnswer::Unparseable && !truth);
        if (predicted_yes && truth) ++tp;
        else if (predicted_yes && !truth) ++fp;
        else if (!predicted_yes && truth) ++fn;
    }
    JudgeScore s;
    if (tp + fp == 0 || tp + fn == 0) {
        s.degenerate = true;
        s.precision = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
        s.recall = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
        s.f1 = 0.0;
        return s;
    }
    s.precision = static_cast<double>(tp) / (tp + fp);
    s.recall = static_cast<double>(tp) / (tp + fn);
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

namespace {

double gamma_ln(double x) {
    static const double cof[6] = {76.18009172947146,  -86.50532032941677, 24.01409824083091,
                                  -1.231739572450155, 0.1208650973866179e-2, -0.5395239384953e-5};
    double y = x, tmp = x + 5.5;
    tmp -= (x + 0.5) * std::log(tmp);
    double ser = 1.000000000190015;
    for (double c : cof) ser += c / ++y;
    return -tmp + std::log(2.5066282746310005 * ser / x);
}

double beta_cf(double a, double b, double x) {
    const int max_iter = 200;
    const double eps = 3e-12, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

// regularized incomplete beta I_x(a, b)
double beta_inc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double bt = std::exp(gamma_ln(a + b) - gamma_ln(a) - gamma_ln(b) + a * std::log(x) +
                         b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double pearson_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t n = xs.size();
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

PearsonResult pearson(const std::vector<double>& xs, const std::vector<double>& ys,
                      bool exact_permutation) {
    PearsonResult res;
    if (xs.size() != ys.size()) throw std::invalid_argument("series lengths differ");
    size_t n = xs.size();
    if (n < 3) return res;
    auto constant = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
    };
    if (constant(xs) || constant(ys)) return res;

    res.rho = pearson_rho(xs, ys);
    res.defined = true;

    if (exact_permutation) {
        if (n > 8) throw std::invalid_argument("exact permutation limited to 8 points");
        std::vector<double> perm = ys;
        std::sort(perm.begin(), perm.end());
        long total = 0, extreme = 0;
        double target = std::fabs(res.rho) - 1e-12;
        do {
            ++total;
            if (std::fabs(pearson_rho(xs, perm)) >= target) ++extreme;
        } while (std::next_permutation(perm.begin(), perm.end()));
        res.p_value = static_cast<double>(extreme) / total;
        return res;
    }

    double df = static_cast<double>(n) - 2.0;
    double r2 = res.rho * res.rho;
    if (r2 >= 1.0) {
        res.p_value = 0.0;
        return res;
    }
    double t2 = r2 * df / (1.0 - r2);
    res.p_value = beta_inc(df / 2.0, 0.5, df / (df + t2));
    return res;
}

std::optional<double> predictive_power(const std::vector<double>& xs,
                                       const std::vector<double>& ys, bool strict_y) {
    if (xs.size() != ys.size()) throw std::invalid_argument("series lengths differ");
    long qualifying = 0, preserved = 0;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) {
            if (i == j) continue;
            bool cond = strict_y ? ys[i] > ys[j] : ys[i] >= ys[j];
            if (!cond) continue;
            ++qualifying;
            if (xs[i] >= xs[j]) ++preserved;
        }
    if (qualifying == 0) return std::nullopt;
    return static_cast<double>(preserved) / static_cast<double>(qualifying);
}

double false_positive_bound(const FalsePositiveModel& m) {
    if (m.n < 1) throw std::invalid_argument("n must be >= 1");
    for (double p : {m.p_informalize, m.p_autoformalize, m.p_hallucinate})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("probabilities must lie in [0, 1]");
    return std::pow(1.0 - m.p_informalize, m.n) * std::pow(1.0 - m.p_autoformalize, m.n) *
           std::pow(m.p_hallucinate, m.n);
}

} // namespace fstm
