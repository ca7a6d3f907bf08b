#include <doctest.h>

#include <mutex>

#include "fstm/dataset_io.hpp"
#include "fstm/parse.hpp"
#include "fstm/pipeline.hpp"
#include "test_helpers.hpp"

using namespace fstm;

TEST_SUITE_BEGIN("pipeline");

namespace {

Dataset tiny_dataset(GrammarKind kind, uint64_t seed) {
    GenParams gp{6, 12, 6,
                 kind == GrammarKind::Regex ? BucketMetric::CfgDepth
                                            : BucketMetric::OperatorCount,
                 seed};
    VocabParams vp;
    vp.seed = seed + 1;
    if (kind == GrammarKind::FolEnglish) vp.mode = VocabParams::Mode::English;
    return sample_dataset(kind, gp, vp, 2);
}

LlmClient mock_client(const std::string& name) {
    ModelConfig cfg;
    cfg.model = name;
    return LlmClient(cfg);
}

} // namespace

TEST_CASE("perfect oracle maintains truth on every kind") {
    for (GrammarKind kind : {GrammarKind::Ksat, GrammarKind::Pl, GrammarKind::FolSynthetic,
                             GrammarKind::FolEnglish, GrammarKind::Regex}) {
        Dataset ds = tiny_dataset(kind, 700 + static_cast<int>(kind));
        REQUIRE(!ds.samples.empty());
        LlmClient client = mock_client("mock:perfect-oracle");
        EvalOptions opts;
        opts.workers = 2;
        std::vector<SequenceRecord> records = evaluate_samples(ds.samples, client, opts);
        for (const auto& r : records) {
            CHECK(r.status == SequenceRecord::Status::Maintained);
            REQUIRE(r.steps.size() == 1);
            CHECK(r.steps[0].verdict->equivalent());
        }
        for (const auto& b : aggregate(summarize(records))) {
            CHECK(b.compliance == 1.0);
            CHECK(b.accuracy == 1.0);
        }
    }
}

TEST_CASE("chains keep feeding forward while equivalent") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 42);
    LlmClient client = mock_client("mock:perfect-oracle");
    EvalOptions opts;
    opts.n = 3;
    opts.workers = 1;
    SequenceRecord r = run_sequence(ds.samples.front(), client, opts);
    CHECK(r.status == SequenceRecord::Status::Maintained);
    CHECK(r.steps.size() == 3);
    // monotone: every step of a maintained chain is equivalent
    for (const auto& s : r.steps) CHECK(s.verdict->equivalent());
    // the chain feeds phi_{i+1} forward
    CHECK(r.steps[1].phi == r.steps[0].phi_next);
    CHECK(r.steps[2].phi == r.steps[1].phi_next);
}

TEST_CASE("noncompliant output stops the chain with no verdict") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 43);
    LlmClient client = mock_client("mock:noncompliant");
    EvalOptions opts;
    SequenceRecord r = run_sequence(ds.samples.front(), client, opts);
    CHECK(r.status == SequenceRecord::Status::NoncompliantAt);
    CHECK(r.fail_index == 0);
    CHECK(!r.steps[0].verdict.has_value());

    std::vector<SequenceRecord> records =
        evaluate_samples(ds.samples, client, opts);
    for (const auto& b : aggregate(summarize(records))) CHECK(b.compliance == 0.0);
}

TEST_CASE("negation dropper fails exactly the negated samples") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 44);
    LlmClient client = mock_client("mock:negation-dropper");
    EvalOptions opts;
    opts.workers = 2;
    std::vector<SequenceRecord> records = evaluate_samples(ds.samples, client, opts);

    std::set<std::string> failing, with_negation;
    for (const auto& s : ds.samples)
        if (s.expression.find("¬") != std::string::npos) with_negation.insert(s.id);
    for (const auto& r : records) {
        if (r.status != SequenceRecord::Status::Maintained) {
            failing.insert(r.sample_id);
            CHECK(r.status == SequenceRecord::Status::BrokenAt);
            REQUIRE(r.steps[0].verdict.has_value());
            CHECK(r.steps[0].verdict->not_equivalent());
            CHECK(r.steps[0].verdict->falsifying_assignment.has_value());
        }
    }
    CHECK(failing == with_negation);
    CHECK(!failing.empty());
}

TEST_CASE("a model that simplifies but preserves meaning still maintains truth") {
    // p1 ∧ p2 ∧ p1 described as its idempotence-simplified form comes back
    // as p1 ∧ p2; the verifier must call that equivalent
    Sample s;
    s.kind = GrammarKind::Pl;
    s.expression = "(p1 ∧ p2 ∧ p1)";
    ParseOutcome p = parse_logic(s.expression, LogicMode::Pl);
    REQUIRE(p.ok());
    s.id = "simplifier_case";
    s.names = occurring_names(*p.formula);

    ModelConfig cfg;
    cfg.model = "simplifier";
    LlmClient client(cfg);
    client.set_transport_for_testing([](const std::string& prompt) -> std::string {
        if (prompt.find("[NL DESCRIPTION]") != std::string::npos)
            return "(p1 ∧ p2)";
        return "a conjunction of the propositions p1 and p2, stated with p1 repeated";
    });
    EvalOptions opts;
    SequenceRecord r = run_sequence(s, client, opts);
    CHECK(r.status == SequenceRecord::Status::Maintained);
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].phi_next == "(p1 ∧ p2)");
    CHECK(r.steps[0].verdict->equivalent());
}

TEST_CASE("broken and noncompliant records always carry a cause") {
    for (uint64_t seed : {44, 49}) {
        Dataset ds = tiny_dataset(GrammarKind::Pl, seed);
        LlmClient client = mock_client("mock:negation-dropper");
        EvalOptions opts;
        for (const auto& r : evaluate_samples(ds.samples, client, opts)) {
            if (r.status == SequenceRecord::Status::Maintained) continue;
            const StepRecord& failed = r.steps.at(r.fail_index);
            if (r.status == SequenceRecord::Status::BrokenAt) {
                REQUIRE(failed.verdict.has_value());
                bool has_witness = failed.verdict->falsifying_assignment.has_value() ||
                                   failed.verdict->countermodel.has_value() ||
                                   failed.verdict->distinguishing_string.has_value() ||
                                   r.fail_reason == "unknown";
                CHECK(has_witness);
            } else {
                CHECK((failed.leak_violation || failed.transport_failure ||
                       !failed.parse_reason.empty()));
            }
        }
    }
}

TEST_CASE("transport failures are recorded and the run continues") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 45);
    ModelConfig cfg;
    cfg.model = "flaky";
    cfg.retry.max_attempts = 1;
    cfg.retry.backoff_base_ms = 1;
    LlmClient client(cfg);
    std::atomic<int> n{0};
    client.set_transport_for_testing([&](const std::string& prompt) -> std::string {
        if (n.fetch_add(1) % 2 == 0) throw std::runtime_error("boom");
        return make_mock_model(MockKind::PerfectOracle)(prompt);
    });
    EvalOptions opts;
    opts.workers = 1;
    std::vector<SequenceRecord> records = evaluate_samples(ds.samples, client, opts);
    CHECK(records.size() == ds.samples.size());
    int transport = 0;
    for (const auto& r : records)
        if (r.fail_reason == "transport") ++transport;
    CHECK(transport > 0);
}

TEST_CASE("unknown verdicts count against accuracy but not compliance") {
    SequenceRecord r;
    r.sample_id = "x";
    r.status = SequenceRecord::Status::BrokenAt;
    r.fail_index = 0;
    r.fail_reason = "unknown";
    RecordSummary s = summarize(r);
    CHECK(s.compliant);
    CHECK(!s.equivalent);
    CHECK(s.unknown);
}

TEST_CASE("the autoformalize context sees only the description and vocabulary") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 46);
    ModelConfig cfg;
    cfg.model = "observed-oracle";
    LlmClient client(cfg);
    std::mutex mu;
    std::vector<std::string> prompts;
    ModelFn oracle = make_mock_model(MockKind::PerfectOracle);
    client.set_transport_for_testing([&](const std::string& prompt) {
        {
            std::lock_guard lock(mu);
            prompts.push_back(prompt);
        }
        return oracle(prompt);
    });
    EvalOptions opts;
    opts.workers = 1;
    for (const auto& sample : ds.samples) {
        if (sample.complexity.operator_count < 1) continue;
        prompts.clear();
        run_sequence(sample, client, opts);
        REQUIRE(prompts.size() == 2);
        CHECK(prompts[0].find(sample.expression) != std::string::npos);
        // the only flow from phi into autoformalization is the description
        CHECK(prompts[1].find(sample.expression) == std::string::npos);
        CHECK(prompts[1].find("[NL DESCRIPTION]") != std::string::npos);
    }
}

TEST_CASE("leaking informalizations are classified as noncompliance") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 47);
    const Sample* pick = nullptr;
    for (const auto& s : ds.samples)
        if (s.complexity.operator_count >= 1) pick = &s;
    REQUIRE(pick != nullptr);

    ModelConfig cfg;
    cfg.model = "echo-leaker";
    LlmClient client(cfg);
    client.set_transport_for_testing(make_mock_model(MockKind::Echo)); // echoes the formula
    EvalOptions opts;
    SequenceRecord r = run_sequence(*pick, client, opts);
    CHECK(r.status == SequenceRecord::Status::NoncompliantAt);
    CHECK(r.fail_reason == "leak");
    CHECK(r.steps[0].leak_violation);
}

TEST_CASE("resume skips finished samples without model calls") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 48);
    LlmClient client = mock_client("mock:perfect-oracle");
    EvalOptions opts;
    opts.workers = 2;
    std::set<std::string> done;
    for (const auto& s : ds.samples) done.insert(s.id);
    std::vector<SequenceRecord> records = evaluate_samples(ds.samples, client, opts, &done);
    CHECK(records.empty());
    CHECK(client.calls_made() == 0);
}

TEST_CASE("judge pipeline on verifier-labelled pairs") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 49);
    LlmClient oracle = mock_client("mock:negation-dropper");
    EvalOptions opts;
    opts.workers = 2;
    std::vector<SequenceRecord> records = evaluate_samples(ds.samples, oracle, opts);
    std::vector<JudgePair> pairs = judge_pairs_from_records(records);
    REQUIRE(!pairs.empty());
    bool has_positive = false, has_negative = false;
    for (const auto& p : pairs) {
        (p.truth_equivalent ? has_positive : has_negative) = true;
    }
    CHECK(has_positive);
    CHECK(has_negative);

    LlmClient judge = mock_client("mock:judge-always-yes");
    std::vector<JudgeRecord> judged = run_judge(pairs, judge, opts);
    JudgeScore score = score_judge(judged);
    CHECK(score.recall == 1.0);
    CHECK(score.precision < 1.0);

    // an unparseable judge is wrong everywhere: zero F1 on these pairs
    ModelConfig cfg;
    cfg.model = "mumbler";
    LlmClient mumbler(cfg);
    mumbler.set_transport_for_testing([](const std::string&) { return std::string("hmm"); });
    JudgeScore silent = score_judge(run_judge(pairs, mumbler, opts));
    CHECK(silent.recall == 0.0);
}

TEST_CASE("worker count never changes the outcome") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 51);
    std::vector<std::vector<SequenceRecord>> runs;
    for (int workers : {1, 4}) {
        LlmClient client = mock_client("mock:negation-dropper");
        EvalOptions opts;
        opts.workers = workers;
        runs.push_back(evaluate_samples(ds.samples, client, opts));
    }
    REQUIRE(runs[0].size() == runs[1].size());
    for (size_t i = 0; i < runs[0].size(); ++i) {
        CHECK(runs[0][i].sample_id == runs[1][i].sample_id);
        CHECK(runs[0][i].status == runs[1][i].status);
        CHECK(runs[0][i].fail_reason == runs[1][i].fail_reason);
        REQUIRE(runs[0][i].steps.size() == runs[1][i].steps.size());
        for (size_t k = 0; k < runs[0][i].steps.size(); ++k)
            CHECK(runs[0][i].steps[k].phi_next == runs[1][i].steps[k].phi_next);
    }
}

TEST_CASE("records survive the jsonl round trip") {
    Dataset ds = tiny_dataset(GrammarKind::Pl, 50);
    LlmClient client = mock_client("mock:negation-dropper");
    EvalOptions opts;
    std::vector<SequenceRecord> records = evaluate_samples(ds.samples, client, opts);
    for (const auto& r : records) {
        SequenceRecord back = record_from_json(record_to_json(r));
        CHECK(back.sample_id == r.sample_id);
        CHECK(back.status == r.status);
        CHECK(back.fail_reason == r.fail_reason);
        REQUIRE(back.steps.size() == r.steps.size());
        for (size_t i = 0; i < r.steps.size(); ++i) {
            CHECK(back.steps[i].phi == r.steps[i].phi);
            CHECK(back.steps[i].parse_ok == r.steps[i].parse_ok);
            CHECK(back.steps[i].verdict.has_value() == r.steps[i].verdict.has_value());
            if (r.steps[i].verdict)
                CHECK(back.steps[i].verdict->value == r.steps[i].verdict->value);
        }
    }
}

TEST_SUITE_END();
