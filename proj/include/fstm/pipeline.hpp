#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fstm/generator.hpp"
#include "fstm/llm.hpp"
#include "fstm/logic_verifier.hpp"
#include "fstm/metrics.hpp"
#include "fstm/verdict.hpp"

namespace fstm {

struct StepRecord {
    int index = 0;
    std::string phi;      // formal expression entering the step
    std::string psi;      // its informalization
    std::string phi_next; // the reformalized expression, canonical (when parsed)
    std::string raw_reply; // autoformalization output before parsing

    bool leak_violation = false;
    std::string leak_span;
    bool parse_ok = false;
    std::string parse_reason; // machine-readable, when parsing failed
    bool transport_failure = false;
    std::string transport_detail;

    std::optional<Verdict> verdict; // present only when parsing succeeded

    long informalize_ms = 0;
    long autoformalize_ms = 0;
    long verify_ms = 0;
};

struct SequenceRecord {
    enum class Status { Maintained, BrokenAt, NoncompliantAt };

    std::string sample_id;
    GrammarKind kind = GrammarKind::Pl;
    int bucket_value = 0;
    int batch = 0;
    int n = 0; // steps requested
    Status status = Status::Maintained;
    int fail_index = -1;      // step of first failure, -1 when maintained
    std::string fail_reason;  // not_equivalent | unknown | leak | transport | parse reason
    std::vector<StepRecord> steps;
};

std::string to_string(SequenceRecord::Status s);
SequenceRecord::Status sequence_status_from_string(const std::string& s);

struct EvalOptions {
    int n = 1;
    int shots = 0;
    int workers = 4;
    FolBudget fol_budget;
    size_t prompt_char_budget = 65536;
};

// One informalize -> leak check -> autoformalize -> parse -> verify pass
// over `phi` (the sample's expression when index == 0).
StepRecord run_step(const Sample& sample, const std::string& phi, int index, LlmClient& client,
                    const EvalOptions& options);

// Chains run_step, feeding the reformalization forward only while
// verdicts are Equivalent.  An Unknown verdict breaks the chain and is
// reported under its own reason.
SequenceRecord run_sequence(const Sample& sample, LlmClient& client, const EvalOptions& options);

// Evaluates samples concurrently on a bounded pool; results come back in
// sample order.  Samples whose id is in `skip` are left out (resume).
std::vector<SequenceRecord> evaluate_samples(const std::vector<Sample>& samples,
                                             LlmClient& client, const EvalOptions& options,
                                             const std::set<std::string>* skip = nullptr,
                                             std::function<void(const SequenceRecord&)> on_record = {});

RecordSummary summarize(const SequenceRecord& record);
std::vector<RecordSummary> summarize(const std::vector<SequenceRecord>& records);

// ---------------------------------------------------------------------
// LLM-as-judge task over verifier-labelled pairs.

struct JudgePair {
    std::string sample_id;
    GrammarKind kind = GrammarKind::Pl;
    int bucket_value = 0;
    std::string phi0;
    std::string phi1;
    bool truth_equivalent = false;
};

struct JudgeRecord {
    JudgePair pair;
    std::string reply;
    JudgeAnswer answer = JudgeAnswer::Unparseable;
};

// Pairs with a decided (non-Unknown) formal verdict, taken from the first
// step of each record that parsed.
std::vector<JudgePair> judge_pairs_from_records(const std::vector<SequenceRecord>& records);

std::vector<JudgeRecord> run_judge(const std::vector<JudgePair>& pairs, LlmClient& client,
                                   const EvalOptions& options);

JudgeScore score_judge(const std::vector<JudgeRecord>& records);

} // namespace fstm
