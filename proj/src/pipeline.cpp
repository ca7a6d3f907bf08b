#include "fstm/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fstm/parse.hpp"
#include "fstm/regex_verifier.hpp"

namespace fstm {

std::string to_string(SequenceRecord::Status s) {
    switch (s) {
    case SequenceRecord::Status::Maintained: return "maintained";
    case SequenceRecord::Status::BrokenAt: return "broken_at";
    case SequenceRecord::Status::NoncompliantAt: return "noncompliant_at";
    }
    return "?";
}

SequenceRecord::Status sequence_status_from_string(const std::string& s) {
    if (s == "maintained") return SequenceRecord::Status::Maintained;
    if (s == "broken_at") return SequenceRecord::Status::BrokenAt;
    if (s == "noncompliant_at") return SequenceRecord::Status::NoncompliantAt;
    throw std::runtime_error("unknown sequence status '" + s + "'");
}

namespace {

Vocabulary vocabulary_from_sample(const Sample& sample) {
    Vocabulary v;
    v.alphabet_size = sample.alphabet_size;
    for (const auto& name : sample.names.propositions) v.propositions.push_back({name, ""});
    for (const auto& [name, gloss] : sample.proposition_glosses)
        for (auto& p : v.propositions)
            if (p.name == name) p.gloss = gloss;
    v.predicates = sample.predicate_entries;
    v.objects = sample.names.objects;
    return v;
}

long ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

Verdict verify_pair(GrammarKind kind, const std::string& phi, const std::string& phi_next,
                    const Vocabulary& vocab, const FolBudget& budget) {
    if (kind == GrammarKind::Regex) {
        ParseOutcome a = parse_regex(phi, vocab.alphabet_size);
        ParseOutcome b = parse_regex(phi_next, vocab.alphabet_size);
        return regex_equivalent(*a.regex, *b.regex, vocab.alphabet_size);
    }
    LogicMode mode = is_fol_kind(kind) ? LogicMode::Fol : LogicMode::Pl;
    ParseOutcome a = parse_logic(phi, mode, &vocab);
    ParseOutcome b = parse_logic(phi_next, mode, &vocab);
    if (mode == LogicMode::Pl) return pl_equivalent(*a.formula, *b.formula);
    return fol_equivalent(*a.formula, *b.formula, budget);
}

} // namespace

StepRecord run_step(const Sample& sample, const std::string& phi, int index, LlmClient& client,
                    const EvalOptions& options) {
    StepRecord rec;
    rec.index = index;
    rec.phi = phi;

    Vocabulary vocab = vocabulary_from_sample(sample);

    // informalize with a fresh context
    PromptTemplate inf = PromptTemplate::builtin(PromptTask::Informalize, sample.kind,
                                                 options.shots);
    std::string inf_prompt = render_prompt(inf, sample, phi, "", options.prompt_char_budget);
    auto t0 = std::chrono::steady_clock::now();
    try {
        rec.psi = client.complete(inf_prompt);
    } catch (const TransportError& e) {
        rec.transport_failure = true;
        rec.transport_detail = e.what();
        rec.informalize_ms = ms_since(t0);
        return rec;
    }
    rec.informalize_ms = ms_since(t0);

    LeakageResult leak = leakage_check(rec.psi, sample.kind, &vocab);
    if (leak.violation) {
        rec.leak_violation = true;
        rec.leak_span = leak.span;
        return rec;
    }

    // autoformalize from the description alone
    PromptTemplate aut = PromptTemplate::builtin(PromptTask::Autoformalize, sample.kind,
                                                 options.shots);
    std::string aut_prompt = render_prompt(aut, sample, rec.psi, "", options.prompt_char_budget);
    t0 = std::chrono::steady_clock::now();
    try {
        rec.raw_reply = client.complete(aut_prompt);
    } catch (const TransportError& e) {
        rec.transport_failure = true;
        rec.transport_detail = e.what();
        rec.autoformalize_ms = ms_since(t0);
        return rec;
    }
    rec.autoformalize_ms = ms_since(t0);

    if (sample.kind == GrammarKind::Regex) {
        ParseOutcome p = parse_regex(rec.raw_reply, sample.alphabet_size);
        if (!p.ok()) {
            rec.parse_reason = to_string(p.error->reason);
            return rec;
        }
        rec.parse_ok = true;
        rec.phi_next = print_regex(*p.regex);
    } else {
        LogicMode mode = is_fol_kind(sample.kind) ? LogicMode::Fol : LogicMode::Pl;
        ParseOutcome p = parse_logic(rec.raw_reply, mode, &vocab);
        if (!p.ok()) {
            rec.parse_reason = to_string(p.error->reason);
            return rec;
        }
        rec.parse_ok = true;
        rec.phi_next = print_formula(*p.formula);
    }

    t0 = std::chrono::steady_clock::now();
    rec.verdict = verify_pair(sample.kind, rec.phi, rec.phi_next, vocab, options.fol_budget);
    rec.verify_ms = ms_since(t0);
    return rec;
}

SequenceRecord run_sequence(const Sample& sample, LlmClient& client, const EvalOptions& options) {
    if (options.n < 1) throw std::invalid_argument("n must be >= 1");
    SequenceRecord rec;
    rec.sample_id = sample.id;
    rec.kind = sample.kind;
    rec.bucket_value = sample.bucket_value;
    rec.batch = sample.batch;
    rec.n = options.n;

    std::string phi = sample.expression;
    for (int i = 0; i < options.n; ++i) {
        StepRecord step = run_step(sample, phi, i, client, options);
        bool parsed = step.parse_ok;
        bool leak = step.leak_violation;
        bool transport = step.transport_failure;
        std::string parse_reason = step.parse_reason;
        std::optional<Verdict> verdict = step.verdict;
        rec.steps.push_back(std::move(step));

        if (transport || leak || !parsed) {
            rec.status = SequenceRecord::Status::NoncompliantAt;
            rec.fail_index = i;
            rec.fail_reason = transport ? "transport" : leak ? "leak" : parse_reason;
            return rec;
        }
        if (verdict->value == Verdict::Value::NotEquivalent) {
            rec.status = SequenceRecord::Status::BrokenAt;
            rec.fail_index = i;
            rec.fail_reason = "not_equivalent";
            return rec;
        }
        if (verdict->value == Verdict::Value::Unknown) {
            rec.status = SequenceRecord::Status::BrokenAt;
            rec.fail_index = i;
            rec.fail_reason = "unknown";
            return rec;
        }
        phi = rec.steps.back().phi_next;
    }
    rec.status = SequenceRecord::Status::Maintained;
    return rec;
}

std::vector<SequenceRecord> evaluate_samples(const std::vector<Sample>& samples,
                                             LlmClient& client, const EvalOptions& options,
                                             const std::set<std::string>* skip,
                                             std::function<void(const SequenceRecord&)> on_record) {
    std::vector<const Sample*> work;
    for (const auto& s : samples)
        if (!skip || !skip->count(s.id)) work.push_back(&s);

    std::vector<SequenceRecord> results(work.size());
    std::atomic<size_t> cursor{0};
    std::mutex emit_mu;

    int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(work.size())));
    auto run = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= work.size()) break;
            try {
                results[i] = run_sequence(*work[i], client, options);
            } catch (const std::exception& e) {
                // a sample must never take the whole run down
                SequenceRecord rec;
                rec.sample_id = work[i]->id;
                rec.kind = work[i]->kind;
                rec.bucket_value = work[i]->bucket_value;
                rec.batch = work[i]->batch;
                rec.n = options.n;
                rec.status = SequenceRecord::Status::NoncompliantAt;
                rec.fail_index = 0;
                rec.fail_reason = std::string("error: ") + e.what();
                results[i] = std::move(rec);
            }
            if (on_record) {
                std::lock_guard lock(emit_mu);
                on_record(results[i]);
            }
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    return results;
}

RecordSummary summarize(const SequenceRecord& record) {
    RecordSummary s;
    s.sample_id = record.sample_id;
    s.bucket_value = record.bucket_value;
    s.batch = record.batch;
    s.compliant = record.status != SequenceRecord::Status::NoncompliantAt;
    s.equivalent = record.status == SequenceRecord::Status::Maintained;
    s.unknown = record.fail_reason == "unknown";
    return s;
}

std::vector<RecordSummary> summarize(const std::vector<SequenceRecord>& records) {
    std::vector<RecordSummary> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(summarize(r));
    return out;
}

std::vector<JudgePair> judge_pairs_from_records(const std::vector<SequenceRecord>& records) {
    std::vector<JudgePair> pairs;
    for (const auto& r : records) {
        if (r.steps.empty()) continue;
        const StepRecord& step = r.steps.front();
        if (!step.parse_ok || !step.verdict) continue;
        if (step.verdict->value == Verdict::Value::Unknown) continue;
        JudgePair p;
        p.sample_id = r.sample_id;
        p.kind = r.kind;
        p.bucket_value = r.bucket_value;
        p.phi0 = step.phi;
        p.phi1 = step.phi_next;
        p.truth_equivalent = step.verdict->value == Verdict::Value::Equivalent;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::vector<JudgeRecord> run_judge(const std::vector<JudgePair>& pairs, LlmClient& client,
                                   const EvalOptions& options) {
    std::vector<JudgeRecord> out(pairs.size());
    std::atomic<size_t> cursor{0};
    int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(pairs.size())));
    auto run = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= pairs.size()) break;
            JudgeRecord rec;
            rec.pair = pairs[i];
            Sample dummy;
            dummy.kind = pairs[i].kind;
            PromptTemplate t = PromptTemplate::builtin(PromptTask::Judge, pairs[i].kind, 0);
            std::string prompt = render_prompt(t, dummy, pairs[i].phi0, pairs[i].phi1,
                                               options.prompt_char_budget);
            try {
                rec.reply = client.complete(prompt);
                rec.answer = parse_judge_answer(rec.reply);
            } catch (const TransportError& e) {
                rec.reply = e.what();
                rec.answer = JudgeAnswer::Unparseable;
            }
            out[i] = std::move(rec);
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    return out;
}

JudgeScore score_judge(const std::vector<JudgeRecord>& records) {
    std::vector<JudgeAnswer> answers;
    std::vector<bool> truth;
    for (const auto& r : records) {
        answers.push_back(r.answer);
        truth.push_back(r.pair.truth_equivalent);
    }
    return judge_f1(answers, truth);
}

} // namespace fstm
