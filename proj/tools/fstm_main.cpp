#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fstm/config.hpp"
#include "fstm/dataset_io.hpp"
#include "fstm/metrics.hpp"
#include "fstm/pipeline.hpp"
#include "fstm/score_table.hpp"

namespace fs = std::filesystem;
using namespace fstm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitPartialTransport = 2;

std::string csv_double(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

struct EvaluateArgs {
    std::string dataset;
    std::string out = "out";
    std::string config_file;
    std::string model = "mock:perfect-oracle";
    std::string endpoint = "http://127.0.0.1:8080/v1";
    std::string api_key_env = "FSTM_API_KEY";
    double temperature = 0.1;
    int max_tokens = 1024;
    int shots = 0;
    int n = 1;
    int workers = 4;
    int retries = 3;
    int backoff_ms = 500;
    int timeout_s = 60;
    int fol_model_size = 4;
    long fol_steps = 50000;
    long fol_timeout_ms = 10000;
    bool no_resume = false;
    bool audit = false;
};

void apply_config_file(EvaluateArgs& a) {
    if (a.config_file.empty()) return;
    RunConfig cfg = RunConfig::load(a.config_file);
    a.dataset = cfg.get("dataset", a.dataset);
    a.out = cfg.get("output", a.out);
    a.model = cfg.get("model", a.model);
    a.endpoint = cfg.get("endpoint", a.endpoint);
    a.api_key_env = cfg.get("api_key_env", a.api_key_env);
    a.temperature = cfg.get_double("temperature", a.temperature);
    a.max_tokens = static_cast<int>(cfg.get_int("max_tokens", a.max_tokens));
    a.shots = static_cast<int>(cfg.get_int("shots", a.shots));
    a.n = static_cast<int>(cfg.get_int("n", a.n));
    a.workers = static_cast<int>(cfg.get_int("workers", a.workers));
    a.retries = static_cast<int>(cfg.get_int("retries", a.retries));
    a.backoff_ms = static_cast<int>(cfg.get_int("backoff_ms", a.backoff_ms));
    a.timeout_s = static_cast<int>(cfg.get_int("timeout_s", a.timeout_s));
    a.fol_model_size = static_cast<int>(cfg.get_int("fol_model_size", a.fol_model_size));
    a.fol_steps = cfg.get_int("fol_steps", a.fol_steps);
    a.fol_timeout_ms = cfg.get_int("fol_timeout_ms", a.fol_timeout_ms);
    a.no_resume = !cfg.get_bool("resume", !a.no_resume);
    a.audit = cfg.get_bool("audit", a.audit);
}

int run_evaluate(EvaluateArgs a) {
    apply_config_file(a);
    if (a.dataset.empty()) throw std::runtime_error("evaluate needs --dataset (or a config file)");

    std::vector<Sample> samples = read_dataset(a.dataset);
    std::string results_path = a.out + "/results.jsonl";

    std::set<std::string> done;
    if (!a.no_resume)
        for (const auto& r : read_records(results_path)) done.insert(r.sample_id);

    ModelConfig mc;
    mc.model = a.model;
    mc.endpoint = a.endpoint;
    mc.temperature = a.temperature;
    mc.max_tokens = a.max_tokens;
    mc.request_timeout_s = a.timeout_s;
    mc.retry.max_attempts = a.retries;
    mc.retry.backoff_base_ms = a.backoff_ms;
    mc.api_key_env = a.api_key_env;
    LlmClient client(mc, a.audit ? a.out + "/audit.jsonl" : "");

    EvalOptions opts;
    opts.n = a.n;
    opts.shots = a.shots;
    opts.workers = a.workers;
    opts.fol_budget.max_model_size = a.fol_model_size;
    opts.fol_budget.max_proof_steps = a.fol_steps;
    opts.fol_budget.timeout = std::chrono::milliseconds(a.fol_timeout_ms);

    fs::create_directories(a.out);
    evaluate_samples(samples, client, opts, done.empty() ? nullptr : &done,
                     [&](const SequenceRecord& r) { append_record(results_path, r); });

    // reports always come from the full record set, resumed runs included
    std::vector<SequenceRecord> all = read_records(results_path);
    std::sort(all.begin(), all.end(), [](const SequenceRecord& x, const SequenceRecord& y) {
        return x.sample_id < y.sample_id;
    });
    write_reports(all, a.out, a.model);

    int transport = 0;
    for (const auto& r : all)
        if (r.fail_reason == "transport") ++transport;
    std::cout << "evaluated " << all.size() << " samples (" << done.size()
              << " resumed), model calls: " << client.calls_made() << "\n";
    if (transport > 0) {
        std::cerr << transport << " samples failed on transport errors\n";
        return kExitPartialTransport;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grammar-generated formal-syntax datasets, round-trip evaluation through "
                 "language models, and formal equivalence verification"};
    app.require_subcommand(1);

    // ----- generate ----------------------------------------------------
    auto* gen = app.add_subcommand("generate", "synthesize a dataset from a grammar");
    std::string g_kind = "pl", g_out = "dataset", g_metric, g_mode = "synthetic";
    std::string g_grammar_file, g_from_manifest, g_preset;
    GenerateSpec spec;
    bool g_gzip = false;
    gen->add_option("--kind", g_kind, "ksat | pl | fol_synthetic | fol_english | regex");
    gen->add_option("--out", g_out, "output directory");
    gen->add_option("--preset", g_preset, "full (depth 40, n 200, 50/bucket, 10 batches) or ci "
                                          "(depth 10, n 20, 20/bucket, 1 batch)");
    gen->add_option("--depth", spec.gen.depth, "maximum derivation depth");
    gen->add_option("--branching", spec.gen.branching, "expansion branching factor");
    gen->add_option("--sample-count", spec.gen.sample_count, "samples per bucket");
    gen->add_option("--metric", g_metric, "bucket metric (operator_count, cfg_depth, ...)");
    gen->add_option("--seed", spec.gen.seed, "generation seed");
    gen->add_option("--batches", spec.batches, "independently seeded batches");
    gen->add_option("--ksat-k", spec.ksat_k, "clause width for ksat");
    gen->add_option("--props", spec.vocab.num_propositions, "number of propositions");
    gen->add_option("--preds", spec.vocab.num_predicates, "number of predicates");
    gen->add_option("--objects", spec.vocab.num_objects, "number of objects");
    gen->add_option("--min-arity", spec.vocab.min_predicate_arity, "minimum predicate arity");
    gen->add_option("--max-arity", spec.vocab.max_predicate_arity, "maximum predicate arity");
    gen->add_option("--free-var-prob", spec.vocab.free_variable_prob,
                    "probability a constant becomes a bound variable");
    gen->add_option("--alphabet", spec.vocab.alphabet_size, "regex alphabet size");
    gen->add_option("--vocab-mode", g_mode, "synthetic | english");
    gen->add_option("--vocab-seed", spec.vocab.seed, "vocabulary seed");
    gen->add_option("--grammar-file", g_grammar_file, "custom grammar file");
    gen->add_option("--from-manifest", g_from_manifest, "regenerate from a manifest");
    gen->add_flag("--gzip", g_gzip, "compress the dataset");

    // ----- evaluate ----------------------------------------------------
    auto* ev = app.add_subcommand("evaluate", "run the informalize/autoformalize loop");
    EvaluateArgs ea;
    ev->add_option("--dataset", ea.dataset, "dataset.jsonl path");
    ev->add_option("--out", ea.out, "output directory");
    ev->add_option("--config", ea.config_file, "flat key=value or JSON config file");
    ev->add_option("--model", ea.model, "model name; mock:* runs in-process");
    ev->add_option("--endpoint", ea.endpoint, "chat-completions base URL");
    ev->add_option("--api-key-env", ea.api_key_env, "environment variable holding the API key");
    ev->add_option("--temperature", ea.temperature, "sampling temperature");
    ev->add_option("--max-tokens", ea.max_tokens, "completion token cap");
    ev->add_option("--shots", ea.shots, "0 or 2 examples in prompts");
    ev->add_option("--n", ea.n, "round-trip chain length");
    ev->add_option("--workers", ea.workers, "concurrent samples");
    ev->add_option("--retries", ea.retries, "max transport attempts");
    ev->add_option("--backoff-ms", ea.backoff_ms, "base backoff, doubled per attempt");
    ev->add_option("--timeout-s", ea.timeout_s, "per-request timeout");
    ev->add_option("--fol-model-size", ea.fol_model_size, "countermodel search bound");
    ev->add_option("--fol-steps", ea.fol_steps, "resolution step budget");
    ev->add_option("--fol-timeout-ms", ea.fol_timeout_ms, "verifier wall-clock budget");
    ev->add_flag("--no-resume", ea.no_resume, "ignore existing results.jsonl");
    ev->add_flag("--audit", ea.audit, "write request audit log");

    // ----- judge -------------------------------------------------------
    auto* jd = app.add_subcommand("judge", "ask a model to verify equivalence of recorded pairs");
    std::string j_results, j_out = "judge_out", j_model = "mock:judge-always-yes";
    std::string j_endpoint = "http://127.0.0.1:8080/v1";
    int j_workers = 4;
    jd->add_option("--results", j_results, "results.jsonl from evaluate")->required();
    jd->add_option("--out", j_out, "output directory");
    jd->add_option("--model", j_model, "judge model");
    jd->add_option("--endpoint", j_endpoint, "chat-completions base URL");
    jd->add_option("--workers", j_workers, "concurrent requests");

    // ----- correlate ---------------------------------------------------
    auto* co = app.add_subcommand("correlate",
                                  "correlate our per-model scores with external benchmarks");
    std::string c_ours, c_table, c_out = "correlate_out";
    int c_max_bucket = -1;
    bool c_strict_y = false, c_exact = false;
    co->add_option("--ours", c_ours, "CSV model,bucket_value,accuracy")->required();
    co->add_option("--table", c_table, "CSV model,benchmark,score")->required();
    co->add_option("--out", c_out, "output directory");
    co->add_option("--max-bucket", c_max_bucket,
                   "use buckets up to this complexity (-1 = all)");
    co->add_flag("--strict-y", c_strict_y, "strict ordering in predictive power");
    co->add_flag("--exact-p", c_exact, "exact permutation p-value (n <= 8)");

    // ----- report ------------------------------------------------------
    auto* rp = app.add_subcommand("report", "re-aggregate a results file into CSV reports");
    std::string r_results, r_out = "report_out", r_model = "model";
    rp->add_option("--results", r_results, "results.jsonl")->required();
    rp->add_option("--out", r_out, "output directory");
    rp->add_option("--model", r_model, "model label for the report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (!g_from_manifest.empty()) {
                spec = read_manifest(g_from_manifest);
            } else {
                // presets fill in whatever was not given explicitly
                auto preset = [&](int depth, int branching, int count, int batches) {
                    if (!gen->count("--depth")) spec.gen.depth = depth;
                    if (!gen->count("--branching")) spec.gen.branching = branching;
                    if (!gen->count("--sample-count")) spec.gen.sample_count = count;
                    if (!gen->count("--batches")) spec.batches = batches;
                };
                if (g_preset == "full")
                    preset(40, 200, 50, 10);
                else if (g_preset == "ci")
                    preset(10, 20, 20, 1);
                else if (!g_preset.empty())
                    throw std::runtime_error("unknown preset '" + g_preset + "'");
                spec.kind = grammar_kind_from_string(g_kind);
                if (!g_metric.empty())
                    spec.gen.metric = bucket_metric_from_string(g_metric);
                else if (spec.kind == GrammarKind::Regex)
                    spec.gen.metric = BucketMetric::CfgDepth;
                spec.vocab.mode = g_mode == "english" ? VocabParams::Mode::English
                                                      : VocabParams::Mode::Synthetic;
                if (spec.kind == GrammarKind::FolEnglish)
                    spec.vocab.mode = VocabParams::Mode::English;
                if (!g_grammar_file.empty()) spec.custom_grammar = read_text_file(g_grammar_file);
                spec.gzip = g_gzip;
                if (spec.gzip && !gzip_supported())
                    throw std::runtime_error("gzip support not built in");
            }
            Dataset ds = generate_from_spec(spec);
            std::string path = write_dataset(ds, spec, g_out);
            int underfilled = 0;
            for (const auto& b : ds.batches)
                for (const auto& c : b.census)
                    if (c.underfilled) ++underfilled;
            std::cout << "wrote " << ds.samples.size() << " samples to " << path << "\n";
            if (underfilled > 0)
                std::cerr << "warning: " << underfilled
                          << " buckets under the sample count at this depth/branching (see "
                             "manifest bucket_census)\n";
            return kExitOk;
        }

        if (ev->parsed()) return run_evaluate(ea);

        if (jd->parsed()) {
            std::vector<SequenceRecord> records = read_records(j_results);
            if (records.empty()) throw std::runtime_error("no records in " + j_results);
            std::vector<JudgePair> pairs = judge_pairs_from_records(records);
            ModelConfig mc;
            mc.model = j_model;
            mc.endpoint = j_endpoint;
            LlmClient client(mc);
            EvalOptions opts;
            opts.workers = j_workers;
            std::vector<JudgeRecord> judged = run_judge(pairs, client, opts);

            fs::create_directories(j_out);
            std::string lines;
            for (const auto& r : judged) {
                ojson j;
                j["schema_version"] = kSchemaVersion;
                j["sample_id"] = r.pair.sample_id;
                j["bucket_value"] = r.pair.bucket_value;
                j["phi0"] = r.pair.phi0;
                j["phi1"] = r.pair.phi1;
                j["truth_equivalent"] = r.pair.truth_equivalent;
                j["answer"] = to_string(r.answer);
                j["reply"] = r.reply;
                lines += j.dump() + "\n";
            }
            write_text_file(j_out + "/judged.jsonl", lines);

            JudgeScore score = score_judge(judged);
            ojson rep;
            rep["schema_version"] = kSchemaVersion;
            rep["model"] = j_model;
            rep["pairs"] = judged.size();
            rep["precision"] = score.precision;
            rep["recall"] = score.recall;
            rep["f1"] = score.f1;
            rep["degenerate"] = score.degenerate;
            write_text_file(j_out + "/judge_report.json", rep.dump(2) + "\n");

            // per-complexity F1 rows for plotting
            std::map<int, std::vector<JudgeRecord>> by_bucket;
            for (const auto& r : judged) by_bucket[r.pair.bucket_value].push_back(r);
            std::ostringstream csv;
            csv << "model,bucket_value,pairs,precision,recall,f1\n";
            for (const auto& [bucket, rows] : by_bucket) {
                JudgeScore bs = score_judge(rows);
                csv << j_model << ',' << bucket << ',' << rows.size() << ','
                    << csv_double(bs.precision) << ',' << csv_double(bs.recall) << ','
                    << csv_double(bs.f1) << '\n';
            }
            write_text_file(j_out + "/judge_report.csv", csv.str());
            std::cout << "judged " << judged.size() << " pairs, F1 " << score.f1 << "\n";
            return kExitOk;
        }

        if (co->parsed()) {
            std::vector<OurScoreRow> ours = read_our_scores(c_ours);
            ScoreTable table = read_score_table(c_table);

            std::map<std::string, std::pair<double, int>> mean_acc;
            for (const auto& r : ours) {
                if (c_max_bucket >= 0 && r.bucket_value > c_max_bucket) continue;
                auto& [sum, count] = mean_acc[r.model];
                sum += r.accuracy;
                count += 1;
            }
            if (mean_acc.empty()) throw std::runtime_error("no usable rows in " + c_ours);

            std::ostringstream csv;
            csv << "benchmark,models,rho,p_value,predictive_power\n";
            ojson out_json = ojson::array();
            bool any = false;
            for (const std::string& bench : table.benchmarks()) {
                std::vector<double> xs, ys; // x = benchmark, y = ours
                std::vector<std::string> models;
                for (const auto& [model, score] : table.scores_for(bench)) {
                    auto it = mean_acc.find(model);
                    if (it == mean_acc.end()) continue;
                    models.push_back(model);
                    xs.push_back(score);
                    ys.push_back(it->second.first / it->second.second);
                }
                if (models.size() < 2)
                    throw std::runtime_error("insufficient overlap with benchmark '" + bench +
                                             "': " + std::to_string(models.size()) +
                                             " shared model(s)");
                any = true;
                PearsonResult pr;
                if (models.size() >= 3) pr = pearson(xs, ys, c_exact);
                std::optional<double> power = predictive_power(xs, ys, c_strict_y);

                csv << bench << ',' << models.size() << ','
                    << (pr.defined ? csv_double(pr.rho) : "nan") << ','
                    << (pr.defined ? csv_double(pr.p_value) : "nan") << ','
                    << (power ? csv_double(*power) : "nan") << '\n';
                ojson row;
                row["benchmark"] = bench;
                row["models"] = models;
                if (pr.defined) {
                    row["rho"] = pr.rho;
                    row["p_value"] = pr.p_value;
                }
                if (power) row["predictive_power"] = *power;
                out_json.push_back(row);
            }
            if (!any) throw std::runtime_error("no benchmark shares models with our scores");
            fs::create_directories(c_out);
            write_text_file(c_out + "/correlation.csv", csv.str());
            ojson wrap;
            wrap["schema_version"] = kSchemaVersion;
            wrap["max_bucket"] = c_max_bucket;
            wrap["benchmarks"] = out_json;
            write_text_file(c_out + "/correlation.json", wrap.dump(2) + "\n");
            std::cout << "wrote correlation report to " << c_out << "\n";
            return kExitOk;
        }

        if (rp->parsed()) {
            std::vector<SequenceRecord> records = read_records(r_results);
            if (records.empty()) throw std::runtime_error("no records in " + r_results);
            write_reports(records, r_out, r_model);
            std::cout << "wrote reports for " << records.size() << " records to " << r_out << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
