#include "fstm/dataset_io.hpp"

#include <filesystem>
#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <sstream>
#include <stdexcept>

#ifdef FSTM_HAVE_ZLIB
#include <zlib.h>
#endif

namespace fstm {

namespace fs = std::filesystem;

// =====================================================================
// GenerateSpec

ojson GenerateSpec::to_json() const {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = fstm::to_string(kind);
    if (kind == GrammarKind::Ksat) j["ksat_k"] = ksat_k;
    j["depth"] = gen.depth;
    j["branching"] = gen.branching;
    j["sample_count"] = gen.sample_count;
    j["metric"] = fstm::to_string(gen.metric);
    j["seed"] = gen.seed;
    j["batches"] = batches;
    j["sampling"] = "without_replacement";
    ojson v;
    v["num_propositions"] = vocab.num_propositions;
    v["num_predicates"] = vocab.num_predicates;
    v["num_objects"] = vocab.num_objects;
    v["min_predicate_arity"] = vocab.min_predicate_arity;
    v["max_predicate_arity"] = vocab.max_predicate_arity;
    v["free_variable_prob"] = vocab.free_variable_prob;
    v["alphabet_size"] = vocab.alphabet_size;
    v["mode"] = vocab.mode == VocabParams::Mode::English ? "english" : "synthetic";
    v["seed"] = vocab.seed;
    j["vocabulary"] = v;
    if (!custom_grammar.empty()) j["custom_grammar"] = custom_grammar;
    j["gzip"] = gzip;
    return j;
}

GenerateSpec GenerateSpec::from_json(const ojson& j) {
    GenerateSpec s;
    s.kind = grammar_kind_from_string(j.at("kind").get<std::string>());
    s.ksat_k = j.value("ksat_k", 3);
    s.gen.depth = j.at("depth").get<int>();
    s.gen.branching = j.at("branching").get<int>();
    s.gen.sample_count = j.at("sample_count").get<int>();
    s.gen.metric = bucket_metric_from_string(j.at("metric").get<std::string>());
    s.gen.seed = j.at("seed").get<uint64_t>();
    s.batches = j.at("batches").get<int>();
    const ojson& v = j.at("vocabulary");
    s.vocab.num_propositions = v.at("num_propositions").get<int>();
    s.vocab.num_predicates = v.at("num_predicates").get<int>();
    s.vocab.num_objects = v.at("num_objects").get<int>();
    s.vocab.min_predicate_arity = v.at("min_predicate_arity").get<int>();
    s.vocab.max_predicate_arity = v.at("max_predicate_arity").get<int>();
    s.vocab.free_variable_prob = v.at("free_variable_prob").get<double>();
    s.vocab.alphabet_size = v.at("alphabet_size").get<int>();
    s.vocab.mode = v.at("mode").get<std::string>() == "english" ? VocabParams::Mode::English
                                                                : VocabParams::Mode::Synthetic;
    s.vocab.seed = v.at("seed").get<uint64_t>();
    s.custom_grammar = j.value("custom_grammar", "");
    s.gzip = j.value("gzip", false);
    return s;
}

Dataset generate_from_spec(const GenerateSpec& spec) {
    if (!spec.custom_grammar.empty()) {
        Cfg g = parse_cfg_file(spec.custom_grammar);
        return sample_dataset(spec.kind, spec.gen, spec.vocab, spec.batches, spec.ksat_k, &g);
    }
    return sample_dataset(spec.kind, spec.gen, spec.vocab, spec.batches, spec.ksat_k);
}

// =====================================================================
// Sample

ojson sample_to_json(const Sample& s) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["id"] = s.id;
    j["kind"] = fstm::to_string(s.kind);
    j["expression"] = s.expression;
    ojson c;
    c["operator_count"] = s.complexity.operator_count;
    c["per_operator"] = ojson::object();
    for (const auto& [op, n] : s.complexity.per_operator) c["per_operator"][op] = n;
    c["cfg_depth"] = s.complexity.cfg_depth;
    j["complexity"] = c;
    j["bucket_metric"] = fstm::to_string(s.bucket_metric);
    j["bucket_value"] = s.bucket_value;
    j["batch"] = s.batch;
    ojson v;
    v["propositions"] = s.names.propositions;
    v["predicates"] = ojson::array();
    for (const auto& p : s.predicate_entries) {
        ojson e;
        e["name"] = p.name;
        e["arity"] = p.arity;
        if (!p.gloss.empty()) e["gloss"] = p.gloss;
        v["predicates"].push_back(e);
    }
    v["objects"] = s.names.objects;
    v["variables"] = s.names.variables;
    if (!s.proposition_glosses.empty()) {
        ojson g = ojson::object();
        for (const auto& [name, gloss] : s.proposition_glosses) g[name] = gloss;
        v["proposition_glosses"] = g;
    }
    v["alphabet_size"] = s.alphabet_size;
    j["vocabulary"] = v;
    return j;
}

Sample sample_from_json(const ojson& j) {
    Sample s;
    s.id = j.at("id").get<std::string>();
    s.kind = grammar_kind_from_string(j.at("kind").get<std::string>());
    s.expression = j.at("expression").get<std::string>();
    const ojson& c = j.at("complexity");
    s.complexity.operator_count = c.at("operator_count").get<int>();
    for (const auto& [op, n] : c.at("per_operator").items())
        s.complexity.per_operator[op] = n.get<int>();
    s.complexity.cfg_depth = c.at("cfg_depth").get<int>();
    s.bucket_metric = bucket_metric_from_string(j.at("bucket_metric").get<std::string>());
    s.bucket_value = j.at("bucket_value").get<int>();
    s.batch = j.at("batch").get<int>();
    const ojson& v = j.at("vocabulary");
    s.names.propositions = v.at("propositions").get<std::vector<std::string>>();
    for (const auto& e : v.at("predicates")) {
        PredicateEntry p;
        p.name = e.at("name").get<std::string>();
        p.arity = e.at("arity").get<int>();
        p.gloss = e.value("gloss", "");
        s.predicate_entries.push_back(p);
        s.names.predicates.push_back(p.name);
    }
    s.names.objects = v.at("objects").get<std::vector<std::string>>();
    s.names.variables = v.at("variables").get<std::vector<std::string>>();
    if (v.contains("proposition_glosses"))
        for (const auto& [name, gloss] : v.at("proposition_glosses").items())
            s.proposition_glosses.emplace_back(name, gloss.get<std::string>());
    s.alphabet_size = v.at("alphabet_size").get<int>();
    return s;
}

// =====================================================================
// Verdict / SequenceRecord

ojson verdict_to_json(const Verdict& v) {
    ojson j;
    j["value"] = fstm::to_string(v.value);
    if (!v.reason.empty()) j["reason"] = v.reason;
    if (v.falsifying_assignment) {
        ojson a = ojson::object();
        for (const auto& [atom, val] : *v.falsifying_assignment) a[atom] = val;
        j["falsifying_assignment"] = a;
    }
    if (v.countermodel) {
        ojson m;
        m["universe_size"] = v.countermodel->universe_size;
        m["objects"] = ojson::object();
        for (const auto& [name, e] : v.countermodel->objects) m["objects"][name] = e;
        m["tables"] = ojson::object();
        for (const auto& [key, table] : v.countermodel->predicate_tables) {
            std::string bits;
            for (bool b : table) bits += b ? '1' : '0';
            m["tables"][key] = bits;
        }
        j["countermodel"] = m;
    }
    if (v.distinguishing_string) j["distinguishing_string"] = *v.distinguishing_string;
    if (v.proof_steps) j["proof_steps"] = *v.proof_steps;
    return j;
}

Verdict verdict_from_json(const ojson& j) {
    Verdict v;
    v.value = verdict_value_from_string(j.at("value").get<std::string>());
    v.reason = j.value("reason", "");
    if (j.contains("falsifying_assignment")) {
        std::map<std::string, bool> a;
        for (const auto& [atom, val] : j.at("falsifying_assignment").items())
            a[atom] = val.get<bool>();
        v.falsifying_assignment = std::move(a);
    }
    if (j.contains("countermodel")) {
        FiniteModel m;
        const ojson& mj = j.at("countermodel");
        m.universe_size = mj.at("universe_size").get<int>();
        for (const auto& [name, e] : mj.at("objects").items()) m.objects[name] = e.get<int>();
        for (const auto& [key, bits] : mj.at("tables").items()) {
            std::vector<bool> table;
            for (char c : bits.get<std::string>()) table.push_back(c == '1');
            m.predicate_tables[key] = std::move(table);
            auto slash = key.find('/');
            if (slash != std::string::npos)
                m.predicate_arity[key.substr(0, slash)] = std::stoi(key.substr(slash + 1));
        }
        v.countermodel = std::move(m);
    }
    if (j.contains("distinguishing_string"))
        v.distinguishing_string = j.at("distinguishing_string").get<std::string>();
    if (j.contains("proof_steps")) v.proof_steps = j.at("proof_steps").get<long>();
    return v;
}

ojson record_to_json(const SequenceRecord& r) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["sample_id"] = r.sample_id;
    j["kind"] = fstm::to_string(r.kind);
    j["bucket_value"] = r.bucket_value;
    j["batch"] = r.batch;
    j["n"] = r.n;
    j["status"] = fstm::to_string(r.status);
    if (r.fail_index >= 0) {
        j["fail_index"] = r.fail_index;
        j["fail_reason"] = r.fail_reason;
    }
    j["steps"] = ojson::array();
    for (const auto& s : r.steps) {
        ojson sj;
        sj["index"] = s.index;
        sj["phi"] = s.phi;
        sj["psi"] = s.psi;
        if (s.parse_ok) sj["phi_next"] = s.phi_next;
        if (!s.raw_reply.empty()) sj["raw_reply"] = s.raw_reply;
        if (s.leak_violation) sj["leak_span"] = s.leak_span;
        if (!s.parse_ok && !s.parse_reason.empty()) sj["parse_reason"] = s.parse_reason;
        if (s.transport_failure) sj["transport_detail"] = s.transport_detail;
        if (s.verdict) sj["verdict"] = verdict_to_json(*s.verdict);
        ojson lat;
        lat["informalize_ms"] = s.informalize_ms;
        lat["autoformalize_ms"] = s.autoformalize_ms;
        lat["verify_ms"] = s.verify_ms;
        sj["latency"] = lat;
        j["steps"].push_back(sj);
    }
    return j;
}

SequenceRecord record_from_json(const ojson& j) {
    SequenceRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.kind = grammar_kind_from_string(j.at("kind").get<std::string>());
    r.bucket_value = j.at("bucket_value").get<int>();
    r.batch = j.at("batch").get<int>();
    r.n = j.at("n").get<int>();
    r.status = sequence_status_from_string(j.at("status").get<std::string>());
    r.fail_index = j.value("fail_index", -1);
    r.fail_reason = j.value("fail_reason", "");
    for (const auto& sj : j.at("steps")) {
        StepRecord s;
        s.index = sj.at("index").get<int>();
        s.phi = sj.at("phi").get<std::string>();
        s.psi = sj.at("psi").get<std::string>();
        if (sj.contains("phi_next")) {
            s.phi_next = sj.at("phi_next").get<std::string>();
            s.parse_ok = true;
        }
        s.raw_reply = sj.value("raw_reply", "");
        if (sj.contains("leak_span")) {
            s.leak_violation = true;
            s.leak_span = sj.at("leak_span").get<std::string>();
        }
        s.parse_reason = sj.value("parse_reason", "");
        if (sj.contains("transport_detail")) {
            s.transport_failure = true;
            s.transport_detail = sj.at("transport_detail").get<std::string>();
        }
        if (sj.contains("verdict")) s.verdict = verdict_from_json(sj.at("verdict"));
        if (sj.contains("latency")) {
            s.informalize_ms = sj.at("latency").value("informalize_ms", 0L);
            s.autoformalize_ms = sj.at("latency").value("autoformalize_ms", 0L);
            s.verify_ms = sj.at("latency").value("verify_ms", 0L);
        }
        r.steps.push_back(std::move(s));
    }
    return r;
}

// =====================================================================
// Files

namespace {

#ifdef FSTM_HAVE_ZLIB
std::string gzip_compress(const std::string& data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw std::runtime_error("deflateInit2 failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    std::string out;
    char buf[32768];
    int ret;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        ret = deflate(&zs, Z_FINISH);
        out.append(buf, sizeof(buf) - zs.avail_out);
    } while (ret == Z_OK);
    deflateEnd(&zs);
    if (ret != Z_STREAM_END) throw std::runtime_error("gzip compression failed");
    return out;
}

std::string gzip_decompress(const std::string& data) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 32) != Z_OK) throw std::runtime_error("inflateInit2 failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    std::string out;
    char buf[32768];
    int ret;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        ret = inflate(&zs, Z_NO_FLUSH);
        if (ret != Z_OK && ret != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("gzip decompression failed");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
    } while (ret != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}
#endif

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

bool gzip_supported() {
#ifdef FSTM_HAVE_ZLIB
    return true;
#else
    return false;
#endif
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
#ifdef FSTM_HAVE_ZLIB
    if (ends_with(path, ".gz")) return gzip_decompress(data);
#else
    if (ends_with(path, ".gz")) throw std::runtime_error("gzip support not built in");
#endif
    return data;
}

void write_text_file(const std::string& path, const std::string& content) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
#ifdef FSTM_HAVE_ZLIB
    if (ends_with(path, ".gz")) {
        std::string gz = gzip_compress(content);
        out.write(gz.data(), static_cast<std::streamsize>(gz.size()));
        return;
    }
#else
    if (ends_with(path, ".gz")) throw std::runtime_error("gzip support not built in");
#endif
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string write_dataset(const Dataset& ds, const GenerateSpec& spec, const std::string& dir) {
    fs::create_directories(dir);
    std::string dataset_path = dir + "/dataset.jsonl" + (spec.gzip ? ".gz" : "");

    std::string lines;
    for (const auto& s : ds.samples) lines += sample_to_json(s).dump() + "\n";
    write_text_file(dataset_path, lines);

    ojson manifest = spec.to_json();
    manifest["dataset_file"] = fs::path(dataset_path).filename().string();
    manifest["sample_total"] = ds.samples.size();
    manifest["batch_seeds"] = ojson::array();
    manifest["bucket_census"] = ojson::array();
    for (const auto& b : ds.batches) {
        manifest["batch_seeds"].push_back(b.seed);
        for (const auto& c : b.census) {
            ojson cj;
            cj["batch"] = b.index;
            cj["value"] = c.value;
            cj["population"] = c.population;
            cj["emitted"] = c.emitted;
            cj["underfilled"] = c.underfilled;
            manifest["bucket_census"].push_back(cj);
        }
    }
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
    return dataset_path;
}

std::vector<Sample> read_dataset(const std::string& jsonl_path) {
    std::string text = read_text_file(jsonl_path);
    std::vector<Sample> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(sample_from_json(ojson::parse(line)));
    }
    return out;
}

GenerateSpec read_manifest(const std::string& manifest_path) {
    return GenerateSpec::from_json(ojson::parse(read_text_file(manifest_path)));
}

void append_record(const std::string& jsonl_path, const SequenceRecord& r) {
    if (auto parent = fs::path(jsonl_path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    std::ofstream out(jsonl_path, std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + jsonl_path);
    out << record_to_json(r).dump() << "\n";
}

std::vector<SequenceRecord> read_records(const std::string& jsonl_path) {
    std::vector<SequenceRecord> out;
    std::ifstream in(jsonl_path);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(record_from_json(ojson::parse(line)));
    }
    return out;
}


namespace {

std::string csv_double(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

void write_reports_impl(const std::vector<SequenceRecord>& records, const std::string& dir,
                   const std::string& model) {
    fs::create_directories(dir);
    std::vector<RecordSummary> summaries = summarize(records);
    std::vector<BucketReport> buckets = aggregate(summaries);

    std::ostringstream report;
    report << "bucket_value,total,compliant,equivalent,unknown,compliance,accuracy,"
              "accuracy_over_compliant,batch_mean_accuracy,batch_std_accuracy,batches\n";
    for (const auto& b : buckets)
        report << b.bucket_value << ',' << b.total << ',' << b.compliant << ',' << b.equivalent
               << ',' << b.unknown << ',' << csv_double(b.compliance) << ','
               << csv_double(b.accuracy) << ',' << csv_double(b.accuracy_over_compliant) << ','
               << csv_double(b.batch_mean_accuracy) << ',' << csv_double(b.batch_std_accuracy)
               << ',' << b.batches << '\n';
    write_text_file(dir + "/report.csv", report.str());

    // plot-ready long format: one (bucket, batch, series) value per row
    std::map<std::pair<int, int>, std::array<int, 3>> cells; // (bucket,batch) -> [total, compliant, equivalent]
    for (const auto& s : summaries) {
        auto& cell = cells[{s.bucket_value, s.batch}];
        cell[0] += 1;
        cell[1] += s.compliant ? 1 : 0;
        cell[2] += s.equivalent ? 1 : 0;
    }
    std::ostringstream longcsv;
    longcsv << "model,bucket_value,batch,series,value\n";
    for (const auto& [key, cell] : cells) {
        longcsv << model << ',' << key.first << ',' << key.second << ",compliance,"
                << csv_double(static_cast<double>(cell[1]) / cell[0]) << '\n';
        longcsv << model << ',' << key.first << ',' << key.second << ",accuracy,"
                << csv_double(static_cast<double>(cell[2]) / cell[0]) << '\n';
    }
    write_text_file(dir + "/long.csv", longcsv.str());

    // per-model per-bucket scores, the correlate subcommand's input format
    std::ostringstream scores;
    scores << "model,bucket_value,accuracy\n";
    for (const auto& b : buckets)
        scores << model << ',' << b.bucket_value << ',' << csv_double(b.accuracy) << '\n';
    write_text_file(dir + "/scores.csv", scores.str());

    int total = static_cast<int>(records.size());
    int compliant = 0, equivalent = 0, unknown = 0, leaks = 0, transport = 0;
    for (const auto& s : summaries) {
        compliant += s.compliant;
        equivalent += s.equivalent;
        unknown += s.unknown;
    }
    for (const auto& r : records) {
        if (r.fail_reason == "leak") ++leaks;
        if (r.fail_reason == "transport") ++transport;
    }
    ojson summary;
    summary["schema_version"] = kSchemaVersion;
    summary["model"] = model;
    summary["records"] = total;
    summary["compliant"] = compliant;
    summary["equivalent"] = equivalent;
    summary["unknown_verdicts"] = unknown;
    summary["leak_violations"] = leaks;
    summary["transport_failures"] = transport;
    summary["compliance"] = total ? static_cast<double>(compliant) / total : 0.0;
    summary["accuracy_over_all"] = total ? static_cast<double>(equivalent) / total : 0.0;
    summary["accuracy_over_compliant"] =
        compliant ? static_cast<double>(equivalent) / compliant : 0.0;
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
}

} // namespace

void write_reports(const std::vector<SequenceRecord>& records, const std::string& dir,
                   const std::string& model) {
    write_reports_impl(records, dir, model);
}

} // namespace fstm
