#include <doctest.h>

#include <filesystem>

#include "fstm/config.hpp"
#include "fstm/dataset_io.hpp"
#include "fstm/score_table.hpp"

using namespace fstm;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("harness");

TEST_CASE("flat config files parse from both syntaxes") {
    RunConfig kv = RunConfig::parse("model = mock:perfect-oracle\n"
                                    "temperature = 0.1  # remote default\n"
                                    "workers = 8\n"
                                    "resume = true\n"
                                    "dataset = \"out/pl/dataset.jsonl\"\n");
    CHECK(kv.get("model") == "mock:perfect-oracle");
    CHECK(kv.get_double("temperature", 0) == 0.1);
    CHECK(kv.get_int("workers", 0) == 8);
    CHECK(kv.get_bool("resume", false));
    CHECK(kv.get("dataset") == "out/pl/dataset.jsonl");

    RunConfig js = RunConfig::parse(R"({"model": "m", "n": 2, "audit": false})");
    CHECK(js.get("model") == "m");
    CHECK(js.get_int("n", 0) == 2);
    CHECK(!js.get_bool("audit", true));

    CHECK_THROWS(RunConfig::parse("no equals sign here"));
    CHECK_THROWS(RunConfig::parse(R"({"nested": {"x": 1}})"));
    CHECK_THROWS(kv.get_int("model", 0));
}

TEST_CASE("score tables validate shape and uniqueness") {
    ScoreTable t = parse_score_table("model,benchmark,score\n"
                                     "m1,bench_a,68\n"
                                     "m2,bench_a,90.2\n"
                                     "m1,bench_b,48.1\n");
    CHECK(t.rows.size() == 3);
    CHECK(t.benchmarks() == std::vector<std::string>{"bench_a", "bench_b"});
    CHECK(t.scores_for("bench_a").size() == 2);

    CHECK_THROWS_WITH_AS(parse_score_table("model,benchmark,score\nm1,b,1\nm1,b,2\n"),
                         doctest::Contains("duplicate"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_score_table("model,benchmark,score\nm1,b,high\n"),
                         doctest::Contains("non-numeric"), std::runtime_error);
    CHECK_THROWS(parse_score_table("wrong,header,here\n"));
}

TEST_CASE("generate specs round-trip through manifests") {
    GenerateSpec spec;
    spec.kind = GrammarKind::Regex;
    spec.gen = {8, 16, 10, BucketMetric::CfgDepth, 99};
    spec.vocab.alphabet_size = 2;
    spec.vocab.seed = 3;
    spec.batches = 2;
    GenerateSpec back = GenerateSpec::from_json(spec.to_json());
    CHECK(back.kind == spec.kind);
    CHECK(back.gen.depth == spec.gen.depth);
    CHECK(back.gen.seed == spec.gen.seed);
    CHECK(back.gen.metric == spec.gen.metric);
    CHECK(back.vocab.alphabet_size == spec.vocab.alphabet_size);
    CHECK(back.batches == spec.batches);
}

TEST_CASE("regenerating from a manifest is byte-identical") {
    fs::path dir = fs::temp_directory_path() / "fstm_manifest_test";
    fs::remove_all(dir);

    GenerateSpec spec;
    spec.kind = GrammarKind::Pl;
    spec.gen = {6, 12, 8, BucketMetric::OperatorCount, 2718};
    spec.vocab.seed = 5;
    spec.batches = 2;

    Dataset first = generate_from_spec(spec);
    std::string path1 = write_dataset(first, spec, (dir / "a").string());

    GenerateSpec loaded = read_manifest((dir / "a" / "manifest.json").string());
    Dataset second = generate_from_spec(loaded);
    std::string path2 = write_dataset(second, loaded, (dir / "b").string());

    CHECK(read_text_file(path1) == read_text_file(path2));
    CHECK(read_text_file((dir / "a" / "manifest.json").string()) ==
          read_text_file((dir / "b" / "manifest.json").string()));
    fs::remove_all(dir);
}

TEST_CASE("datasets read back exactly what was written") {
    fs::path dir = fs::temp_directory_path() / "fstm_io_test";
    fs::remove_all(dir);
    GenerateSpec spec;
    spec.kind = GrammarKind::FolSynthetic;
    spec.gen = {5, 10, 5, BucketMetric::OperatorCount, 11};
    spec.vocab.seed = 7;
    Dataset ds = generate_from_spec(spec);
    std::string path = write_dataset(ds, spec, dir.string());
    std::vector<Sample> loaded = read_dataset(path);
    REQUIRE(loaded.size() == ds.samples.size());
    for (size_t i = 0; i < loaded.size(); ++i)
        CHECK(sample_to_json(loaded[i]).dump() == sample_to_json(ds.samples[i]).dump());
    fs::remove_all(dir);
}

TEST_CASE("gzip output reads back identically") {
    if (!gzip_supported()) return;
    fs::path dir = fs::temp_directory_path() / "fstm_gz_test";
    fs::remove_all(dir);
    GenerateSpec spec;
    spec.kind = GrammarKind::Pl;
    spec.gen = {5, 10, 5, BucketMetric::OperatorCount, 12};
    spec.gzip = true;
    Dataset ds = generate_from_spec(spec);
    std::string path = write_dataset(ds, spec, dir.string());
    CHECK(path.ends_with(".gz"));
    std::vector<Sample> loaded = read_dataset(path);
    REQUIRE(loaded.size() == ds.samples.size());
    for (size_t i = 0; i < loaded.size(); ++i)
        CHECK(loaded[i].expression == ds.samples[i].expression);
    fs::remove_all(dir);
}

TEST_SUITE_END();
