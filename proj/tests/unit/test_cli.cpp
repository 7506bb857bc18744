#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relkit/cli.hpp"
#include "tmpdir.hpp"

using namespace relkit;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result relkit_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "relkit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const char* kSmall = R"({"dataset_id": "cli", "root_seed": 1, "object_count": 16,
  "split_sizes": [8, 4, 4], "stimuli_per_split": [24, 8, 8]})";

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

/// Scores that are right on the first `correct` records and wrong after.
PredictionFile scripted(const DatasetManifest& m, std::size_t correct, const std::string& model = "m") {
    PredictionFile f;
    for (std::size_t i = 0; i < m.records.size(); ++i) {
        const auto& r = m.records[i];
        const bool right = i < correct;
        const bool say_same = (r.label == Label::same) == right;
        PredictionRecord p;
        p.stimulus_id = r.stimulus_id;
        p.score_same = say_same ? 0.75 : 0.25;
        p.logit_same = say_same ? 1.5 : -1.5;
        p.logit_diff = 0.0;
        p.predicted = say_same ? Label::same : Label::different;
        p.model_id = model;
        f.rows.push_back(p);
    }
    return f;
}

struct Env {
    std::string name;
    explicit Env(std::string n, const std::string& v) : name(std::move(n)) { ::setenv(name.c_str(), v.c_str(), 1); }
    ~Env() { ::unsetenv(name.c_str()); }
};

} // namespace

TEST_CASE("generate writes the documented layout") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto r = relkit_cli({"--root", dir.path().string(), "generate", "-c", "cfg.json", "-o", "ds"});
    REQUIRE(r.code == 0);
    for (const char* f : {"manifest.jsonl", "manifests/train.jsonl", "manifests/val.jsonl", "manifests/test.jsonl",
                          "objects/objects.json", "run.json", "images/train/train-000000.png"})
        CHECK(fs::exists(dir / "ds" / f));
    const auto run = read_json(dir / "ds" / "run.json");
    CHECK(run["subcommand"] == "generate");
    CHECK(run["format_version"] == kFormatVersion);
    CHECK(run["config"]["root_seed"] == 1);
    CHECK(run.dump().find("jobs") == std::string::npos);
    const auto m = read_manifest(dir / "ds" / "manifest.jsonl");
    CHECK(m.records.size() == 40);
    CHECK(r.out.find("40 stimuli") != std::string::npos);
}

TEST_CASE("generate output does not depend on the worker count") {
    testutil::TempDir one, three;
    for (const auto* d : {&one, &three}) write_file(*d / "cfg.json", kSmall);
    REQUIRE(relkit_cli({"--root", one.path().string(), "-j", "1", "generate", "-c", "cfg.json", "-o", "ds"}).code == 0);
    REQUIRE(relkit_cli({"--root", three.path().string(), "-j", "3", "generate", "-c", "cfg.json", "-o", "ds"}).code == 0);
    CHECK(oracle::tree_digest(one / "ds") == oracle::tree_digest(three / "ds"));
}

TEST_CASE("seed precedence: flag over environment over config") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto root = dir.path().string();
    auto seed_of = [&](const std::string& out) { return read_manifest(dir / out / "manifest.jsonl").root_seed; };
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "c"}).code == 0);
    CHECK(seed_of("c") == 1);
    {
        Env env("RELKIT_SEED", "2");
        REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "e"}).code == 0);
        REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "f", "--seed", "3"}).code == 0);
    }
    CHECK(seed_of("e") == 2);
    CHECK(seed_of("f") == 3);
    Env bad("RELKIT_SEED", "x1");
    CHECK(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "g"}).code == 1);
}

TEST_CASE("generate variants and placements from flags") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto root = dir.path().string();
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "m", "--variant", "masked", "--placement",
                 "aligned"}).code == 0);
    const auto m = read_manifest(dir / "m" / "manifest.jsonl");
    CHECK(m.records[0].variant.kind == VariantKind::masked);
    CHECK(m.config["placement_mode"] == "aligned");
    CHECK(m.records[0].pos_a.x % 16 == 0);
    CHECK(relkit_cli({"validate", (dir / "m").string()}).code == 0);
    CHECK(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "x", "--variant", "sepia"}).code == 1);
}

TEST_CASE("validate exit codes and report files") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto root = dir.path().string();
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "ds"}).code == 0);
    auto r = relkit_cli({"--root", root, "validate", "ds", "-o", "rep"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0 violations") != std::string::npos);
    const auto summary = read_json(dir / "rep" / "validation.json");
    CHECK(summary[0]["violations"] == 0);
    CHECK(fs::exists(dir / "rep" / "run.json"));

    fs::remove(dir / "ds" / "images" / "val" / "val-000003.png");
    r = relkit_cli({"--root", root, "validate", "ds"});
    CHECK(r.code == 3);
    CHECK(r.out.find("missing_image val-000003") != std::string::npos);
    CHECK(relkit_cli({"--root", root, "validate", "ds", "--skip-images"}).code == 0);
    CHECK(relkit_cli({"--root", root, "validate", "nowhere"}).code == 2);
}

TEST_CASE("error exit codes") {
    testutil::TempDir dir;
    const auto root = dir.path().string();
    CHECK(relkit_cli({"--root", root, "generate", "-c", "missing.json", "-o", "o"}).code == 2);
    write_file(dir / "broken.json", "{ not json");
    CHECK(relkit_cli({"--root", root, "generate", "-c", "broken.json", "-o", "o"}).code == 2);
    write_file(dir / "odd.json", R"({"stimuli_per_split": [3, 2, 2]})");
    CHECK(relkit_cli({"--root", root, "generate", "-c", "odd.json", "-o", "o"}).code == 1);
    write_file(dir / "unknown.json", R"({"colour": 1})");
    CHECK(relkit_cli({"--root", root, "generate", "-c", "unknown.json", "-o", "o"}).code == 1);
    CHECK(relkit_cli({"generate"}).code == 1);
    CHECK(relkit_cli({"frobnicate"}).code == 1);
    CHECK(relkit_cli({}).code == 1);
    const auto help = relkit_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("generate") != std::string::npos);
}

TEST_CASE("dissociation and single-object generation") {
    testutil::TempDir dir;
    const auto root = dir.path().string();
    write_file(dir / "dis.json", R"({"objects_per_set": 20, "stimuli_per_set": 20, "root_seed": 4})");
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "dis.json", "-o", "dis", "--dissociation"}).code == 0);
    for (const auto& c : DissociationCondition::all()) CHECK(fs::exists(dir / "dis" / c.name() / "manifest.jsonl"));
    CHECK(relkit_cli({"--root", root, "validate", "dis"}).code == 0);

    write_file(dir / "cfg.json", kSmall);
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "one", "--single-object", "6"}).code == 0);
    const auto m = read_manifest(dir / "one" / "manifest.jsonl");
    CHECK(m.records.size() == 6);
    CHECK(m.config["object_offset"] == 16);
    CHECK(relkit_cli({"--root", root, "validate", "one"}).code == 0);
}

TEST_CASE("eval reports accuracy, AUC and confusion") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto root = dir.path().string();
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "ds"}).code == 0);
    const auto test = read_manifest(dir / "ds" / "manifests" / "test.jsonl");
    write_predictions(dir / "p.csv", scripted(test, 6));
    const auto r = relkit_cli({"--root", root, "eval", "-p", "p.csv", "-m", "ds/manifests/test.jsonl", "--name", "SQU", "-o",
                        "rep"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("SQU,8,0.7500,") != std::string::npos);
    CHECK(fs::exists(dir / "rep" / "eval.csv"));
    CHECK(read_json(dir / "rep" / "run.json")["subcommand"] == "eval");

    const auto lr = relkit_cli({"--root", root, "eval", "-p", "p.csv", "-m", "ds/manifests/test.jsonl", "--logits", "--format",
                         "md"});
    CHECK(lr.code == 0);
    CHECK(lr.out.find("GT \"Same\" Logit") != std::string::npos);

    CHECK(relkit_cli({"--root", root, "eval", "-p", "p.csv", "-m", "ds/manifests/val.jsonl"}).code == 1);
    CHECK(relkit_cli({"--root", root, "eval", "-p", "p.csv"}).code == 1);
    write_file(dir / "bad.csv", "nonsense\n");
    CHECK(relkit_cli({"--root", root, "eval", "-p", "bad.csv", "-m", "ds/manifests/test.jsonl"}).code == 2);
}

TEST_CASE("eval builds a generalization matrix with medians over seeds") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto root = dir.path().string();
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "cfg.json", "-o", "ds"}).code == 0);
    const auto test = read_manifest(dir / "ds" / "manifests" / "test.jsonl");
    nlohmann::json grid = {{"train", {"A", "B"}}, {"test", {"A", "B"}}, {"cells", nlohmann::json::array()}};
    // cell accuracy in eighths: seeds give k, k+1, k+2 correct, so the median is k+1
    const std::map<std::pair<std::string, std::string>, std::size_t> base{
        {{"A", "A"}, 5}, {{"A", "B"}, 3}, {{"B", "A"}, 1}, {{"B", "B"}, 5}};
    for (const auto& [cell, k] : base) {
        nlohmann::json c = {{"train", cell.first}, {"test", cell.second}, {"manifest", "ds/manifests/test.jsonl"}};
        for (std::size_t s = 0; s < 3; ++s) {
            const std::string name = cell.first + cell.second + std::to_string(s) + ".csv";
            write_predictions(dir / name, scripted(test, k + s));
            c["predictions"].push_back(name);
        }
        grid["cells"].push_back(c);
    }
    write_file(dir / "grid.json", grid.dump());
    const auto r = relkit_cli({"--root", root, "eval", "--matrix", "grid.json", "-o", "rep"});
    REQUIRE(r.code == 0);
    CHECK(r.out ==
          "Train \\ Test,A,B,Avg.\n"
          "A,75.0,50.0,50.0\n"
          "B,25.0,75.0,25.0\n"
          "Avg.,25.0,50.0,\n");
    for (const char* f : {"accuracy_matrix.csv", "auc_matrix.csv", "cells.csv"}) CHECK(fs::exists(dir / "rep" / f));
    write_file(dir / "bad_grid.json", R"({"train": ["A"]})");
    CHECK(relkit_cli({"--root", root, "eval", "--matrix", "bad_grid.json"}).code == 2);
}

TEST_CASE("eval summarizes dissociation sets") {
    testutil::TempDir dir;
    const auto root = dir.path().string();
    write_file(dir / "dis.json", R"({"objects_per_set": 20, "stimuli_per_set": 20})");
    REQUIRE(relkit_cli({"--root", root, "generate", "-c", "dis.json", "-o", "dis", "--dissociation"}).code == 0);
    PredictionFile all;
    for (const auto& c : DissociationCondition::all()) {
        const auto m = read_manifest(dir / "dis" / c.name() / "manifest.jsonl");
        const auto p = scripted(m, m.records.size());
        all.rows.insert(all.rows.end(), p.rows.begin(), p.rows.end());
    }
    write_predictions(dir / "seed0.csv", all);
    const auto r = relkit_cli({"--root", root, "eval", "--dissociation", "dis", "-p", "seed0.csv", "--model", "oracle"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "model,acc.,none,S,T,TS,C,CS,CT,CTS\noracle,,0.00,0.00,0.00,0.00,0.00,0.00,0.00,1.00\n");
}

TEST_CASE("analyze pairwise, threshold and probe") {
    testutil::TempDir dir;
    const auto root = dir.path().string();
    SeedStream s(3, 0);
    auto make = [&](const std::string& name, std::size_t n, double offset) {
        EmbeddingMatrix m;
        m.dim = 8;
        std::map<std::string, Label> labels;
        for (std::size_t i = 0; i < n; ++i) {
            m.ids.push_back(name + std::to_string(i));
            const bool same = i % 2 == 0;
            for (std::size_t k = 0; k < 8; ++k)
                m.values.push_back(static_cast<float>(s.normal() * 0.2 + offset + (k == 0 ? (same ? 2.0 : -2.0) : 0.0)));
            labels[m.ids.back()] = same ? Label::same : Label::different;
        }
        write_embeddings(dir / (name + ".emb"), m);
        std::ofstream out(dir / (name + ".labels.csv"));
        write_labels(out, labels);
    };
    make("ref", 30, 0.0);
    make("near", 30, 0.0);
    make("far", 30, 3.0);
    make("held", 20, 0.0);

    auto r = relkit_cli({"--root", root, "analyze", "ref.emb", "far.emb", "--pairwise", "--bins", "10", "-o", "pw"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("ref,30,435,") != std::string::npos);
    CHECK(fs::exists(dir / "pw" / "histogram_far.csv"));

    r = relkit_cli({"--root", root, "analyze", "near.emb", "far.emb", "--threshold", "--reference", "ref.emb", "--margin",
             "0.05"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("far,") != std::string::npos);
    CHECK(r.out.find("expected_fail") != std::string::npos);

    r = relkit_cli({"--root", root, "analyze", "ref.emb", "--probe", "--labels", "ref.labels.csv", "--test", "held.emb",
             "--test-labels", "held.labels.csv", "-o", "pr"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("train,30,1.0000") != std::string::npos);
    CHECK(r.out.find("test,20,1.0000") != std::string::npos);
    CHECK(read_predictions(dir / "pr" / "probe_test_predictions.csv").rows.size() == 20);

    CHECK(relkit_cli({"--root", root, "analyze", "ref.emb"}).code == 1);
    CHECK(relkit_cli({"--root", root, "analyze", "missing.emb", "--pairwise"}).code == 2);
}

TEST_CASE("sweep writes one dataset per cell") {
    testutil::TempDir dir;
    write_file(dir / "cfg.json", kSmall);
    const auto root = dir.path().string();
    const auto r = relkit_cli({"--root", root, "sweep", "-c", "cfg.json", "-o", "sw", "--objects", "2,6", "--stimuli", "8"});
    REQUIRE(r.code == 0);
    const auto index = read_json(dir / "sw" / "sweep.json");
    REQUIRE(index.size() == 2);
    CHECK(index[1]["path"] == "u6_s8");
    const auto m = read_manifest(dir / "sw" / "u6_s8" / "manifest.jsonl");
    CHECK(m.object_splits.at(Split::train).size() == 6);
    CHECK(relkit_cli({"--root", root, "validate", "sw/u2_s8"}).code == 0);
    CHECK(relkit_cli({"--root", root, "sweep", "-o", "bad", "--objects", "2,x", "--stimuli", "8"}).code == 1);
}

TEST_CASE("the installed binary maps errors to exit codes") {
    testutil::TempDir dir;
    const std::string exe = RELKIT_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("--help") == 0);
    CHECK(status("validate " + (dir / "none").string()) == 2);
    CHECK(status("generate") == 1);
}
