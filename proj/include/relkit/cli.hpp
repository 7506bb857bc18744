#pragma once

// The relkit command line: generate, validate, eval, analyze, sweep.
//
// Exit codes: 0 success, 1 invalid config or usage, 2 I/O or parse failure,
// 3 validation violations.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relkit/composer/config.hpp"
#include "relkit/composer/dataset.hpp"
#include "relkit/composer/dissociation.hpp"
#include "relkit/composer/single_object.hpp"
#include "relkit/composer/sweep.hpp"
#include "relkit/embed/probe.hpp"
#include "relkit/embed/similarity.hpp"
#include "relkit/embedding_io.hpp"
#include "relkit/error.hpp"
#include "relkit/manifest_io.hpp"
#include "relkit/metrics/metrics.hpp"
#include "relkit/metrics/report.hpp"
#include "relkit/prediction_io.hpp"
#include "relkit/validate/validate.hpp"

namespace relkit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kInvalid = 3 };

struct Context {
    fs::path root = ".";
    unsigned jobs = 0;
    std::ostream* out = &std::cout;
    std::ostream* err = &std::cerr;

    fs::path resolve(const std::string& p) const {
        const fs::path path(p);
        return path.is_absolute() ? path : root / path;
    }
};

inline json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline void write_text(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

/// run.json: subcommand, effective arguments and config. Worker count is left
/// out so the output tree does not depend on it.
inline void write_run_json(const fs::path& dir, const std::string& subcommand, const json& args,
                           const json& config = nullptr) {
    json j = {{"subcommand", subcommand}, {"format_version", kFormatVersion}, {"args", args}};
    if (!config.is_null()) j["config"] = config;
    write_text(dir / "run.json", j.dump(2) + "\n");
}

/// --seed beats RELKIT_SEED beats the config file.
inline std::optional<std::uint64_t> seed_override(const std::optional<std::uint64_t>& flag) {
    if (flag) return flag;
    if (const char* env = std::getenv("RELKIT_SEED"); env && *env) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError("RELKIT_SEED must be an unsigned integer, got '" + std::string(s) + "'");
        return v;
    }
    return std::nullopt;
}

inline std::vector<std::size_t> parse_size_list(const std::string& s, const char* what) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t v = 0;
        const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || p != item.data() + item.size())
            throw ConfigError(std::string("bad ") + what + " list '" + s + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
    return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string config;
    std::string out;
    std::string variant;
    std::string placement;
    std::optional<std::uint64_t> seed;
    bool dissociation = false;
    std::size_t single_object = 0;
    std::optional<std::size_t> object_offset;
};

inline int cmd_generate(const Context& ctx, const GenerateArgs& a) {
    const json file_config = a.config.empty() ? json::object() : read_json_file(ctx.resolve(a.config));
    const auto seed = seed_override(a.seed);
    const fs::path out = ctx.resolve(a.out);
    json args = {{"config", a.config}, {"out", a.out}};

    if (a.dissociation) {
        DissociationConfig dc = dissociation_config_from_json(file_config);
        if (seed) dc.root_seed = *seed;
        if (!a.placement.empty()) dc.placement_mode = parse_placement_mode(a.placement);
        args["dissociation"] = true;
        for (const auto& cond : DissociationCondition::all()) {
            const Dataset d = build_dissociation_set(dc, cond, ctx.jobs);
            write_dataset(d, out / cond.name(), ctx.jobs);
            *ctx.out << cond.name() << ": " << d.manifest.records.size() << " stimuli, " << d.objects.size()
                     << " objects\n";
        }
        write_run_json(out, "generate", args, dc);
        return kOk;
    }

    json merged = file_config;
    if (!a.variant.empty()) merged["variant"] = a.variant;
    if (!a.placement.empty()) merged["placement_mode"] = a.placement;
    if (seed) merged["root_seed"] = *seed;
    const GenerationConfig config = config_from_json(merged);

    if (a.single_object > 0) {
        const std::size_t offset = a.object_offset.value_or(config.object_count);
        const auto pool = build_objects(config, ctx.jobs, offset, a.single_object);
        Dataset d = build_single_object_set(pool, a.single_object, config.root_seed, config.dataset_id + "-single",
                                            ctx.jobs);
        d.manifest.config["object_offset"] = offset;
        d.manifest.config["source"] = to_string(config.source);
        write_dataset(d, out, ctx.jobs);
        args["single_object"] = a.single_object;
        args["object_offset"] = offset;
        write_run_json(out, "generate", args, config);
        *ctx.out << "single-object set: " << d.manifest.records.size() << " images\n";
        return kOk;
    }

    const Dataset d = build_dataset(config, ctx.jobs);
    write_dataset(d, out, ctx.jobs);
    write_run_json(out, "generate", args, config);
    *ctx.out << d.manifest.dataset_id << ": " << d.objects.size() << " objects, " << d.manifest.records.size()
             << " stimuli\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// validate

inline std::vector<fs::path> dataset_dirs(const fs::path& dir) {
    if (fs::exists(dir / "manifest.jsonl")) return {dir};
    std::vector<fs::path> out;
    if (fs::is_directory(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory() && fs::exists(e.path() / "manifest.jsonl")) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw IoError("no manifest.jsonl in " + dir.string() + " or its subdirectories");
    return out;
}

struct ValidateArgs {
    std::string dataset;
    std::string out;
    bool skip_images = false;
};

inline int cmd_validate(const Context& ctx, const ValidateArgs& a) {
    const fs::path dir = ctx.resolve(a.dataset);
    std::size_t total = 0;
    json summary = json::array();
    for (const auto& d : dataset_dirs(dir)) {
        const DatasetManifest m = read_manifest(d / "manifest.jsonl");
        ValidateOptions opt;
        opt.check_images = !a.skip_images;
        opt.jobs = ctx.jobs;
        const ValidationReport rep = validate_dataset(m, d, opt);
        for (const auto& v : rep.violations)
            *ctx.out << d.filename().string() << ": " << v.kind << (v.stimulus_id.empty() ? "" : " " + v.stimulus_id)
                     << ": " << v.message << '\n';
        *ctx.out << m.dataset_id << ": " << rep.records_checked << " records, " << rep.images_checked << " images, "
                 << rep.violations.size() << " violations\n";
        summary.push_back({{"dataset", m.dataset_id},
                           {"path", fs::relative(d, dir).generic_string()},
                           {"records", rep.records_checked},
                           {"violations", rep.violations.size()}});
        total += rep.violations.size();
    }
    if (!a.out.empty()) {
        const fs::path out = ctx.resolve(a.out);
        write_text(out / "validation.json", summary.dump(2) + "\n");
        write_run_json(out, "validate", {{"dataset", a.dataset}, {"skip_images", a.skip_images}});
    }
    return total == 0 ? kOk : kInvalid;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::vector<std::string> predictions;
    std::vector<std::string> manifests;
    std::vector<std::string> names;
    std::string matrix;
    std::string dissociation;
    std::string model = "model";
    bool logits = false;
    std::string format = "csv";
    std::string out;
};

inline std::vector<JoinedRow> join_files(const Context& ctx, const std::string& pred, const std::string& manifest) {
    return join_predictions(read_predictions(ctx.resolve(pred)), read_manifest(ctx.resolve(manifest)));
}

/// Grid file:
///   {"train": [...], "test": [...],
///    "cells": [{"train": "SQU", "test": "ALPH", "manifest": "...", "predictions": ["seed0.csv", ...]}]}
inline int eval_matrix(const Context& ctx, const EvalArgs& a, ReportFormat fmt, std::string& report,
                       std::map<std::string, std::string>& files) {
    const json grid = read_json_file(ctx.resolve(a.matrix));
    std::vector<std::string> train, test;
    SeedResults acc, auc;
    Table cells;
    cells.header = {"train", "test", "seed", "n", "accuracy", "auc", "TD/PD", "TD/PS", "TS/PD", "TS/PS"};
    try {
        train = grid.at("train").get<std::vector<std::string>>();
        test = grid.at("test").get<std::vector<std::string>>();
        for (const auto& c : grid.at("cells")) {
            const auto tr = c.at("train").get<std::string>(), te = c.at("test").get<std::string>();
            const auto manifest = read_manifest(ctx.resolve(c.at("manifest").get<std::string>()));
            std::size_t seed = 0;
            for (const auto& p : c.at("predictions")) {
                const EvalResult e = evaluate(join_predictions(read_predictions(ctx.resolve(p.get<std::string>())), manifest));
                acc[{tr, te}].push_back(e.accuracy);
                auc[{tr, te}].push_back(e.auc);
                cells.rows.push_back({tr, te, std::to_string(seed++), std::to_string(e.n), fixed(e.accuracy, 4),
                                      fixed(e.auc, 4), std::to_string(e.confusion.td_pd),
                                      std::to_string(e.confusion.td_ps), std::to_string(e.confusion.ts_pd),
                                      std::to_string(e.confusion.ts_ps)});
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad grid file: ") + e.what());
    }
    const auto acc_matrix = generalization_matrix(train, test, acc);
    const auto auc_matrix = generalization_matrix(train, test, auc);
    report = render(generalization_table(acc_matrix), fmt);
    const std::string ext = fmt == ReportFormat::csv ? ".csv" : ".md";
    files["accuracy_matrix" + ext] = report;
    files["auc_matrix" + ext] = render(generalization_table(auc_matrix), fmt);
    files["cells" + ext] = render(cells, fmt);
    return kOk;
}

inline int eval_dissociation(const Context& ctx, const EvalArgs& a, ReportFormat fmt, std::string& report) {
    if (a.predictions.empty()) throw ConfigError("--dissociation needs at least one --predictions file");
    const auto dirs = dataset_dirs(ctx.resolve(a.dissociation));
    std::vector<DatasetManifest> manifests;
    for (const auto& d : dirs) manifests.push_back(read_manifest(d / "manifest.jsonl"));

    // Each predictions file is one seed and covers all eight sets.
    std::map<std::string, std::vector<double>> per_condition;
    for (const auto& p : a.predictions) {
        const PredictionFile all = read_predictions(ctx.resolve(p));
        std::vector<std::vector<JoinedRow>> sets;
        for (const auto& m : manifests) {
            std::set<std::string> ids;
            for (const auto& r : m.records) ids.insert(r.stimulus_id);
            PredictionFile part;
            part.threshold = all.threshold;
            part.rule = all.rule;
            for (const auto& row : all.rows)
                if (ids.contains(row.stimulus_id)) part.rows.push_back(row);
            sets.push_back(join_predictions(part, m));
        }
        for (const auto& [cond, v] : proportion_same(sets, manifests)) per_condition[cond].push_back(v);
    }
    DissociationRow row{a.model, std::nullopt, {}};
    for (const auto& [cond, values] : per_condition) row.proportion_same[cond] = median_over_seeds(values);
    report = render(dissociation_table({row}), fmt);
    return kOk;
}

inline int cmd_eval(const Context& ctx, const EvalArgs& a) {
    const ReportFormat fmt = parse_report_format(a.format);
    std::string report;
    std::map<std::string, std::string> files;
    const std::string ext = fmt == ReportFormat::csv ? ".csv" : ".md";
    const int modes = (!a.matrix.empty()) + (!a.dissociation.empty()) + (a.logits ? 1 : 0);
    if (modes > 1) throw ConfigError("--matrix, --dissociation and --logits are exclusive");

    if (!a.matrix.empty()) {
        eval_matrix(ctx, a, fmt, report, files);
    } else if (!a.dissociation.empty()) {
        eval_dissociation(ctx, a, fmt, report);
        files["dissociation" + ext] = report;
    } else {
        if (a.predictions.empty() || a.predictions.size() != a.manifests.size())
            throw ConfigError("give one --manifest per --predictions file");
        if (!a.names.empty() && a.names.size() != a.predictions.size())
            throw ConfigError("give one --name per --predictions file");
        auto name = [&](std::size_t i) {
            return a.names.empty() ? fs::path(a.predictions[i]).stem().string() : a.names[i];
        };
        if (a.logits) {
            std::vector<LogitRow> rows;
            for (std::size_t i = 0; i < a.predictions.size(); ++i)
                rows.push_back({name(i), mean_logit_by_class(join_files(ctx, a.predictions[i], a.manifests[i]))});
            report = render(logit_table(rows), fmt);
            files["logits" + ext] = report;
        } else {
            Table t;
            for (std::size_t i = 0; i < a.predictions.size(); ++i) {
                const Table one = eval_table(name(i), evaluate(join_files(ctx, a.predictions[i], a.manifests[i])));
                t.header = one.header;
                t.rows.push_back(one.rows.front());
            }
            report = render(t, fmt);
            files["eval" + ext] = report;
        }
    }
    *ctx.out << report;
    if (!a.out.empty()) {
        const fs::path out = ctx.resolve(a.out);
        for (const auto& [name, text] : files) write_text(out / name, text);
        write_run_json(out, "eval",
                       {{"predictions", a.predictions},
                        {"manifests", a.manifests},
                        {"names", a.names},
                        {"matrix", a.matrix},
                        {"dissociation", a.dissociation},
                        {"model", a.model},
                        {"logits", a.logits},
                        {"format", a.format}});
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
    std::vector<std::string> embeddings;
    bool pairwise = false;
    bool probe = false;
    bool threshold = false;
    std::string reference;
    double margin = 0.0;
    std::size_t bins = 100;
    std::string labels;
    std::string test;
    std::string test_labels;
    double learning_rate = 0.1;
    std::size_t epochs = 500;
    std::string format = "csv";
    std::string out;
};

inline std::string histogram_csv(const SimilaritySummary& s) {
    std::string out = "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < s.histogram.size(); ++b)
        out += format_real(s.bin_left(b)) + "," + format_real(s.bin_right(b)) + "," + std::to_string(s.histogram[b]) +
               "\n";
    return out;
}

inline int cmd_analyze(const Context& ctx, const AnalyzeArgs& a) {
    if ((a.pairwise ? 1 : 0) + (a.probe ? 1 : 0) + (a.threshold ? 1 : 0) != 1)
        throw ConfigError("choose exactly one of --pairwise, --probe, --threshold");
    const ReportFormat fmt = parse_report_format(a.format);
    const std::string ext = fmt == ReportFormat::csv ? ".csv" : ".md";
    std::map<std::string, std::string> files;
    std::string report;
    PairwiseOptions popt;
    popt.bins = a.bins;
    popt.jobs = ctx.jobs;
    auto stem = [](const std::string& p) { return fs::path(p).stem().string(); };

    if (a.pairwise) {
        if (a.embeddings.empty()) throw ConfigError("--pairwise needs embedding files");
        Table t;
        t.header = {"dataset", "n", "pair_count", "mean", "variance"};
        for (const auto& e : a.embeddings) {
            const EmbeddingMatrix m = read_embeddings(ctx.resolve(e));
            const SimilaritySummary s = pairwise_summary(m, popt);
            t.rows.push_back({stem(e), std::to_string(m.rows()), std::to_string(s.pair_count), fixed(s.mean, 6),
                              fixed(s.variance, 6)});
            files["histogram_" + stem(e) + ".csv"] = histogram_csv(s);
        }
        report = render(t, fmt);
        files["pairwise" + ext] = report;
    } else if (a.threshold) {
        if (a.reference.empty()) throw ConfigError("--threshold needs --reference");
        const double ref = pairwise_summary(read_embeddings(ctx.resolve(a.reference)), popt).mean;
        std::map<std::string, double> means;
        for (const auto& e : a.embeddings) means[stem(e)] = pairwise_summary(read_embeddings(ctx.resolve(e)), popt).mean;
        Table t;
        t.header = {"dataset", "mean_similarity", "reference", "margin", "verdict"};
        for (const auto& [name, verdict] : threshold_predict(ref, means, a.margin))
            t.rows.push_back({name, fixed(means[name], 6), fixed(ref, 6), fixed(a.margin, 6),
                              std::string(to_string(verdict))});
        report = render(t, fmt);
        files["threshold" + ext] = report;
    } else {
        if (a.embeddings.size() != 1 || a.labels.empty())
            throw ConfigError("--probe needs one training embedding file and --labels");
        const EmbeddingMatrix train = read_embeddings(ctx.resolve(a.embeddings.front()));
        const auto train_labels = read_labels(ctx.resolve(a.labels));
        const ProbeModel model = train_probe(train, train_labels, {a.learning_rate, a.epochs});
        auto score = [&](const EmbeddingMatrix& m, const std::map<std::string, Label>& labels) {
            const PredictionFile p = probe_predict(model, m);
            std::size_t correct = 0;
            for (const auto& r : p.rows) correct += r.predicted == labels.at(r.stimulus_id) ? 1 : 0;
            return std::pair{p, static_cast<double>(correct) / static_cast<double>(p.rows.size())};
        };
        Table t;
        t.header = {"split", "n", "accuracy", "final_loss"};
        const auto [train_pred, train_acc] = score(train, train_labels);
        t.rows.push_back({"train", std::to_string(train.rows()), fixed(train_acc, 4), fixed(model.final_loss, 6)});
        std::ostringstream pred;
        write_predictions(pred, train_pred);
        files["probe_train_predictions.csv"] = pred.str();
        if (!a.test.empty()) {
            if (a.test_labels.empty()) throw ConfigError("--test needs --test-labels");
            const EmbeddingMatrix test = read_embeddings(ctx.resolve(a.test));
            const auto [test_pred, test_acc] = score(test, read_labels(ctx.resolve(a.test_labels)));
            t.rows.push_back({"test", std::to_string(test.rows()), fixed(test_acc, 4), ""});
            std::ostringstream tp;
            write_predictions(tp, test_pred);
            files["probe_test_predictions.csv"] = tp.str();
        }
        report = render(t, fmt);
        files["probe" + ext] = report;
    }
    *ctx.out << report;
    if (!a.out.empty()) {
        const fs::path out = ctx.resolve(a.out);
        for (const auto& [name, text] : files) write_text(out / name, text);
        write_run_json(out, "analyze",
                       {{"embeddings", a.embeddings},
                        {"mode", a.pairwise ? "pairwise" : a.threshold ? "threshold" : "probe"},
                        {"reference", a.reference},
                        {"margin", a.margin},
                        {"bins", a.bins},
                        {"labels", a.labels},
                        {"test", a.test},
                        {"test_labels", a.test_labels},
                        {"learning_rate", a.learning_rate},
                        {"epochs", a.epochs},
                        {"format", a.format}});
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::string config;
    std::string out;
    std::string objects;
    std::string stimuli;
    std::optional<std::uint64_t> seed;
};

inline int cmd_sweep(const Context& ctx, const SweepArgs& a) {
    json merged = a.config.empty() ? json::object() : read_json_file(ctx.resolve(a.config));
    if (const auto seed = seed_override(a.seed)) merged["root_seed"] = *seed;
    const GenerationConfig base = config_from_json(merged);
    const auto cells =
        sweep_cells(base, parse_size_list(a.objects, "--objects"), parse_size_list(a.stimuli, "--stimuli"));
    const fs::path out = ctx.resolve(a.out);
    json index = json::array();
    for (const auto& cell : cells) {
        const Dataset d = build_dataset(cell.config, ctx.jobs);
        write_dataset(d, out / cell.name(), ctx.jobs);
        index.push_back({{"unique_objects", cell.unique_objects}, {"stimuli", cell.stimuli}, {"path", cell.name()}});
        *ctx.out << cell.name() << ": " << d.manifest.records.size() << " stimuli\n";
    }
    write_text(out / "sweep.json", index.dump(2) + "\n");
    write_run_json(out, "sweep", {{"config", a.config}, {"objects", a.objects}, {"stimuli", a.stimuli}}, base);
    return kOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"relkit: same-different stimulus generation and evaluation"};
    app.require_subcommand(1);
    Context ctx;
    ctx.out = &out;
    ctx.err = &err;
    std::string root = ".";
    app.add_option("--root", root, "base directory for relative paths");
    app.add_option("--jobs,-j", ctx.jobs, "worker threads (0 = all cores)");

    GenerateArgs g;
    auto* gen = app.add_subcommand("generate", "build a dataset");
    gen->add_option("--config,-c", g.config, "generation config JSON");
    gen->add_option("--out,-o", g.out, "output directory")->required();
    gen->add_option("--variant", g.variant, "base | grayscale | masked | flipped");
    gen->add_option("--placement", g.placement, "free | aligned");
    gen->add_option("--seed", g.seed, "root seed (overrides RELKIT_SEED and the config)");
    gen->add_flag("--dissociation", g.dissociation, "build the eight dissociation sets");
    gen->add_option("--single-object", g.single_object, "build N single-object images");
    gen->add_option("--object-offset", g.object_offset, "first object index for --single-object");

    ValidateArgs v;
    auto* val = app.add_subcommand("validate", "check a dataset directory");
    val->add_option("dataset", v.dataset, "dataset directory")->required();
    val->add_option("--out,-o", v.out, "directory for validation.json and run.json");
    val->add_flag("--skip-images", v.skip_images, "check the manifest only");

    EvalArgs e;
    auto* ev = app.add_subcommand("eval", "score predictions");
    ev->add_option("--predictions,-p", e.predictions, "prediction CSV (repeatable)");
    ev->add_option("--manifest,-m", e.manifests, "manifest for each predictions file (repeatable)");
    ev->add_option("--name", e.names, "report row name for each predictions file");
    ev->add_option("--matrix", e.matrix, "grid JSON for a generalization matrix");
    ev->add_option("--dissociation", e.dissociation, "directory holding the eight dissociation sets");
    ev->add_option("--model", e.model, "model name for the dissociation report");
    ev->add_flag("--logits", e.logits, "mean logit by class report");
    ev->add_option("--format", e.format, "csv | md");
    ev->add_option("--out,-o", e.out, "report directory");

    AnalyzeArgs an;
    auto* ana = app.add_subcommand("analyze", "embedding analyses");
    ana->add_option("embeddings", an.embeddings, "embedding files");
    ana->add_flag("--pairwise", an.pairwise, "cosine similarity summary and histogram");
    ana->add_flag("--probe", an.probe, "train a linear probe");
    ana->add_flag("--threshold", an.threshold, "inter-object similarity predictor");
    ana->add_option("--reference", an.reference, "reference embedding file for --threshold");
    ana->add_option("--margin", an.margin, "margin above the reference mean");
    ana->add_option("--bins", an.bins, "histogram bins over [-1, 1]");
    ana->add_option("--labels", an.labels, "label CSV for the training embeddings");
    ana->add_option("--test", an.test, "held-out embedding file for --probe");
    ana->add_option("--test-labels", an.test_labels, "label CSV for --test");
    ana->add_option("--lr", an.learning_rate, "probe learning rate");
    ana->add_option("--epochs", an.epochs, "probe epochs");
    ana->add_option("--format", an.format, "csv | md");
    ana->add_option("--out,-o", an.out, "report directory");

    SweepArgs s;
    auto* sw = app.add_subcommand("sweep", "datasets over a grid of object and stimulus counts");
    sw->add_option("--config,-c", s.config, "base generation config JSON");
    sw->add_option("--out,-o", s.out, "output directory")->required();
    sw->add_option("--objects", s.objects, "unique training object counts, comma separated")->required();
    sw->add_option("--stimuli", s.stimuli, "training stimulus counts, comma separated")->required();
    sw->add_option("--seed", s.seed, "root seed (overrides RELKIT_SEED and the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& ex) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& ex) {
        err << "relkit: " << ex.what() << "\n";
        return kUsage;
    }
    ctx.root = root;

    try {
        if (gen->parsed()) return cmd_generate(ctx, g);
        if (val->parsed()) return cmd_validate(ctx, v);
        if (ev->parsed()) return cmd_eval(ctx, e);
        if (ana->parsed()) return cmd_analyze(ctx, an);
        if (sw->parsed()) return cmd_sweep(ctx, s);
    } catch (const ConfigError& ex) {
        err << "relkit: config error: " << ex.what() << "\n";
        return kUsage;
    } catch (const InputError& ex) {
        err << "relkit: invalid input: " << ex.what() << "\n";
        return kUsage;
    } catch (const GenerationError& ex) {
        err << "relkit: generation failed: " << ex.what() << "\n";
        return kUsage;
    } catch (const IoError& ex) {
        err << "relkit: I/O error: " << ex.what() << "\n";
        return kIo;
    } catch (const ParseError& ex) {
        err << "relkit: parse error: " << ex.what() << "\n";
        return kIo;
    } catch (const json::exception& ex) {
        err << "relkit: parse error: " << ex.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& ex) {
        err << "relkit: I/O error: " << ex.what() << "\n";
        return kIo;
    }
    return kUsage;
}

} // namespace relkit::cli
