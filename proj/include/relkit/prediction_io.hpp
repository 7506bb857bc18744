#pragma once

// Prediction CSV:
//
//   # threshold=<real>
//   # rule=argmax                       (optional; default rule is threshold)
//   stimulus_id,score_same,logit_same,logit_diff,predicted,model_id,seed_id
//   ...
//
// Empty logit fields mean "absent". Reals are written in shortest
// round-trip form.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/types.hpp"

namespace relkit {

inline constexpr std::string_view kPredictionHeader =
    "stimulus_id,score_same,logit_same,logit_diff,predicted,model_id,seed_id";

inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw InputError("cannot format real");
    return std::string(buf, ptr);
}

inline double parse_real(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad real '" + std::string(s) + "'");
    return v;
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline void check_csv_field(std::string_view s, std::string_view what) {
    if (s.find_first_of(",\n\r") != std::string_view::npos)
        throw InputError(std::string(what) + " must not contain commas or newlines: '" + std::string(s) + "'");
}

inline std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Throws ParseError when `predicted` disagrees with the file's decision rule.
inline void check_prediction_consistency(const PredictionFile& f) {
    for (const auto& r : f.rows)
        if (f.decide(r) != r.predicted)
            throw ParseError("prediction for '" + r.stimulus_id + "' disagrees with the recorded decision rule");
}

inline void write_predictions(std::ostream& out, const PredictionFile& f) {
    out << "# threshold=" << format_real(f.threshold) << '\n';
    if (f.rule == DecisionRule::argmax) out << "# rule=argmax\n";
    out << kPredictionHeader << '\n';
    for (const auto& r : f.rows) {
        detail::check_csv_field(r.stimulus_id, "stimulus_id");
        detail::check_csv_field(r.model_id, "model_id");
        if (r.predicted == Label::none) throw InputError("predicted label must be same or different");
        out << r.stimulus_id << ',' << format_real(r.score_same) << ','
            << (r.logit_same ? format_real(*r.logit_same) : "") << ','
            << (r.logit_diff ? format_real(*r.logit_diff) : "") << ',' << to_string(r.predicted) << ','
            << r.model_id << ',' << r.seed_id << '\n';
    }
}

inline PredictionFile read_predictions(std::istream& in) {
    PredictionFile f;
    bool have_threshold = false;
    bool have_header = false;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = detail::strip_cr(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = line.substr(1);
            while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            if (body.starts_with("threshold=")) {
                f.threshold = parse_real(body.substr(10));
                have_threshold = true;
            } else if (body.starts_with("rule=")) {
                const auto rule = body.substr(5);
                if (rule == "argmax") f.rule = DecisionRule::argmax;
                else if (rule == "threshold") f.rule = DecisionRule::threshold;
                else throw ParseError("unknown decision rule '" + std::string(rule) + "'");
            }
            continue;
        }
        if (!have_header) {
            if (line != kPredictionHeader) throw ParseError("unexpected prediction header: " + std::string(line));
            have_header = true;
            continue;
        }
        const auto fields = detail::split_csv(line);
        if (fields.size() != 7)
            throw ParseError("prediction line " + std::to_string(lineno) + ": expected 7 fields, got " +
                             std::to_string(fields.size()));
        PredictionRecord r;
        try {
            r.stimulus_id = std::string(fields[0]);
            r.score_same = parse_real(fields[1]);
            if (!fields[2].empty()) r.logit_same = parse_real(fields[2]);
            if (!fields[3].empty()) r.logit_diff = parse_real(fields[3]);
            r.predicted = parse_label(fields[4]);
            if (r.predicted == Label::none) throw ParseError("predicted must be same or different");
            r.model_id = std::string(fields[5]);
            std::int64_t seed = 0;
            auto [ptr, ec] = std::from_chars(fields[6].data(), fields[6].data() + fields[6].size(), seed);
            if (ec != std::errc() || ptr != fields[6].data() + fields[6].size())
                throw ParseError("bad seed_id '" + std::string(fields[6]) + "'");
            r.seed_id = seed;
        } catch (const ParseError& e) {
            throw ParseError("prediction line " + std::to_string(lineno) + ": " + e.what());
        }
        f.rows.push_back(std::move(r));
    }
    if (!have_threshold) throw ParseError("prediction file lacks '# threshold=' preamble");
    if (!have_header) throw ParseError("prediction file lacks header row");
    check_prediction_consistency(f);
    return f;
}

inline void write_predictions(const std::filesystem::path& path, const PredictionFile& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_predictions(out, f);
    if (!out) throw IoError("short write to " + path.string());
}

inline PredictionFile read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_predictions(in);
}

} // namespace relkit
