#pragma once

// Report tables in CSV or aligned markdown.

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/metrics/metrics.hpp"

namespace relkit {

enum class ReportFormat { csv, md };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "md") return ReportFormat::md;
    throw ConfigError("unknown report format '" + std::string(s) + "' (csv or md)");
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline std::string render(const Table& t, ReportFormat f) {
    std::string out;
    if (f == ReportFormat::csv) {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + detail::csv_field(cells[i]);
            out += '\n';
        };
        line(t.header);
        for (const auto& r : t.rows) line(r);
        return out;
    }
    std::vector<std::size_t> width(t.header.size(), 3);
    auto widen = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
    };
    widen(t.header);
    for (const auto& r : t.rows) widen(r);
    auto line = [&](const std::vector<std::string>& cells) {
        out += '|';
        for (std::size_t i = 0; i < width.size(); ++i) {
            const std::string c = i < cells.size() ? cells[i] : "";
            out += ' ' + c + std::string(width[i] - c.size(), ' ') + " |";
        }
        out += '\n';
    };
    line(t.header);
    out += '|';
    for (auto w : width) out += std::string(w + 2, '-') + '|';
    out += '\n';
    for (const auto& r : t.rows) line(r);
    return out;
}

/// Train-by-test grid with an "Avg." column and row. Values are scaled
/// (100 for percent) and rounded only here.
inline Table generalization_table(const GeneralizationMatrix& g, double scale = 100.0, int decimals = 1) {
    Table t;
    t.header.push_back("Train \\ Test");
    for (const auto& c : g.test) t.header.push_back(c);
    t.header.push_back("Avg.");
    auto cell = [&](const std::optional<double>& v) { return v ? fixed(*v * scale, decimals) : std::string(); };
    for (std::size_t i = 0; i < g.train.size(); ++i) {
        std::vector<std::string> row{g.train[i]};
        for (double v : g.cells[i]) row.push_back(fixed(v * scale, decimals));
        row.push_back(cell(g.row_avgs[i]));
        t.rows.push_back(std::move(row));
    }
    std::vector<std::string> avg{"Avg."};
    for (const auto& v : g.col_avgs) avg.push_back(cell(v));
    avg.push_back("");
    t.rows.push_back(std::move(avg));
    return t;
}

struct DissociationRow {
    std::string model;
    std::optional<double> accuracy;
    std::map<std::string, double> proportion_same;
};

/// One row per model: accuracy, then the proportion of "same" predictions in
/// condition order none, S, T, TS, C, CS, CT, CTS.
inline Table dissociation_table(const std::vector<DissociationRow>& rows, int decimals = 2) {
    Table t;
    t.header = {"model", "acc."};
    for (const auto& c : DissociationCondition::all()) t.header.push_back(c.name());
    for (const auto& r : rows) {
        std::vector<std::string> row{r.model, r.accuracy ? fixed(*r.accuracy, decimals) : std::string()};
        for (const auto& c : DissociationCondition::all()) {
            const auto it = r.proportion_same.find(c.name());
            if (it == r.proportion_same.end()) throw InputError("dissociation row lacks condition " + c.name());
            row.push_back(fixed(it->second, decimals));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct LogitRow {
    std::string dataset;
    LogitSummary summary;
};

inline Table logit_table(const std::vector<LogitRow>& rows, int decimals = 2) {
    Table t;
    t.header = {"Dataset", "% Pred. \"Same\"", "GT \"Same\" Logit", "GT \"Diff\" Logit"};
    for (const auto& r : rows)
        t.rows.push_back({r.dataset, fixed(r.summary.percent_predicted_same, decimals),
                          fixed(r.summary.mean_logit_same_true_same, decimals),
                          fixed(r.summary.mean_logit_same_true_diff, decimals)});
    return t;
}

inline Table eval_table(const std::string& name, const EvalResult& e, int decimals = 4) {
    Table t;
    t.header = {"dataset", "n", "accuracy", "auc", "TD/PD", "TD/PS", "TS/PD", "TS/PS"};
    t.rows.push_back({name, std::to_string(e.n), fixed(e.accuracy, decimals), fixed(e.auc, decimals),
                      std::to_string(e.confusion.td_pd), std::to_string(e.confusion.td_ps),
                      std::to_string(e.confusion.ts_pd), std::to_string(e.confusion.ts_ps)});
    return t;
}

} // namespace relkit
