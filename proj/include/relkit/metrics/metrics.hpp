#pragma once

// Evaluation statistics over predictions joined against a manifest.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/types.hpp"

namespace relkit {

/// One prediction matched to its ground truth.
struct JoinedRow {
    std::string stimulus_id;
    Label truth = Label::same;
    Label predicted = Label::same;
    double score_same = 0.0;
    std::optional<double> logit_same;
};

/// Joins in manifest order. Every manifest record needs exactly one
/// prediction and every prediction must name a manifest record.
inline std::vector<JoinedRow> join_predictions(const PredictionFile& preds, const DatasetManifest& m) {
    std::unordered_map<std::string, const PredictionRecord*> by_id;
    by_id.reserve(preds.rows.size());
    for (const auto& p : preds.rows)
        if (!by_id.emplace(p.stimulus_id, &p).second)
            throw InputError("duplicate prediction for stimulus '" + p.stimulus_id + "'");
    std::vector<JoinedRow> out;
    out.reserve(m.records.size());
    for (const auto& r : m.records) {
        const auto it = by_id.find(r.stimulus_id);
        if (it == by_id.end()) throw InputError("no prediction for stimulus '" + r.stimulus_id + "'");
        const PredictionRecord& p = *it->second;
        out.push_back({r.stimulus_id, r.label, preds.decide(p), p.score_same, p.logit_same});
        by_id.erase(it);
    }
    if (!by_id.empty()) throw InputError("prediction for unknown stimulus '" + by_id.begin()->first + "'");
    return out;
}

/// Rows are true class, columns predicted class.
struct Confusion {
    std::size_t td_pd = 0;
    std::size_t td_ps = 0;
    std::size_t ts_pd = 0;
    std::size_t ts_ps = 0;

    std::size_t total() const noexcept { return td_pd + td_ps + ts_pd + ts_ps; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

namespace detail {
inline void require_labelled(const JoinedRow& r) {
    if (r.truth == Label::none) throw InputError("stimulus '" + r.stimulus_id + "' has no same/different label");
}
} // namespace detail

inline Confusion confusion(const std::vector<JoinedRow>& rows) {
    Confusion c;
    for (const auto& r : rows) {
        detail::require_labelled(r);
        const bool ps = r.predicted == Label::same;
        if (r.truth == Label::same) ++(ps ? c.ts_ps : c.ts_pd);
        else ++(ps ? c.td_ps : c.td_pd);
    }
    return c;
}

inline double accuracy(const std::vector<JoinedRow>& rows) {
    if (rows.empty()) throw InputError("accuracy of an empty prediction set");
    const Confusion c = confusion(rows);
    return static_cast<double>(c.td_pd + c.ts_ps) / static_cast<double>(c.total());
}

/// Mann-Whitney statistic as an exact fraction: auc = twice_u / (2 * n_pos * n_neg).
struct AucCounts {
    std::uint64_t twice_u = 0;
    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;

    double value() const {
        return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
    }
};

/// `scores` with `positive` flags; ties get midranks.
inline AucCounts auc_counts(const std::vector<double>& scores, const std::vector<bool>& positive) {
    if (scores.size() != positive.size()) throw InputError("auc: score and label counts differ");
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    AucCounts c;
    std::uint64_t twice_rank_sum = 0;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start;
        while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
        // ranks start+1 .. end share the midrank (start+1+end)/2
        const std::uint64_t twice_mid = start + 1 + end;
        for (std::size_t k = start; k < end; ++k)
            if (positive[order[k]]) twice_rank_sum += twice_mid;
        start = end;
    }
    for (bool p : positive) ++(p ? c.n_pos : c.n_neg);
    if (c.n_pos == 0 || c.n_neg == 0) throw InputError("auc needs both classes");
    c.twice_u = twice_rank_sum - c.n_pos * (c.n_pos + 1);
    return c;
}

/// P(score of a true "same" > score of a true "different"), ties count 1/2.
inline double auc_roc(const std::vector<JoinedRow>& rows) {
    std::vector<double> s;
    std::vector<bool> pos;
    s.reserve(rows.size());
    pos.reserve(rows.size());
    for (const auto& r : rows) {
        detail::require_labelled(r);
        s.push_back(r.score_same);
        pos.push_back(r.truth == Label::same);
    }
    return auc_counts(s, pos).value();
}

struct EvalResult {
    double accuracy = 0.0;
    double auc = 0.0;
    Confusion confusion;
    std::size_t n = 0;
};

inline EvalResult evaluate(const std::vector<JoinedRow>& rows) {
    return {accuracy(rows), auc_roc(rows), confusion(rows), rows.size()};
}

inline double median_over_seeds(std::vector<double> values) {
    if (values.empty()) throw InputError("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

/// Cells are medians over seeds; averages skip cells whose train and test
/// names match.
struct GeneralizationMatrix {
    std::vector<std::string> train;
    std::vector<std::string> test;
    std::vector<std::vector<double>> cells;
    std::vector<std::optional<double>> row_avgs;
    std::vector<std::optional<double>> col_avgs;
};

using SeedResults = std::map<std::pair<std::string, std::string>, std::vector<double>>;

inline GeneralizationMatrix generalization_matrix(const std::vector<std::string>& train,
                                                  const std::vector<std::string>& test, const SeedResults& results) {
    GeneralizationMatrix g{train, test, {}, {}, {}};
    g.cells.assign(train.size(), std::vector<double>(test.size(), 0.0));
    for (std::size_t i = 0; i < train.size(); ++i)
        for (std::size_t j = 0; j < test.size(); ++j) {
            const auto it = results.find({train[i], test[j]});
            if (it == results.end() || it->second.empty())
                throw InputError("generalization matrix: missing cell " + train[i] + " -> " + test[j]);
            g.cells[i][j] = median_over_seeds(it->second);
        }
    auto off_mean = [&](bool by_row, std::size_t k) -> std::optional<double> {
        double sum = 0.0;
        std::size_t n = 0;
        const std::size_t len = by_row ? test.size() : train.size();
        for (std::size_t o = 0; o < len; ++o) {
            const std::size_t i = by_row ? k : o, j = by_row ? o : k;
            if (train[i] == test[j]) continue;
            sum += g.cells[i][j];
            ++n;
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    };
    for (std::size_t i = 0; i < train.size(); ++i) g.row_avgs.push_back(off_mean(true, i));
    for (std::size_t j = 0; j < test.size(); ++j) g.col_avgs.push_back(off_mean(false, j));
    return g;
}

/// Fraction of "same" predictions per dissociation condition. Each set must
/// hold records of a single condition.
inline std::map<std::string, double> proportion_same(const std::vector<std::vector<JoinedRow>>& sets,
                                                     const std::vector<DatasetManifest>& manifests) {
    if (sets.size() != manifests.size()) throw InputError("proportion_same: set and manifest counts differ");
    std::map<std::string, double> out;
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto& m = manifests[k];
        if (m.records.empty()) throw InputError("dissociation set '" + m.dataset_id + "' is empty");
        const Variant v = m.records.front().variant;
        if (v.kind != VariantKind::dissociation)
            throw InputError("'" + m.dataset_id + "' is not a dissociation set");
        for (const auto& r : m.records)
            if (!(r.variant == v)) throw InputError("'" + m.dataset_id + "' mixes dissociation conditions");
        std::size_t same = 0;
        for (const auto& r : sets[k]) same += r.predicted == Label::same ? 1 : 0;
        if (!out.emplace(v.condition.name(), static_cast<double>(same) / static_cast<double>(sets[k].size())).second)
            throw InputError("condition " + v.condition.name() + " appears twice");
    }
    for (const auto& c : DissociationCondition::all())
        if (!out.contains(c.name())) throw InputError("missing dissociation set for condition " + c.name());
    return out;
}

struct LogitSummary {
    double mean_logit_same_true_same = 0.0;
    double mean_logit_same_true_diff = 0.0;
    double percent_predicted_same = 0.0;
};

inline LogitSummary mean_logit_by_class(const std::vector<JoinedRow>& rows) {
    double s_same = 0.0, s_diff = 0.0;
    std::size_t n_same = 0, n_diff = 0, pred_same = 0;
    for (const auto& r : rows) {
        detail::require_labelled(r);
        if (!r.logit_same) throw InputError("stimulus '" + r.stimulus_id + "' has no logit");
        if (r.truth == Label::same) {
            s_same += *r.logit_same;
            ++n_same;
        } else {
            s_diff += *r.logit_same;
            ++n_diff;
        }
        pred_same += r.predicted == Label::same ? 1 : 0;
    }
    if (n_same == 0 || n_diff == 0) throw InputError("mean logits need both classes");
    return {s_same / static_cast<double>(n_same), s_diff / static_cast<double>(n_diff),
            100.0 * static_cast<double>(pred_same) / static_cast<double>(rows.size())};
}

} // namespace relkit
