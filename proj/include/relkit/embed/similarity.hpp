#pragma once

// Cosine similarity statistics over embedding rows.

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/parallel.hpp"
#include "relkit/types.hpp"

namespace relkit {

inline double cosine(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size()) throw InputError("cosine: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        dot += static_cast<double>(u[k]) * v[k];
        nu += static_cast<double>(u[k]) * u[k];
        nv += static_cast<double>(v[k]) * v[k];
    }
    if (nu == 0.0 || nv == 0.0) throw InputError("cosine of a zero-norm vector");
    return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

struct SimilaritySummary {
    double mean = 0.0;
    double variance = 0.0; ///< population variance over pairs
    std::vector<std::uint64_t> histogram;
    std::uint64_t pair_count = 0;

    double bin_left(std::size_t b) const { return -1.0 + 2.0 * static_cast<double>(b) / histogram.size(); }
    double bin_right(std::size_t b) const { return -1.0 + 2.0 * static_cast<double>(b + 1) / histogram.size(); }
};

struct PairwiseOptions {
    std::size_t bins = 100;
    std::size_t block = 64; ///< column tile, rows per cache block
    unsigned jobs = 0;
};

namespace detail {

inline std::vector<float> normalized_rows(const EmbeddingMatrix& m) {
    std::vector<float> out(m.values.size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        double n = 0.0;
        for (float x : row) n += static_cast<double>(x) * x;
        if (n == 0.0 || !std::isfinite(n)) throw InputError("embedding row '" + m.ids[i] + "' has zero or non-finite norm");
        const double inv = 1.0 / std::sqrt(n);
        for (std::size_t k = 0; k < m.dim; ++k) out[i * m.dim + k] = static_cast<float>(row[k] * inv);
    }
    return out;
}

inline float dot8(const float* a, const float* b, std::size_t n) noexcept {
    float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8)
        for (int l = 0; l < 8; ++l) acc[l] += a[k + l] * b[k + l];
    float tail = 0.0f;
    for (; k < n; ++k) tail += a[k] * b[k];
    return ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail;
}

inline std::size_t bin_of(double c, std::size_t bins) noexcept {
    const double t = (c + 1.0) * 0.5 * static_cast<double>(bins);
    if (!(t > 0.0)) return 0;
    return std::min(bins - 1, static_cast<std::size_t>(t));
}

} // namespace detail

/// Mean, variance and histogram of cosine similarity over all n(n-1)/2
/// unordered row pairs. Each row's partial sums run over j > i in ascending
/// order and rows are combined in ascending order, so the result does not
/// depend on the tile size or the number of threads.
inline SimilaritySummary pairwise_summary(const EmbeddingMatrix& m, const PairwiseOptions& options = {}) {
    m.check();
    const std::size_t n = m.rows(), d = m.dim;
    if (n < 2) throw InputError("pairwise summary needs at least two rows");
    if (options.bins == 0) throw ConfigError("histogram needs at least one bin");
    const std::size_t tile = std::max<std::size_t>(1, options.block);
    const std::vector<float> x = detail::normalized_rows(m);

    std::vector<double> row_sum(n, 0.0), row_sq(n, 0.0);
    const std::size_t n_blocks = (n + tile - 1) / tile;
    std::vector<std::vector<std::uint64_t>> block_hist(n_blocks);

    parallel_for(
        n_blocks, options.jobs,
        [&](std::size_t blk) {
            const std::size_t i0 = blk * tile, i1 = std::min(n, i0 + tile);
            auto& hist = block_hist[blk];
            hist.assign(options.bins, 0);
            for (std::size_t j0 = i0; j0 < n; j0 += tile) {
                const std::size_t j1 = std::min(n, j0 + tile);
                for (std::size_t i = i0; i < i1; ++i) {
                    const float* xi = &x[i * d];
                    double s = row_sum[i], q = row_sq[i];
                    for (std::size_t j = std::max(j0, i + 1); j < j1; ++j) {
                        const double c = std::clamp(static_cast<double>(detail::dot8(xi, &x[j * d], d)), -1.0, 1.0);
                        s += c;
                        q += c * c;
                        ++hist[detail::bin_of(c, options.bins)];
                    }
                    row_sum[i] = s;
                    row_sq[i] = q;
                }
            }
        },
        1);

    SimilaritySummary out;
    out.histogram.assign(options.bins, 0);
    for (const auto& h : block_hist)
        for (std::size_t b = 0; b < options.bins; ++b) out.histogram[b] += h[b];
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += row_sum[i];
        sq += row_sq[i];
    }
    out.pair_count = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const double p = static_cast<double>(out.pair_count);
    out.mean = sum / p;
    out.variance = std::max(0.0, sq / p - out.mean * out.mean);
    return out;
}

enum class ThresholdVerdict { expected_ok, expected_fail };

inline std::string_view to_string(ThresholdVerdict v) {
    return v == ThresholdVerdict::expected_ok ? "expected_ok" : "expected_fail";
}

/// Datasets whose mean inter-object similarity exceeds reference + margin are
/// expected to have their "different" stimuli collapse into "same".
inline std::map<std::string, ThresholdVerdict> threshold_predict(double reference_mean,
                                                                 const std::map<std::string, double>& dataset_means,
                                                                 double margin = 0.0) {
    std::map<std::string, ThresholdVerdict> out;
    for (const auto& [name, mean] : dataset_means)
        out[name] = mean > reference_mean + margin ? ThresholdVerdict::expected_fail : ThresholdVerdict::expected_ok;
    return out;
}

} // namespace relkit
