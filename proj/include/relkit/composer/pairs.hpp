#pragma once

// Pair selection for one split.
//
// "same" pairs are (o, o). Objects are drawn by cycling through fresh random
// permutations, so per-object appearance counts differ by at most one.
//
// "different" pairs are distinct unordered pairs. Endpoints are laid out the
// same way (cycled permutations) and paired consecutively; a clash (self-pair,
// repeated pair, or incompatible objects) is repaired by swapping with a later
// endpoint, which keeps the per-object counts intact. When the quota exceeds
// the number of distinct compatible pairs, every pair is used and repeated
// round-robin.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct PairSpec {
    std::string object_a;
    std::string object_b;
    Label label = Label::same;

    friend bool operator==(const PairSpec&, const PairSpec&) = default;
};

/// Whether two distinct objects may form a "different" pair.
using PairCompatibility = std::function<bool(std::size_t, std::size_t)>;

struct PairOptions {
    std::size_t placements_per_pair = 0; ///< 0 = each selected pair is placed once where possible
    PairCompatibility compatible;        ///< empty = all distinct pairs allowed
};

namespace detail {

/// Concatenated random permutations of [0, n), truncated to `length`.
inline std::vector<std::size_t> cycled_permutations(std::size_t n, std::size_t length, SeedStream& stream) {
    std::vector<std::size_t> out;
    out.reserve(length);
    std::vector<std::size_t> perm(n);
    while (out.size() < length) {
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        stream.shuffle(perm);
        for (std::size_t i = 0; i < n && out.size() < length; ++i) out.push_back(perm[i]);
    }
    return out;
}

inline std::uint64_t pair_key(std::size_t a, std::size_t b) noexcept {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

inline std::size_t distinct_wanted(std::size_t quota, std::size_t placements_per_pair) {
    if (placements_per_pair == 0) return quota;
    return (quota + placements_per_pair - 1) / placements_per_pair;
}

template <typename T>
std::vector<T> round_robin(const std::vector<T>& distinct, std::size_t quota) {
    std::vector<T> out;
    out.reserve(quota);
    for (std::size_t i = 0; i < quota; ++i) out.push_back(distinct[i % distinct.size()]);
    return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> balanced_distinct_pairs(std::size_t n, std::size_t k,
                                                                                 const PairCompatibility& ok,
                                                                                 SeedStream& stream) {
    constexpr int kRestarts = 64;
    constexpr int kSwapTries = 256;
    for (int restart = 0; restart < kRestarts; ++restart) {
        auto ends = cycled_permutations(n, 2 * k, stream);
        std::set<std::uint64_t> used;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        pairs.reserve(k);
        auto valid = [&](std::size_t a, std::size_t b) {
            return a != b && !used.contains(pair_key(a, b)) && (!ok || ok(a, b));
        };
        bool failed = false;
        for (std::size_t i = 0; i < k && !failed; ++i) {
            const std::size_t a = ends[2 * i];
            if (!valid(a, ends[2 * i + 1])) {
                bool repaired = false;
                const std::size_t rest = ends.size() - (2 * i + 2);
                for (int t = 0; t < kSwapTries && rest > 0 && !repaired; ++t) {
                    const std::size_t j = 2 * i + 2 + stream.index(rest);
                    if (valid(a, ends[j])) {
                        std::swap(ends[2 * i + 1], ends[j]);
                        repaired = true;
                    }
                }
                if (!repaired) failed = true;
            }
            if (!failed) {
                used.insert(pair_key(a, ends[2 * i + 1]));
                pairs.emplace_back(a, ends[2 * i + 1]);
            }
        }
        if (!failed) return pairs;
    }
    throw GenerationError("pair selection: could not build a balanced set of distinct pairs");
}

} // namespace detail

inline std::vector<PairSpec> select_same_pairs(const std::vector<std::string>& objects, std::size_t quota,
                                               SeedStream& stream, std::size_t placements_per_pair = 0) {
    if (quota == 0) return {};
    if (objects.empty()) throw GenerationError("pair selection: no objects for 'same' quota");
    const auto order = detail::cycled_permutations(objects.size(), detail::distinct_wanted(quota, placements_per_pair), stream);
    std::vector<PairSpec> distinct;
    for (std::size_t i : order) distinct.push_back({objects[i], objects[i], Label::same});
    return detail::round_robin(distinct, quota);
}

inline std::vector<PairSpec> select_different_pairs(const std::vector<std::string>& objects, std::size_t quota,
                                                    SeedStream& stream, const PairOptions& options = {}) {
    if (quota == 0) return {};
    const std::size_t n = objects.size();
    if (n < 2) throw GenerationError("pair selection: 'different' pairs need at least 2 objects");

    std::vector<std::pair<std::size_t, std::size_t>> all;
    std::size_t max_pairs = n * (n - 1) / 2;
    if (options.compatible) {
        max_pairs = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (options.compatible(a, b)) ++max_pairs;
        if (max_pairs == 0) throw GenerationError("pair selection: no compatible 'different' pairs");
    }

    std::size_t k = detail::distinct_wanted(quota, options.placements_per_pair);
    if (options.placements_per_pair != 0 && k > max_pairs)
        throw GenerationError("pair selection: quota needs more distinct pairs than exist");
    k = std::min(k, max_pairs);

    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    if (k == max_pairs) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (!options.compatible || options.compatible(a, b)) chosen.emplace_back(a, b);
        stream.shuffle(chosen);
    } else {
        chosen = detail::balanced_distinct_pairs(n, k, options.compatible, stream);
    }

    std::vector<PairSpec> distinct;
    distinct.reserve(chosen.size());
    for (auto [a, b] : chosen) {
        if (stream.coin()) std::swap(a, b);
        distinct.push_back({objects[a], objects[b], Label::different});
    }
    return detail::round_robin(distinct, quota);
}

/// Same pairs first, then different pairs; each list is drawn from its own
/// sub-stream of `stream` so changing one quota leaves the other untouched.
inline std::vector<PairSpec> select_pairs(const std::vector<std::string>& objects, std::size_t quota_same,
                                          std::size_t quota_diff, const SeedStream& stream,
                                          const PairOptions& options = {}) {
    SeedStream same_stream(stream.root_seed(), stream.stream_index() ^ 0x1ULL);
    SeedStream diff_stream(stream.root_seed(), stream.stream_index() ^ 0x2ULL);
    auto out = select_same_pairs(objects, quota_same, same_stream, options.placements_per_pair);
    auto diff = select_different_pairs(objects, quota_diff, diff_stream, options);
    out.insert(out.end(), diff.begin(), diff.end());
    return out;
}

} // namespace relkit
