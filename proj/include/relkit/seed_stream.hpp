#pragma once

// Deterministic random streams.
//
// The generator is part of the file-format contract: every dataset is a pure
// function of its root seed, and each object, split, pair list and placement
// draws from its own stream keyed by a stable integer. Do not change any of
// the constants below without bumping the manifest format version.
//
//   key    = splitmix64(root_seed) ^ (stream_index * 0xD1B54A32D192ED03)
//   state  = four successive splitmix64 outputs seeded from key
//   output = xoshiro256** over state

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <iterator>
#include <numbers>

namespace relkit {

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamMul = 0xD1B54A32D192ED03ULL;

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// Stable stream-index layout: 8-bit domain, 8-bit sub-key, 48-bit index.
enum class StreamDomain : std::uint8_t {
    object = 1,
    split = 2,
    pairs = 3,
    placement = 4,
    order = 5,
    flip = 6,
    dissociation = 7,
    single_object = 8,
    probe = 9,
};

constexpr std::uint64_t stream_index(StreamDomain domain, std::uint64_t sub, std::uint64_t index) noexcept {
    return (static_cast<std::uint64_t>(domain) << 56) | ((sub & 0xFFULL) << 48) |
           (index & 0xFFFFFFFFFFFFULL);
}

/// One reproducible random sequence, identified by (root_seed, stream_index).
/// Satisfies UniformRandomBitGenerator, but relkit never hands it to
/// std::shuffle or std:: distributions because their algorithms are
/// implementation-defined.
class SeedStream {
public:
    using result_type = std::uint64_t;

    SeedStream(std::uint64_t root_seed, std::uint64_t stream_index) noexcept
        : root_seed_(root_seed), stream_index_(stream_index) {
        std::uint64_t sm = root_seed;
        std::uint64_t key = detail::splitmix64_next(sm) ^ (stream_index * detail::kStreamMul);
        for (auto& word : state_) word = detail::splitmix64_next(key);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    std::uint64_t root_seed() const noexcept { return root_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi], unbiased (rejection on the low residue).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(next_u64());
        const std::uint64_t threshold = (0 - range) % range;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return lo + static_cast<std::int64_t>(x % range);
        }
    }

    /// Uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n) noexcept {
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    bool coin() noexcept { return (next_u64() >> 63) != 0; }

    /// Box-Muller without caching; each call consumes exactly two draws.
    double normal(double mu = 0.0, double sigma = 1.0) noexcept {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mu + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Fisher-Yates, last-to-first.
    template <typename Range>
    void shuffle(Range& range) noexcept {
        using std::swap;
        const std::size_t n = std::size(range);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = index(i);
            swap(range[i - 1], range[j]);
        }
    }

private:
    std::uint64_t root_seed_;
    std::uint64_t stream_index_;
    std::array<std::uint64_t, 4> state_{};
};

/// Named constructor matching the rest of the API.
inline SeedStream derive_stream(std::uint64_t root_seed, std::uint64_t stream_index) noexcept {
    return SeedStream(root_seed, stream_index);
}

} // namespace relkit
