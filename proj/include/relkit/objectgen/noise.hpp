#pragma once

// Gaussian-noise object patches.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "relkit/error.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

/// Draws z ~ N(mu, sigma); pixel = clip(round(pixel_center + pixel_scale * z), 0, 255).
struct NoiseSpec {
    double mu = 0.0;
    double sigma = 1.0;
    double pixel_center = 127.5;
    double pixel_scale = 42.5;

    void validate() const {
        if (!(sigma > 0)) throw ConfigError("noise: sigma must be > 0");
        if (!(pixel_scale > 0)) throw ConfigError("noise: pixel_scale must be > 0");
    }
};

inline void to_json(nlohmann::json& j, const NoiseSpec& s) {
    j = {{"mu", s.mu}, {"sigma", s.sigma}, {"pixel_center", s.pixel_center}, {"pixel_scale", s.pixel_scale}};
}

inline void from_json(const nlohmann::json& j, NoiseSpec& s) {
    s = NoiseSpec{};
    if (j.contains("mu")) s.mu = j.at("mu").get<double>();
    if (j.contains("sigma")) s.sigma = j.at("sigma").get<double>();
    if (j.contains("pixel_center")) s.pixel_center = j.at("pixel_center").get<double>();
    if (j.contains("pixel_scale")) s.pixel_scale = j.at("pixel_scale").get<double>();
}

/// The 64*64 pre-clip draws, row-major, exactly as gen_noise consumes them.
inline std::vector<double> noise_draws(const NoiseSpec& spec, SeedStream& stream) {
    spec.validate();
    std::vector<double> z(static_cast<std::size_t>(kObjectSize) * kObjectSize);
    for (auto& v : z) v = stream.normal(spec.mu, spec.sigma);
    return z;
}

inline ObjectImage gen_noise(const NoiseSpec& spec, SeedStream& stream, std::string object_id = "noise") {
    const auto z = noise_draws(spec, stream);
    ObjectImage obj{std::move(object_id), Image(kObjectSize, kObjectSize), ObjectSource::noise, std::nullopt};
    for (int y = 0; y < kObjectSize; ++y)
        for (int x = 0; x < kObjectSize; ++x) {
            const double v = spec.pixel_center + spec.pixel_scale * z[static_cast<std::size_t>(y) * kObjectSize + x];
            const auto g = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            obj.pixels.set(x, y, {g, g, g});
        }
    return obj;
}

} // namespace relkit
