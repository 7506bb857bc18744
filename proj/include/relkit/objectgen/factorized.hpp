#pragma once

// Factorized objects: a shape mask filled with a tiled texture tinted by a
// palette color, on white. The default catalog is procedural (16 shapes,
// 16 textures, 16 colors). Textures are periodic integer patterns and
// shading never reaches white, so every in-mask pixel is non-background and
// any differing factor changes the raster.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/image.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct ShapeEntry {
    std::string id;
    Mask mask;
};

struct TextureEntry {
    std::string id;
    std::vector<double> intensity; ///< 64x64, values in [0, 1]
};

struct ColorEntry {
    std::string id;
    Rgb rgb;
};

class FactorCatalog {
public:
    std::vector<ShapeEntry> shapes;
    std::vector<TextureEntry> textures;
    std::vector<ColorEntry> colors;

    void validate() const {
        check_unique(shapes, "shape");
        check_unique(textures, "texture");
        check_unique(colors, "color");
        for (const auto& c : colors)
            if (c.rgb == kWhite) throw ConfigError("catalog color '" + c.id + "' is the background color");
    }

    const ShapeEntry& shape(const std::string& id) const { return find(shapes, id, "shape"); }
    const TextureEntry& texture(const std::string& id) const { return find(textures, id, "texture"); }
    const ColorEntry& color(const std::string& id) const { return find(colors, id, "color"); }

    /// Catalog restricted to the first n entries of each factor.
    FactorCatalog truncated(std::size_t n_shapes, std::size_t n_textures, std::size_t n_colors) const {
        FactorCatalog out;
        out.shapes.assign(shapes.begin(), shapes.begin() + std::min(n_shapes, shapes.size()));
        out.textures.assign(textures.begin(), textures.begin() + std::min(n_textures, textures.size()));
        out.colors.assign(colors.begin(), colors.begin() + std::min(n_colors, colors.size()));
        return out;
    }

private:
    template <typename T>
    static void check_unique(const std::vector<T>& v, const char* what) {
        std::set<std::string> seen;
        for (const auto& e : v)
            if (!seen.insert(e.id).second) throw ConfigError(std::string("duplicate ") + what + " id '" + e.id + "'");
    }

    template <typename T>
    static const T& find(const std::vector<T>& v, const std::string& id, const char* what) {
        for (const auto& e : v)
            if (e.id == id) return e;
        throw InputError(std::string("unknown ") + what + " id '" + id + "'");
    }
};

namespace detail {

constexpr double kShapeRadius = 26.0;
constexpr double kShapeCenter = kObjectSize / 2.0;

inline Mask mask_from(const std::function<bool(double, double)>& inside) {
    Mask m(kObjectSize, kObjectSize);
    for (int y = 0; y < kObjectSize; ++y)
        for (int x = 0; x < kObjectSize; ++x)
            m.set(x, y, inside(x + 0.5 - kShapeCenter, y + 0.5 - kShapeCenter));
    return m;
}

inline bool in_polygon(const std::vector<std::pair<double, double>>& poly, double px, double py) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto [xi, yi] = poly[i];
        const auto [xj, yj] = poly[j];
        if (((yi > py) != (yj > py)) && (px < (xj - xi) * (py - yi) / (yj - yi) + xi)) in = !in;
    }
    return in;
}

/// Regular polygon (inner_ratio == 1) or star (alternating radii), first vertex straight up.
inline Mask radial_polygon(int points, double inner_ratio, double rotation = 0.0) {
    const int verts = inner_ratio < 1.0 ? 2 * points : points;
    std::vector<std::pair<double, double>> poly;
    for (int k = 0; k < verts; ++k) {
        const double r = (inner_ratio < 1.0 && k % 2 == 1) ? kShapeRadius * inner_ratio : kShapeRadius;
        const double a = -std::numbers::pi / 2 + rotation + 2.0 * std::numbers::pi * k / verts;
        poly.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    return mask_from([poly](double x, double y) { return in_polygon(poly, x, y); });
}

inline Mask polar_blob(int lobes) {
    return mask_from([lobes](double x, double y) {
        const double r = std::hypot(x, y);
        const double a = std::atan2(y, x);
        return r <= kShapeRadius * (0.78 + 0.22 * std::cos(lobes * a));
    });
}

inline std::vector<ShapeEntry> default_shapes() {
    const double R = kShapeRadius;
    std::vector<ShapeEntry> s;
    s.push_back({"circle", mask_from([R](double x, double y) { return x * x + y * y <= R * R; })});
    s.push_back({"ellipse", mask_from([R](double x, double y) {
                     return (x / R) * (x / R) + (y / (0.6 * R)) * (y / (0.6 * R)) <= 1.0;
                 })});
    s.push_back({"triangle", radial_polygon(3, 1.0)});
    s.push_back({"square", radial_polygon(4, 1.0, std::numbers::pi / 4)});
    s.push_back({"diamond", radial_polygon(4, 1.0)});
    s.push_back({"pentagon", radial_polygon(5, 1.0)});
    s.push_back({"hexagon", radial_polygon(6, 1.0)});
    s.push_back({"octagon", radial_polygon(8, 1.0, std::numbers::pi / 8)});
    s.push_back({"star5", radial_polygon(5, 0.45)});
    s.push_back({"star6", radial_polygon(6, 0.5)});
    s.push_back({"star8", radial_polygon(8, 0.55)});
    s.push_back({"cross", mask_from([R](double x, double y) {
                     const double arm = 0.33 * R;
                     return (std::abs(x) <= arm && std::abs(y) <= R) || (std::abs(y) <= arm && std::abs(x) <= R);
                 })});
    s.push_back({"ring", mask_from([R](double x, double y) {
                     const double r2 = x * x + y * y;
                     return r2 <= R * R && r2 >= 0.3 * R * R;
                 })});
    s.push_back({"blob3", polar_blob(3)});
    s.push_back({"blob5", polar_blob(5)});
    s.push_back({"crescent", mask_from([R](double x, double y) {
                     const double ox = x - 0.45 * R;
                     const double oy = y + 0.1 * R;
                     return x * x + y * y <= R * R && ox * ox + oy * oy > 0.64 * R * R;
                 })});
    return s;
}

inline double triangle_wave(int v, int period) {
    const int m = ((v % period) + period) % period;
    return std::abs(m - period / 2) / (period / 2.0);
}

inline TextureEntry texture_from(std::string id, const std::function<double(int, int)>& f) {
    TextureEntry t{std::move(id), std::vector<double>(static_cast<std::size_t>(kObjectSize) * kObjectSize)};
    for (int y = 0; y < kObjectSize; ++y)
        for (int x = 0; x < kObjectSize; ++x) t.intensity[static_cast<std::size_t>(y) * kObjectSize + x] = f(x, y);
    return t;
}

inline std::vector<TextureEntry> default_textures() {
    std::vector<TextureEntry> t;
    t.push_back(texture_from("solid", [](int, int) { return 1.0; }));
    t.push_back(texture_from("hstripes", [](int, int y) { return double((y / 4) % 2); }));
    t.push_back(texture_from("vstripes", [](int x, int) { return double((x / 4) % 2); }));
    t.push_back(texture_from("hstripes_wide", [](int, int y) { return double((y / 8) % 2); }));
    t.push_back(texture_from("vstripes_wide", [](int x, int) { return double((x / 8) % 2); }));
    t.push_back(texture_from("diagonal", [](int x, int y) { return double(((x + y) / 4) % 2); }));
    t.push_back(texture_from("antidiagonal", [](int x, int y) { return double(((x - y + 64) / 4) % 2); }));
    t.push_back(texture_from("checks", [](int x, int y) { return double((x / 4 + y / 4) % 2); }));
    t.push_back(texture_from("checks_wide", [](int x, int y) { return double((x / 8 + y / 8) % 2); }));
    t.push_back(texture_from("dots", [](int x, int y) {
        const double dx = x % 8 - 3.5;
        const double dy = y % 8 - 3.5;
        return dx * dx + dy * dy <= 6.0 ? 0.0 : 1.0;
    }));
    t.push_back(texture_from("grid", [](int x, int y) { return (x % 8 == 0 || y % 8 == 0) ? 0.0 : 1.0; }));
    t.push_back(texture_from("waves_h", [](int, int y) { return triangle_wave(y, 16); }));
    t.push_back(texture_from("waves_v", [](int x, int) { return triangle_wave(x, 16); }));
    t.push_back(texture_from("rings", [](int x, int y) {
        const double r = std::sqrt((x - 31.5) * (x - 31.5) + (y - 31.5) * (y - 31.5));
        return std::floor(r / 4.0) - 2.0 * std::floor(r / 8.0); // 0/1 bands of width 4
    }));
    t.push_back(texture_from("zigzag", [](int x, int y) {
        const int m = x % 16;
        return double(((y + (m < 8 ? m : 16 - m)) / 4) % 2);
    }));
    t.push_back(texture_from("speckle", [](int x, int y) {
        std::uint32_t h = static_cast<std::uint32_t>((x % 16) * 73856093u ^ (y % 16) * 19349663u);
        h ^= h >> 13;
        h *= 0x5bd1e995u;
        h ^= h >> 15;
        return (h & 1u) ? 1.0 : 0.0;
    }));
    return t;
}

inline std::vector<ColorEntry> default_colors() {
    return {{"red", {230, 25, 75}},      {"green", {60, 180, 75}},    {"yellow", {255, 225, 25}},
            {"blue", {0, 130, 200}},     {"orange", {245, 130, 48}},  {"purple", {145, 30, 180}},
            {"cyan", {70, 240, 240}},    {"magenta", {240, 50, 230}}, {"lime", {210, 245, 60}},
            {"pink", {250, 190, 212}},   {"teal", {0, 128, 128}},     {"lavender", {220, 190, 255}},
            {"brown", {170, 110, 40}},   {"beige", {255, 250, 200}},  {"maroon", {128, 0, 0}},
            {"olive", {128, 128, 0}}};
}

} // namespace detail

inline FactorCatalog default_catalog() {
    FactorCatalog c;
    c.shapes = detail::default_shapes();
    c.textures = detail::default_textures();
    c.colors = detail::default_colors();
    c.validate();
    return c;
}

/// Shading of a texture intensity: dark end 0.45 of the color, light end the color itself.
constexpr double texture_shade(double intensity) noexcept { return 0.45 + 0.55 * intensity; }

inline std::string factorized_object_id(const Factors& f) {
    return "sha-" + f.shape_id + "-" + f.texture_id + "-" + f.color_id;
}

inline ObjectImage gen_factorized(const std::string& shape_id, const std::string& texture_id,
                                  const std::string& color_id, const FactorCatalog& catalog) {
    const Mask& mask = catalog.shape(shape_id).mask;
    const TextureEntry& tex = catalog.texture(texture_id);
    const Rgb color = catalog.color(color_id).rgb;
    Factors f{shape_id, texture_id, color_id};
    ObjectImage obj{factorized_object_id(f), Image(kObjectSize, kObjectSize), ObjectSource::factorized, f};
    auto channel = [](std::uint8_t c, double shade) {
        return static_cast<std::uint8_t>(std::lround(c * shade));
    };
    for (int y = 0; y < kObjectSize; ++y)
        for (int x = 0; x < kObjectSize; ++x) {
            if (!mask.at(x, y)) continue;
            const double shade = texture_shade(tex.intensity[static_cast<std::size_t>(y) * kObjectSize + x]);
            Rgb px{channel(color.r, shade), channel(color.g, shade), channel(color.b, shade)};
            if (px == kWhite) px = {254, 254, 254}; // only reachable with a near-white custom color
            obj.pixels.set(x, y, px);
        }
    return obj;
}

inline ObjectImage gen_factorized(const Factors& f, const FactorCatalog& catalog) {
    return gen_factorized(f.shape_id, f.texture_id, f.color_id, catalog);
}

} // namespace relkit
