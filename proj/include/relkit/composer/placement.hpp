#pragma once

// Object placement on the 224x224 canvas.
//
// free:    two 64x64 boxes drawn uniformly inside the canvas, rejected while
//          they intersect.
// aligned: two distinct slots of a 3x3 grid whose origins sit on 16-px token
//          offsets {1, 5, 9}, so every object covers exactly a 4x4 block of
//          transformer patches.

#include <array>
#include <cstdlib>
#include <string_view>
#include <utility>

#include "relkit/error.hpp"
#include "relkit/image.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

enum class PlacementMode { free, aligned };

inline std::string_view to_string(PlacementMode m) { return m == PlacementMode::free ? "free" : "aligned"; }

inline PlacementMode parse_placement_mode(std::string_view s) {
    if (s == "free") return PlacementMode::free;
    if (s == "aligned") return PlacementMode::aligned;
    throw ConfigError("unknown placement_mode '" + std::string(s) + "'");
}

inline constexpr int kTokenSize = 16;
inline constexpr int kMaxOrigin = kCanvasSize - kObjectSize; // 160
inline constexpr int kMaxPlacementAttempts = 1000;

/// Axis-aligned 64x64 boxes at a and b share at least one pixel.
constexpr bool boxes_overlap(Point a, Point b, int size = kObjectSize) noexcept {
    return std::abs(a.x - b.x) < size && std::abs(a.y - b.y) < size;
}

constexpr bool box_inside_canvas(Point p, int size = kObjectSize, int canvas = kCanvasSize) noexcept {
    return p.x >= 0 && p.y >= 0 && p.x + size <= canvas && p.y + size <= canvas;
}

/// Slot origins in row-major order.
constexpr std::array<Point, 9> aligned_slots() noexcept {
    constexpr std::array<int, 3> tokens{1, 5, 9};
    std::array<Point, 9> out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[r * 3 + c] = {tokens[c] * kTokenSize, tokens[r] * kTokenSize};
    return out;
}

inline std::pair<Point, Point> place_pair(PlacementMode mode, SeedStream& stream) {
    if (mode == PlacementMode::aligned) {
        const auto slots = aligned_slots();
        const std::size_t i = stream.index(9);
        std::size_t j = stream.index(8);
        if (j >= i) ++j;
        return {slots[i], slots[j]};
    }
    for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
        const Point a{static_cast<int>(stream.uniform_int(0, kMaxOrigin)), static_cast<int>(stream.uniform_int(0, kMaxOrigin))};
        const Point b{static_cast<int>(stream.uniform_int(0, kMaxOrigin)), static_cast<int>(stream.uniform_int(0, kMaxOrigin))};
        if (!boxes_overlap(a, b)) return {a, b};
    }
    throw GenerationError("placement: no non-overlapping position pair found");
}

inline Point place_single(SeedStream& stream) {
    return {static_cast<int>(stream.uniform_int(0, kMaxOrigin)), static_cast<int>(stream.uniform_int(0, kMaxOrigin))};
}

/// White canvas with both objects copied in; object pixels overwrite the canvas.
inline Image compose_stimulus(const Image& a, const Image& b, Point pos_a, Point pos_b) {
    if (!box_inside_canvas(pos_a) || !box_inside_canvas(pos_b)) throw InputError("object box outside canvas");
    if (boxes_overlap(pos_a, pos_b)) throw InputError("object boxes overlap");
    Image canvas(kCanvasSize, kCanvasSize);
    canvas.blit(a, pos_a);
    canvas.blit(b, pos_b);
    return canvas;
}

inline Image compose_single(const Image& a, Point pos) {
    if (!box_inside_canvas(pos)) throw InputError("object box outside canvas");
    Image canvas(kCanvasSize, kCanvasSize);
    canvas.blit(a, pos);
    return canvas;
}

} // namespace relkit
