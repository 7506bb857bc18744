#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "relkit/error.hpp"

namespace relkit {

struct Rgb {
    std::uint8_t r = 255;
    std::uint8_t g = 255;
    std::uint8_t b = 255;

    friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};

/// Integer pixel coordinate (top-left origin, x to the right, y down).
struct Point {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(const Point&, const Point&) = default;
    friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

/// 8-bit RGB raster, row-major, no alpha.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = kWhite)
        : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3) {
        if (width < 0 || height < 0) throw InputError("negative image size");
        fill_with(fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return data_.empty(); }

    Rgb at(int x, int y) const noexcept {
        const std::size_t o = offset(x, y);
        return {data_[o], data_[o + 1], data_[o + 2]};
    }

    void set(int x, int y, Rgb c) noexcept {
        const std::size_t o = offset(x, y);
        data_[o] = c.r;
        data_[o + 1] = c.g;
        data_[o + 2] = c.b;
    }

    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    void fill_with(Rgb c) noexcept {
        for (std::size_t o = 0; o < data_.size(); o += 3) {
            data_[o] = c.r;
            data_[o + 1] = c.g;
            data_[o + 2] = c.b;
        }
    }

    std::span<const std::uint8_t> bytes() const noexcept { return data_; }
    std::span<std::uint8_t> bytes() noexcept { return data_; }

    std::span<const std::uint8_t> row(int y) const noexcept {
        return std::span<const std::uint8_t>(data_).subspan(offset(0, y), static_cast<std::size_t>(width_) * 3);
    }

    /// Copies `src` with its top-left corner at `origin`, clipping at the border.
    void blit(const Image& src, Point origin) noexcept {
        for (int y = 0; y < src.height(); ++y) {
            const int ty = origin.y + y;
            if (ty < 0 || ty >= height_) continue;
            for (int x = 0; x < src.width(); ++x) {
                const int tx = origin.x + x;
                if (tx < 0 || tx >= width_) continue;
                set(tx, ty, src.at(x, y));
            }
        }
    }

    Image crop(Point origin, int width, int height) const {
        Image out(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (contains(origin.x + x, origin.y + y)) out.set(x, y, at(origin.x + x, origin.y + y));
        return out;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Checksum recorded in manifests: FNV-1a over the raw RGB bytes.
inline std::uint64_t pixel_checksum(const Image& img) noexcept { return fnv1a64(img.bytes()); }

/// Binary mask, same geometry conventions as Image.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool fill = false)
        : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool at(int x, int y) const noexcept { return data_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    bool at_or(int x, int y, bool outside) const noexcept {
        return (x < 0 || y < 0 || x >= width_ || y >= height_) ? outside : at(x, y);
    }
    void set(int x, int y, bool v) noexcept { data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }
    std::size_t count() const noexcept { return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1)); }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

} // namespace relkit
