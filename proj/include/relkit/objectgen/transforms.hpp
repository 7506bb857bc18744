#pragma once

// Raster transforms on object images: dilation, grayscale, mask, mirror.

#include <cstdint>

#include "relkit/error.hpp"
#include "relkit/image.hpp"
#include "relkit/types.hpp"

namespace relkit {

/// True when every pixel is pure black (foreground) or pure white (background).
inline bool is_binary(const Image& img) noexcept {
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const Rgb c = img.at(x, y);
            if (c != kBlack && c != kWhite) return false;
        }
    return true;
}

inline Mask foreground_mask(const Image& img, Rgb background = kWhite) {
    Mask m(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) m.set(x, y, img.at(x, y) != background);
    return m;
}

/// One pass of 3x3 square dilation.
inline Mask dilate_once(const Mask& in) {
    Mask out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) {
            bool hit = false;
            for (int dy = -1; dy <= 1 && !hit; ++dy)
                for (int dx = -1; dx <= 1 && !hit; ++dx) hit = in.at_or(x + dx, y + dy, false);
            out.set(x, y, hit);
        }
    return out;
}

/// Number of 3x3 dilation passes that thicken a 1-px stroke to `width`.
constexpr int dilation_passes(int width) noexcept { return width >= 1 ? (width - 1) / 2 : 0; }

/// Thickens black strokes on white to `width` pixels with a square
/// structuring element. Even widths round down to the next odd width.
inline Image dilate(const Image& img, int width) {
    if (width < 1) throw InputError("dilation width must be >= 1");
    if (!is_binary(img)) throw InputError("dilate expects a binary black-on-white image");
    Mask m = foreground_mask(img);
    for (int i = 0; i < dilation_passes(width); ++i) m = dilate_once(m);
    Image out(img.width(), img.height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            if (m.at(x, y)) out.set(x, y, kBlack);
    return out;
}

inline ObjectImage dilate(const ObjectImage& obj, int width) {
    ObjectImage out = obj;
    out.pixels = dilate(obj.pixels, width);
    return out;
}

/// ITU-R 601 luma, round-half-up: L = round(0.299 R + 0.587 G + 0.114 B).
constexpr std::uint8_t luma(Rgb c) noexcept {
    return static_cast<std::uint8_t>((299u * c.r + 587u * c.g + 114u * c.b + 500u) / 1000u);
}

inline Image to_grayscale(const Image& img) {
    Image out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const std::uint8_t l = luma(img.at(x, y));
            out.set(x, y, {l, l, l});
        }
    return out;
}

inline constexpr Rgb kMaskGray{100, 100, 100};

/// Mask rule for a white-background object: any pixel with all channels
/// <= 250 becomes gray, any other pixel that is not exactly white also
/// becomes gray, and exact white stays.
constexpr Rgb mask_pixel(Rgb c) noexcept {
    if (c.r <= 250 && c.g <= 250 && c.b <= 250) return kMaskGray;
    if (c != kWhite) return kMaskGray;
    return c;
}

inline Image to_masked(const Image& img) {
    Image out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.set(x, y, mask_pixel(img.at(x, y)));
    return out;
}

/// Reflection about the vertical axis.
inline Image mirror(const Image& img) {
    Image out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) out.set(img.width() - 1 - x, y, img.at(x, y));
    return out;
}

inline bool is_mirror_symmetric(const Image& img) { return mirror(img) == img; }

inline ObjectImage to_grayscale(const ObjectImage& obj) {
    ObjectImage out = obj;
    out.pixels = to_grayscale(obj.pixels);
    return out;
}

inline ObjectImage to_masked(const ObjectImage& obj) {
    ObjectImage out = obj;
    out.pixels = to_masked(obj.pixels);
    return out;
}

inline ObjectImage mirror(const ObjectImage& obj) {
    ObjectImage out = obj;
    out.pixels = mirror(obj.pixels);
    return out;
}

} // namespace relkit
