#pragma once

// PNG codec on libpng. Images are always written as 8-bit RGB without alpha;
// on read (simplified API), alpha is composited over white and
// grayscale/palette inputs are expanded to RGB.

#include <png.h>

#include <csetjmp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/image.hpp"

namespace relkit {

namespace detail {

struct PngImageGuard {
    png_image* img;
    ~PngImageGuard() { png_image_free(img); }
};

} // namespace detail

namespace detail {

inline void png_append(png_structp png, png_bytep data, png_size_t n) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + n);
}

inline void png_flush_noop(png_structp) {}

} // namespace detail

/// zlib level 1, "sub" filter on every row.
inline std::vector<std::uint8_t> encode_png(const Image& img) {
    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
    for (int y = 0; y < img.height(); ++y)
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(img.bytes().data()) + static_cast<std::size_t>(y) * img.width() * 3;

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png encode failed: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png encode failed: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png encode failed");
    }
    png_set_write_fn(png, &out, detail::png_append, detail::png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 1);
    png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

inline Image decode_png(const std::vector<std::uint8_t>& buffer) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    detail::PngImageGuard guard{&png};
    if (!png_image_begin_read_from_memory(&png, buffer.data(), buffer.size()))
        throw ParseError(std::string("png decode failed: ") + png.message);
    png.format = PNG_FORMAT_RGB;
    Image img(static_cast<int>(png.width), static_cast<int>(png.height));
    png_color background{255, 255, 255};
    if (!png_image_finish_read(&png, &background, img.bytes().data(), 0, nullptr))
        throw ParseError(std::string("png decode failed: ") + png.message);
    return img;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

inline void write_png(const std::filesystem::path& path, const Image& img) { write_file_bytes(path, encode_png(img)); }

inline Image read_png(const std::filesystem::path& path) { return decode_png(read_file_bytes(path)); }

} // namespace relkit
