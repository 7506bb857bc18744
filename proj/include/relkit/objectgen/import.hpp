#pragma once

// Import external object photographs / drawings from a directory of PNGs.
// Each image is white-padded to a centered square and resampled to 64x64
// with bilinear interpolation (pixel-center aligned, so 64x64 inputs pass
// through unchanged).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "relkit/error.hpp"
#include "relkit/image.hpp"
#include "relkit/png_io.hpp"
#include "relkit/types.hpp"

namespace relkit {

inline Image pad_to_square(const Image& img, Rgb fill = kWhite) {
    const int side = std::max(img.width(), img.height());
    Image out(side, side, fill);
    out.blit(img, {(side - img.width()) / 2, (side - img.height()) / 2});
    return out;
}

inline Image resize_bilinear(const Image& src, int width, int height) {
    if (src.empty()) throw InputError("cannot resize an empty image");
    Image out(width, height);
    const double sx = static_cast<double>(src.width()) / width;
    const double sy = static_cast<double>(src.height()) / height;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height() - 1));
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, src.height() - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width() - 1));
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, src.width() - 1);
            const double wx = fx - x0;
            const Rgb c00 = src.at(x0, y0), c10 = src.at(x1, y0), c01 = src.at(x0, y1), c11 = src.at(x1, y1);
            auto mix = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
                const double top = a + (b - a) * wx;
                const double bottom = c + (d - c) * wx;
                return static_cast<std::uint8_t>(std::clamp(std::lround(top + (bottom - top) * wy), 0L, 255L));
            };
            out.set(x, y, {mix(c00.r, c10.r, c01.r, c11.r), mix(c00.g, c10.g, c01.g, c11.g),
                           mix(c00.b, c10.b, c01.b, c11.b)});
        }
    }
    return out;
}

/// Pads and resamples any raster to a 64x64 object.
inline Image normalize_object_raster(const Image& img) {
    return resize_bilinear(pad_to_square(img), kObjectSize, kObjectSize);
}

using WarningSink = std::function<void(const std::string&)>;

inline void warn_stderr(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

/// Loads every *.png in `directory` (sorted by filename); object_id is the file stem.
/// Non-PNG and undecodable files are skipped with a warning.
inline std::vector<ObjectImage> import_objects(const std::filesystem::path& directory,
                                               const WarningSink& warn = warn_stderr) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(directory, ec)) throw IoError("not a readable directory: " + directory.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory, ec))
        if (entry.is_regular_file()) files.push_back(entry.path());
    if (ec) throw IoError("cannot list " + directory.string() + ": " + ec.message());
    std::sort(files.begin(), files.end());

    std::vector<ObjectImage> out;
    for (const auto& path : files) {
        std::string ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext != ".png") {
            warn("skipping non-image file " + path.filename().string());
            continue;
        }
        try {
            Image img = read_png(path);
            out.push_back({path.stem().string(), normalize_object_raster(img), ObjectSource::imported, std::nullopt});
        } catch (const ParseError& e) {
            warn("skipping " + path.filename().string() + ": " + e.what());
        }
    }
    if (out.empty()) throw IoError("no importable images in " + directory.string());
    return out;
}

} // namespace relkit
