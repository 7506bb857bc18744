#pragma once

// Dataset validator. Every check reports into the same list; nothing short of
// an unreadable manifest stops the run.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "relkit/composer/dataset.hpp"
#include "relkit/composer/placement.hpp"
#include "relkit/image.hpp"
#include "relkit/objectgen/transforms.hpp"
#include "relkit/parallel.hpp"
#include "relkit/png_io.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct Violation {
    std::string kind; ///< balance, split_size, stimulus_count, disjointness, membership, coverage, bounds,
                      ///< overlap, pixel_equality, mirror, background, missing_image, unreadable_image,
                      ///< checksum, duplicate_id, factors
    std::string stimulus_id; ///< empty for dataset-level violations
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::size_t records_checked = 0;
    std::size_t images_checked = 0;

    bool ok() const noexcept { return violations.empty(); }
    std::size_t count(std::string_view kind) const {
        std::size_t n = 0;
        for (const auto& v : violations) n += v.kind == kind ? 1 : 0;
        return n;
    }
};

struct ValidateOptions {
    bool check_images = true;
    unsigned jobs = 0;
};

namespace detail {

inline std::string base_object_id(const std::string& id) {
    if (id.ends_with(kMirrorSuffix)) return id.substr(0, id.size() - kMirrorSuffix.size());
    return id;
}

inline bool outside_is_white(const Image& img, Point a, const std::optional<Point>& b) {
    auto inside = [](int x, int y, Point p) {
        return x >= p.x && x < p.x + kObjectSize && y >= p.y && y < p.y + kObjectSize;
    };
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            if (inside(x, y, a) || (b && inside(x, y, *b))) continue;
            if (img.at(x, y) != kWhite) return false;
        }
    return true;
}

inline void audit_factors(const DatasetManifest& m, const std::map<std::string, ObjectImage>& objects,
                          std::vector<Violation>& out) {
    for (const auto& r : m.records) {
        if (r.variant.kind != VariantKind::dissociation) continue;
        const auto ia = objects.find(r.object_a), ib = objects.find(r.object_b);
        if (ia == objects.end() || ib == objects.end() || !ia->second.factors || !ib->second.factors) {
            out.push_back({"factors", r.stimulus_id, "object factors unavailable"});
            continue;
        }
        const Factors& fa = *ia->second.factors;
        const Factors& fb = *ib->second.factors;
        const auto& c = r.variant.condition;
        if ((fa.color_id == fb.color_id) != c.color_same || (fa.texture_id == fb.texture_id) != c.texture_same ||
            (fa.shape_id == fb.shape_id) != c.shape_same)
            out.push_back({"factors", r.stimulus_id,
                           "factors of " + r.object_a + " and " + r.object_b + " do not match condition " + c.name()});
    }
}

} // namespace detail

/// Checks a manifest (and, when image checks are on, the images below
/// `image_root`) against the dataset invariants.
inline ValidationReport validate_dataset(const DatasetManifest& m, const std::filesystem::path& image_root,
                                         const ValidateOptions& options = {}) {
    ValidationReport rep;
    auto& out = rep.violations;
    rep.records_checked = m.records.size();

    // Object splits: disjoint, sizes as configured.
    std::map<std::string, Split> owner;
    for (const auto& [split, ids] : m.object_splits)
        for (const auto& id : ids) {
            const auto [it, fresh] = owner.emplace(id, split);
            if (!fresh)
                out.push_back({"disjointness", "",
                               "object " + id + " is in both " + std::string(to_string(it->second)) + " and " +
                                   std::string(to_string(split))});
        }
    const auto& cfg = m.config;
    const bool standard = cfg.contains("split_sizes") && cfg.contains("stimuli_per_split");
    if (standard) {
        for (Split s : kAllSplits) {
            const auto i = static_cast<std::size_t>(s);
            const auto want = cfg["split_sizes"][i].get<std::size_t>();
            const auto it = m.object_splits.find(s);
            const std::size_t have = it == m.object_splits.end() ? 0 : it->second.size();
            if (have != want)
                out.push_back({"split_size", "",
                               std::string(to_string(s)) + " has " + std::to_string(have) + " objects, config says " +
                                   std::to_string(want)});
        }
    }

    // Per-record structure.
    std::set<std::string> seen_ids;
    std::map<Split, std::array<std::size_t, 3>> label_counts;
    std::set<std::string> used;
    for (const auto& r : m.records) {
        if (!seen_ids.insert(r.stimulus_id).second)
            out.push_back({"duplicate_id", r.stimulus_id, "stimulus id appears twice"});
        ++label_counts[r.split][static_cast<std::size_t>(r.label)];
        const bool single = !r.pos_b.has_value();
        if (single != (r.label == Label::none) || single != r.object_b.empty())
            out.push_back({"membership", r.stimulus_id, "single-object records need label none and no object_b"});
        for (const std::string* id : {&r.object_a, &r.object_b}) {
            if (id->empty()) continue;
            const std::string base = detail::base_object_id(*id);
            used.insert(base);
            const auto it = owner.find(base);
            if (it == owner.end()) out.push_back({"membership", r.stimulus_id, "object " + *id + " is in no split"});
            else if (it->second != r.split)
                out.push_back({"membership", r.stimulus_id,
                               "object " + *id + " belongs to " + std::string(to_string(it->second)) + ", record is " +
                                   std::string(to_string(r.split))});
        }
        if (r.label == Label::same && r.object_a != r.object_b)
            out.push_back({"pixel_equality", r.stimulus_id, "same record names two different objects"});
        if (r.label == Label::different && r.object_a == r.object_b)
            out.push_back({"pixel_equality", r.stimulus_id, "different record names one object twice"});
        if (!box_inside_canvas(r.pos_a) || (r.pos_b && !box_inside_canvas(*r.pos_b)))
            out.push_back({"bounds", r.stimulus_id, "object box outside the canvas"});
        if (r.pos_b && boxes_overlap(r.pos_a, *r.pos_b))
            out.push_back({"overlap", r.stimulus_id, "object boxes overlap"});
    }

    const bool balanced_kind = !m.records.empty() && m.records.front().variant.kind != VariantKind::dissociation &&
                               m.records.front().variant.kind != VariantKind::single_object;
    for (const auto& [split, c] : label_counts) {
        if (balanced_kind && c[0] != c[1])
            out.push_back({"balance", "",
                           std::string(to_string(split)) + ": " + std::to_string(c[0]) + " same vs " +
                               std::to_string(c[1]) + " different"});
    }
    if (standard) {
        for (Split s : kAllSplits) {
            const auto want = cfg["stimuli_per_split"][static_cast<std::size_t>(s)].get<std::size_t>();
            const auto it = label_counts.find(s);
            const std::size_t have = it == label_counts.end() ? 0 : it->second[0] + it->second[1] + it->second[2];
            if (have != want)
                out.push_back({"stimulus_count", "",
                               std::string(to_string(s)) + " has " + std::to_string(have) + " stimuli, config says " +
                                   std::to_string(want)});
        }
    }

    // Coverage: every object of a split with stimuli appears in some record.
    for (const auto& [split, ids] : m.object_splits) {
        if (!label_counts.contains(split)) continue;
        for (const auto& id : ids)
            if (!used.contains(id)) out.push_back({"coverage", "", "object " + id + " appears in no stimulus"});
    }

    // Factor audit for dissociation sets, from the object index if present.
    const bool has_dissociation = std::any_of(m.records.begin(), m.records.end(), [](const auto& r) {
        return r.variant.kind == VariantKind::dissociation;
    });
    if (has_dissociation) {
        if (std::filesystem::exists(image_root / "objects" / "objects.json"))
            detail::audit_factors(m, read_object_set(image_root / "objects"), out);
        else
            out.push_back({"factors", "", "dissociation set without objects/objects.json"});
    }

    if (!options.check_images) return rep;

    // Pixel checks against the stored images.
    std::mutex mu;
    std::vector<Violation> pixel;
    std::size_t images = 0;
    parallel_for(m.records.size(), options.jobs, [&](std::size_t i) {
        const auto& r = m.records[i];
        std::vector<Violation> local;
        const auto path = image_root / r.image_path;
        Image img;
        bool loaded = false;
        if (!std::filesystem::exists(path)) {
            local.push_back({"missing_image", r.stimulus_id, path.string()});
        } else {
            try {
                img = read_png(path);
                loaded = true;
            } catch (const Error& e) {
                local.push_back({"unreadable_image", r.stimulus_id, e.what()});
            }
        }
        if (loaded) {
            if (img.width() != kCanvasSize || img.height() != kCanvasSize)
                local.push_back({"bounds", r.stimulus_id, "image is not 224x224"});
            else {
                if (pixel_checksum(img) != r.checksum)
                    local.push_back({"checksum", r.stimulus_id, "pixel checksum does not match the manifest"});
                const bool boxes_ok =
                    box_inside_canvas(r.pos_a) && (!r.pos_b || (box_inside_canvas(*r.pos_b) && !boxes_overlap(r.pos_a, *r.pos_b)));
                if (boxes_ok) {
                    if (!detail::outside_is_white(img, r.pos_a, r.pos_b))
                        local.push_back({"background", r.stimulus_id, "non-white pixels outside the object boxes"});
                    if (r.pos_b) {
                        const Image a = img.crop(r.pos_a, kObjectSize, kObjectSize);
                        const Image b = img.crop(*r.pos_b, kObjectSize, kObjectSize);
                        if (r.label == Label::same && a != b)
                            local.push_back({"pixel_equality", r.stimulus_id, "same stimulus with differing objects"});
                        if (r.label == Label::different && a == b)
                            local.push_back({"pixel_equality", r.stimulus_id, "different stimulus with identical objects"});
                        if (r.variant.kind == VariantKind::flipped && r.label == Label::different && mirror(a) != b)
                            local.push_back({"mirror", r.stimulus_id, "second object is not the mirror of the first"});
                    }
                }
            }
        }
        std::lock_guard lock(mu);
        if (loaded) ++images;
        pixel.insert(pixel.end(), local.begin(), local.end());
    });
    // Restore manifest order so reports are stable across job counts.
    std::map<std::string, std::size_t> order;
    for (std::size_t i = 0; i < m.records.size(); ++i) order.emplace(m.records[i].stimulus_id, i);
    std::stable_sort(pixel.begin(), pixel.end(), [&](const Violation& x, const Violation& y) {
        return order[x.stimulus_id] < order[y.stimulus_id];
    });
    out.insert(out.end(), pixel.begin(), pixel.end());
    rep.images_checked = images;
    return rep;
}

} // namespace relkit
