#pragma once

// Generation config. The JSON form mirrors the struct field for field and is
// echoed verbatim into every manifest header and run.json.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "relkit/composer/placement.hpp"
#include "relkit/error.hpp"
#include "relkit/objectgen/noise.hpp"
#include "relkit/objectgen/squiggle.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct CatalogSize {
    std::size_t shapes = 16;
    std::size_t textures = 16;
    std::size_t colors = 16;
};

struct GenerationConfig {
    std::string dataset_id = "squ";
    std::uint64_t root_seed = 0;
    ObjectSource source = ObjectSource::squiggle;
    std::size_t object_count = 1600;
    std::array<std::size_t, 3> split_sizes{1200, 300, 100};        ///< train, val, test
    std::array<std::size_t, 3> stimuli_per_split{6400, 6400, 6400}; ///< train, val, test
    PlacementMode placement_mode = PlacementMode::free;
    VariantKind variant = VariantKind::base;                        ///< base | grayscale | masked | flipped
    std::size_t placements_per_pair = 0;                            ///< 0 = auto
    SquiggleSpec squiggle;
    NoiseSpec noise;
    CatalogSize catalog;
    std::string import_dir; ///< for source = imported

    std::size_t split_size(Split s) const noexcept { return split_sizes[static_cast<std::size_t>(s)]; }
    std::size_t stimuli(Split s) const noexcept { return stimuli_per_split[static_cast<std::size_t>(s)]; }

    void validate() const {
        if (dataset_id.empty()) throw ConfigError("dataset_id must not be empty");
        const std::size_t total = split_sizes[0] + split_sizes[1] + split_sizes[2];
        if (total > object_count) throw ConfigError("split sizes sum to more than object_count");
        for (Split s : kAllSplits) {
            if (stimuli(s) % 2 != 0) throw ConfigError("stimuli_per_split must be even");
            if (stimuli(s) > 0 && split_size(s) == 0)
                throw ConfigError("split '" + std::string(to_string(s)) + "' has stimuli but no objects");
        }
        switch (variant) {
        case VariantKind::base:
        case VariantKind::grayscale:
        case VariantKind::masked:
        case VariantKind::flipped: break;
        default: throw ConfigError("generation variant must be base, grayscale, masked or flipped");
        }
        if (source == ObjectSource::squiggle) squiggle.validate();
        if (source == ObjectSource::noise) noise.validate();
        if (source == ObjectSource::imported && import_dir.empty())
            throw ConfigError("source 'imported' needs import_dir");
        if (source == ObjectSource::factorized) {
            if (catalog.shapes == 0 || catalog.textures == 0 || catalog.colors == 0 || catalog.shapes > 16 ||
                catalog.textures > 16 || catalog.colors > 16)
                throw ConfigError("catalog sizes must lie in [1, 16]");
            if (object_count > catalog.shapes * catalog.textures * catalog.colors)
                throw ConfigError("object_count exceeds the number of distinct factor triples");
        }
    }
};

inline std::string variant_name(VariantKind v) { return Variant{v, {}}.name(); }

inline void to_json(nlohmann::json& j, const GenerationConfig& c) {
    j = nlohmann::json::object();
    j["dataset_id"] = c.dataset_id;
    j["root_seed"] = c.root_seed;
    j["source"] = to_string(c.source);
    j["object_count"] = c.object_count;
    j["split_sizes"] = c.split_sizes;
    j["stimuli_per_split"] = c.stimuli_per_split;
    j["canvas"] = kCanvasSize;
    j["object_size"] = kObjectSize;
    j["placement_mode"] = to_string(c.placement_mode);
    j["variant"] = variant_name(c.variant);
    j["placements_per_pair"] = c.placements_per_pair;
    j["squiggle"] = c.squiggle;
    j["noise"] = c.noise;
    j["catalog"] = {{"shapes", c.catalog.shapes}, {"textures", c.catalog.textures}, {"colors", c.catalog.colors}};
    j["import_dir"] = c.import_dir;
}

inline GenerationConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("generation config must be a JSON object");
    static const std::array<std::string, 15> known{"dataset_id",  "root_seed",         "source",
                                                   "object_count", "split_sizes",      "stimuli_per_split",
                                                   "canvas",       "object_size",      "placement_mode",
                                                   "variant",      "placements_per_pair", "squiggle",
                                                   "noise",        "catalog",          "import_dir"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown generation config field '" + key + "'");
    GenerationConfig c;
    try {
        if (j.contains("dataset_id")) c.dataset_id = j.at("dataset_id").get<std::string>();
        if (j.contains("root_seed")) c.root_seed = j.at("root_seed").get<std::uint64_t>();
        if (j.contains("source")) c.source = parse_object_source(j.at("source").get<std::string>());
        if (j.contains("object_count")) c.object_count = j.at("object_count").get<std::size_t>();
        if (j.contains("split_sizes")) c.split_sizes = j.at("split_sizes").get<std::array<std::size_t, 3>>();
        if (j.contains("stimuli_per_split")) {
            const auto& s = j.at("stimuli_per_split");
            if (s.is_number_unsigned()) c.stimuli_per_split.fill(s.get<std::size_t>());
            else c.stimuli_per_split = s.get<std::array<std::size_t, 3>>();
        }
        if (j.contains("canvas") && j.at("canvas").get<int>() != kCanvasSize)
            throw ConfigError("canvas is fixed at 224");
        if (j.contains("object_size") && j.at("object_size").get<int>() != kObjectSize)
            throw ConfigError("object_size is fixed at 64");
        if (j.contains("placement_mode"))
            c.placement_mode = parse_placement_mode(j.at("placement_mode").get<std::string>());
        if (j.contains("variant")) c.variant = Variant::parse(j.at("variant").get<std::string>()).kind;
        if (j.contains("placements_per_pair")) c.placements_per_pair = j.at("placements_per_pair").get<std::size_t>();
        if (j.contains("squiggle")) c.squiggle = j.at("squiggle").get<SquiggleSpec>();
        if (j.contains("noise")) c.noise = j.at("noise").get<NoiseSpec>();
        if (j.contains("catalog")) {
            const auto& cat = j.at("catalog");
            c.catalog.shapes = cat.value("shapes", std::size_t{16});
            c.catalog.textures = cat.value("textures", std::size_t{16});
            c.catalog.colors = cat.value("colors", std::size_t{16});
        }
        if (j.contains("import_dir")) c.import_dir = j.at("import_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad generation config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

} // namespace relkit
