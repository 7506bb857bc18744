#pragma once

// Feature-dissociation evaluation sets. Each of the eight color/texture/shape
// same-or-different conditions gets its own test-only dataset built from
// factorized objects. Pairs in a condition are disjoint, so every object
// appears in exactly one pair.

#include <array>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "relkit/composer/dataset.hpp"
#include "relkit/error.hpp"
#include "relkit/objectgen/factorized.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct DissociationConfig {
    std::string dataset_prefix = "sha";
    std::uint64_t root_seed = 0;
    std::size_t objects_per_set = 300;
    std::size_t stimuli_per_set = 6400;
    PlacementMode placement_mode = PlacementMode::free;
    CatalogSize catalog;

    void validate() const {
        if (objects_per_set < 2 || objects_per_set % 2 != 0)
            throw ConfigError("objects_per_set must be even and at least 2");
        if (stimuli_per_set < objects_per_set / 2)
            throw ConfigError("stimuli_per_set must cover every pair at least once");
        if (catalog.shapes == 0 || catalog.textures == 0 || catalog.colors == 0 || catalog.shapes > 16 ||
            catalog.textures > 16 || catalog.colors > 16)
            throw ConfigError("catalog sizes must lie in [1, 16]");
    }
};

inline void to_json(nlohmann::json& j, const DissociationConfig& c) {
    j = {{"dataset_prefix", c.dataset_prefix},
         {"root_seed", c.root_seed},
         {"objects_per_set", c.objects_per_set},
         {"stimuli_per_set", c.stimuli_per_set},
         {"placement_mode", to_string(c.placement_mode)},
         {"catalog", {{"shapes", c.catalog.shapes}, {"textures", c.catalog.textures}, {"colors", c.catalog.colors}}}};
}

inline DissociationConfig dissociation_config_from_json(const nlohmann::json& j) {
    DissociationConfig c;
    try {
        c.dataset_prefix = j.value("dataset_prefix", c.dataset_prefix);
        c.root_seed = j.value("root_seed", c.root_seed);
        c.objects_per_set = j.value("objects_per_set", c.objects_per_set);
        c.stimuli_per_set = j.value("stimuli_per_set", c.stimuli_per_set);
        if (j.contains("placement_mode"))
            c.placement_mode = parse_placement_mode(j.at("placement_mode").get<std::string>());
        if (j.contains("catalog")) {
            const auto& cat = j.at("catalog");
            c.catalog.shapes = cat.value("shapes", std::size_t{16});
            c.catalog.textures = cat.value("textures", std::size_t{16});
            c.catalog.colors = cat.value("colors", std::size_t{16});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad dissociation config: ") + e.what());
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

namespace detail {

/// Draws a second factor triple related to `f` as the condition requires.
/// Returns false when some "different" dimension has a single entry.
inline bool partner_triple(const Factors& f, DissociationCondition cond, const FactorCatalog& cat, SeedStream& s,
                           Factors& out) {
    auto pick_other = [&](const auto& entries, const std::string& current, std::string& dst) {
        if (entries.size() < 2) return false;
        std::size_t k = s.index(entries.size() - 1);
        if (entries[k].id == current) k = entries.size() - 1;
        dst = entries[k].id;
        return true;
    };
    out = f;
    if (!cond.shape_same && !pick_other(cat.shapes, f.shape_id, out.shape_id)) return false;
    if (!cond.texture_same && !pick_other(cat.textures, f.texture_id, out.texture_id)) return false;
    if (!cond.color_same && !pick_other(cat.colors, f.color_id, out.color_id)) return false;
    return true;
}

inline std::string triple_key(const Factors& f) { return f.shape_id + "/" + f.texture_id + "/" + f.color_id; }

} // namespace detail

/// One condition's dataset. Stimuli cycle through the pairs in order, each
/// repeat of a pair at a new placement.
inline Dataset build_dissociation_set(const DissociationConfig& config, DissociationCondition cond,
                                      unsigned jobs = 0) {
    config.validate();
    const FactorCatalog cat =
        default_catalog().truncated(config.catalog.shapes, config.catalog.textures, config.catalog.colors);
    std::size_t ci = 0;
    const auto all = DissociationCondition::all();
    while (!(all[ci] == cond)) ++ci;

    SeedStream s(config.root_seed, stream_index(StreamDomain::dissociation, ci, 0));
    auto random_triple = [&] {
        return Factors{cat.shapes[s.index(cat.shapes.size())].id, cat.textures[s.index(cat.textures.size())].id,
                       cat.colors[s.index(cat.colors.size())].id};
    };
    const std::size_t total_triples = cat.shapes.size() * cat.textures.size() * cat.colors.size();
    const std::string too_small = "catalog too small for dissociation condition " + cond.name();

    std::vector<std::pair<Factors, Factors>> pairs;
    std::set<std::string> used;
    if (cond.all_same()) {
        if (config.objects_per_set > total_triples) throw GenerationError(too_small);
        while (pairs.size() < config.objects_per_set) {
            const Factors f = random_triple();
            if (used.insert(detail::triple_key(f)).second) pairs.push_back({f, f});
        }
    } else {
        if (config.objects_per_set > total_triples) throw GenerationError(too_small);
        const std::size_t wanted = config.objects_per_set / 2;
        const std::size_t budget = 1000 * wanted + 1000;
        for (std::size_t attempt = 0; pairs.size() < wanted; ++attempt) {
            if (attempt >= budget) throw GenerationError(too_small);
            const Factors a = random_triple();
            Factors b;
            if (!detail::partner_triple(a, cond, cat, s, b)) throw GenerationError(too_small);
            const auto ka = detail::triple_key(a), kb = detail::triple_key(b);
            if (used.contains(ka) || used.contains(kb)) continue;
            used.insert(ka);
            used.insert(kb);
            if (s.coin()) pairs.push_back({a, b});
            else pairs.push_back({b, a});
        }
    }

    Dataset d;
    for (const auto& [a, b] : pairs)
        for (const Factors* f : {&a, &b}) {
            const auto id = factorized_object_id(*f);
            if (!d.objects.contains(id)) d.objects.emplace(id, gen_factorized(*f, cat));
        }

    const Label label = cond.all_same() ? Label::same : Label::different;
    const std::string name = cond.name();
    detail::PlacementLedger ledger;
    for (std::size_t k = 0; k < config.stimuli_per_set; ++k) {
        const auto& [fa, fb] = pairs[k % pairs.size()];
        const PairSpec ps{factorized_object_id(fa), factorized_object_id(fb), label};
        SeedStream place(config.root_seed, stream_index(StreamDomain::dissociation, ci, k + 1));
        const auto [pa, pb] = ledger.draw(ps, config.placement_mode, place);
        StimulusRecord r;
        r.stimulus_id = numbered_id(name, k);
        r.label = label;
        r.object_a = ps.object_a;
        r.object_b = ps.object_b;
        r.pos_a = pa;
        r.pos_b = pb;
        r.split = Split::test;
        r.variant = Variant{VariantKind::dissociation, cond};
        r.image_path = "images/test/" + r.stimulus_id + ".png";
        d.manifest.records.push_back(std::move(r));
    }

    d.manifest.dataset_id = config.dataset_prefix + "-" + name;
    d.manifest.root_seed = config.root_seed;
    d.manifest.config = config;
    d.manifest.config["condition"] = name;
    std::vector<std::string> ids;
    for (const auto& [id, _] : d.objects) ids.push_back(id);
    d.manifest.object_splits = {{Split::train, {}}, {Split::val, {}}, {Split::test, ids}};
    compute_checksums(d, jobs);
    return d;
}

/// All eight condition sets in the canonical order
/// none, S, T, TS, C, CS, CT, CTS.
inline std::vector<Dataset> build_dissociation_sets(const DissociationConfig& config, unsigned jobs = 0) {
    std::vector<Dataset> out;
    for (const auto& cond : DissociationCondition::all()) out.push_back(build_dissociation_set(config, cond, jobs));
    return out;
}

} // namespace relkit
