#pragma once

// Dataset assembly: objects, splits, pairs, placements, variants, and the
// on-disk layout
//
//   <dir>/manifest.jsonl            full manifest
//   <dir>/manifests/<split>.jsonl   one manifest per non-empty split
//   <dir>/images/<split>/<id>.png   composed stimuli
//   <dir>/objects/<id>.png          object rasters
//   <dir>/objects/objects.json      object index {object_id, source, factors, path}

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "relkit/composer/config.hpp"
#include "relkit/composer/pairs.hpp"
#include "relkit/composer/placement.hpp"
#include "relkit/error.hpp"
#include "relkit/manifest_io.hpp"
#include "relkit/objectgen/factorized.hpp"
#include "relkit/objectgen/import.hpp"
#include "relkit/objectgen/noise.hpp"
#include "relkit/objectgen/squiggle.hpp"
#include "relkit/objectgen/transforms.hpp"
#include "relkit/parallel.hpp"
#include "relkit/png_io.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

inline constexpr std::string_view kMirrorSuffix = "@mirror";

/// A manifest plus the object rasters its records refer to.
struct Dataset {
    DatasetManifest manifest;
    std::map<std::string, ObjectImage> objects;

    const ObjectImage& object(const std::string& id) const {
        const auto it = objects.find(id);
        if (it == objects.end()) throw InputError("dataset has no object '" + id + "'");
        return it->second;
    }

    Image render(const StimulusRecord& r) const {
        if (!r.pos_b) return compose_single(object(r.object_a).pixels, r.pos_a);
        return compose_stimulus(object(r.object_a).pixels, object(r.object_b).pixels, r.pos_a, *r.pos_b);
    }
};

inline std::string numbered_id(std::string_view prefix, std::size_t k, int width = 6) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, k);
    return std::string(prefix) + "-" + buf;
}

// ---------------------------------------------------------------------------
// Objects and splits

/// Objects [first, first + count) of the config's source. Object i always
/// comes from stream (object, 0, i), so a prefix of a larger pool equals the
/// smaller pool.
inline std::vector<ObjectImage> build_objects(const GenerationConfig& c, unsigned jobs = 0, std::size_t first = 0,
                                              std::size_t count = static_cast<std::size_t>(-1)) {
    if (count == static_cast<std::size_t>(-1)) count = c.object_count;
    std::vector<ObjectImage> out(count);
    switch (c.source) {
    case ObjectSource::squiggle:
        parallel_for(count, jobs, [&](std::size_t i) {
            SeedStream s(c.root_seed, stream_index(StreamDomain::object, 0, first + i));
            out[i] = gen_squiggle(c.squiggle, s, numbered_id("squ", first + i, 5));
        });
        break;
    case ObjectSource::noise:
        parallel_for(count, jobs, [&](std::size_t i) {
            SeedStream s(c.root_seed, stream_index(StreamDomain::object, 0, first + i));
            out[i] = gen_noise(c.noise, s, numbered_id("noise", first + i, 5));
        });
        break;
    case ObjectSource::factorized: {
        const FactorCatalog cat = default_catalog().truncated(c.catalog.shapes, c.catalog.textures, c.catalog.colors);
        std::vector<Factors> triples;
        for (const auto& s : cat.shapes)
            for (const auto& t : cat.textures)
                for (const auto& col : cat.colors) triples.push_back({s.id, t.id, col.id});
        if (first + count > triples.size()) throw GenerationError("not enough distinct factor triples");
        SeedStream s(c.root_seed, stream_index(StreamDomain::object, 1, 0));
        s.shuffle(triples);
        parallel_for(count, jobs, [&](std::size_t i) { out[i] = gen_factorized(triples[first + i], cat); });
        break;
    }
    case ObjectSource::imported: {
        auto all = import_objects(c.import_dir);
        if (first >= all.size()) throw GenerationError("import directory has too few objects");
        all.erase(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(first));
        if (all.size() > count) all.resize(count);
        out = std::move(all);
        break;
    }
    }
    return out;
}

/// Uniform random disjoint assignment of object ids to train/val/test.
inline ObjectSplits build_splits(const std::vector<std::string>& object_ids, SeedStream& stream,
                                 std::array<std::size_t, 3> sizes) {
    const std::size_t total = sizes[0] + sizes[1] + sizes[2];
    if (object_ids.size() < total)
        throw GenerationError("build_splits: " + std::to_string(object_ids.size()) + " objects for " +
                              std::to_string(total) + " split slots");
    std::vector<std::string> ids = object_ids;
    stream.shuffle(ids);
    ObjectSplits out;
    std::size_t pos = 0;
    for (Split s : kAllSplits) {
        const std::size_t n = sizes[static_cast<std::size_t>(s)];
        out[s] = std::vector<std::string>(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                                          ids.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Placement bookkeeping

namespace detail {

/// Draws placements for pairs that may repeat, so each (pair, placement)
/// combination is unique. For "same" pairs swapping the two boxes gives the
/// same image, so the placement is stored unordered.
class PlacementLedger {
public:
    std::pair<Point, Point> draw(const PairSpec& pair, PlacementMode mode, SeedStream& stream) {
        for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
            auto [a, b] = place_pair(mode, stream);
            Point lo = a, hi = b;
            if (pair.label == Label::same && hi < lo) std::swap(lo, hi);
            if (used_.insert({pair.object_a, pair.object_b, lo, hi}).second) return {a, b};
        }
        throw GenerationError("placement: pair " + pair.object_a + "/" + pair.object_b +
                              " has no unused placement left");
    }

private:
    std::set<std::tuple<std::string, std::string, Point, Point>> used_;
};

inline PairCompatibility compatibility_for(const std::vector<std::string>& ids,
                                           const std::map<std::string, ObjectImage>& objects) {
    // Factorized "different" pairs differ in shape, texture and color.
    std::vector<const Factors*> f;
    for (const auto& id : ids) {
        const auto& obj = objects.at(id);
        if (!obj.factors) return {};
        f.push_back(&*obj.factors);
    }
    return [f](std::size_t a, std::size_t b) {
        return f[a]->shape_id != f[b]->shape_id && f[a]->texture_id != f[b]->texture_id &&
               f[a]->color_id != f[b]->color_id;
    };
}

} // namespace detail

inline void compute_checksums(Dataset& d, unsigned jobs = 0) {
    auto& recs = d.manifest.records;
    parallel_for(recs.size(), jobs, [&](std::size_t i) { recs[i].checksum = pixel_checksum(d.render(recs[i])); });
}

// ---------------------------------------------------------------------------
// Variants

namespace detail {

inline std::string mirror_id(const std::string& id) { return id + std::string(kMirrorSuffix); }

inline Dataset flip_dataset(const Dataset& base) {
    Dataset out = base;
    std::set<std::string> in_splits;
    for (const auto& [_, ids] : base.manifest.object_splits) in_splits.insert(ids.begin(), ids.end());
    std::map<std::string, bool> symmetric;
    std::size_t n_sym = 0;
    for (const auto& id : in_splits) {
        const bool s = is_mirror_symmetric(base.object(id).pixels);
        symmetric[id] = s;
        n_sym += s ? 1 : 0;
    }
    if (!in_splits.empty() && 2 * n_sym > in_splits.size())
        throw GenerationError("flipped variant: more than half of the objects are mirror-symmetric");

    std::map<Split, std::vector<std::string>> asymmetric;
    for (const auto& [split, ids] : base.manifest.object_splits)
        for (const auto& id : ids)
            if (!symmetric[id]) asymmetric[split].push_back(id);

    std::size_t k = 0;
    for (auto& r : out.manifest.records) {
        r.variant = Variant{VariantKind::flipped, {}};
        ++k;
        if (r.label != Label::different) continue;
        std::string source;
        if (!symmetric[r.object_a]) source = r.object_a;
        else if (!symmetric[r.object_b]) source = r.object_b;
        else {
            const auto& pool = asymmetric[r.split];
            if (pool.empty()) throw GenerationError("flipped variant: split has no asymmetric object");
            SeedStream s(base.manifest.root_seed,
                         stream_index(StreamDomain::flip, static_cast<std::uint64_t>(r.split), k));
            source = pool[s.index(pool.size())];
        }
        const std::string mid = mirror_id(source);
        if (!out.objects.contains(mid)) {
            ObjectImage m = mirror(base.object(source));
            m.object_id = mid;
            out.objects.emplace(mid, std::move(m));
        }
        r.object_a = source;
        r.object_b = mid;
    }
    return out;
}

} // namespace detail

/// Derives a grayscale, masked or flipped dataset from a base dataset.
/// Records keep their ids and positions; checksums are recomputed.
inline Dataset build_variant(const Dataset& base, VariantKind kind, unsigned jobs = 0) {
    Dataset out;
    switch (kind) {
    case VariantKind::grayscale:
    case VariantKind::masked:
        out.manifest = base.manifest;
        for (const auto& [id, obj] : base.objects)
            out.objects.emplace(id, kind == VariantKind::grayscale ? to_grayscale(obj) : to_masked(obj));
        for (auto& r : out.manifest.records) r.variant = Variant{kind, {}};
        break;
    case VariantKind::flipped: out = detail::flip_dataset(base); break;
    default: throw ConfigError("build_variant supports grayscale, masked and flipped");
    }
    out.manifest.config["variant"] = variant_name(kind);
    compute_checksums(out, jobs);
    return out;
}

// ---------------------------------------------------------------------------
// Standard datasets

inline Dataset assemble_dataset(const GenerationConfig& config, std::vector<ObjectImage> objects, unsigned jobs = 0) {
    config.validate();
    Dataset d;
    std::vector<std::string> ids;
    for (auto& o : objects) {
        check_object(o);
        ids.push_back(o.object_id);
        if (!d.objects.emplace(o.object_id, std::move(o)).second)
            throw GenerationError("duplicate object id '" + ids.back() + "'");
    }

    SeedStream split_stream(config.root_seed, stream_index(StreamDomain::split, 0, 0));
    ObjectSplits splits = build_splits(ids, split_stream, config.split_sizes);

    const Variant record_variant{config.placement_mode == PlacementMode::aligned ? VariantKind::aligned
                                                                                 : VariantKind::base,
                                 {}};
    std::vector<StimulusRecord> records;
    for (Split split : kAllSplits) {
        const auto sidx = static_cast<std::uint64_t>(split);
        const std::size_t quota = config.stimuli(split);
        if (quota == 0) continue;
        const auto& split_ids = splits[split];
        PairOptions options;
        options.placements_per_pair = config.placements_per_pair;
        options.compatible = detail::compatibility_for(split_ids, d.objects);
        auto pairs = select_pairs(split_ids, quota / 2, quota / 2,
                                  SeedStream(config.root_seed, stream_index(StreamDomain::pairs, sidx, 0)), options);
        SeedStream order(config.root_seed, stream_index(StreamDomain::order, sidx, 0));
        order.shuffle(pairs);

        detail::PlacementLedger ledger;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            SeedStream ps(config.root_seed, stream_index(StreamDomain::placement, sidx, k));
            const auto [pa, pb] = ledger.draw(pairs[k], config.placement_mode, ps);
            StimulusRecord r;
            r.stimulus_id = numbered_id(to_string(split), k);
            r.label = pairs[k].label;
            r.object_a = pairs[k].object_a;
            r.object_b = pairs[k].object_b;
            r.pos_a = pa;
            r.pos_b = pb;
            r.split = split;
            r.variant = record_variant;
            r.image_path = "images/" + std::string(to_string(split)) + "/" + r.stimulus_id + ".png";
            records.push_back(std::move(r));
        }
    }

    // Only objects that made it into a split are part of the dataset.
    std::set<std::string> kept;
    for (const auto& [_, v] : splits) kept.insert(v.begin(), v.end());
    std::erase_if(d.objects, [&](const auto& kv) { return !kept.contains(kv.first); });

    d.manifest.dataset_id = config.dataset_id;
    d.manifest.root_seed = config.root_seed;
    d.manifest.config = config;
    d.manifest.object_splits = std::move(splits);
    d.manifest.records = std::move(records);

    if (config.variant != VariantKind::base) return build_variant(d, config.variant, jobs);
    compute_checksums(d, jobs);
    return d;
}

/// Full dataset for a config: object pool, splits, balanced pairs, placements
/// and (optionally) the configured variant.
inline Dataset build_dataset(const GenerationConfig& config, unsigned jobs = 0) {
    config.validate();
    return assemble_dataset(config, build_objects(config, jobs), jobs);
}

// ---------------------------------------------------------------------------
// Disk layout

inline DatasetManifest split_manifest(const DatasetManifest& m, Split split) {
    DatasetManifest out;
    out.format_version = m.format_version;
    out.dataset_id = m.dataset_id + "-" + std::string(to_string(split));
    out.root_seed = m.root_seed;
    out.config = m.config;
    if (const auto it = m.object_splits.find(split); it != m.object_splits.end()) out.object_splits[split] = it->second;
    for (const auto& r : m.records)
        if (r.split == split) out.records.push_back(r);
    return out;
}

inline nlohmann::json object_index_entry(const ObjectImage& o) {
    nlohmann::json j;
    j["object_id"] = o.object_id;
    j["source"] = to_string(o.source);
    if (o.factors)
        j["factors"] = {{"shape_id", o.factors->shape_id},
                        {"texture_id", o.factors->texture_id},
                        {"color_id", o.factors->color_id}};
    else
        j["factors"] = nullptr;
    j["path"] = o.object_id + ".png";
    return j;
}

/// Reads objects/objects.json plus the object PNGs it names.
inline std::map<std::string, ObjectImage> read_object_set(const std::filesystem::path& dir) {
    std::ifstream in(dir / "objects.json");
    if (!in) throw IoError("cannot open " + (dir / "objects.json").string());
    nlohmann::json index;
    try {
        in >> index;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad object index: ") + e.what());
    }
    std::map<std::string, ObjectImage> out;
    for (const auto& e : index) {
        ObjectImage o;
        o.object_id = e.at("object_id").get<std::string>();
        o.source = parse_object_source(e.at("source").get<std::string>());
        if (!e.at("factors").is_null())
            o.factors = Factors{e["factors"].at("shape_id").get<std::string>(),
                                e["factors"].at("texture_id").get<std::string>(),
                                e["factors"].at("color_id").get<std::string>()};
        o.pixels = read_png(dir / e.at("path").get<std::string>());
        out.emplace(o.object_id, std::move(o));
    }
    return out;
}

inline void write_object_set(const std::map<std::string, ObjectImage>& objects, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    nlohmann::json index = nlohmann::json::array();
    for (const auto& [id, o] : objects) {
        write_png(dir / (id + ".png"), o.pixels);
        index.push_back(object_index_entry(o));
    }
    std::ofstream out(dir / "objects.json", std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / "objects.json").string());
    out << index.dump(1) << '\n';
}

inline void write_dataset(const Dataset& d, const std::filesystem::path& dir, unsigned jobs = 0) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::set<fs::path> parents;
    for (const auto& r : d.manifest.records) parents.insert((dir / r.image_path).parent_path());
    for (const auto& p : parents) {
        fs::create_directories(p, ec);
        if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
    }
    const auto& recs = d.manifest.records;
    parallel_for(recs.size(), jobs, [&](std::size_t i) {
        const Image img = d.render(recs[i]);
        if (pixel_checksum(img) != recs[i].checksum)
            throw GenerationError("checksum drift for " + recs[i].stimulus_id);
        write_png(dir / recs[i].image_path, img);
    });

    write_object_set(d.objects, dir / "objects");
    write_manifest(dir / "manifest.jsonl", d.manifest);
    fs::create_directories(dir / "manifests", ec);
    for (const auto& [split, ids] : d.manifest.object_splits) {
        if (ids.empty()) continue;
        write_manifest(dir / "manifests" / (std::string(to_string(split)) + ".jsonl"), split_manifest(d.manifest, split));
    }
}

} // namespace relkit
