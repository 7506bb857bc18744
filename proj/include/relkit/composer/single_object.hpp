#pragma once

// Single-object stimuli for the analysis of per-object embeddings.

#include <string>
#include <vector>

#include "relkit/composer/dataset.hpp"
#include "relkit/error.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

/// `n` objects drawn without replacement from `pool`, each shown alone at a
/// random in-bounds position.
inline Dataset build_single_object_set(const std::vector<ObjectImage>& pool, std::size_t n, std::uint64_t root_seed,
                                       const std::string& dataset_id = "single", unsigned jobs = 0) {
    if (n == 0) throw ConfigError("single-object set needs at least one object");
    if (n > pool.size())
        throw GenerationError("single-object set: " + std::to_string(n) + " requested from a pool of " +
                              std::to_string(pool.size()));
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SeedStream pick(root_seed, stream_index(StreamDomain::single_object, 0, 0));
    pick.shuffle(order);

    Dataset d;
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < n; ++k) {
        const ObjectImage& obj = pool[order[k]];
        check_object(obj);
        if (!d.objects.emplace(obj.object_id, obj).second)
            throw GenerationError("duplicate object id '" + obj.object_id + "'");
        ids.push_back(obj.object_id);

        SeedStream place(root_seed, stream_index(StreamDomain::single_object, 1, k));
        StimulusRecord r;
        r.stimulus_id = numbered_id("single", k);
        r.label = Label::none;
        r.object_a = obj.object_id;
        r.pos_a = place_single(place);
        r.split = Split::test;
        r.variant = Variant{VariantKind::single_object, {}};
        r.image_path = "images/test/" + r.stimulus_id + ".png";
        d.manifest.records.push_back(std::move(r));
    }
    d.manifest.dataset_id = dataset_id;
    d.manifest.root_seed = root_seed;
    d.manifest.config = {{"single_object_count", n}, {"pool_size", pool.size()}};
    d.manifest.object_splits = {{Split::train, {}}, {Split::val, {}}, {Split::test, ids}};
    compute_checksums(d, jobs);
    return d;
}

} // namespace relkit
