#pragma once

// Data-diversity sweep: the training split is rebuilt with u unique objects
// and s stimuli while validation and test stay as in the base config.

#include <string>
#include <vector>

#include "relkit/composer/config.hpp"
#include "relkit/composer/dataset.hpp"
#include "relkit/error.hpp"

namespace relkit {

struct SweepCell {
    std::size_t unique_objects = 0;
    std::size_t stimuli = 0;
    GenerationConfig config;

    std::string name() const { return "u" + std::to_string(unique_objects) + "_s" + std::to_string(stimuli); }
};

/// Config for one cell. The object pool grows by the train delta so the
/// validation and test object counts are unchanged.
inline GenerationConfig sweep_cell_config(const GenerationConfig& base, std::size_t unique_objects,
                                          std::size_t stimuli) {
    if (unique_objects < 2) throw ConfigError("sweep: a training split needs at least 2 unique objects");
    if (stimuli == 0 || stimuli % 2 != 0) throw ConfigError("sweep: stimulus counts must be positive and even");
    GenerationConfig c = base;
    const std::size_t others = base.split_sizes[1] + base.split_sizes[2];
    c.split_sizes[0] = unique_objects;
    c.stimuli_per_split[0] = stimuli;
    c.object_count = unique_objects + others;
    c.dataset_id = base.dataset_id + "-u" + std::to_string(unique_objects) + "-s" + std::to_string(stimuli);
    c.validate();
    return c;
}

inline std::vector<SweepCell> sweep_cells(const GenerationConfig& base, const std::vector<std::size_t>& unique_counts,
                                          const std::vector<std::size_t>& stimulus_counts) {
    if (unique_counts.empty() || stimulus_counts.empty()) throw ConfigError("sweep: empty grid");
    std::vector<SweepCell> out;
    for (auto u : unique_counts)
        for (auto s : stimulus_counts) out.push_back({u, s, sweep_cell_config(base, u, s)});
    return out;
}

/// Every cell's dataset, in row-major (unique, stimuli) order.
inline std::vector<Dataset> build_sweep(const GenerationConfig& base, const std::vector<std::size_t>& unique_counts,
                                        const std::vector<std::size_t>& stimulus_counts, unsigned jobs = 0) {
    std::vector<Dataset> out;
    for (const auto& cell : sweep_cells(base, unique_counts, stimulus_counts))
        out.push_back(build_dataset(cell.config, jobs));
    return out;
}

} // namespace relkit
