#pragma once

// Persistent data model shared by the generator, validator and evaluators.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "relkit/error.hpp"
#include "relkit/image.hpp"

namespace relkit {

inline constexpr int kObjectSize = 64;
inline constexpr int kCanvasSize = 224;
inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Objects

enum class ObjectSource { squiggle, factorized, noise, imported };

inline std::string_view to_string(ObjectSource s) {
    switch (s) {
    case ObjectSource::squiggle: return "squiggle";
    case ObjectSource::factorized: return "factorized";
    case ObjectSource::noise: return "noise";
    case ObjectSource::imported: return "imported";
    }
    return "?";
}

inline ObjectSource parse_object_source(std::string_view s) {
    if (s == "squiggle") return ObjectSource::squiggle;
    if (s == "factorized") return ObjectSource::factorized;
    if (s == "noise") return ObjectSource::noise;
    if (s == "imported") return ObjectSource::imported;
    throw ParseError("unknown object source '" + std::string(s) + "'");
}

struct Factors {
    std::string shape_id;
    std::string texture_id;
    std::string color_id;

    friend bool operator==(const Factors&, const Factors&) = default;
};

/// One 64x64 object raster. `factors` is set exactly when source is factorized.
struct ObjectImage {
    std::string object_id;
    Image pixels;
    ObjectSource source = ObjectSource::imported;
    std::optional<Factors> factors;

    friend bool operator==(const ObjectImage&, const ObjectImage&) = default;
};

inline void check_object(const ObjectImage& obj) {
    if (obj.pixels.width() != kObjectSize || obj.pixels.height() != kObjectSize)
        throw InputError("object '" + obj.object_id + "' is not 64x64");
    if (obj.factors.has_value() != (obj.source == ObjectSource::factorized))
        throw InputError("object '" + obj.object_id + "': factors present iff source is factorized");
}

// ---------------------------------------------------------------------------
// Stimuli

enum class Label { same, different, none };

inline std::string_view to_string(Label l) {
    switch (l) {
    case Label::same: return "same";
    case Label::different: return "different";
    case Label::none: return "none";
    }
    return "?";
}

inline Label parse_label(std::string_view s) {
    if (s == "same") return Label::same;
    if (s == "different") return Label::different;
    if (s == "none") return Label::none;
    throw ParseError("unknown label '" + std::string(s) + "'");
}

enum class Split { train, val, test };

inline constexpr std::array<Split, 3> kAllSplits{Split::train, Split::val, Split::test};

inline std::string_view to_string(Split s) {
    switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    }
    return "?";
}

inline Split parse_split(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw ParseError("unknown split '" + std::string(s) + "'");
}

/// Which factors are equal between the two objects of a dissociation stimulus.
struct DissociationCondition {
    bool color_same = false;
    bool texture_same = false;
    bool shape_same = false;

    /// none, S, T, TS, C, CS, CT, CTS
    std::string name() const {
        std::string out;
        if (color_same) out += 'C';
        if (texture_same) out += 'T';
        if (shape_same) out += 'S';
        return out.empty() ? "none" : out;
    }

    bool all_same() const noexcept { return color_same && texture_same && shape_same; }

    static DissociationCondition parse(std::string_view s) {
        DissociationCondition c;
        if (s == "none") return c;
        if (s.empty()) throw ParseError("empty dissociation condition");
        std::string seen;
        for (char ch : s) {
            if (seen.find(ch) != std::string::npos) throw ParseError("bad condition '" + std::string(s) + "'");
            seen += ch;
            switch (ch) {
            case 'C': c.color_same = true; break;
            case 'T': c.texture_same = true; break;
            case 'S': c.shape_same = true; break;
            default: throw ParseError("bad condition '" + std::string(s) + "'");
            }
        }
        if (c.name() != s) throw ParseError("non-canonical condition '" + std::string(s) + "'");
        return c;
    }

    /// The eight conditions in the column order of the dissociation report.
    static std::array<DissociationCondition, 8> all() {
        return {{{false, false, false},
                 {false, false, true},
                 {false, true, false},
                 {false, true, true},
                 {true, false, false},
                 {true, false, true},
                 {true, true, false},
                 {true, true, true}}};
    }

    friend bool operator==(const DissociationCondition&, const DissociationCondition&) = default;
};

enum class VariantKind { base, grayscale, masked, flipped, aligned, dissociation, single_object };

struct Variant {
    VariantKind kind = VariantKind::base;
    DissociationCondition condition{}; ///< meaningful only for dissociation

    std::string name() const {
        switch (kind) {
        case VariantKind::base: return "base";
        case VariantKind::grayscale: return "grayscale";
        case VariantKind::masked: return "masked";
        case VariantKind::flipped: return "flipped";
        case VariantKind::aligned: return "aligned";
        case VariantKind::dissociation: return "dissociation:" + condition.name();
        case VariantKind::single_object: return "single_object";
        }
        return "?";
    }

    static Variant parse(std::string_view s) {
        if (s == "base") return {VariantKind::base, {}};
        if (s == "grayscale") return {VariantKind::grayscale, {}};
        if (s == "masked") return {VariantKind::masked, {}};
        if (s == "flipped") return {VariantKind::flipped, {}};
        if (s == "aligned") return {VariantKind::aligned, {}};
        if (s == "single_object") return {VariantKind::single_object, {}};
        constexpr std::string_view prefix = "dissociation:";
        if (s.starts_with(prefix))
            return {VariantKind::dissociation, DissociationCondition::parse(s.substr(prefix.size()))};
        throw ParseError("unknown variant '" + std::string(s) + "'");
    }

    friend bool operator==(const Variant& a, const Variant& b) {
        return a.kind == b.kind && (a.kind != VariantKind::dissociation || a.condition == b.condition);
    }
};

/// Metadata of one composed 224x224 stimulus.
struct StimulusRecord {
    std::string stimulus_id;
    Label label = Label::same;
    std::string object_a;
    std::string object_b; ///< empty for single-object stimuli
    Point pos_a;
    std::optional<Point> pos_b;
    Split split = Split::train;
    Variant variant;
    std::string image_path;
    std::uint64_t checksum = 0;

    friend bool operator==(const StimulusRecord&, const StimulusRecord&) = default;
};

using ObjectSplits = std::map<Split, std::vector<std::string>>;

/// Reproducible description of a generated dataset.
struct DatasetManifest {
    int format_version = kFormatVersion;
    std::string dataset_id;
    std::uint64_t root_seed = 0;
    nlohmann::json config = nlohmann::json::object();
    ObjectSplits object_splits;
    std::vector<StimulusRecord> records;

    std::map<std::string, std::uint64_t> image_checksums() const {
        std::map<std::string, std::uint64_t> out;
        for (const auto& r : records) out.emplace(r.image_path, r.checksum);
        return out;
    }

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// ---------------------------------------------------------------------------
// Predictions

enum class DecisionRule {
    threshold, ///< predicted same iff score_same >= threshold
    argmax,    ///< predicted same iff logit_same >= logit_diff
};

struct PredictionRecord {
    std::string stimulus_id;
    double score_same = 0.0;
    std::optional<double> logit_same;
    std::optional<double> logit_diff;
    Label predicted = Label::different;
    std::string model_id;
    std::int64_t seed_id = 0;

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct PredictionFile {
    double threshold = 0.5;
    DecisionRule rule = DecisionRule::threshold;
    std::vector<PredictionRecord> rows;

    Label decide(const PredictionRecord& r) const {
        if (rule == DecisionRule::argmax) {
            if (!r.logit_same || !r.logit_diff)
                throw InputError("argmax decision needs both logits for '" + r.stimulus_id + "'");
            return *r.logit_same >= *r.logit_diff ? Label::same : Label::different;
        }
        return r.score_same >= threshold ? Label::same : Label::different;
    }

    friend bool operator==(const PredictionFile&, const PredictionFile&) = default;
};

// ---------------------------------------------------------------------------
// Embeddings

/// Row-major table of f32 vectors keyed by id.
struct EmbeddingMatrix {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    std::vector<float> values;

    std::size_t rows() const noexcept { return ids.size(); }
    std::span<const float> row(std::size_t i) const noexcept {
        return std::span<const float>(values).subspan(i * dim, dim);
    }

    void check() const {
        if (dim == 0) throw InputError("embedding dim must be positive");
        if (values.size() != ids.size() * dim) throw InputError("embedding row count does not match ids");
        for (float v : values)
            if (!std::isfinite(v)) throw InputError("embedding contains non-finite entries");
    }

    friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;
};

} // namespace relkit
