#pragma once

// Manifest file: JSON Lines. Line 1 is a header object
//   {format_version, dataset_id, root_seed, config, object_splits}
// and every following line is one StimulusRecord.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "relkit/error.hpp"
#include "relkit/types.hpp"

namespace relkit {

inline std::string checksum_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::uint64_t parse_checksum_hex(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.size() != 16)
        throw ParseError("bad checksum '" + std::string(s) + "'");
    return v;
}

namespace detail {

inline nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

inline Point json_point(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError("position must be [x, y]");
    return {j[0].get<int>(), j[1].get<int>()};
}

} // namespace detail

inline nlohmann::json record_to_json(const StimulusRecord& r) {
    nlohmann::json j;
    j["stimulus_id"] = r.stimulus_id;
    j["label"] = to_string(r.label);
    j["object_a"] = r.object_a;
    j["object_b"] = r.object_b.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.object_b);
    j["pos_a"] = detail::point_json(r.pos_a);
    j["pos_b"] = r.pos_b ? detail::point_json(*r.pos_b) : nlohmann::json(nullptr);
    j["split"] = to_string(r.split);
    j["variant"] = r.variant.name();
    j["image_path"] = r.image_path;
    j["checksum"] = checksum_hex(r.checksum);
    return j;
}

inline StimulusRecord record_from_json(const nlohmann::json& j) {
    try {
        StimulusRecord r;
        r.stimulus_id = j.at("stimulus_id").get<std::string>();
        r.label = parse_label(j.at("label").get<std::string>());
        r.object_a = j.at("object_a").get<std::string>();
        if (!j.at("object_b").is_null()) r.object_b = j.at("object_b").get<std::string>();
        r.pos_a = detail::json_point(j.at("pos_a"));
        if (!j.at("pos_b").is_null()) r.pos_b = detail::json_point(j.at("pos_b"));
        r.split = parse_split(j.at("split").get<std::string>());
        r.variant = Variant::parse(j.at("variant").get<std::string>());
        r.image_path = j.at("image_path").get<std::string>();
        r.checksum = parse_checksum_hex(j.at("checksum").get<std::string>());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad stimulus record: ") + e.what());
    }
}

inline nlohmann::json splits_to_json(const ObjectSplits& splits) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [split, ids] : splits) j[std::string(to_string(split))] = ids;
    return j;
}

inline ObjectSplits splits_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("object_splits must be an object");
    ObjectSplits out;
    for (const auto& [key, ids] : j.items()) out[parse_split(key)] = ids.get<std::vector<std::string>>();
    return out;
}

inline void write_manifest(std::ostream& out, const DatasetManifest& m) {
    nlohmann::json header;
    header["format_version"] = m.format_version;
    header["dataset_id"] = m.dataset_id;
    header["root_seed"] = m.root_seed;
    header["config"] = m.config;
    header["object_splits"] = splits_to_json(m.object_splits);
    out << header.dump() << '\n';
    for (const auto& r : m.records) out << record_to_json(r).dump() << '\n';
}

inline DatasetManifest read_manifest(std::istream& in) {
    DatasetManifest m;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("manifest is empty");
    try {
        const auto header = nlohmann::json::parse(line);
        m.format_version = header.at("format_version").get<int>();
        if (m.format_version != kFormatVersion)
            throw ParseError("manifest format version mismatch: got " + std::to_string(m.format_version) +
                             ", expected " + std::to_string(kFormatVersion));
        m.dataset_id = header.at("dataset_id").get<std::string>();
        m.root_seed = header.at("root_seed").get<std::uint64_t>();
        m.config = header.at("config");
        m.object_splits = splits_from_json(header.at("object_splits"));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad manifest header: ") + e.what());
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            m.records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("manifest line " + std::to_string(lineno) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("manifest line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return m;
}

inline void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_manifest(out, m);
    if (!out) throw IoError("short write to " + path.string());
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_manifest(in);
}

} // namespace relkit
