#pragma once

// Embedding file:
//   ASCII JSON header line {"count":N,"dim":D,"dtype":"f32le"} + '\n'
//   then N rows, each: u32 little-endian byte length, UTF-8 id bytes,
//   D little-endian IEEE-754 binary32 values.
//
// Label sidecar for probe training: CSV "id,label" with label same|different.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "relkit/error.hpp"
#include "relkit/prediction_io.hpp"
#include "relkit/types.hpp"

namespace relkit {

namespace detail {

inline void put_u32le(std::ostream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
}

inline std::uint32_t get_u32le(const unsigned char* b) {
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void read_exact(std::istream& in, void* dst, std::size_t n, const char* what) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw ParseError(std::string("truncated embedding file: ") + what);
}

} // namespace detail

inline void write_embeddings(std::ostream& out, const EmbeddingMatrix& m) {
    m.check();
    nlohmann::json header;
    header["count"] = m.rows();
    header["dim"] = m.dim;
    header["dtype"] = "f32le";
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        detail::put_u32le(out, static_cast<std::uint32_t>(m.ids[i].size()));
        out.write(m.ids[i].data(), static_cast<std::streamsize>(m.ids[i].size()));
        for (float v : m.row(i)) detail::put_u32le(out, std::bit_cast<std::uint32_t>(v));
    }
}

inline EmbeddingMatrix read_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("embedding file is empty");
    std::size_t count = 0;
    EmbeddingMatrix m;
    try {
        const auto header = nlohmann::json::parse(line);
        if (header.at("dtype").get<std::string>() != "f32le")
            throw ParseError("unsupported embedding dtype '" + header.at("dtype").get<std::string>() + "'");
        count = header.at("count").get<std::size_t>();
        m.dim = header.at("dim").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad embedding header: ") + e.what());
    }
    if (m.dim == 0) throw ParseError("embedding dim must be positive");
    m.ids.reserve(count);
    m.values.resize(count * m.dim);
    std::vector<unsigned char> buf(m.dim * 4);
    for (std::size_t i = 0; i < count; ++i) {
        unsigned char lenb[4];
        detail::read_exact(in, lenb, 4, "missing row");
        const std::uint32_t len = detail::get_u32le(lenb);
        std::string id(len, '\0');
        detail::read_exact(in, id.data(), len, "id bytes");
        detail::read_exact(in, buf.data(), buf.size(), "row values");
        for (std::size_t k = 0; k < m.dim; ++k)
            m.values[i * m.dim + k] = std::bit_cast<float>(detail::get_u32le(&buf[k * 4]));
        m.ids.push_back(std::move(id));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after declared embedding rows");
    m.check();
    return m;
}

inline void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_embeddings(out, m);
    if (!out) throw IoError("short write to " + path.string());
}

inline EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_embeddings(in);
}

inline std::map<std::string, Label> read_labels(std::istream& in) {
    std::map<std::string, Label> out;
    std::string raw;
    bool header = false;
    while (std::getline(in, raw)) {
        const auto line = detail::strip_cr(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "id,label") throw ParseError("label file must start with 'id,label'");
            header = true;
            continue;
        }
        const auto fields = detail::split_csv(line);
        if (fields.size() != 2) throw ParseError("label line needs 2 fields: " + std::string(line));
        const Label l = parse_label(fields[1]);
        if (l == Label::none) throw ParseError("label must be same or different");
        if (!out.emplace(std::string(fields[0]), l).second)
            throw ParseError("duplicate id in label file: " + std::string(fields[0]));
    }
    return out;
}

inline std::map<std::string, Label> read_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_labels(in);
}

inline void write_labels(std::ostream& out, const std::map<std::string, Label>& labels) {
    out << "id,label\n";
    for (const auto& [id, l] : labels) out << id << ',' << to_string(l) << '\n';
}

} // namespace relkit
