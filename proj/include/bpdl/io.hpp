#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bpdl/errors.hpp"

namespace bpdl {

/** Shortest decimal string that round-trips a double (17 significant digits). */
inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_int(long long x) { return std::to_string(x); }

struct table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != columns.size())
            throw validation_error("BadRow", "row width " + std::to_string(row.size()) +
                                                 " != " + std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }
};

inline std::string to_csv(const table& t) {
    std::ostringstream os;
    for (std::size_t j = 0; j < t.columns.size(); ++j)
        os << (j ? "," : "") << t.columns[j];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
        os << '\n';
    }
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw validation_error("IoError", "cannot open " + path + " for writing");
    os << text;
    if (!os) throw validation_error("IoError", "short write to " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw validation_error("IoError", "cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline void write_csv(const std::string& path, const table& t) {
    write_text_file(path, to_csv(t));
}

inline table parse_csv(const std::string& text) {
    table t;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (first) {
            t.columns = std::move(cells);
            first = false;
        } else {
            t.add(std::move(cells));
        }
    }
    return t;
}

inline table read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

/** FNV-1a, 64 bit. Stable across platforms; used to fingerprint configs and
 *  outputs in the run manifest. */
inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

struct manifest_entry {
    std::string file;
    std::string hash;
};

struct run_manifest {
    std::string command;
    std::string config_hash;
    bool has_rng = false;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<manifest_entry> outputs;
};

namespace detail {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

} // namespace detail

/** Flat, key-ordered JSON so reruns of a deterministic command produce
 *  byte-identical manifests. */
inline std::string to_json(const run_manifest& m) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"command\": \"" << detail::json_escape(m.command) << "\",\n";
    os << "  \"config_fnv1a64\": \"" << detail::json_escape(m.config_hash) << "\",\n";
    os << "  \"outputs\": [";
    for (std::size_t k = 0; k < m.outputs.size(); ++k) {
        os << (k ? "," : "") << "\n    {\"file\": \"" << detail::json_escape(m.outputs[k].file)
           << "\", \"fnv1a64\": \"" << detail::json_escape(m.outputs[k].hash) << "\"}";
    }
    os << (m.outputs.empty() ? "" : "\n  ") << "],\n";
    if (m.has_rng) {
        os << "  \"seed\": " << m.seed << ",\n";
        os << "  \"stream\": " << m.stream << ",\n";
    }
    os << "  \"schema\": 1\n";
    os << "}\n";
    return os.str();
}

inline void write_manifest(const std::string& dir, const run_manifest& m) {
    write_text_file(dir + "/manifest.json", to_json(m));
}

} // namespace bpdl
