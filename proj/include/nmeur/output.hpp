// output.hpp: CSV / JSON rendering and write-then-rename emission.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "nmeur/config.hpp"
#include "nmeur/errors.hpp"
#include "nmeur/tasks.hpp"

namespace nmeur {

namespace fs = std::filesystem;

inline std::string render_csv(const Table& t, const RunConfig& c) {
    std::string out;
    out += "# tool: nmeur " + std::string(kToolVersion) + "\n";
    out += "# config_hash: fnv1a64:" + config_hash(c) + "\n";
    out += "# task: " + to_string(c.task) + "\n";
    for (const auto& m : t.meta) out += "# " + m + "\n";
    for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + t.columns[j];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += format_number(row[j]);
        }
        out += '\n';
    }
    return out;
}

// Rows as an array of {column: value} objects.
inline std::string render_json(const Table& t) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t j = 0; j < row.size() && j < t.columns.size(); ++j) obj[t.columns[j]] = row[j];
        rows.push_back(std::move(obj));
    }
    return rows.dump() + "\n";
}

struct OutputFile {
    fs::path path;
    std::string content;
};

// Single-table tasks write to `output` (a file, or a directory to hold
// <name>.csv); figures write <name>.csv into the `output` directory.
inline std::vector<OutputFile> plan_outputs(const std::vector<Table>& tables, const RunConfig& c) {
    std::vector<OutputFile> files;
    const bool directory = c.task == Task::figure || c.output.empty() || fs::is_directory(c.output);
    const fs::path base = c.output.empty() ? fs::path(".") : fs::path(c.output);
    for (const auto& t : tables) {
        fs::path csv = directory ? base / (t.name + ".csv") : base;
        files.push_back({csv, render_csv(t, c)});
        if (c.json_mirror) files.push_back({fs::path(csv).replace_extension(".json"), render_json(t)});
    }
    return files;
}

// All files are written to temporaries first and renamed only once every
// write succeeded, so a failure leaves no partial output behind.
inline void write_outputs(const std::vector<OutputFile>& files) {
    std::vector<fs::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& f : files) {
        std::error_code ec;
        if (f.path.has_parent_path()) fs::create_directories(f.path.parent_path(), ec);
        if (ec) {
            cleanup();
            throw IoError("cannot create directory " + f.path.parent_path().string() + ": " + ec.message());
        }
        fs::path tmp = f.path;
        tmp += ".tmp-" + std::to_string(::getpid());
        temps.push_back(tmp);
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        os.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
        os.close();
        if (!os) {
            cleanup();
            throw IoError("cannot write " + f.path.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::error_code ec;
        fs::rename(temps[i], files[i].path, ec);
        if (ec) {
            cleanup();
            throw IoError("cannot rename to " + files[i].path.string() + ": " + ec.message());
        }
    }
}

} // namespace nmeur
