#pragma once

// Eye-tracking dataset ingestion and run configuration. Fixations come
// from a CSV with columns stimulus_id, subject_id, fixation_index, x_px,
// y_px (header required, extra columns ignored). The config file is a
// flat key=value list with dotted keys; '#' starts a comment.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "neva/image.hpp"
#include "neva/image_io.hpp"

namespace neva {

struct SubjectScanpath {
    std::string subject_id;
    std::vector<Point> fixations;  // sorted by fixation_index
};

struct Dataset {
    std::map<std::string, std::string> stimulus_paths;                  // id -> image path
    std::map<std::string, std::pair<int, int>> stimulus_dims;           // id -> (w, h)
    std::map<std::string, std::vector<SubjectScanpath>> human_scanpaths;  // id -> subjects
    ViewingGeometry geometry;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t start = field.find_first_not_of(' ');
        out.push_back(start == std::string::npos ? "" : field.substr(start));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace detail

// Load stimuli and per-subject fixation sequences. Subjects with fewer
// than min_fixations fixations on a stimulus are dropped (warned), as are
// out-of-bounds fixation rows and rows referencing missing images.
inline Dataset load_dataset(const std::string& images_dir, const std::string& fixations_csv,
                            const ViewingGeometry& geometry, int min_fixations = 10) {
    geometry.validate();
    Dataset ds;
    ds.geometry = geometry;
    if (!geometry.is_isotropic())
        ds.warnings.push_back("viewing geometry: pixel density differs by more than 5% between axes");

    for (const auto& entry : std::filesystem::directory_iterator(images_dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext != ".png" && ext != ".jpg" && ext != ".jpeg" && ext != ".PNG" && ext != ".JPG")
            continue;
        const std::string id = entry.path().stem().string();
        const Stimulus s = load_stimulus(entry.path().string(), id);
        ds.stimulus_paths[id] = entry.path().string();
        ds.stimulus_dims[id] = {s.width, s.height};
    }

    std::ifstream in(fixations_csv);
    if (!in) throw config_error("load_dataset: cannot open " + fixations_csv);
    std::string line;
    if (!std::getline(in, line)) throw config_error("load_dataset: empty fixation CSV");
    const auto header = detail::split_csv_line(line);
    auto col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw config_error("load_dataset: missing CSV column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_stim = col("stimulus_id");
    const std::size_t c_subj = col("subject_id");
    const std::size_t c_idx = col("fixation_index");
    const std::size_t c_x = col("x_px");
    const std::size_t c_y = col("y_px");

    struct Row {
        int index;
        Point p;
    };
    std::map<std::string, std::map<std::string, std::vector<Row>>> rows;
    std::size_t dropped_oob = 0;
    std::size_t dropped_missing = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() < header.size()) throw invalid_input("load_dataset: short CSV row: " + line);
        const std::string& sid = f[c_stim];
        auto dims = ds.stimulus_dims.find(sid);
        if (dims == ds.stimulus_dims.end()) {
            ++dropped_missing;
            continue;
        }
        Row r{std::stoi(f[c_idx]), {std::stod(f[c_x]), std::stod(f[c_y])}};
        if (r.p.x < 0 || r.p.x > dims->second.first - 1 || r.p.y < 0 ||
            r.p.y > dims->second.second - 1) {
            ++dropped_oob;
            continue;
        }
        rows[sid][f[c_subj]].push_back(r);
    }
    if (dropped_missing > 0)
        ds.warnings.push_back("dropped " + std::to_string(dropped_missing) +
                              " fixation rows referencing missing stimuli");
    if (dropped_oob > 0)
        ds.warnings.push_back("dropped " + std::to_string(dropped_oob) +
                              " out-of-bounds fixation rows");

    for (auto& [sid, subjects] : rows) {
        for (auto& [subj, rlist] : subjects) {
            std::stable_sort(rlist.begin(), rlist.end(),
                             [](const Row& a, const Row& b) { return a.index < b.index; });
            if (static_cast<int>(rlist.size()) < min_fixations) {
                ds.warnings.push_back("excluded subject " + subj + " on " + sid + " (" +
                                      std::to_string(rlist.size()) + " fixations < " +
                                      std::to_string(min_fixations) + ")");
                continue;
            }
            SubjectScanpath sp;
            sp.subject_id = subj;
            for (const auto& r : rlist) sp.fixations.push_back(r.p);
            ds.human_scanpaths[sid].push_back(std::move(sp));
        }
    }
    return ds;
}

// Flat dotted-key configuration file.
using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    ConfigMap cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) cfg[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

namespace detail {

inline std::string cfg_get(const ConfigMap& c, const std::string& key, const std::string& dflt) {
    auto it = c.find(key);
    return it == c.end() ? dflt : it->second;
}

inline double cfg_get_num(const ConfigMap& c, const std::string& key, double dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw config_error("config key '" + key + "' is not a number: " + it->second);
    }
}

inline std::string cfg_require(const ConfigMap& c, const std::string& key) {
    auto it = c.find(key);
    if (it == c.end()) throw config_error("missing required config key '" + key + "'");
    return it->second;
}

}  // namespace detail

}  // namespace neva
