#pragma once

// Run orchestration behind the CLI: run configuration, scanpath
// generation over a dataset, metric evaluation (per-k SED/SBTDE tables
// with Mean/SPP aggregation and N-scores), saccade statistics and
// foveation overlay rendering.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>
#include <opencv2/imgproc.hpp>

#include "neva/dataset.hpp"
#include "neva/generators.hpp"
#include "neva/metrics.hpp"
#include "neva/saccades.hpp"
#include "neva/task_models.hpp"

namespace neva {

struct RunConfig {
    std::string images_dir;
    std::string fixations_csv;
    std::optional<ViewingGeometry> geometry;
    FoveationConfig foveation;
    GeneratorConfig generator;
    std::vector<std::string> generators;  // subset of {neva_o, wta, cle, random, center}
    int grid_n = 5;                       // metric quantization grid side
    std::string task_model = "proxy";     // "proxy" or a weights-file path
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

inline RunConfig parse_run_config(const ConfigMap& c) {
    using detail::cfg_get;
    using detail::cfg_get_num;
    RunConfig rc;
    rc.images_dir = cfg_get(c, "dataset.images_dir", "");
    rc.fixations_csv = cfg_get(c, "dataset.fixations_csv", "");

    if (c.count("geometry.screen_width_px")) {
        ViewingGeometry g;
        g.screen_width_px = cfg_get_num(c, "geometry.screen_width_px", 0);
        g.screen_height_px = cfg_get_num(c, "geometry.screen_height_px", 0);
        g.screen_width_cm = cfg_get_num(c, "geometry.screen_width_cm", 0);
        g.screen_height_cm = cfg_get_num(c, "geometry.screen_height_cm", 0);
        g.viewer_distance_cm = cfg_get_num(c, "geometry.viewer_distance_cm", 0);
        try {
            g.validate();
        } catch (const invalid_parameter& e) {
            throw config_error(e.what());
        }
        rc.geometry = g;
    }

    rc.foveation.sigma_p = cfg_get_num(c, "foveation.sigma_p", 8.0);
    rc.foveation.gamma = cfg_get_num(c, "foveation.gamma", 0.3);
    if (c.count("foveation.sigma_xi")) {
        rc.foveation.sigma_xi = cfg_get_num(c, "foveation.sigma_xi", 0);
    } else if (rc.geometry) {
        const double deg = cfg_get_num(c, "foveation.fovea_deg", 2.0);
        rc.foveation.sigma_xi = degrees_to_pixels(deg, *rc.geometry);
    } else {
        rc.foveation.sigma_xi = 32.0;
        rc.warnings.push_back("no viewing geometry and no foveation.sigma_xi; defaulting to 32 px");
    }
    try {
        rc.foveation.validate();
    } catch (const invalid_parameter& e) {
        throw config_error(e.what());
    }

    rc.generator.n_fixations = static_cast<int>(cfg_get_num(c, "generator.n_fixations", 10));
    rc.generator.grid_rows = static_cast<int>(cfg_get_num(c, "generator.grid_rows", 16));
    rc.generator.grid_cols = static_cast<int>(cfg_get_num(c, "generator.grid_cols", 16));
    rc.generator.inhibition_radius_deg = cfg_get_num(c, "generator.inhibition_radius_deg", 1.0);
    rc.generator.levy_alpha = cfg_get_num(c, "generator.levy_alpha", 1.5);
    rc.generator.center_sigma_frac = cfg_get_num(c, "generator.center_sigma_frac", 0.2);
    try {
        rc.generator.validate();
    } catch (const invalid_parameter& e) {
        throw config_error(e.what());
    }

    std::stringstream names(cfg_get(c, "generators", "random,center"));
    std::string name;
    while (std::getline(names, name, ',')) {
        if (name.empty()) continue;
        if (name != "neva_o" && name != "wta" && name != "cle" && name != "random" &&
            name != "center")
            throw config_error("unknown generator '" + name + "'");
        rc.generators.push_back(name);
    }
    if (rc.generators.empty()) throw config_error("no generators selected");

    rc.grid_n = static_cast<int>(cfg_get_num(c, "metrics.grid_n", 5));
    rc.task_model = cfg_get(c, "task.model", "proxy");
    rc.seed = static_cast<std::uint64_t>(cfg_get_num(c, "seed", 0));
    return rc;
}

inline TaskLossModel resolve_task_model(const RunConfig& rc) {
    if (rc.task_model == "proxy") return TaskLossModel::proxy();
    return load_task_model(rc.task_model);
}

// ---------------------------------------------------------------------
// Scanpath CSV files: stimulus_id, fixation_index, x_px, y_px

inline void write_scanpaths_csv(const std::string& path,
                                const std::map<std::string, Scanpath>& paths) {
    std::ofstream out(path);
    if (!out) throw invalid_input("write_scanpaths_csv: cannot write " + path);
    out << "stimulus_id,fixation_index,x_px,y_px\n";
    char buf[64];
    for (const auto& [sid, sp] : paths)
        for (std::size_t i = 0; i < sp.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f", sp.fixations[i].x, sp.fixations[i].y);
            out << sid << ',' << i << ',' << buf << '\n';
        }
}

inline std::map<std::string, Scanpath> read_scanpaths_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("read_scanpaths_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw invalid_input("read_scanpaths_csv: empty file " + path);
    std::map<std::string, std::vector<std::pair<int, Point>>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() < 4) throw invalid_input("read_scanpaths_csv: short row: " + line);
        rows[f[0]].push_back({std::stoi(f[1]), {std::stod(f[2]), std::stod(f[3])}});
    }
    std::map<std::string, Scanpath> out;
    for (auto& [sid, list] : rows) {
        std::stable_sort(list.begin(), list.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        Scanpath sp;
        sp.stimulus_id = sid;
        for (const auto& [idx, p] : list) sp.fixations.push_back(p);
        out[sid] = std::move(sp);
    }
    return out;
}

// ---------------------------------------------------------------------
// generate

using GeneratedScanpaths = std::map<std::string, std::map<std::string, Scanpath>>;

// Run every configured generator over every stimulus. Per-stimulus
// failures are recorded in `warnings` and the run continues. Writes one
// CSV per generator into out_dir when non-empty.
inline GeneratedScanpaths run_generate(const RunConfig& rc, const Dataset& ds,
                                       const std::string& out_dir,
                                       std::vector<std::string>* warnings = nullptr) {
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    const bool needs_saliency =
        std::count(rc.generators.begin(), rc.generators.end(), "wta") ||
        std::count(rc.generators.begin(), rc.generators.end(), "cle");
    const bool needs_model = std::count(rc.generators.begin(), rc.generators.end(), "neva_o");
    if (std::count(rc.generators.begin(), rc.generators.end(), "wta") && !rc.geometry)
        throw config_error("wta requires viewing geometry for the inhibition radius");
    TaskLossModel model;
    if (needs_model) model = resolve_task_model(rc);

    GeneratedScanpaths out;
    const Rng root(rc.seed);
    for (const auto& [sid, path] : ds.stimulus_paths) {
        const Stimulus stim = load_stimulus(path, sid);
        SaliencyMap sal;
        if (needs_saliency) sal = center_surround_saliency(stim);
        for (const auto& gen : rc.generators) {
            Rng stream = root.derive(gen).derive(sid);
            try {
                if (gen == "neva_o")
                    out[gen][sid] = neva_o(stim, model, rc.foveation, rc.generator);
                else if (gen == "wta")
                    out[gen][sid] = wta(sal, *rc.geometry, rc.generator, sid);
                else if (gen == "cle")
                    out[gen][sid] = cle_levy(sal, rc.generator, stream, sid);
                else if (gen == "random")
                    out[gen][sid] = random_baseline(stim.width, stim.height, rc.generator, stream, sid);
                else if (gen == "center")
                    out[gen][sid] = center_baseline(stim.width, stim.height, rc.generator, stream, sid);
            } catch (const std::exception& e) {
                warn("generator " + gen + " failed on " + sid + ": " + e.what());
            }
        }
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (const auto& [gen, paths] : out)
            write_scanpaths_csv((std::filesystem::path(out_dir) / (gen + "_scanpaths.csv")).string(),
                                paths);
    }
    return out;
}

// ---------------------------------------------------------------------
// evaluate

struct PerKScores {
    int k = 0;
    double mean_sed = 0, spp_sed = 0, mean_sbtde = 0, spp_sbtde = 0;
    std::optional<double> n_mean_sed, n_spp_sed, n_mean_sbtde, n_spp_sbtde;
};

struct MetricReport {
    // Generator name (plus the "human" leave-one-out baseline) -> per-k rows.
    std::map<std::string, std::vector<PerKScores>> rows;
    std::vector<std::string> stimuli;  // stimuli entering the aggregates
    int n_fixations = 0;
};

namespace detail {

inline ScanpathString prefix(const ScanpathString& s, int k) {
    return ScanpathString(s.begin(), s.begin() + k);
}

}  // namespace detail

// Per-k metric table over the stimuli common to the dataset and every
// generator. SED at sub-sequence length k compares length-k prefixes;
// SBTDE_k runs over the full strings. N-scores are anchored on the human
// and random rows, so they are exactly 0 and 1 there.
inline MetricReport run_evaluate(const RunConfig& rc, const Dataset& ds,
                                 const GeneratedScanpaths& generated) {
    const int N = rc.generator.n_fixations;
    std::vector<std::string> stimuli;
    for (const auto& [sid, subjects] : ds.human_scanpaths) {
        if (subjects.size() < 2) continue;
        bool everywhere = true;
        for (const auto& [gen, paths] : generated)
            if (!paths.count(sid) ||
                static_cast<int>(paths.at(sid).size()) < N)
                everywhere = false;
        if (everywhere) stimuli.push_back(sid);
    }
    if (stimuli.empty())
        throw invalid_input("run_evaluate: no stimulus has >= 2 human subjects and all generators");

    // Quantize everything once, truncated to the first N fixations.
    std::map<std::string, std::vector<ScanpathString>> human_strings;
    std::map<std::string, std::map<std::string, ScanpathString>> gen_strings;
    for (const auto& sid : stimuli) {
        const auto [w, h] = ds.stimulus_dims.at(sid);
        GridQuantizer q{rc.grid_n, w, h};
        for (const auto& subj : ds.human_scanpaths.at(sid)) {
            Scanpath truncated{sid, {subj.fixations.begin(), subj.fixations.begin() + N}};
            human_strings[sid].push_back(quantize(truncated, q));
        }
        for (const auto& [gen, paths] : generated) {
            const auto& sp = paths.at(sid);
            Scanpath truncated{sid, {sp.fixations.begin(), sp.fixations.begin() + N}};
            gen_strings[sid][gen] = quantize(truncated, q);
        }
    }

    MetricReport report;
    report.stimuli = stimuli;
    report.n_fixations = N;
    for (int k = 1; k <= N; ++k) {
        auto sed_k = [&](const ScanpathString& a, const ScanpathString& b) {
            return static_cast<double>(sed(detail::prefix(a, k), detail::prefix(b, k)));
        };
        auto sbtde_score = [&](const ScanpathString& a, const ScanpathString& b) {
            return sbtde_k(a, b, k);
        };

        for (const auto& [gen, paths] : generated) {
            std::vector<std::vector<double>> sed_rows, sbtde_rows;
            for (const auto& sid : stimuli) {
                const auto& g = gen_strings[sid][gen];
                std::vector<double> srow, brow;
                for (const auto& hstr : human_strings[sid]) {
                    srow.push_back(sed_k(g, hstr));
                    brow.push_back(sbtde_score(g, hstr));
                }
                sed_rows.push_back(std::move(srow));
                sbtde_rows.push_back(std::move(brow));
            }
            PerKScores row;
            row.k = k;
            row.mean_sed = aggregate_mean(sed_rows);
            row.spp_sed = aggregate_spp(sed_rows);
            row.mean_sbtde = aggregate_mean(sbtde_rows);
            row.spp_sbtde = aggregate_spp(sbtde_rows);
            report.rows[gen].push_back(row);
        }

        std::vector<std::vector<ScanpathString>> human_table;
        for (const auto& sid : stimuli) human_table.push_back(human_strings[sid]);
        const auto hb_sed = human_baseline(human_table, sed_k);
        const auto hb_sbtde = human_baseline(human_table, sbtde_score);
        PerKScores hrow;
        hrow.k = k;
        hrow.mean_sed = hb_sed.mean;
        hrow.spp_sed = hb_sed.spp;
        hrow.mean_sbtde = hb_sbtde.mean;
        hrow.spp_sbtde = hb_sbtde.spp;
        report.rows["human"].push_back(hrow);
    }

    if (report.rows.count("random")) {
        for (auto& [gen, rows] : report.rows) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& h = report.rows["human"][i];
                const auto& r = report.rows["random"][i];
                rows[i].n_mean_sed = n_score(rows[i].mean_sed, h.mean_sed, r.mean_sed);
                rows[i].n_spp_sed = n_score(rows[i].spp_sed, h.spp_sed, r.spp_sed);
                rows[i].n_mean_sbtde = n_score(rows[i].mean_sbtde, h.mean_sbtde, r.mean_sbtde);
                rows[i].n_spp_sbtde = n_score(rows[i].spp_sbtde, h.spp_sbtde, r.spp_sbtde);
            }
        }
    }
    return report;
}

inline void write_report(const MetricReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto opt_json = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["n_fixations"] = report.n_fixations;
    j["stimuli"] = report.stimuli;
    for (const auto& [gen, rows] : report.rows)
        for (const auto& r : rows)
            j["generators"][gen].push_back({{"k", r.k},
                                            {"mean_sed", r.mean_sed},
                                            {"spp_sed", r.spp_sed},
                                            {"mean_sbtde", r.mean_sbtde},
                                            {"spp_sbtde", r.spp_sbtde},
                                            {"n_mean_sed", opt_json(r.n_mean_sed)},
                                            {"n_spp_sed", opt_json(r.n_spp_sed)},
                                            {"n_mean_sbtde", opt_json(r.n_mean_sbtde)},
                                            {"n_spp_sbtde", opt_json(r.n_spp_sbtde)}});
    std::ofstream jf(std::filesystem::path(out_dir) / "report.json");
    jf << j.dump(2) << '\n';

    std::ofstream cf(std::filesystem::path(out_dir) / "report_per_k.csv");
    cf << "k,generator,mean_sed,spp_sed,mean_sbtde,spp_sbtde,"
          "n_mean_sed,n_spp_sed,n_mean_sbtde,n_spp_sbtde\n";
    auto fmt = [](std::ofstream& o, double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        o << buf;
    };
    auto fmt_opt = [&](std::ofstream& o, const std::optional<double>& v) {
        if (v) fmt(o, *v);
        else o << "nan";
    };
    const int n = report.rows.empty() ? 0 : static_cast<int>(report.rows.begin()->second.size());
    for (int i = 0; i < n; ++i)
        for (const auto& [gen, rows] : report.rows) {
            const auto& r = rows[i];
            cf << r.k << ',' << gen << ',';
            fmt(cf, r.mean_sed); cf << ',';
            fmt(cf, r.spp_sed); cf << ',';
            fmt(cf, r.mean_sbtde); cf << ',';
            fmt(cf, r.spp_sbtde); cf << ',';
            fmt_opt(cf, r.n_mean_sed); cf << ',';
            fmt_opt(cf, r.n_spp_sed); cf << ',';
            fmt_opt(cf, r.n_mean_sbtde); cf << ',';
            fmt_opt(cf, r.n_spp_sbtde); cf << '\n';
        }
}

// ---------------------------------------------------------------------
// saccades

// Per-generator amplitude histograms plus a KL table against the pooled
// human distribution.
inline void run_saccades(const Dataset& ds, const GeneratedScanpaths& generated,
                         const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto histogram_of = [&](const std::vector<const Scanpath*>& paths) {
        std::vector<double> amps;
        for (const auto* sp : paths) {
            auto a = saccade_amplitudes(*sp, ds.geometry);
            amps.insert(amps.end(), a.begin(), a.end());
        }
        return amplitude_histogram(amps);
    };
    auto write_hist = [&](const std::string& name, const AmplitudeHistogram& h) {
        std::ofstream out(std::filesystem::path(out_dir) / (name + "_histogram.csv"));
        out << "bin_low,bin_high,probability\n";
        for (std::size_t i = 0; i < h.probabilities.size(); ++i)
            out << h.bin_edges[i] << ',' << h.bin_edges[i + 1] << ',' << h.probabilities[i] << '\n';
    };

    std::vector<Scanpath> human_paths;
    for (const auto& [sid, subjects] : ds.human_scanpaths)
        for (const auto& subj : subjects) human_paths.push_back({sid, subj.fixations});
    std::vector<const Scanpath*> hp;
    for (const auto& sp : human_paths) hp.push_back(&sp);
    const bool have_humans = !hp.empty();
    AmplitudeHistogram human_hist;
    if (have_humans) {
        human_hist = histogram_of(hp);
        write_hist("human", human_hist);
    }

    std::ofstream kl(std::filesystem::path(out_dir) / "kl_vs_human.csv");
    kl << "generator,kl_generator_vs_human,kl_human_vs_generator\n";
    for (const auto& [gen, paths] : generated) {
        std::vector<const Scanpath*> gp;
        for (const auto& [sid, sp] : paths) gp.push_back(&sp);
        const auto h = histogram_of(gp);
        write_hist(gen, h);
        if (have_humans)
            kl << gen << ',' << kl_divergence(h, human_hist) << ','
               << kl_divergence(human_hist, h) << '\n';
    }
}

// ---------------------------------------------------------------------
// foveate overlays

// Renders <prefix>_fixations.png (numbered markers), <prefix>_heatmap.png
// (the accumulator) and <prefix>_agent.png (the final agent state).
inline void render_overlay(const Stimulus& stimulus, const Scanpath& path,
                           const FoveationConfig& cfg, const std::string& out_prefix) {
    FoveationState state = init_state(stimulus, cfg);
    for (const auto& f : path.fixations) state = update_state(state, f, cfg);

    cv::Mat img(stimulus.height, stimulus.width, CV_8UC3);
    for (int y = 0; y < stimulus.height; ++y)
        for (int x = 0; x < stimulus.width; ++x) {
            auto to8 = [&](int c) {
                return static_cast<std::uint8_t>(
                    std::lround(std::clamp(stimulus.at(x, y, std::min(c, stimulus.channels - 1)),
                                           0.0, 1.0) * 255.0));
            };
            img.at<cv::Vec3b>(y, x) = {to8(2), to8(1), to8(0)};
        }
    for (std::size_t i = 0; i < path.size(); ++i) {
        const cv::Point p(static_cast<int>(std::lround(path.fixations[i].x)),
                          static_cast<int>(std::lround(path.fixations[i].y)));
        cv::circle(img, p, 5, {0, 0, 255}, 1, cv::LINE_AA);
        cv::putText(img, std::to_string(i + 1), p + cv::Point(6, -6), cv::FONT_HERSHEY_PLAIN, 0.9,
                    {0, 0, 255}, 1, cv::LINE_AA);
    }
    if (!cv::imwrite(out_prefix + "_fixations.png", img))
        throw invalid_input("render_overlay: cannot write fixation overlay");

    save_field(out_prefix + "_heatmap.png", state.g_sigma);
    save_stimulus(out_prefix + "_agent.png", agent_state(state, stimulus));
}

}  // namespace neva
