// Command-line front end: generate scanpaths over a dataset, evaluate
// them against human eye-tracking data, compute saccade statistics and
// render foveation overlays.
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "neva/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed = -1;  // -1: use the config file value
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key=value config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--set", args.overrides, "extra key=value overrides")->take_all();
}

neva::RunConfig load_run_config(const CommonArgs& args) {
    auto cfg = neva::load_config_file(args.config_path);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw neva::config_error("bad --set value: " + kv);
        cfg[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (args.seed >= 0) cfg["seed"] = std::to_string(args.seed);
    auto rc = neva::parse_run_config(cfg);
    for (const auto& w : rc.warnings) std::cerr << "warning: " << w << '\n';
    return rc;
}

neva::Dataset load_dataset_for(const neva::RunConfig& rc, int min_fixations) {
    if (rc.images_dir.empty()) throw neva::config_error("dataset.images_dir is not set");
    neva::ViewingGeometry geom = rc.geometry.value_or(
        neva::ViewingGeometry{1920, 1080, 60, 33.75, 70});  // placeholder when only images are used
    if (!rc.geometry)
        std::cerr << "warning: no geometry.* keys; using a generic screen model\n";
    if (rc.fixations_csv.empty()) {
        // images-only dataset (generate without human data)
        neva::Dataset ds;
        ds.geometry = geom;
        for (const auto& entry : fs::directory_iterator(rc.images_dir)) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext != ".png" && ext != ".jpg" && ext != ".jpeg") continue;
            const std::string id = entry.path().stem().string();
            const auto s = neva::load_stimulus(entry.path().string(), id);
            ds.stimulus_paths[id] = entry.path().string();
            ds.stimulus_dims[id] = {s.width, s.height};
        }
        return ds;
    }
    auto ds = neva::load_dataset(rc.images_dir, rc.fixations_csv, geom, min_fixations);
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
    return ds;
}

neva::GeneratedScanpaths read_generated_dir(const std::string& dir) {
    neva::GeneratedScanpaths out;
    if (!fs::is_directory(dir)) throw neva::invalid_input("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string suffix = "_scanpaths.csv";
        if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix)
            continue;
        out[name.substr(0, name.size() - suffix.size())] =
            neva::read_scanpaths_csv(entry.path().string());
    }
    if (out.empty()) throw neva::invalid_input("no *_scanpaths.csv files in " + dir);
    return out;
}

std::vector<neva::Point> parse_fixations(const std::string& text) {
    std::vector<neva::Point> out;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos)
            throw neva::config_error("bad --fixations element: " + pair);
        out.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
    }
    if (out.empty()) throw neva::config_error("--fixations is empty");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NeVA foveated-vision scanpath toolkit"};
    app.require_subcommand(1);

    CommonArgs gen_args, eval_args, sac_args, fov_args;
    std::string eval_generated, sac_generated;
    std::string fov_image, fov_fixations;

    auto* gen = app.add_subcommand("generate", "generate scanpaths for every stimulus");
    add_common(gen, gen_args);

    auto* eval = app.add_subcommand("evaluate", "score generated scanpaths against human data");
    add_common(eval, eval_args);
    eval->add_option("--generated", eval_generated, "directory with *_scanpaths.csv")->required();

    auto* sac = app.add_subcommand("saccades", "saccade amplitude histograms and KL table");
    add_common(sac, sac_args);
    sac->add_option("--generated", sac_generated, "directory with *_scanpaths.csv")->required();

    auto* fov = app.add_subcommand("foveate", "render percept/agent-state overlays");
    add_common(fov, fov_args);
    fov->add_option("--image", fov_image, "stimulus image (PNG/JPEG)")->required();
    fov->add_option("--fixations", fov_fixations, "semicolon-separated x,y pixel pairs")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto rc = load_run_config(gen_args);
            auto ds = load_dataset_for(rc, rc.generator.n_fixations);
            std::vector<std::string> warnings;
            auto paths = run_generate(rc, ds, gen_args.out_dir, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "wrote " << paths.size() << " scanpath files to " << gen_args.out_dir
                      << '\n';
        } else if (eval->parsed()) {
            auto rc = load_run_config(eval_args);
            auto ds = load_dataset_for(rc, rc.generator.n_fixations);
            auto generated = read_generated_dir(eval_generated);
            auto report = run_evaluate(rc, ds, generated);
            write_report(report, eval_args.out_dir);
            std::cout << "evaluated " << report.stimuli.size() << " stimuli; report in "
                      << eval_args.out_dir << '\n';
        } else if (sac->parsed()) {
            auto rc = load_run_config(sac_args);
            auto ds = load_dataset_for(rc, 2);  // amplitudes need only 2 fixations
            auto generated = read_generated_dir(sac_generated);
            run_saccades(ds, generated, sac_args.out_dir);
            std::cout << "saccade statistics in " << sac_args.out_dir << '\n';
        } else if (fov->parsed()) {
            auto rc = load_run_config(fov_args);
            const auto stim = neva::load_stimulus(fov_image);
            neva::Scanpath path;
            path.stimulus_id = fs::path(fov_image).stem().string();
            path.fixations = parse_fixations(fov_fixations);
            fs::create_directories(fov_args.out_dir);
            const std::string prefix =
                (fs::path(fov_args.out_dir) / path.stimulus_id).string();
            render_overlay(stim, path, rc.foveation, prefix);
            neva::save_stimulus(prefix + "_percept.png",
                                perceive(stim, path.fixations.back(), rc.foveation));
            std::cout << "overlays written with prefix " << prefix << '\n';
        }
    } catch (const neva::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
