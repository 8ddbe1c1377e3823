#pragma once

// Scanpath generators: the task-driven NeVA-O candidate search and the
// WTA, CLE (Levy walk), random and center baselines. All generators are
// deterministic given their inputs and seed and always emit exactly
// n_fixations in-bounds fixations.

#include <string>
#include <vector>

#include "neva/foveation.hpp"
#include "neva/image.hpp"
#include "neva/rng.hpp"
#include "neva/saliency.hpp"
#include "neva/task_models.hpp"

namespace neva {

struct Scanpath {
    std::string stimulus_id;
    std::vector<Point> fixations;

    std::size_t size() const { return fixations.size(); }
};

struct GeneratorConfig {
    int n_fixations = 10;
    std::uint64_t seed = 0;
    int grid_rows = 16;  // NeVA-O candidate grid
    int grid_cols = 16;
    double inhibition_radius_deg = 1.0;  // WTA
    double levy_alpha = 1.5;             // CLE jump-length stability
    double center_sigma_frac = 0.2;      // center baseline sigma / min(W,H)

    void validate() const {
        if (n_fixations < 1) throw invalid_parameter("GeneratorConfig: n_fixations must be >= 1");
        if (grid_rows < 2 || grid_cols < 2)
            throw invalid_parameter("GeneratorConfig: candidate grid must be at least 2x2");
    }
};

// Evenly spaced candidate positions (grid cell centers), row-major order.
inline std::vector<Point> candidate_grid(int width, int height, int rows, int cols) {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out.push_back({(c + 0.5) * width / cols - 0.5, (r + 0.5) * height / rows - 0.5});
    for (auto& p : out) {
        p.x = std::clamp(p.x, 0.0, width - 1.0);
        p.y = std::clamp(p.y, 0.0, height - 1.0);
    }
    return out;
}

// Greedy one-step-lookahead optimization: at each step evaluate the task
// loss for every candidate fixation and commit the argmin (ties go to the
// lowest row-major grid index). The first step starts from the fully
// blurred state.
inline Scanpath neva_o(const Stimulus& stimulus, const TaskLossModel& model,
                       const FoveationConfig& fcfg, const GeneratorConfig& gcfg) {
    gcfg.validate();
    const auto candidates = candidate_grid(stimulus.width, stimulus.height, gcfg.grid_rows, gcfg.grid_cols);

    // Candidate blobs are fixation-independent; build them once.
    std::vector<ScalarField> blobs;
    blobs.reserve(candidates.size());
    for (const auto& c : candidates)
        blobs.push_back(gaussian_blob(c, fcfg.sigma_xi, stimulus.width, stimulus.height));

    FoveationState state = init_state(stimulus, fcfg);
    Scanpath path;
    path.stimulus_id = stimulus.id;
    const double keep = 1.0 - fcfg.gamma;
    FoveationState trial = state;
    for (int t = 0; t < gcfg.n_fixations; ++t) {
        int best = -1;
        double best_loss = 0.0;
        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
            for (std::size_t i = 0; i < blobs[ci].values.size(); ++i)
                trial.g_sigma.values[i] =
                    std::clamp(blobs[ci].values[i] + keep * state.raw.values[i], 0.0, 1.0);
            double loss;
            try {
                loss = task_loss(model, agent_state(trial, stimulus), stimulus);
            } catch (const std::exception& e) {
                throw generation_error(std::string("neva_o: model evaluation failed: ") + e.what(), t);
            }
            if (best < 0 || loss < best_loss) {
                best = static_cast<int>(ci);
                best_loss = loss;
            }
        }
        state = update_state(state, candidates[best], fcfg);
        path.fixations.push_back(candidates[best]);
    }
    return path;
}

// Winner-take-all with inhibition-of-return: fixate the saliency maximum,
// suppress a disk of the configured visual-angle radius, repeat. Inhibited
// pixels never become eligible again.
inline Scanpath wta(const SaliencyMap& saliency, const ViewingGeometry& geom,
                    const GeneratorConfig& gcfg, const std::string& stimulus_id = {}) {
    gcfg.validate();
    if (saliency.degenerate()) throw generation_error("wta: degenerate saliency");
    const int w = saliency.field.width;
    const int h = saliency.field.height;
    const double radius = degrees_to_pixels(gcfg.inhibition_radius_deg, geom);
    ScalarField map = saliency.field;
    std::vector<char> inhibited(map.values.size(), 0);

    Scanpath path;
    path.stimulus_id = stimulus_id;
    for (int t = 0; t < gcfg.n_fixations; ++t) {
        int best = -1;
        for (std::size_t i = 0; i < map.values.size(); ++i)
            if (!inhibited[i] && (best < 0 || map.values[i] > map.values[best]))
                best = static_cast<int>(i);
        if (best < 0) throw generation_error("wta: entire map inhibited", t);
        const int bx = best % w;
        const int by = best / w;
        path.fixations.push_back({static_cast<double>(bx), static_cast<double>(by)});
        const int r = static_cast<int>(std::ceil(radius));
        for (int y = std::max(0, by - r); y <= std::min(h - 1, by + r); ++y)
            for (int x = std::max(0, bx - r); x <= std::min(w - 1, bx + r); ++x)
                if ((x - bx) * (x - bx) + (y - by) * (y - by) <= radius * radius)
                    inhibited[static_cast<std::size_t>(y) * w + x] = 1;
    }
    return path;
}

// Pareto(alpha) jump length with minimum 1 px.
inline double levy_jump_length(double alpha, Rng& rng) {
    return std::pow(rng.uniform_pos(), -1.0 / alpha);
}

// Constrained Levy exploration, simplified: heavy-tailed jump proposals
// with Metropolis acceptance on the saliency field. Starts at the image
// center; on 50 consecutive rejections the most salient proposal seen is
// taken.
inline Scanpath cle_levy(const SaliencyMap& saliency, const GeneratorConfig& gcfg, Rng rng,
                         const std::string& stimulus_id = {}) {
    gcfg.validate();
    constexpr double kAcceptEps = 1e-6;
    constexpr int kMaxTries = 50;
    const int w = saliency.field.width;
    const int h = saliency.field.height;
    auto value_at = [&](Point p) {
        int x = static_cast<int>(std::lround(std::clamp(p.x, 0.0, w - 1.0)));
        int y = static_cast<int>(std::lround(std::clamp(p.y, 0.0, h - 1.0)));
        return saliency.field.at(x, y);
    };

    Scanpath path;
    path.stimulus_id = stimulus_id;
    Point cur{(w - 1) / 2.0, (h - 1) / 2.0};
    path.fixations.push_back(cur);
    while (static_cast<int>(path.size()) < gcfg.n_fixations) {
        Point best_seen{};
        double best_val = -1.0;
        bool moved = false;
        for (int attempt = 0; attempt < kMaxTries; ++attempt) {
            const double angle = rng.uniform() * 2.0 * M_PI;
            const double len = levy_jump_length(gcfg.levy_alpha, rng);
            Point prop{std::clamp(cur.x + len * std::cos(angle), 0.0, w - 1.0),
                       std::clamp(cur.y + len * std::sin(angle), 0.0, h - 1.0)};
            const double sv = value_at(prop);
            if (sv > best_val) {
                best_val = sv;
                best_seen = prop;
            }
            const double ratio = (sv + kAcceptEps) / (value_at(cur) + kAcceptEps);
            if (ratio >= 1.0 || rng.uniform() < ratio) {
                cur = prop;
                moved = true;
                break;
            }
        }
        if (!moved) cur = best_seen;
        path.fixations.push_back(cur);
    }
    return path;
}

// Uniform baseline: every pixel equally likely.
inline Scanpath random_baseline(int width, int height, const GeneratorConfig& gcfg, Rng rng,
                                const std::string& stimulus_id = {}) {
    gcfg.validate();
    Scanpath path;
    path.stimulus_id = stimulus_id;
    for (int t = 0; t < gcfg.n_fixations; ++t)
        path.fixations.push_back({static_cast<double>(rng.uniform_int(width)),
                                  static_cast<double>(rng.uniform_int(height))});
    return path;
}

// Center-bias baseline: isotropic Gaussian around the image center,
// out-of-bounds draws rejected.
inline Scanpath center_baseline(int width, int height, const GeneratorConfig& gcfg, Rng rng,
                                const std::string& stimulus_id = {}) {
    gcfg.validate();
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double sigma = gcfg.center_sigma_frac * std::min(width, height);
    Scanpath path;
    path.stimulus_id = stimulus_id;
    while (static_cast<int>(path.size()) < gcfg.n_fixations) {
        Point p{cx + sigma * rng.normal(), cy + sigma * rng.normal()};
        if (p.x < 0 || p.x > width - 1 || p.y < 0 || p.y > height - 1) continue;
        path.fixations.push_back(p);
    }
    return path;
}

}  // namespace neva
