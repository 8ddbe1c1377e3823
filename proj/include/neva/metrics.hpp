#pragma once

// Scanpath similarity: grid quantization to symbol strings, string-edit
// distance (SED), string-based time-delay embedding distance (SBTDE),
// Mean/SPP aggregation, the human leave-one-out baseline and score
// normalization against the human/random anchors.

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "neva/generators.hpp"

namespace neva {

// n x n equally spaced regions over an image.
struct GridQuantizer {
    int n = 5;
    int image_width = 0;
    int image_height = 0;

    void validate() const {
        if (n < 2) throw invalid_parameter("GridQuantizer: n must be >= 2");
        if (n * n > 26 * 26) throw invalid_parameter("GridQuantizer: n^2 exceeds representable symbols");
        if (image_width <= 0 || image_height <= 0)
            throw invalid_parameter("GridQuantizer: bad image dimensions");
    }
};

using ScanpathString = std::vector<int>;  // region indices in [0, n^2)

inline ScanpathString quantize(const Scanpath& path, const GridQuantizer& q) {
    q.validate();
    ScanpathString out;
    out.reserve(path.size());
    for (const auto& f : path.fixations) {
        if (f.x < 0 || f.x > q.image_width || f.y < 0 || f.y > q.image_height)
            throw invalid_input("quantize: fixation out of bounds");
        int col = std::min(q.n - 1, static_cast<int>(f.x * q.n / q.image_width));
        int row = std::min(q.n - 1, static_cast<int>(f.y * q.n / q.image_height));
        out.push_back(col + q.n * row);
    }
    return out;
}

// Levenshtein distance between equal-length symbol strings.
inline int sed(const ScanpathString& a, const ScanpathString& b) {
    if (a.size() != b.size()) throw invalid_input("sed: scanpath strings must have equal length");
    const std::size_t n = b.size();
    std::vector<int> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        int diag = row[0];
        row[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= n; ++j) {
            int sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
        }
    }
    return row[n];
}

// Order-k time-delay embedding distance: for each length-k window of `a`,
// the minimal SED/k to any length-k window of `b`, averaged over the
// N-k+1 windows of `a`. Directional; values in [0,1].
inline double sbtde_k(const ScanpathString& a, const ScanpathString& b, int k) {
    if (a.size() != b.size()) throw invalid_input("sbtde_k: scanpath strings must have equal length");
    const int n = static_cast<int>(a.size());
    if (k < 1 || k > n) throw invalid_input("sbtde_k: k must be in [1, N]");
    double total = 0.0;
    for (int i = 0; i + k <= n; ++i) {
        ScanpathString x(a.begin() + i, a.begin() + i + k);
        int best = k;
        for (int j = 0; j + k <= n; ++j) {
            ScanpathString y(b.begin() + j, b.begin() + j + k);
            best = std::min(best, sed(x, y));
            if (best == 0) break;
        }
        total += static_cast<double>(best) / k;
    }
    return total / (n - k + 1);
}

// scores[stimulus][subject] -> mean over subjects, then mean over stimuli.
inline double aggregate_mean(const std::vector<std::vector<double>>& scores) {
    if (scores.empty()) throw invalid_input("aggregate_mean: empty input");
    double outer = 0.0;
    for (const auto& subj : scores) {
        if (subj.empty()) throw invalid_input("aggregate_mean: stimulus with no subjects");
        double inner = 0.0;
        for (double v : subj) inner += v;
        outer += inner / subj.size();
    }
    return outer / scores.size();
}

// ScanPath Plausibility: min over subjects, then mean over stimuli.
inline double aggregate_spp(const std::vector<std::vector<double>>& scores) {
    if (scores.empty()) throw invalid_input("aggregate_spp: empty input");
    double outer = 0.0;
    for (const auto& subj : scores) {
        if (subj.empty()) throw invalid_input("aggregate_spp: stimulus with no subjects");
        outer += *std::min_element(subj.begin(), subj.end());
    }
    return outer / scores.size();
}

struct BaselineScores {
    double mean = 0.0;
    double spp = 0.0;
};

// Leave-one-out human baseline: each subject's scanpath is scored against
// the remaining subjects on the same stimulus. Stimuli with fewer than two
// subjects are skipped (callers may warn).
inline BaselineScores human_baseline(
    const std::vector<std::vector<ScanpathString>>& per_stimulus_subjects,
    const std::function<double(const ScanpathString&, const ScanpathString&)>& score) {
    std::vector<std::vector<double>> mean_rows;  // [stimulus][subject]
    std::vector<std::vector<double>> spp_rows;
    for (const auto& subjects : per_stimulus_subjects) {
        if (subjects.size() < 2) continue;
        std::vector<double> mrow, srow;
        for (std::size_t i = 0; i < subjects.size(); ++i) {
            double sum = 0.0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < subjects.size(); ++j) {
                if (j == i) continue;
                double d = score(subjects[i], subjects[j]);
                sum += d;
                best = std::min(best, d);
            }
            mrow.push_back(sum / (subjects.size() - 1));
            srow.push_back(best);
        }
        mean_rows.push_back(std::move(mrow));
        spp_rows.push_back(std::move(srow));
    }
    if (mean_rows.empty()) throw invalid_input("human_baseline: no stimulus has >= 2 subjects");
    return {aggregate_mean(mean_rows), aggregate_mean(spp_rows)};
}

// Normalize so the human baseline maps to 0 and the random baseline to 1.
// Empty when the anchors coincide.
inline std::optional<double> n_score(double model_score, double human_score, double random_score) {
    if (random_score == human_score) return std::nullopt;
    return (model_score - human_score) / (random_score - human_score);
}

}  // namespace neva
