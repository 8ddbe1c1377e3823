#pragma once

// Saccade-amplitude statistics in degrees of visual angle: per-scanpath
// amplitudes, binned distributions and KL divergence between them.

#include <vector>

#include "neva/generators.hpp"
#include "neva/image.hpp"

namespace neva {

// Amplitude distribution over fixed-width bins; the last bin is open.
struct AmplitudeHistogram {
    std::vector<double> bin_edges;      // size = bins + 1, last edge = overflow start
    std::vector<double> probabilities;  // normalized counts, size = bins
    std::size_t sample_count = 0;
};

// N-1 angular saccade amplitudes between consecutive fixations.
inline std::vector<double> saccade_amplitudes(const Scanpath& path, const ViewingGeometry& geom) {
    std::vector<double> out;
    if (path.size() < 2) return out;
    out.reserve(path.size() - 1);
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double dx = path.fixations[i].x - path.fixations[i - 1].x;
        const double dy = path.fixations[i].y - path.fixations[i - 1].y;
        out.push_back(pixels_to_degrees(std::sqrt(dx * dx + dy * dy), geom));
    }
    return out;
}

// Bin amplitudes into 1-degree bins over [0, max_deg) plus an overflow bin.
inline AmplitudeHistogram amplitude_histogram(const std::vector<double>& amplitudes_deg,
                                              double bin_width_deg = 1.0, double max_deg = 30.0) {
    if (!(bin_width_deg > 0.0) || !(max_deg > bin_width_deg))
        throw invalid_parameter("amplitude_histogram: bad binning");
    const int regular = static_cast<int>(std::ceil(max_deg / bin_width_deg));
    AmplitudeHistogram h;
    h.bin_edges.resize(regular + 2);
    for (int i = 0; i <= regular + 1; ++i) h.bin_edges[i] = i * bin_width_deg;
    std::vector<double> counts(regular + 1, 0.0);
    for (double a : amplitudes_deg) {
        if (a < 0.0) throw invalid_input("amplitude_histogram: negative amplitude");
        int bin = std::min(regular, static_cast<int>(a / bin_width_deg));
        counts[bin] += 1.0;
        ++h.sample_count;
    }
    h.probabilities = std::move(counts);
    if (h.sample_count > 0)
        for (double& p : h.probabilities) p /= static_cast<double>(h.sample_count);
    return h;
}

// KL(p || q) with epsilon smoothing of q so empty baseline bins do not
// blow up. Non-negative up to the epsilon-induced error.
inline double kl_divergence(const AmplitudeHistogram& p, const AmplitudeHistogram& q) {
    constexpr double kEps = 1e-10;
    if (p.bin_edges != q.bin_edges) throw invalid_input("kl_divergence: mismatched bin edges");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.probabilities.size(); ++i)
        if (p.probabilities[i] > 0.0)
            acc += p.probabilities[i] * std::log(p.probabilities[i] / (q.probabilities[i] + kEps));
    return acc;
}

}  // namespace neva
