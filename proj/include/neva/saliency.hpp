#pragma once

// Bottom-up saliency. The center-surround map is a deliberately small
// stand-in for the full Itti-Koch model: per channel and scale it takes
// the absolute difference of two Gaussian blurs, sums, and min-max
// normalizes. Externally computed maps can be loaded instead.

#include <utility>
#include <vector>

#include "neva/image.hpp"

namespace neva {

enum class SaliencySource { center_surround, uniform, external };

struct SaliencyMap {
    ScalarField field;  // normalized to [0,1]; identically 0 when degenerate
    SaliencySource source = SaliencySource::center_surround;

    bool degenerate() const {
        for (double v : field.values)
            if (v > 0.0) return false;
        return true;
    }
};

namespace detail {

// Min-max normalize in place. Constant fields normalize to all-zero;
// returns false in that case so callers can warn.
inline bool minmax_normalize(ScalarField& f) {
    double lo = f.values.empty() ? 0.0 : f.values[0];
    double hi = lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo <= 0.0) {
        std::fill(f.values.begin(), f.values.end(), 0.0);
        return false;
    }
    for (double& v : f.values) v = (v - lo) / (hi - lo);
    return true;
}

}  // namespace detail

inline const std::vector<std::pair<double, double>>& default_saliency_scales() {
    static const std::vector<std::pair<double, double>> scales{{1, 4}, {2, 8}, {4, 16}};
    return scales;
}

// Multi-scale center-surround contrast: sum over scales and channels of
// |blur(center) - blur(surround)|, min-max normalized.
inline SaliencyMap center_surround_saliency(
    const Stimulus& stimulus,
    const std::vector<std::pair<double, double>>& scales = default_saliency_scales()) {
    if (scales.empty()) throw invalid_parameter("center_surround_saliency: no scales");
    for (auto [c, s] : scales)
        if (!(c > 0.0 && s > c))
            throw invalid_parameter("center_surround_saliency: need surround_sigma > center_sigma > 0");
    ScalarField acc(stimulus.width, stimulus.height, 0.0);
    for (auto [center_sigma, surround_sigma] : scales) {
        const Stimulus fine = blur(stimulus, center_sigma);
        const Stimulus coarse = blur(stimulus, surround_sigma);
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            for (int c = 0; c < stimulus.channels; ++c) {
                const std::size_t off = c * stimulus.plane_size() + i;
                acc.values[i] += std::abs(fine.data[off] - coarse.data[off]);
            }
    }
    detail::minmax_normalize(acc);
    return {std::move(acc), SaliencySource::center_surround};
}

// Wrap an already-computed map (e.g. a true Itti map loaded from disk),
// min-max normalizing it. A constant input becomes the all-zero map.
inline SaliencyMap external_saliency(ScalarField field) {
    for (double v : field.values)
        if (v < 0.0) throw invalid_input("external_saliency: negative value");
    detail::minmax_normalize(field);
    return {std::move(field), SaliencySource::external};
}

}  // namespace neva
