#pragma once

// Image containers, separable Gaussian filtering, Gaussian blobs and
// pixel <-> visual-angle conversions. Everything here is a pure function
// on value types; results may be shared across threads freely.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "neva/error.hpp"

namespace neva {

// Planar image with intensities in [0,1]. Channel planes are stored
// consecutively, each plane row-major. Origin is top-left, x rightward,
// y downward, pixel centers at integer coordinates.
struct Stimulus {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;  // size = width*height*channels
    std::string id;

    double at(int x, int y, int c = 0) const {
        return data[static_cast<std::size_t>(c) * width * height + static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y, int c = 0) {
        return data[static_cast<std::size_t>(c) * width * height + static_cast<std::size_t>(y) * width + x];
    }
    std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }

    void validate() const {
        if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
            throw invalid_parameter("Stimulus: bad dimensions");
        if (data.size() != plane_size() * channels)
            throw invalid_parameter("Stimulus: data length != width*height*channels");
        for (double v : data)
            if (!(v >= 0.0 && v <= 1.0))
                throw invalid_parameter("Stimulus: intensity outside [0,1]");
    }
};

// Non-negative scalar field, row-major. Carrier for blob masks,
// accumulators and saliency maps.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // size = width*height

    ScalarField() = default;
    ScalarField(int w, int h, double init = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, init) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Presentation-screen geometry used for degree <-> pixel conversions.
struct ViewingGeometry {
    double screen_width_px = 0;
    double screen_height_px = 0;
    double screen_width_cm = 0;
    double screen_height_cm = 0;
    double viewer_distance_cm = 0;

    double pixels_per_cm() const { return screen_width_px / screen_width_cm; }

    // True when the horizontal and vertical pixel densities agree within 5%.
    bool is_isotropic() const {
        double ppcm_x = screen_width_px / screen_width_cm;
        double ppcm_y = screen_height_px / screen_height_cm;
        return std::abs(ppcm_x - ppcm_y) <= 0.05 * ppcm_x;
    }

    void validate() const {
        if (screen_width_px <= 0 || screen_height_px <= 0 || screen_width_cm <= 0 ||
            screen_height_cm <= 0 || viewer_distance_cm <= 0)
            throw invalid_parameter("ViewingGeometry: all fields must be positive");
    }
};

// 2-D pixel coordinate (may be fractional).
struct Point {
    double x = 0;
    double y = 0;
};

// Normalized 1-D Gaussian kernel, length 2*ceil(truncation*sigma)+1.
inline std::vector<double> gaussian_kernel(double sigma, double truncation = 3.0) {
    if (!(sigma > 0.0)) throw invalid_parameter("gaussian_kernel: sigma must be > 0");
    if (!(truncation >= 1.0)) throw invalid_parameter("gaussian_kernel: truncation must be >= 1");
    const int radius = static_cast<int>(std::ceil(truncation * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[i + radius] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

namespace detail {

// Mirror an index into [0, n): symmetric reflection including the edge
// sample (-1 -> 0, n -> n-1). Keeps constant signals constant.
inline int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i = ((i % period) + period) % period;
    return i < n ? i : period - 1 - i;
}

// 1-D correlation of one plane along x or y with reflect padding.
inline void convolve_axis(const double* src, double* dst, int w, int h,
                          const std::vector<double>& kernel, bool horizontal) {
    const int radius = static_cast<int>(kernel.size() / 2);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) {
                int xs = horizontal ? reflect(x + t, w) : x;
                int ys = horizontal ? y : reflect(y + t, h);
                acc += kernel[t + radius] * src[static_cast<std::size_t>(ys) * w + xs];
            }
            dst[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
}

}  // namespace detail

// Separable Gaussian blur per channel with reflect padding. sigma = 0
// returns the input unchanged.
inline Stimulus blur(const Stimulus& s, double sigma, double truncation = 3.0) {
    if (sigma < 0.0) throw invalid_parameter("blur: sigma must be >= 0");
    if (sigma == 0.0) return s;
    const auto kernel = gaussian_kernel(sigma, truncation);
    Stimulus out = s;
    std::vector<double> tmp(s.plane_size());
    for (int c = 0; c < s.channels; ++c) {
        const double* src = s.data.data() + c * s.plane_size();
        double* dst = out.data.data() + c * s.plane_size();
        detail::convolve_axis(src, tmp.data(), s.width, s.height, kernel, true);
        detail::convolve_axis(tmp.data(), dst, s.width, s.height, kernel, false);
    }
    // Kernel weights sum to 1, so values stay in [0,1] up to rounding.
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

// Blur a scalar field (same separable pass, no [0,1] clamp).
inline ScalarField blur(const ScalarField& f, double sigma, double truncation = 3.0) {
    if (sigma < 0.0) throw invalid_parameter("blur: sigma must be >= 0");
    if (sigma == 0.0) return f;
    const auto kernel = gaussian_kernel(sigma, truncation);
    ScalarField out(f.width, f.height);
    std::vector<double> tmp(f.values.size());
    detail::convolve_axis(f.values.data(), tmp.data(), f.width, f.height, kernel, true);
    detail::convolve_axis(tmp.data(), out.values.data(), f.width, f.height, kernel, false);
    return out;
}

// Unnormalized Gaussian acuity mask exp(-|p-center|^2 / 2 sigma^2),
// rescaled so the nearest pixel center to `center` carries exactly 1.
// Peak 1 makes the perceived stimulus equal the original at the fixation.
inline ScalarField gaussian_blob(Point center, double sigma, int width, int height) {
    if (!(sigma > 0.0)) throw invalid_parameter("gaussian_blob: sigma must be > 0");
    if (center.x < 0 || center.x > width - 1 || center.y < 0 || center.y > height - 1)
        throw invalid_parameter("gaussian_blob: center outside image bounds");
    const double nx = std::clamp(std::round(center.x), 0.0, static_cast<double>(width - 1));
    const double ny = std::clamp(std::round(center.y), 0.0, static_cast<double>(height - 1));
    const double inv = 1.0 / (2.0 * sigma * sigma);
    const double peak = std::exp(-((nx - center.x) * (nx - center.x) +
                                   (ny - center.y) * (ny - center.y)) * inv);
    ScalarField out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double d2 = (x - center.x) * (x - center.x) + (y - center.y) * (y - center.y);
            out.at(x, y) = std::min(1.0, std::exp(-d2 * inv) / peak);
        }
    }
    return out;
}

// Visual angle -> on-screen pixels (width axis density).
inline double degrees_to_pixels(double deg, const ViewingGeometry& geom) {
    geom.validate();
    if (deg < 0.0 || deg >= 90.0) throw invalid_parameter("degrees_to_pixels: need 0 <= deg < 90");
    const double rad = deg * M_PI / 180.0;
    return 2.0 * geom.viewer_distance_cm * std::tan(rad / 2.0) * geom.pixels_per_cm();
}

// On-screen pixels -> visual angle in degrees.
inline double pixels_to_degrees(double px, const ViewingGeometry& geom) {
    geom.validate();
    if (px < 0.0) throw invalid_parameter("pixels_to_degrees: px must be >= 0");
    const double cm = px / geom.pixels_per_cm();
    return 2.0 * std::atan(cm / (2.0 * geom.viewer_distance_cm)) * 180.0 / M_PI;
}

}  // namespace neva
