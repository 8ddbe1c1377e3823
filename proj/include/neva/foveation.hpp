#pragma once

// Perceived stimulus and the cumulative agent state. The accumulator is
// updated iteratively as blob(t) + (1-gamma)*raw(t-1), so past fixations
// decay with weight (1-gamma)^i; the exposed accumulator is the clipped
// value. The recurrence carries the unclipped sum so that the iterative
// accumulator equals the clipped explicit (1-gamma)^i sum exactly (feeding
// the clipped value back would diverge from that closed form whenever a
// saturated region later decays). gamma = 1 is memoryless, gamma = 0 never
// forgets.

#include <optional>

#include "neva/image.hpp"

namespace neva {

struct FoveationConfig {
    double sigma_p = 8.0;   // peripheral blur, pixels
    double sigma_xi = 32.0; // fovea radius, pixels
    double gamma = 0.3;     // forgetting coefficient in [0,1]

    void validate() const {
        if (!(sigma_p > 0.0)) throw invalid_parameter("FoveationConfig: sigma_p must be > 0");
        if (!(sigma_xi > 0.0)) throw invalid_parameter("FoveationConfig: sigma_xi must be > 0");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw invalid_parameter("FoveationConfig: gamma must be in [0,1]");
    }

    // Fovea radius from degrees of visual angle; the paper's default is
    // a 2-degree fovea.
    static FoveationConfig with_fovea_degrees(double sigma_p, double fovea_deg, double gamma,
                                              const ViewingGeometry& geom) {
        FoveationConfig cfg;
        cfg.sigma_p = sigma_p;
        cfg.sigma_xi = degrees_to_pixels(fovea_deg, geom);
        cfg.gamma = gamma;
        cfg.validate();
        return cfg;
    }
};

struct FoveationState {
    ScalarField g_sigma;  // clipped accumulator, values in [0,1]
    ScalarField raw;      // unclipped decayed blob sum carried by the recurrence
    Stimulus coarse;      // cached fully blurred stimulus
    int t = 0;            // fixation count so far
};

namespace detail {

inline void check_fixation(Point p, int width, int height, const char* who) {
    if (p.x < 0 || p.x > width - 1 || p.y < 0 || p.y > height - 1)
        throw invalid_parameter(std::string(who) + ": fixation outside image bounds");
}

// Pointwise h = mask*S + (1-mask)*coarse per channel.
inline Stimulus blend(const Stimulus& original, const Stimulus& coarse, const ScalarField& mask) {
    Stimulus out = original;
    const std::size_t plane = original.plane_size();
    for (int c = 0; c < original.channels; ++c) {
        const double* s = original.data.data() + c * plane;
        const double* b = coarse.data.data() + c * plane;
        double* d = out.data.data() + c * plane;
        for (std::size_t i = 0; i < plane; ++i)
            d[i] = mask.values[i] * s[i] + (1.0 - mask.values[i]) * b[i];
    }
    return out;
}

}  // namespace detail

// Single-fixation percept: full acuity at the fixation, gist elsewhere.
inline Stimulus perceive(const Stimulus& stimulus, Point fixation, const FoveationConfig& cfg) {
    cfg.validate();
    detail::check_fixation(fixation, stimulus.width, stimulus.height, "perceive");
    const auto mask = gaussian_blob(fixation, cfg.sigma_xi, stimulus.width, stimulus.height);
    return detail::blend(stimulus, blur(stimulus, cfg.sigma_p), mask);
}

// Fresh state before the first fixation: the agent sees only the gist.
inline FoveationState init_state(const Stimulus& stimulus, const FoveationConfig& cfg) {
    cfg.validate();
    FoveationState st;
    st.g_sigma = ScalarField(stimulus.width, stimulus.height, 0.0);
    st.raw = st.g_sigma;
    st.coarse = blur(stimulus, cfg.sigma_p);
    st.t = 0;
    return st;
}

// Commit one fixation: decay the accumulator and add the new blob, clipped
// to [0,1].
inline FoveationState update_state(const FoveationState& state, Point fixation,
                                   const FoveationConfig& cfg) {
    cfg.validate();
    detail::check_fixation(fixation, state.g_sigma.width, state.g_sigma.height, "update_state");
    const auto blob = gaussian_blob(fixation, cfg.sigma_xi, state.g_sigma.width, state.g_sigma.height);
    FoveationState next = state;
    const double keep = 1.0 - cfg.gamma;
    for (std::size_t i = 0; i < blob.values.size(); ++i) {
        next.raw.values[i] = blob.values[i] + keep * state.raw.values[i];
        next.g_sigma.values[i] = std::clamp(next.raw.values[i], 0.0, 1.0);
    }
    next.t = state.t + 1;
    return next;
}

// Cumulative percept h = G * S + (1 - G) * coarse.
inline Stimulus agent_state(const FoveationState& state, const Stimulus& stimulus) {
    if (state.g_sigma.width != stimulus.width || state.g_sigma.height != stimulus.height ||
        state.coarse.channels != stimulus.channels)
        throw invalid_parameter("agent_state: state/stimulus dimension mismatch");
    return detail::blend(stimulus, state.coarse, state.g_sigma);
}

}  // namespace neva
