#pragma once

// Task-loss evaluators that score an agent state: a pixel-space
// reconstruction proxy (plain MSE against the original) and small MLPs
// loaded from a JSON weights file (cross-entropy classifiers or MSE
// autoencoders). Evaluation is pure; models are immutable after load.

#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neva/image.hpp"

namespace neva {

enum class Activation { relu, identity, softmax };
enum class LossKind { cross_entropy, mse };

struct MlpLayer {
    int rows = 0;  // output size
    int cols = 0;  // input size
    std::vector<double> weights;  // row-major, rows x cols
    std::vector<double> bias;     // size rows
    Activation activation = Activation::identity;
};

struct MlpWeights {
    std::vector<MlpLayer> layers;
    LossKind loss_kind = LossKind::mse;
    int target_index = -1;

    void validate() const {
        if (layers.empty()) throw invalid_model("MlpWeights: no layers");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& l = layers[i];
            if (l.rows <= 0 || l.cols <= 0) throw invalid_model("MlpWeights: bad layer shape");
            if (l.weights.size() != static_cast<std::size_t>(l.rows) * l.cols)
                throw invalid_model("MlpWeights: weight count != rows*cols");
            if (l.bias.size() != static_cast<std::size_t>(l.rows))
                throw invalid_model("MlpWeights: bias count != rows");
            for (double w : l.weights)
                if (!std::isfinite(w)) throw invalid_model("MlpWeights: non-finite weight");
            for (double b : l.bias)
                if (!std::isfinite(b)) throw invalid_model("MlpWeights: non-finite bias");
            if (i + 1 < layers.size()) {
                if (layers[i + 1].cols != l.rows)
                    throw invalid_model("MlpWeights: layer shapes do not chain");
                if (l.activation == Activation::softmax)
                    throw invalid_model("MlpWeights: softmax only allowed on the final layer");
            }
        }
        if (layers.back().activation == Activation::softmax && loss_kind != LossKind::cross_entropy)
            throw invalid_model("MlpWeights: softmax requires cross_entropy loss");
    }
};

enum class TaskKind { reconstruction_proxy, mlp_classifier, mlp_autoencoder };

struct InputSpec {
    int width = 0;
    int height = 0;
    int channels = 1;
};

struct TaskLossModel {
    TaskKind kind = TaskKind::reconstruction_proxy;
    InputSpec input_spec;  // ignored by the proxy (matches any stimulus)
    MlpWeights mlp;        // used by the MLP kinds

    static TaskLossModel proxy() { return {}; }
};

// MSE between the agent state and the original stimulus. Degenerate
// identity-encoder stand-in for a trained reconstruction model.
inline double reconstruction_proxy_loss(const Stimulus& agent_state, const Stimulus& original) {
    if (agent_state.width != original.width || agent_state.height != original.height ||
        agent_state.channels != original.channels)
        throw invalid_parameter("reconstruction_proxy_loss: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < agent_state.data.size(); ++i) {
        double d = agent_state.data[i] - original.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(agent_state.data.size());
}

inline std::vector<double> mlp_forward(const MlpWeights& model, const std::vector<double>& input) {
    model.validate();
    if (input.size() != static_cast<std::size_t>(model.layers.front().cols))
        throw invalid_parameter("mlp_forward: input length does not match first layer");
    std::vector<double> cur = input;
    for (const auto& layer : model.layers) {
        std::vector<double> next(layer.rows);
        for (int r = 0; r < layer.rows; ++r) {
            double acc = layer.bias[r];
            const double* wrow = layer.weights.data() + static_cast<std::size_t>(r) * layer.cols;
            for (int c = 0; c < layer.cols; ++c) acc += wrow[c] * cur[c];
            next[r] = acc;
        }
        switch (layer.activation) {
            case Activation::relu:
                for (double& v : next) v = std::max(0.0, v);
                break;
            case Activation::softmax: {
                double mx = -std::numeric_limits<double>::infinity();
                for (double v : next) mx = std::max(mx, v);
                double sum = 0.0;
                for (double& v : next) { v = std::exp(v - mx); sum += v; }
                for (double& v : next) v /= sum;
                break;
            }
            case Activation::identity:
                break;
        }
        cur = std::move(next);
    }
    return cur;
}

// Nearest-neighbour resize to a model's input resolution.
inline Stimulus resize_nearest(const Stimulus& s, int width, int height) {
    if (width <= 0 || height <= 0) throw invalid_parameter("resize_nearest: bad target size");
    if (width == s.width && height == s.height) return s;
    Stimulus out;
    out.width = width;
    out.height = height;
    out.channels = s.channels;
    out.id = s.id;
    out.data.resize(out.plane_size() * out.channels);
    for (int c = 0; c < s.channels; ++c)
        for (int y = 0; y < height; ++y) {
            int sy = std::min(s.height - 1, static_cast<int>(y * static_cast<double>(s.height) / height));
            for (int x = 0; x < width; ++x) {
                int sx = std::min(s.width - 1, static_cast<int>(x * static_cast<double>(s.width) / width));
                out.at(x, y, c) = s.at(sx, sy, c);
            }
        }
    return out;
}

namespace detail {

inline std::vector<double> flatten_for_model(const Stimulus& s, const InputSpec& spec) {
    if (spec.channels != s.channels)
        throw invalid_parameter("task_loss: channel count does not match model input spec");
    return resize_nearest(s, spec.width, spec.height).data;
}

}  // namespace detail

// Scalar task loss of an agent state. Cross-entropy is taken at the
// model's target index; MSE compares the model output against the resized
// original (autoencoder target) or, for the proxy, the original directly.
inline double task_loss(const TaskLossModel& model, const Stimulus& agent_state,
                        const Stimulus& original) {
    constexpr double kLogEps = 1e-12;
    switch (model.kind) {
        case TaskKind::reconstruction_proxy:
            return reconstruction_proxy_loss(agent_state, original);
        case TaskKind::mlp_classifier: {
            if (model.mlp.target_index < 0)
                throw invalid_model("task_loss: cross_entropy needs a target_index");
            auto out = mlp_forward(model.mlp, detail::flatten_for_model(agent_state, model.input_spec));
            if (model.mlp.target_index >= static_cast<int>(out.size()))
                throw invalid_model("task_loss: target_index out of range");
            return -std::log(out[model.mlp.target_index] + kLogEps);
        }
        case TaskKind::mlp_autoencoder: {
            auto out = mlp_forward(model.mlp, detail::flatten_for_model(agent_state, model.input_spec));
            auto target = detail::flatten_for_model(original, model.input_spec);
            if (out.size() != target.size())
                throw invalid_model("task_loss: autoencoder output size != input size");
            double acc = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) {
                double d = out[i] - target[i];
                acc += d * d;
            }
            return acc / static_cast<double>(out.size());
        }
    }
    throw invalid_model("task_loss: unknown model kind");
}

// Weights file schema:
// {"input": {"width","height","channels"}, "loss": "cross_entropy"|"mse",
//  "target_index"?: int, "layers": [{"rows","cols","weights","bias","activation"}...]}
inline TaskLossModel load_task_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("load_task_model: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_model("load_task_model: bad JSON in " + path + ": " + e.what());
    }
    TaskLossModel model;
    try {
        model.input_spec.width = j.at("input").at("width").get<int>();
        model.input_spec.height = j.at("input").at("height").get<int>();
        model.input_spec.channels = j.at("input").at("channels").get<int>();
        const std::string loss = j.at("loss").get<std::string>();
        if (loss == "cross_entropy")
            model.mlp.loss_kind = LossKind::cross_entropy;
        else if (loss == "mse")
            model.mlp.loss_kind = LossKind::mse;
        else
            throw invalid_model("load_task_model: unknown loss '" + loss + "'");
        if (j.contains("target_index")) model.mlp.target_index = j["target_index"].get<int>();
        for (const auto& jl : j.at("layers")) {
            MlpLayer l;
            l.rows = jl.at("rows").get<int>();
            l.cols = jl.at("cols").get<int>();
            l.weights = jl.at("weights").get<std::vector<double>>();
            l.bias = jl.at("bias").get<std::vector<double>>();
            const std::string act = jl.at("activation").get<std::string>();
            if (act == "relu") l.activation = Activation::relu;
            else if (act == "identity") l.activation = Activation::identity;
            else if (act == "softmax") l.activation = Activation::softmax;
            else throw invalid_model("load_task_model: unknown activation '" + act + "'");
            model.mlp.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw invalid_model("load_task_model: schema error in " + path + ": " + e.what());
    }
    model.kind = model.mlp.loss_kind == LossKind::cross_entropy ? TaskKind::mlp_classifier
                                                                : TaskKind::mlp_autoencoder;
    model.mlp.validate();
    return model;
}

}  // namespace neva
