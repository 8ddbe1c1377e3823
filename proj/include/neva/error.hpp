#pragma once

#include <stdexcept>
#include <string>

namespace neva {

struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_model : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct generation_error : std::runtime_error {
    generation_error(const std::string& msg, int step = -1)
        : std::runtime_error(step >= 0 ? msg + " (step " + std::to_string(step) + ")" : msg),
          step(step) {}
    int step;
};

}  // namespace neva
