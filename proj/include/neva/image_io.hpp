#pragma once

// PNG/JPEG image loading and saving (OpenCV imgcodecs). 8-bit inputs are
// scaled to [0,1]; greyscale files become 1-channel stimuli, colour files
// 3-channel RGB.

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <string>

#include "neva/image.hpp"

namespace neva {

inline Stimulus load_stimulus(const std::string& path, const std::string& id = {}) {
    cv::Mat img = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (img.empty()) throw invalid_input("load_stimulus: cannot read " + path);
    if (img.channels() == 4) cv::cvtColor(img, img, cv::COLOR_BGRA2BGR);
    if (img.depth() != CV_8U) img.convertTo(img, CV_8U);
    Stimulus s;
    s.width = img.cols;
    s.height = img.rows;
    s.channels = img.channels() == 1 ? 1 : 3;
    s.id = id.empty() ? path : id;
    s.data.resize(s.plane_size() * s.channels);
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            if (s.channels == 1) {
                s.at(x, y, 0) = img.at<std::uint8_t>(y, x) / 255.0;
            } else {
                const auto& px = img.at<cv::Vec3b>(y, x);  // BGR
                s.at(x, y, 0) = px[2] / 255.0;
                s.at(x, y, 1) = px[1] / 255.0;
                s.at(x, y, 2) = px[0] / 255.0;
            }
        }
    return s;
}

inline void save_stimulus(const std::string& path, const Stimulus& s) {
    cv::Mat img(s.height, s.width, s.channels == 1 ? CV_8UC1 : CV_8UC3);
    for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) {
            auto to8 = [](double v) {
                return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
            };
            if (s.channels == 1)
                img.at<std::uint8_t>(y, x) = to8(s.at(x, y, 0));
            else
                img.at<cv::Vec3b>(y, x) = {to8(s.at(x, y, 2)), to8(s.at(x, y, 1)), to8(s.at(x, y, 0))};
        }
    if (!cv::imwrite(path, img)) throw invalid_input("save_stimulus: cannot write " + path);
}

// Greyscale PNG of a scalar field, min-max scaled to 8 bits.
inline void save_field(const std::string& path, const ScalarField& f) {
    double lo = f.values.empty() ? 0.0 : f.values[0];
    double hi = lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo > 0 ? hi - lo : 1.0;
    cv::Mat img(f.height, f.width, CV_8UC1);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x)
            img.at<std::uint8_t>(y, x) =
                static_cast<std::uint8_t>(std::lround((f.at(x, y) - lo) / span * 255.0));
    if (!cv::imwrite(path, img)) throw invalid_input("save_field: cannot write " + path);
}

// Load a greyscale image as a raw scalar field in [0,1].
inline ScalarField load_field(const std::string& path) {
    cv::Mat img = cv::imread(path, cv::IMREAD_GRAYSCALE);
    if (img.empty()) throw invalid_input("load_field: cannot read " + path);
    ScalarField f(img.cols, img.rows);
    for (int y = 0; y < img.rows; ++y)
        for (int x = 0; x < img.cols; ++x) f.at(x, y) = img.at<std::uint8_t>(y, x) / 255.0;
    return f;
}

}  // namespace neva
