#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rotrack {

// Dense row-major 2-D grid of doubles. One grid type serves pixels,
// training labels, cosine windows and response scores.
struct Mat {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int w, int h, double fill = 0.0) : width(w), height(h) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("Mat: dimensions must be positive");
        data.assign(static_cast<std::size_t>(w) * h, fill);
    }

    double& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    double at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t size() const { return data.size(); }
    bool same_dims(const Mat& o) const {
        return width == o.width && height == o.height;
    }
};

double mat_mean(const Mat& m);

// Population standard deviation.
double mat_stddev(const Mat& m);

double mat_min(const Mat& m);
double mat_max(const Mat& m);

}  // namespace rotrack
