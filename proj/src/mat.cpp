#include "rotrack/mat.hpp"

#include <algorithm>

namespace rotrack {

double mat_mean(const Mat& m) {
    double s = 0.0;
    for (double v : m.data) s += v;
    return m.data.empty() ? 0.0 : s / static_cast<double>(m.data.size());
}

double mat_stddev(const Mat& m) {
    const double mu = mat_mean(m);
    double s = 0.0;
    for (double v : m.data) s += (v - mu) * (v - mu);
    return m.data.empty() ? 0.0 : std::sqrt(s / static_cast<double>(m.data.size()));
}

double mat_min(const Mat& m) {
    return *std::min_element(m.data.begin(), m.data.end());
}

double mat_max(const Mat& m) {
    return *std::max_element(m.data.begin(), m.data.end());
}

}  // namespace rotrack
