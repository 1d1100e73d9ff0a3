#pragma once

#include <vector>

#include "rotrack/fft.hpp"
#include "rotrack/geometry.hpp"
#include "rotrack/image.hpp"
#include "rotrack/mat.hpp"

namespace rotrack {

// Multi-channel feature grid. The default transform produces one
// channel; the channel axis is kept so richer transforms can slot in.
struct FeatureMap {
    std::vector<Mat> channels;

    int width() const { return channels.empty() ? 0 : channels[0].width; }
    int height() const { return channels.empty() ? 0 : channels[0].height; }
    int channel_count() const { return static_cast<int>(channels.size()); }
};

struct Peak {
    Point2 location;  // (x, y) in the score grid
    double value = 0.0;
};

// 2-D correlation score grid tagged with the scale and rotation bin it
// came from. The peak is kept consistent with the scores on construction.
struct ResponseMap {
    Mat scores;
    int scale_index = 0;     // 1-based pyramid bin, 0 when not applicable
    int rotation_index = 0;  // bank entry index, 0 when not applicable
    Peak peak;
};

// Recomputes the peak (first maximum in row-major order).
ResponseMap make_response(Mat scores, int scale_index = 0, int rotation_index = 0);

// Frequency-domain correlation filter. The scale and bias of the
// similarity function are kept as fields but fixed to 1 and 0 by this
// backend.
struct Filter {
    std::vector<Cplx> spectrum;  // width x height, row major
    int width = 0;
    int height = 0;
    double lambda = 0.0;
    double response_scale = 1.0;
    double bias = 0.0;
};

// Normalized grayscale features: zero mean, unit variance (epsilon
// guarded), optionally multiplied by the separable Hann window.
FeatureMap feature_transform(const Patch& patch, bool windowed);

// Circular FFT cross-correlation summed over channels, cropped to the
// valid-shift region of size (search - template + 1) per axis.
ResponseMap xcorr_fft(const FeatureMap& tmpl, const FeatureMap& search);

// Gaussian regression target, peak value exactly 1 at the center index
// (size / 2).
Mat gaussian_label(int size, double sigma);

// Ridge regression in the Fourier domain, one bin at a time:
// W = conj(Z) .* Y ./ (conj(Z) .* Z + lambda).
Filter train_filter(const FeatureMap& exemplar, const Mat& label, double lambda);

// Applies the filter to equally sized search features; circular response.
ResponseMap filter_respond(const Filter& filter, const FeatureMap& search);

// Rolling average: (1 - rate) * old + rate * new, elementwise.
FeatureMap update_model(const FeatureMap& old_model, const FeatureMap& new_model, double rate);
Filter update_model(const Filter& old_model, const Filter& new_model, double rate);
Mat update_model(const Mat& old_model, const Mat& new_model, double rate);

}  // namespace rotrack
