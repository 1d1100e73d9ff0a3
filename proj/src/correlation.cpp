#include "rotrack/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace rotrack {

ResponseMap make_response(Mat scores, int scale_index, int rotation_index) {
    ResponseMap r;
    r.scale_index = scale_index;
    r.rotation_index = rotation_index;
    r.peak.value = scores.data[0];
    r.peak.location = {0.0, 0.0};
    for (int y = 0; y < scores.height; ++y) {
        for (int x = 0; x < scores.width; ++x) {
            const double v = scores.at(x, y);
            if (v > r.peak.value) {
                r.peak.value = v;
                r.peak.location = {static_cast<double>(x), static_cast<double>(y)};
            }
        }
    }
    r.scores = std::move(scores);
    return r;
}

FeatureMap feature_transform(const Patch& patch, bool windowed) {
    const double mu = mat_mean(patch.pixels);
    const double sd = mat_stddev(patch.pixels);
    Mat ch(patch.width(), patch.height());
    for (std::size_t i = 0; i < ch.size(); ++i)
        ch.data[i] = (patch.pixels.data[i] - mu) / (sd + 1e-6);
    if (windowed) {
        const Mat w = cosine_window(ch.width, ch.height);
        for (std::size_t i = 0; i < ch.size(); ++i) ch.data[i] *= w.data[i];
    }
    FeatureMap f;
    f.channels.push_back(std::move(ch));
    return f;
}

namespace {

std::vector<Cplx> forward_fft_padded(const Mat& m, int w, int h) {
    std::vector<Cplx> buf(static_cast<std::size_t>(w) * h, Cplx(0.0, 0.0));
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            buf[static_cast<std::size_t>(y) * w + x] = Cplx(m.at(x, y), 0.0);
    fft_2d(buf, w, h, false);
    return buf;
}

}  // namespace

ResponseMap xcorr_fft(const FeatureMap& tmpl, const FeatureMap& search) {
    if (tmpl.channel_count() != search.channel_count())
        throw std::invalid_argument("xcorr_fft: channel count mismatch");
    if (tmpl.channel_count() == 0)
        throw std::invalid_argument("xcorr_fft: empty feature maps");
    const int tw = tmpl.width(), th = tmpl.height();
    const int sw = search.width(), sh = search.height();
    if (tw > sw || th > sh)
        throw std::invalid_argument("xcorr_fft: template larger than search region");

    std::vector<Cplx> acc(static_cast<std::size_t>(sw) * sh, Cplx(0.0, 0.0));
    for (int c = 0; c < tmpl.channel_count(); ++c) {
        const auto tf = forward_fft_padded(tmpl.channels[c], sw, sh);
        const auto sf = forward_fft_padded(search.channels[c], sw, sh);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(tf[i]) * sf[i];
    }
    fft_2d(acc, sw, sh, true);

    const int vw = sw - tw + 1;
    const int vh = sh - th + 1;
    Mat scores(vw, vh);
    for (int y = 0; y < vh; ++y)
        for (int x = 0; x < vw; ++x)
            scores.at(x, y) = acc[static_cast<std::size_t>(y) * sw + x].real();
    return make_response(std::move(scores));
}

Mat gaussian_label(int size, double sigma) {
    if (size < 1) throw std::invalid_argument("gaussian_label: size must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_label: sigma must be positive");
    const int c = size / 2;
    Mat y(size, size);
    for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i)
            y.at(i, j) = std::exp(-((i - c) * (i - c) + (j - c) * (j - c)) /
                                  (2.0 * sigma * sigma));
    return y;
}

Filter train_filter(const FeatureMap& exemplar, const Mat& label, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("train_filter: lambda must be >= 0");
    if (exemplar.channel_count() != 1)
        throw std::invalid_argument("train_filter: single-channel exemplar expected");
    const Mat& z = exemplar.channels[0];
    if (z.width != label.width || z.height != label.height)
        throw std::invalid_argument("train_filter: exemplar and label dims differ");

    const int w = z.width, h = z.height;
    auto zf = forward_fft_padded(z, w, h);
    auto yf = forward_fft_padded(label, w, h);
    Filter f;
    f.width = w;
    f.height = h;
    f.lambda = lambda;
    f.spectrum.resize(zf.size());
    for (std::size_t i = 0; i < zf.size(); ++i) {
        const Cplx zc = std::conj(zf[i]);
        f.spectrum[i] = (zc * yf[i]) / (zc * zf[i] + lambda);
    }
    return f;
}

ResponseMap filter_respond(const Filter& filter, const FeatureMap& search) {
    if (search.channel_count() != 1)
        throw std::invalid_argument("filter_respond: single-channel search expected");
    const Mat& x = search.channels[0];
    if (x.width != filter.width || x.height != filter.height)
        throw std::invalid_argument("filter_respond: search dims do not match filter");

    auto xf = forward_fft_padded(x, filter.width, filter.height);
    // The trained spectrum already carries the template-side conjugation,
    // so applying it is a plain product; the spatial result is the
    // circular correlation of the learned template with the search.
    for (std::size_t i = 0; i < xf.size(); ++i) xf[i] *= filter.spectrum[i];
    fft_2d(xf, filter.width, filter.height, true);

    Mat scores(filter.width, filter.height);
    for (std::size_t i = 0; i < scores.size(); ++i)
        scores.data[i] = filter.response_scale * xf[i].real() + filter.bias;
    return make_response(std::move(scores));
}

namespace {

void check_rate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("update_model: rate must lie in [0, 1]");
}

}  // namespace

Mat update_model(const Mat& old_model, const Mat& new_model, double rate) {
    check_rate(rate);
    if (!old_model.same_dims(new_model))
        throw std::invalid_argument("update_model: dimension mismatch");
    Mat out = old_model;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = (1.0 - rate) * old_model.data[i] + rate * new_model.data[i];
    return out;
}

FeatureMap update_model(const FeatureMap& old_model, const FeatureMap& new_model, double rate) {
    check_rate(rate);
    if (old_model.channel_count() != new_model.channel_count())
        throw std::invalid_argument("update_model: channel count mismatch");
    FeatureMap out;
    for (int c = 0; c < old_model.channel_count(); ++c)
        out.channels.push_back(update_model(old_model.channels[c], new_model.channels[c], rate));
    return out;
}

Filter update_model(const Filter& old_model, const Filter& new_model, double rate) {
    check_rate(rate);
    if (old_model.width != new_model.width || old_model.height != new_model.height)
        throw std::invalid_argument("update_model: dimension mismatch");
    Filter out = old_model;
    for (std::size_t i = 0; i < out.spectrum.size(); ++i)
        out.spectrum[i] = (1.0 - rate) * old_model.spectrum[i] + rate * new_model.spectrum[i];
    return out;
}

}  // namespace rotrack
