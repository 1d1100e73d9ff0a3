#include "rotrack/image.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rotrack {

namespace {

bool is_pgm_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Reads the next header token, skipping whitespace and '#' comment lines.
bool next_token(const std::vector<std::uint8_t>& b, std::size_t& pos, std::string& tok) {
    while (pos < b.size()) {
        if (is_pgm_space(b[pos])) {
            ++pos;
        } else if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else {
            break;
        }
    }
    tok.clear();
    while (pos < b.size() && !is_pgm_space(b[pos]) && b[pos] != '#') {
        tok.push_back(static_cast<char>(b[pos]));
        ++pos;
    }
    return !tok.empty();
}

int parse_header_int(const std::string& tok, const char* field) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        throw PgmError(PgmErrorKind::MalformedHeader,
                       std::string("pgm: malformed ") + field + " '" + tok + "'");
    }
    if (used != tok.size() || v <= 0)
        throw PgmError(PgmErrorKind::MalformedHeader,
                       std::string("pgm: malformed ") + field + " '" + tok + "'");
    return v;
}

}  // namespace

Image read_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        std::string magic(bytes.begin(), bytes.begin() + std::min<std::size_t>(2, bytes.size()));
        throw PgmError(PgmErrorKind::UnsupportedFormat,
                       "pgm: unsupported magic '" + magic + "', expected P5");
    }
    std::size_t pos = 2;
    std::string tok;
    if (!next_token(bytes, pos, tok))
        throw PgmError(PgmErrorKind::MalformedHeader, "pgm: missing width");
    const int w = parse_header_int(tok, "width");
    if (!next_token(bytes, pos, tok))
        throw PgmError(PgmErrorKind::MalformedHeader, "pgm: missing height");
    const int h = parse_header_int(tok, "height");
    if (!next_token(bytes, pos, tok))
        throw PgmError(PgmErrorKind::MalformedHeader, "pgm: missing maxval");
    const int maxval = parse_header_int(tok, "maxval");
    if (maxval != 255)
        throw PgmError(PgmErrorKind::UnsupportedMaxval,
                       "pgm: maxval " + std::to_string(maxval) + " unsupported, expected 255");
    if (pos >= bytes.size() || !is_pgm_space(bytes[pos]))
        throw PgmError(PgmErrorKind::MalformedHeader, "pgm: missing separator after maxval");
    ++pos;  // exactly one whitespace byte before the payload

    const std::size_t need = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos < need)
        throw PgmError(PgmErrorKind::TruncatedPayload,
                       "pgm: payload has " + std::to_string(bytes.size() - pos) +
                           " bytes, expected " + std::to_string(need));
    Image img(w, h);
    for (std::size_t i = 0; i < need; ++i)
        img.pixels.data[i] = static_cast<double>(bytes[pos + i]);
    return img;
}

std::vector<std::uint8_t> write_pgm(const Image& img) {
    std::ostringstream header;
    header << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    const std::string h = header.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    out.reserve(out.size() + img.pixels.size());
    for (double v : img.pixels.data) {
        double r = std::nearbyint(v);
        if (r < 0.0) r = 0.0;
        if (r > 255.0) r = 255.0;
        out.push_back(static_cast<std::uint8_t>(r));
    }
    return out;
}

Image read_pgm_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return read_pgm(bytes);
}

void write_pgm_file(const Image& img, const std::string& path) {
    const auto bytes = write_pgm(img);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

Patch extract_patch(const Image& img, Point2 center, int size, double pad_value) {
    if (size <= 0) throw std::invalid_argument("extract_patch: size must be positive");
    const int cx = static_cast<int>(std::lround(center.x));
    const int cy = static_cast<int>(std::lround(center.y));
    const int x0 = cx - size / 2;
    const int y0 = cy - size / 2;
    Patch p;
    p.pixels = Mat(size, size);
    p.source_center = center;
    p.source_size = size;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const int sx = x0 + x;
            const int sy = y0 + y;
            const bool inside = sx >= 0 && sx < img.width() && sy >= 0 && sy < img.height();
            p.pixels.at(x, y) = inside ? img.at(sx, sy) : pad_value;
        }
    }
    return p;
}

namespace {

double bilinear_sample(const Mat& m, double x, double y, double fill) {
    // snap roundoff-level overshoot onto the border instead of filling
    constexpr double kEdgeEps = 1e-9;
    if (x > -kEdgeEps && x < 0.0) x = 0.0;
    if (y > -kEdgeEps && y < 0.0) y = 0.0;
    if (x > m.width - 1 && x < m.width - 1 + kEdgeEps) x = m.width - 1;
    if (y > m.height - 1 && y < m.height - 1 + kEdgeEps) y = m.height - 1;
    if (x < 0.0 || y < 0.0 || x > m.width - 1 || y > m.height - 1) return fill;
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, m.width - 1);
    const int y1 = std::min(y0 + 1, m.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = m.at(x0, y0) * (1.0 - fx) + m.at(x1, y0) * fx;
    const double bot = m.at(x0, y1) * (1.0 - fx) + m.at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

}  // namespace

Patch extract_patch_scaled(const Image& img, Point2 center, double src_size,
                           int out_size, double pad_value) {
    if (out_size <= 0) throw std::invalid_argument("extract_patch_scaled: out_size must be positive");
    if (!(src_size > 0.0)) throw std::invalid_argument("extract_patch_scaled: src_size must be positive");
    Patch p;
    p.pixels = Mat(out_size, out_size);
    p.source_center = center;
    p.source_size = src_size;
    const double step = src_size / out_size;
    const double half = (out_size - 1) / 2.0;
    for (int y = 0; y < out_size; ++y) {
        for (int x = 0; x < out_size; ++x) {
            const double sx = center.x + (x - half) * step;
            const double sy = center.y + (y - half) * step;
            p.pixels.at(x, y) = bilinear_sample(img.pixels, sx, sy, pad_value);
        }
    }
    return p;
}

Patch warp_rotate_scale(const Patch& patch, Angle angle, double scale) {
    if (!(scale >= 0.1 && scale <= 10.0))
        throw std::invalid_argument("warp_rotate_scale: scale must lie in [0.1, 10]");
    const double fill = mat_mean(patch.pixels);
    const double c = std::cos(angle.radians());
    const double s = std::sin(angle.radians());
    const double cx = (patch.width() - 1) / 2.0;
    const double cy = (patch.height() - 1) / 2.0;
    Patch out = patch;
    out.rotation = wrap_angle(patch.rotation.degrees() + angle.degrees());
    out.scale = patch.scale * scale;
    for (int y = 0; y < patch.height(); ++y) {
        for (int x = 0; x < patch.width(); ++x) {
            // inverse map: rotate by -angle, scale by 1/scale about the center
            const double dx = (x - cx) / scale;
            const double dy = (y - cy) / scale;
            const double sx = cx + dx * c + dy * s;
            const double sy = cy - dx * s + dy * c;
            out.pixels.at(x, y) = bilinear_sample(patch.pixels, sx, sy, fill);
        }
    }
    return out;
}

Mat cosine_window(int width, int height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("cosine_window: dimensions must be >= 1");
    constexpr double kPi = 3.14159265358979323846;
    auto hann = [&](int k, int n) {
        if (n == 1) return 1.0;
        return 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n - 1)));
    };
    Mat w(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            w.at(x, y) = hann(x, width) * hann(y, height);
    return w;
}

}  // namespace rotrack
