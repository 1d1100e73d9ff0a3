#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotrack/geometry.hpp"
#include "rotrack/mat.hpp"

namespace rotrack {

// Grayscale image, luminance in [0, 255], row major.
struct Image {
    Mat pixels;

    Image() = default;
    explicit Image(Mat m) : pixels(std::move(m)) {}
    Image(int w, int h, double fill = 0.0) : pixels(w, h, fill) {}

    int width() const { return pixels.width; }
    int height() const { return pixels.height; }
    double at(int x, int y) const { return pixels.at(x, y); }
    double& at(int x, int y) { return pixels.at(x, y); }
};

// Image patch plus the crop/warp provenance it was produced with.
struct Patch {
    Mat pixels;
    Point2 source_center;
    double source_size = 0.0;  // side length of the sampled region, image pixels
    Angle rotation;            // rotation applied on top of the crop
    double scale = 1.0;        // scale applied on top of the crop

    int width() const { return pixels.width; }
    int height() const { return pixels.height; }
};

enum class PgmErrorKind {
    UnsupportedFormat,
    MalformedHeader,
    UnsupportedMaxval,
    TruncatedPayload,
};

class PgmError : public std::runtime_error {
  public:
    PgmError(PgmErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    PgmErrorKind kind() const { return kind_; }

  private:
    PgmErrorKind kind_;
};

// Binary PGM (P5), maxval 255. Comment lines after the magic are
// accepted on read; writes never emit comments. Round-trips bit-exactly.
Image read_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_pgm(const Image& img);

Image read_pgm_file(const std::string& path);
void write_pgm_file(const Image& img, const std::string& path);

// size x size crop centered (nearest pixel) at `center`; samples outside
// the image take `pad_value`.
Patch extract_patch(const Image& img, Point2 center, int size, double pad_value);

// Crop-and-resize: samples a src_size x src_size region centered at
// `center` onto an out_size x out_size grid with bilinear interpolation.
Patch extract_patch_scaled(const Image& img, Point2 center, double src_size,
                           int out_size, double pad_value);

// Rotates the patch content by `angle` and scales it by `scale`, both
// about the patch center; output has the input dimensions. Samples
// falling outside the input take the patch mean.
Patch warp_rotate_scale(const Patch& patch, Angle angle, double scale);

// Separable Hann window; the factor is 1 along any axis of length 1.
Mat cosine_window(int width, int height);

}  // namespace rotrack
