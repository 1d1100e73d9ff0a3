#include "rotrack/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace rotrack {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_radix2(std::vector<Cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const Cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const Cplx u = a[i + j];
                const Cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Bluestein: DFT of arbitrary length via a power-of-two convolution.
void fft_bluestein(std::vector<Cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<Cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = Cplx(std::cos(ang), std::sin(ang));
    }
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<Cplx> f(m, Cplx(0.0, 0.0)), g(m, Cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) f[k] = a[k] * chirp[k];
    g[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) g[k] = g[m - k] = std::conj(chirp[k]);
    fft_radix2(f, false);
    fft_radix2(g, false);
    for (std::size_t k = 0; k < m; ++k) f[k] *= g[k];
    fft_radix2(f, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = f[k] * inv_m * chirp[k];
}

}  // namespace

void fft_1d(std::vector<Cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (is_pow2(n))
        fft_radix2(a, inverse);
    else
        fft_bluestein(a, inverse);
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (Cplx& v : a) v *= inv_n;
    }
}

void fft_2d(std::vector<Cplx>& a, int width, int height, bool inverse) {
    if (a.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("fft_2d: buffer does not match dimensions");
    std::vector<Cplx> row(static_cast<std::size_t>(width));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) row[x] = a[static_cast<std::size_t>(y) * width + x];
        fft_1d(row, inverse);
        for (int x = 0; x < width; ++x) a[static_cast<std::size_t>(y) * width + x] = row[x];
    }
    std::vector<Cplx> col(static_cast<std::size_t>(height));
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) col[y] = a[static_cast<std::size_t>(y) * width + x];
        fft_1d(col, inverse);
        for (int y = 0; y < height; ++y) a[static_cast<std::size_t>(y) * width + x] = col[y];
    }
}

}  // namespace rotrack
