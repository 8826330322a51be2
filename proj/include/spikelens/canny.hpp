#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <utility>

#include "spikelens/errors.hpp"
#include "spikelens/image.hpp"

namespace spikelens {

/// Gradient magnitude and direction (radians) per pixel.
struct GradientField {
    RealImage magnitude;
    RealImage direction;
};

inline constexpr double kCannyDefaultLow = 100.0;
inline constexpr double kCannyDefaultHigh = 200.0;
inline constexpr double kGaussianSigma = 1.4;

namespace detail {

inline const std::array<double, 25>& gaussian_kernel_5x5() {
    static const std::array<double, 25> kernel = [] {
        std::array<double, 25> k{};
        double sum = 0.0;
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                const double v =
                    std::exp(-(dx * dx + dy * dy) / (2.0 * kGaussianSigma * kGaussianSigma));
                k[(dy + 2) * 5 + (dx + 2)] = v;
                sum += v;
            }
        }
        for (auto& v : k) v /= sum;
        return k;
    }();
    return kernel;
}

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Offset along the quantized gradient direction; angle in radians.
inline std::pair<int, int> direction_offset(double angle) {
    double deg = angle * 180.0 / M_PI;
    if (deg < 0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    if (deg < 22.5 || deg >= 157.5) return {1, 0};   // horizontal gradient
    if (deg < 67.5) return {1, 1};                   // diagonal
    if (deg < 112.5) return {0, 1};                  // vertical
    return {-1, 1};                                  // anti-diagonal
}

}  // namespace detail

/// 5x5 Gaussian smoothing (sigma 1.4), borders edge-replicated.
inline RealImage gaussian_blur(const GrayImage& img) {
    if (img.empty()) throw EmptyImage("gaussian_blur: empty image");
    const auto& kernel = detail::gaussian_kernel_5x5();
    RealImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dy = -2; dy <= 2; ++dy) {
                const int sy = detail::clampi(y + dy, 0, img.height - 1);
                for (int dx = -2; dx <= 2; ++dx) {
                    const int sx = detail::clampi(x + dx, 0, img.width - 1);
                    acc += kernel[(dy + 2) * 5 + (dx + 2)] * img.at(sy, sx);
                }
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

/// 3x3 Sobel derivatives, borders edge-replicated.
inline GradientField sobel_gradients(const RealImage& img) {
    if (img.empty()) throw EmptyImage("sobel_gradients: empty image");
    static constexpr int kSobelX[9] = {-1, 0, 1, -2, 0, 2, -1, 0, 1};
    static constexpr int kSobelY[9] = {-1, -2, -1, 0, 0, 0, 1, 2, 1};
    GradientField field;
    field.magnitude = RealImage(img.width, img.height);
    field.direction = RealImage(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double gx = 0.0, gy = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int sy = detail::clampi(y + dy, 0, img.height - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = detail::clampi(x + dx, 0, img.width - 1);
                    const double v = img.at(sy, sx);
                    gx += kSobelX[(dy + 1) * 3 + (dx + 1)] * v;
                    gy += kSobelY[(dy + 1) * 3 + (dx + 1)] * v;
                }
            }
            field.magnitude.at(y, x) = std::sqrt(gx * gx + gy * gy);
            field.direction.at(y, x) = std::atan2(gy, gx);
        }
    }
    return field;
}

/// Keeps pixels that are >= both neighbors along the quantized gradient
/// direction (ties kept). Border pixels never survive.
inline RealImage nonmax_suppress(const GradientField& g) {
    if (g.magnitude.empty()) throw EmptyImage("nonmax_suppress: empty field");
    const int w = g.magnitude.width, h = g.magnitude.height;
    RealImage out(w, h, 0.0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double mag = g.magnitude.at(y, x);
            const auto [dx, dy] = detail::direction_offset(g.direction.at(y, x));
            const double a = g.magnitude.at(y + dy, x + dx);
            const double b = g.magnitude.at(y - dy, x - dx);
            if (mag >= a && mag >= b) out.at(y, x) = mag;
        }
    }
    return out;
}

/// Double-threshold edge selection: pixels >= high seed a flood fill over
/// 8-connected pixels >= low.
inline EdgeImage hysteresis(const RealImage& img, double low, double high) {
    if (img.empty()) throw EmptyImage("hysteresis: empty image");
    if (low < 0 || low > high) {
        throw InvalidThresholds("hysteresis: need 0 <= low <= high");
    }
    const int w = img.width, h = img.height;
    EdgeImage out(w, h);
    std::queue<std::pair<int, int>> frontier;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (img.at(y, x) >= high) {
                out.set(y, x, true);
                frontier.emplace(x, y);
            }
        }
    }
    while (!frontier.empty()) {
        const auto [cx, cy] = frontier.front();
        frontier.pop();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                if (!out.at(ny, nx) && img.at(ny, nx) >= low) {
                    out.set(ny, nx, true);
                    frontier.emplace(nx, ny);
                }
            }
        }
    }
    return out;
}

/// Full Canny pipeline: blur -> Sobel -> non-maximum suppression ->
/// hysteresis. Magnitudes are clamped to 255 before thresholding so the
/// low/high thresholds live on the familiar [0,255] scale.
inline EdgeImage canny(const GrayImage& img, double low = kCannyDefaultLow,
                       double high = kCannyDefaultHigh) {
    const RealImage blurred = gaussian_blur(img);
    const GradientField field = sobel_gradients(blurred);
    RealImage thinned = nonmax_suppress(field);
    for (auto& v : thinned.values) v = std::min(v, 255.0);
    return hysteresis(thinned, low, high);
}

}  // namespace spikelens
