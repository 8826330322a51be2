#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "spikelens/canny.hpp"
#include "spikelens/errors.hpp"
#include "spikelens/format.hpp"
#include "spikelens/image.hpp"

namespace spikelens {

/// The X and Y coordinate signals of an image, raster-scan order.
struct CoordSignalPair {
    std::vector<double> x;
    std::vector<double> y;
    int source_width = 0;
    int source_height = 0;
};

/// Appends the column/row of every pixel with intensity > 0, rows outer,
/// columns inner, so y comes out sorted non-decreasing.
inline CoordSignalPair extract_coordinates(const GrayImage& img) {
    CoordSignalPair sig;
    sig.source_width = img.width;
    sig.source_height = img.height;
    for (int row = 0; row < img.height; ++row) {
        for (int col = 0; col < img.width; ++col) {
            if (img.at(row, col) > 0) {
                sig.x.push_back(col);
                sig.y.push_back(row);
            }
        }
    }
    return sig;
}

inline CoordSignalPair extract_coordinates(const EdgeImage& img) {
    CoordSignalPair sig;
    sig.source_width = img.width;
    sig.source_height = img.height;
    for (int row = 0; row < img.height; ++row) {
        for (int col = 0; col < img.width; ++col) {
            if (img.at(row, col)) {
                sig.x.push_back(col);
                sig.y.push_back(row);
            }
        }
    }
    return sig;
}

/// Rasterizes coordinate signals back onto a blank canvas. Values are
/// rounded half away from zero and clamped into the canvas.
inline GrayImage signals_to_image(const CoordSignalPair& sig) {
    GrayImage img(sig.source_width, sig.source_height);
    for (std::size_t i = 0; i < sig.x.size(); ++i) {
        int col = static_cast<int>(std::round(sig.x[i]));
        int row = static_cast<int>(std::round(sig.y[i]));
        col = detail::clampi(col, 0, sig.source_width - 1);
        row = detail::clampi(row, 0, sig.source_height - 1);
        img.at(row, col) = 255;
    }
    return img;
}

/// Fraction by which Canny edge signals are shorter than the raw-image
/// signals over a dataset: 1 - total_edge_length / total_raw_length.
inline double length_reduction(const std::vector<GrayImage>& dataset,
                               double low = kCannyDefaultLow,
                               double high = kCannyDefaultHigh) {
    if (dataset.empty()) throw EmptyDataset("length_reduction: no images");
    std::size_t raw_total = 0;
    std::size_t edge_total = 0;
    for (const auto& img : dataset) {
        for (auto p : img.pixels) raw_total += (p > 0);
        edge_total += canny(img, low, high).edge_count();
    }
    if (raw_total == 0) {
        throw EmptyDataset("length_reduction: dataset has no nonzero pixels");
    }
    return 1.0 - static_cast<double>(edge_total) / static_cast<double>(raw_total);
}

inline std::string write_signals_csv(const CoordSignalPair& sig) {
    std::string out = "index,x,y\n";
    for (std::size_t i = 0; i < sig.x.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += fmt_g6(sig.x[i]);
        out += ',';
        out += fmt_g6(sig.y[i]);
        out += '\n';
    }
    return out;
}

/// Parses the `index,x,y` CSV back into a signal pair. Source dimensions
/// are not stored in the CSV and come back as 0.
inline CoordSignalPair read_signals_csv(std::string_view text) {
    CoordSignalPair sig;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,x,y", 0) != 0) {
        throw UnsupportedFormat("signals csv: missing 'index,x,y' header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw UnsupportedFormat("signals csv: malformed row '" + line + "'");
        }
        sig.x.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        sig.y.push_back(std::stod(line.substr(c2 + 1)));
    }
    return sig;
}

}  // namespace spikelens
