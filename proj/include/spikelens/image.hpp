#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "spikelens/errors.hpp"

namespace spikelens {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    std::uint8_t& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    bool empty() const { return width <= 0 || height <= 0; }

    bool operator==(const GrayImage&) const = default;
};

/// Real-valued image used between edge detection stages.
struct RealImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    RealImage() = default;
    RealImage(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int row, int col) const {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    double& at(int row, int col) {
        return values[static_cast<std::size_t>(row) * width + col];
    }
    bool empty() const { return width <= 0 || height <= 0; }
};

/// Binary edge mask; 1 = edge pixel.
struct EdgeImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;

    EdgeImage() = default;
    EdgeImage(int w, int h)
        : width(w), height(h), mask(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int row, int col) const {
        return mask[static_cast<std::size_t>(row) * width + col] != 0;
    }
    void set(int row, int col, bool v) {
        mask[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0;
    }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (auto m : mask) n += (m != 0);
        return n;
    }

    GrayImage to_gray() const {
        GrayImage out(width, height);
        for (std::size_t i = 0; i < mask.size(); ++i) out.pixels[i] = mask[i] ? 255 : 0;
        return out;
    }
};

/// Serializes as binary PGM (P5, maxval 255).
inline std::string write_pgm(const GrayImage& img) {
    std::string out = "P5\n" + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

namespace detail {

// Reads the next header token, skipping whitespace and #-comments.
inline std::string pgm_token(std::string_view bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#') {
        ++pos;
    }
    if (start == pos) throw TruncatedFile("pgm: header ended early");
    return std::string(bytes.substr(start, pos - start));
}

inline int pgm_int(std::string_view bytes, std::size_t& pos) {
    const std::string tok = pgm_token(bytes, pos);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw UnsupportedFormat("pgm: bad header field '" + tok + "'");
    }
}

}  // namespace detail

inline GrayImage read_pgm(std::string_view bytes) {
    std::size_t pos = 0;
    const std::string magic = detail::pgm_token(bytes, pos);
    if (magic != "P5") throw UnsupportedFormat("pgm: expected P5, got '" + magic + "'");
    const int w = detail::pgm_int(bytes, pos);
    const int h = detail::pgm_int(bytes, pos);
    const int maxval = detail::pgm_int(bytes, pos);
    if (w <= 0 || h <= 0) throw UnsupportedFormat("pgm: bad dimensions");
    if (maxval <= 0 || maxval > 255) {
        throw UnsupportedFormat("pgm: maxval " + std::to_string(maxval) + " unsupported");
    }
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size()) throw TruncatedFile("pgm: missing raster");
    ++pos;
    const std::size_t need = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos < need) throw TruncatedFile("pgm: raster shorter than width*height");
    GrayImage img(w, h);
    for (std::size_t i = 0; i < need; ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(bytes[pos + i]);
    }
    return img;
}

inline void save_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    const std::string bytes = write_pgm(img);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("short write to '" + path + "'");
}

inline GrayImage load_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return read_pgm(bytes);
}

}  // namespace spikelens
