#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <zlib.h>

#include "spikelens/errors.hpp"
#include "spikelens/image.hpp"

namespace spikelens {

/// A set of same-sized images with optional digit labels.
struct IdxDataset {
    std::vector<GrayImage> images;
    std::optional<std::vector<std::uint8_t>> labels;
};

namespace detail {

inline std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t off) {
    if (off + 4 > b.size()) throw TruncatedFile("idx: header shorter than expected");
    return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
           (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

inline std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& in) {
    z_stream strm{};
    if (inflateInit2(&strm, 16 + MAX_WBITS) != Z_OK) throw Error("zlib: inflateInit2 failed");
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buf(1 << 16);
    strm.next_in = const_cast<Bytef*>(in.data());
    strm.avail_in = static_cast<uInt>(in.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw TruncatedFile("gzip: corrupt or truncated stream");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - strm.avail_out));
        if (rc == Z_OK && strm.avail_in == 0 && strm.avail_out != 0) {
            inflateEnd(&strm);
            throw TruncatedFile("gzip: stream ended early");
        }
    }
    inflateEnd(&strm);
    return out;
}

}  // namespace detail

constexpr std::uint32_t kIdxImageMagic = 0x00000803;  // 2051
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;  // 2049

inline std::vector<GrayImage> parse_idx_images(const std::vector<std::uint8_t>& bytes) {
    const std::uint32_t magic = detail::read_be32(bytes, 0);
    if (magic != kIdxImageMagic) {
        throw WrongMagic("idx: magic " + std::to_string(magic) + " is not an image file (2051)");
    }
    const std::uint32_t n = detail::read_be32(bytes, 4);
    const std::uint32_t rows = detail::read_be32(bytes, 8);
    const std::uint32_t cols = detail::read_be32(bytes, 12);
    const std::size_t need = 16 + std::size_t(n) * rows * cols;
    if (bytes.size() < need) {
        throw TruncatedFile("idx: payload holds fewer than n*rows*cols pixels");
    }
    std::vector<GrayImage> images;
    images.reserve(n);
    std::size_t off = 16;
    for (std::uint32_t i = 0; i < n; ++i) {
        GrayImage img(static_cast<int>(cols), static_cast<int>(rows));
        std::copy(bytes.begin() + off, bytes.begin() + off + std::size_t(rows) * cols,
                  img.pixels.begin());
        off += std::size_t(rows) * cols;
        images.push_back(std::move(img));
    }
    return images;
}

inline std::vector<std::uint8_t> parse_idx_labels(const std::vector<std::uint8_t>& bytes) {
    const std::uint32_t magic = detail::read_be32(bytes, 0);
    if (magic != kIdxLabelMagic) {
        throw WrongMagic("idx: magic " + std::to_string(magic) + " is not a label file (2049)");
    }
    const std::uint32_t n = detail::read_be32(bytes, 4);
    if (bytes.size() < 8 + std::size_t(n)) {
        throw TruncatedFile("idx: payload holds fewer than n labels");
    }
    std::vector<std::uint8_t> labels(bytes.begin() + 8, bytes.begin() + 8 + n);
    for (auto l : labels) {
        if (l > 9) throw LabelOutOfRange("idx: label " + std::to_string(l) + " outside [0,9]");
    }
    return labels;
}

/// Reads a file, transparently gunzipping when the 2-byte gzip magic is present.
inline std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        return detail::gunzip(bytes);
    }
    return bytes;
}

inline std::vector<GrayImage> load_idx_images(const std::string& path) {
    return parse_idx_images(read_binary_file(path));
}

inline std::vector<std::uint8_t> load_idx_labels(const std::string& path) {
    return parse_idx_labels(read_binary_file(path));
}

inline IdxDataset load_dataset(const std::string& images_path,
                               const std::optional<std::string>& labels_path) {
    IdxDataset ds;
    ds.images = load_idx_images(images_path);
    if (labels_path) {
        ds.labels = load_idx_labels(*labels_path);
        if (ds.labels->size() != ds.images.size()) {
            throw Error("dataset: image count " + std::to_string(ds.images.size()) +
                        " != label count " + std::to_string(ds.labels->size()));
        }
    }
    return ds;
}

}  // namespace spikelens
