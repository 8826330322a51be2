#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "spikelens/idx.hpp"
#include "spikelens/signals.hpp"

using namespace spikelens;
using Catch::Approx;

#ifndef TEST_DATA_DIR
#error "TEST_DATA_DIR must point at the fixture directory"
#endif

namespace {
const std::string kDataDir = TEST_DATA_DIR;
}

TEST_CASE("extract_coordinates scans rows outer, columns inner") {
    GrayImage img(3, 3);
    img.at(0, 1) = 10;
    img.at(2, 2) = 255;
    const CoordSignalPair sig = extract_coordinates(img);
    CHECK(sig.x == std::vector<double>{1.0, 2.0});
    CHECK(sig.y == std::vector<double>{0.0, 2.0});
    CHECK(sig.source_width == 3);
    CHECK(sig.source_height == 3);
}

TEST_CASE("extract_coordinates of an all-zero image is empty") {
    const CoordSignalPair sig = extract_coordinates(GrayImage(4, 4));
    CHECK(sig.x.empty());
    CHECK(sig.y.empty());
}

TEST_CASE("extracted signals have edge-count length and sorted y") {
    const auto images = load_idx_images(kDataDir + "/images.idx.gz");
    for (int i = 0; i < 5; ++i) {
        const EdgeImage edges = canny(images[i]);
        const CoordSignalPair sig = extract_coordinates(edges);
        CHECK(sig.x.size() == edges.edge_count());
        CHECK(sig.x.size() == sig.y.size());
        for (std::size_t k = 1; k < sig.y.size(); ++k) CHECK(sig.y[k] >= sig.y[k - 1]);
    }
}

TEST_CASE("signals_to_image inverts extraction") {
    CoordSignalPair sig;
    sig.x = {1.0, 2.0};
    sig.y = {0.0, 2.0};
    sig.source_width = 3;
    sig.source_height = 3;
    const GrayImage img = signals_to_image(sig);
    int set = 0;
    for (auto p : img.pixels) set += (p == 255);
    CHECK(set == 2);
    CHECK(img.at(0, 1) == 255);
    CHECK(img.at(2, 2) == 255);
}

TEST_CASE("extract then rasterize is the identity on binary images") {
    std::mt19937 rng(8);
    for (int it = 0; it < 20; ++it) {
        GrayImage img(10, 8);
        for (auto& p : img.pixels) p = (rng() % 4 == 0) ? 255 : 0;
        const GrayImage back = signals_to_image(extract_coordinates(img));
        CHECK(back == img);
    }
    const auto images = load_idx_images(kDataDir + "/images.idx.gz");
    const GrayImage edge_gray = canny(images[0]).to_gray();
    CHECK(signals_to_image(extract_coordinates(edge_gray)) == edge_gray);
}

TEST_CASE("reconstructed coordinates round half away from zero and clamp") {
    CoordSignalPair sig;
    sig.source_width = 28;
    sig.source_height = 28;
    sig.x = {1.4, 0.5, 1.5, 27.7, -0.6};
    sig.y = {0.0, 0.0, 0.0, 0.0, 0.0};
    const GrayImage img = signals_to_image(sig);
    CHECK(img.at(0, 1) == 255);   // 1.4 -> 1
    CHECK(img.at(0, 2) == 255);   // 1.5 -> 2 (away from zero); 0.5 -> 1... also set
    CHECK(img.at(0, 27) == 255);  // 27.7 -> 28, clamped to 27
    CHECK(img.at(0, 0) == 255);   // -0.6 -> -1, clamped to 0
}

TEST_CASE("length_reduction equals the recomposed ratio") {
    const auto images = load_idx_images(kDataDir + "/images.idx.gz");
    std::vector<GrayImage> subset(images.begin(), images.begin() + 20);
    std::size_t raw = 0, edge = 0;
    for (const auto& img : subset) {
        for (auto p : img.pixels) raw += (p > 0);
        edge += canny(img).edge_count();
    }
    CHECK(length_reduction(subset) ==
          Approx(1.0 - double(edge) / double(raw)).margin(1e-12));
}

TEST_CASE("length_reduction rejects degenerate datasets") {
    CHECK_THROWS_AS(length_reduction({}), EmptyDataset);
    std::vector<GrayImage> zeros{GrayImage(8, 8), GrayImage(8, 8)};
    CHECK_THROWS_AS(length_reduction(zeros), EmptyDataset);
}

TEST_CASE("length_reduction lands near the edge-vs-raw statistic") {
    const auto images = load_idx_images(kDataDir + "/images.idx.gz");
    std::vector<GrayImage> subset(images.begin(), images.begin() + 100);
    const double reduction = length_reduction(subset);
    CHECK(reduction > 0.25);
    CHECK(reduction < 0.60);
}

TEST_CASE("signals CSV round-trips") {
    CoordSignalPair sig;
    sig.x = {1.0, 5.0, 27.0};
    sig.y = {0.0, 3.0, 14.0};
    const std::string csv = write_signals_csv(sig);
    CHECK(csv.rfind("index,x,y\n", 0) == 0);
    const CoordSignalPair back = read_signals_csv(csv);
    CHECK(back.x == sig.x);
    CHECK(back.y == sig.y);
    CHECK_THROWS_AS(read_signals_csv("x,y\n1,2\n"), UnsupportedFormat);
}
