#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace spikelens {

namespace detail {

// Unbiased bounded draw; avoids distribution objects so sequences are
// identical across standard libraries.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

inline std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool,
                                                           std::size_t want,
                                                           std::mt19937_64& rng) {
    want = std::min(want, pool.size());
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(bounded(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(want);
    return pool;
}

}  // namespace detail

/// Seeded subset of dataset indices. With labels the pick is stratified per
/// digit (want/10 each, remainder to the low digits); without labels it is a
/// plain uniform sample.
inline std::vector<std::size_t> pick_cohort(
    std::size_t population, const std::optional<std::vector<std::uint8_t>>& labels,
    std::size_t want, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (!labels) {
        std::vector<std::size_t> all(population);
        for (std::size_t i = 0; i < population; ++i) all[i] = i;
        return detail::sample_without_replacement(std::move(all), want, rng);
    }
    std::vector<std::vector<std::size_t>> by_digit(10);
    for (std::size_t i = 0; i < labels->size(); ++i) by_digit[(*labels)[i]].push_back(i);
    std::vector<std::size_t> chosen;
    for (int d = 0; d < 10; ++d) {
        const std::size_t quota = want / 10 + (static_cast<std::size_t>(d) < want % 10 ? 1 : 0);
        auto part = detail::sample_without_replacement(std::move(by_digit[d]), quota, rng);
        chosen.insert(chosen.end(), part.begin(), part.end());
    }
    return chosen;
}

}  // namespace spikelens
