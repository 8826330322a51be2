#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "spikelens/codec.hpp"
#include "spikelens/errors.hpp"
#include "spikelens/format.hpp"
#include "spikelens/metrics.hpp"

namespace spikelens {

/// One grid cell: per-image means of every metric, plus the fitness of the
/// averaged metrics as a second aggregation.
struct SweepCell {
    double sampling_threshold = 0.0;
    double encoding_threshold = 0.0;
    double mean_rmse = std::numeric_limits<double>::quiet_NaN();
    double mean_snr_db = std::numeric_limits<double>::quiet_NaN();
    double mean_afr = std::numeric_limits<double>::quiet_NaN();
    double mean_spike_count = std::numeric_limits<double>::quiet_NaN();
    double mean_fitness = std::numeric_limits<double>::quiet_NaN();
    double fitness_of_means = std::numeric_limits<double>::quiet_NaN();
    std::string error;  // nonempty when any signal failed in this cell

    bool usable() const { return error.empty() && std::isfinite(mean_fitness); }
};

struct SweepGrid {
    Method method = Method::SF;
    bool adaptive = false;
    std::vector<double> sampling_axis;
    std::vector<double> encoding_axis;
    std::vector<SweepCell> cells;  // row-major, sampling outer
    std::pair<double, double> best;  // (sampling_threshold, encoding_threshold)

    const SweepCell& cell(std::size_t si, std::size_t ei) const {
        return cells[si * encoding_axis.size() + ei];
    }
};

/// Default grid: thresholds 0.1 to 2.0 in 0.1 steps, both axes.
inline std::pair<std::vector<double>, std::vector<double>> default_axes() {
    std::vector<double> axis(20);
    for (int i = 1; i <= 20; ++i) axis[i - 1] = static_cast<double>(i) / 10.0;
    return {axis, axis};
}

/// Number of worker threads: SPIKELENS_THREADS when set, otherwise the
/// hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("SPIKELENS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace detail {

// Fixed reduction tree so sums do not depend on scheduling.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.subspan(0, mid)) + pairwise_sum(v.subspan(mid));
}

inline double pairwise_mean(const std::vector<double>& v) {
    return pairwise_sum(v) / static_cast<double>(v.size());
}

inline void evaluate_cell(const std::vector<std::vector<double>>& dataset,
                          const EncodingConfig& cfg, FitnessParams params, SweepCell& cell) {
    std::vector<double> rmses, snrs, afrs, spikes, fitnesses;
    rmses.reserve(dataset.size());
    snrs.reserve(dataset.size());
    afrs.reserve(dataset.size());
    spikes.reserve(dataset.size());
    fitnesses.reserve(dataset.size());
    for (const auto& signal : dataset) {
        try {
            const SpikeTrain train = encode(signal, cfg);
            const std::vector<double> recon = decode(train);
            const MetricsReport report = evaluate(signal, recon, train, params);
            rmses.push_back(report.rmse);
            snrs.push_back(report.snr_db);
            afrs.push_back(report.afr);
            spikes.push_back(static_cast<double>(report.spike_count));
            fitnesses.push_back(report.fitness);
        } catch (const Error& e) {
            cell.error = e.what();
            return;
        }
    }
    cell.mean_rmse = pairwise_mean(rmses);
    cell.mean_snr_db = pairwise_mean(snrs);
    cell.mean_afr = pairwise_mean(afrs);
    cell.mean_spike_count = pairwise_mean(spikes);
    cell.mean_fitness = pairwise_mean(fitnesses);
    try {
        cell.fitness_of_means = fitness(cell.mean_snr_db, cell.mean_rmse,
                                        cell.mean_spike_count, params);
    } catch (const UndefinedFitness&) {
        // leave NaN
    }
}

}  // namespace detail

/// Evaluates every (sampling, encoding) threshold pair over the dataset.
/// Cells run in parallel; each aggregates its images in a fixed order, so
/// results do not depend on the schedule. Non-adaptive sweeps collapse the
/// sampling axis to a single unused 0.0 entry.
inline SweepGrid grid_sweep(const std::vector<std::vector<double>>& dataset, Method method,
                            bool adaptive, std::vector<double> sampling_axis,
                            std::vector<double> encoding_axis, FitnessParams params = {}) {
    if (dataset.empty()) throw EmptyDataset("grid_sweep: no signals");
    if (encoding_axis.empty() || (adaptive && sampling_axis.empty())) {
        throw Error("grid_sweep: empty threshold axis");
    }
    SweepGrid grid;
    grid.method = method;
    grid.adaptive = adaptive;
    grid.sampling_axis = adaptive ? std::move(sampling_axis) : std::vector<double>{0.0};
    grid.encoding_axis = std::move(encoding_axis);
    grid.cells.resize(grid.sampling_axis.size() * grid.encoding_axis.size());
    for (std::size_t si = 0; si < grid.sampling_axis.size(); ++si) {
        for (std::size_t ei = 0; ei < grid.encoding_axis.size(); ++ei) {
            auto& cell = grid.cells[si * grid.encoding_axis.size() + ei];
            cell.sampling_threshold = grid.sampling_axis[si];
            cell.encoding_threshold = grid.encoding_axis[ei];
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < grid.cells.size(); k = next.fetch_add(1)) {
            auto& cell = grid.cells[k];
            EncodingConfig cfg;
            cfg.method = method;
            cfg.adaptive = adaptive;
            cfg.sampling_threshold = adaptive ? cell.sampling_threshold : 1.0;
            cfg.encoding_threshold = cell.encoding_threshold;
            detail::evaluate_cell(dataset, cfg, params, cell);
        }
    };
    const unsigned budget =
        std::min<std::size_t>(thread_budget(), grid.cells.size());
    if (budget <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(budget);
        for (unsigned i = 0; i < budget; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    const SweepCell* best = nullptr;
    for (const auto& cell : grid.cells) {
        if (!cell.usable()) continue;
        if (!best || cell.mean_fitness > best->mean_fitness ||
            (cell.mean_fitness == best->mean_fitness &&
             (cell.encoding_threshold < best->encoding_threshold ||
              (cell.encoding_threshold == best->encoding_threshold &&
               cell.sampling_threshold < best->sampling_threshold)))) {
            best = &cell;
        }
    }
    if (!best) throw NoFiniteCell("grid_sweep: no cell produced a finite fitness");
    grid.best = {best->sampling_threshold, best->encoding_threshold};
    return grid;
}

inline std::string write_sweep_csv(const SweepGrid& grid) {
    std::string out = "sampling_threshold,encoding_threshold,rmse,snr_db,afr,spike_count,fitness\n";
    for (const auto& cell : grid.cells) {
        out += fmt_threshold(cell.sampling_threshold);
        out += ',';
        out += fmt_threshold(cell.encoding_threshold);
        out += ',';
        out += fmt_g6(cell.mean_rmse);
        out += ',';
        out += fmt_g6(cell.mean_snr_db);
        out += ',';
        out += fmt_g6(cell.mean_afr);
        out += ',';
        out += fmt_g6(cell.mean_spike_count);
        out += ',';
        out += fmt_g6(cell.mean_fitness);
        out += '\n';
    }
    return out;
}

}  // namespace spikelens
