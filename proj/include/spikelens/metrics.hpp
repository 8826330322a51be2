#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "spikelens/codec.hpp"
#include "spikelens/errors.hpp"
#include "spikelens/format.hpp"

namespace spikelens {

struct FitnessParams {
    double m = 1.0;  // exponent on RMSE
    double n = 1.0;  // exponent on spike count
};

struct MetricsReport {
    double rmse = 0.0;
    double snr_db = 0.0;
    double afr = 0.0;
    std::int64_t spike_count = 0;
    double fitness = 0.0;
};

inline double rmse(std::span<const double> s, std::span<const double> r) {
    if (s.size() != r.size()) throw LengthMismatch("rmse: signal lengths differ");
    if (s.empty()) throw EmptySignal("rmse: empty signals");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = s[i] - r[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(s.size()));
}

namespace detail {

inline double power(std::span<const double> s) {
    double acc = 0.0;
    for (double v : s) acc += v * v;
    return acc / static_cast<double>(s.size());
}

}  // namespace detail

/// 20*log10(Power(s)/Power(s-r)) in dB; +infinity for a perfect
/// reconstruction.
inline double snr_db(std::span<const double> s, std::span<const double> r) {
    if (s.size() != r.size()) throw LengthMismatch("snr: signal lengths differ");
    if (s.empty()) throw EmptySignal("snr: empty signals");
    const double signal_power = detail::power(s);
    if (signal_power == 0.0) throw ZeroSignalPower("snr: original signal is all zeros");
    double error_power = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = s[i] - r[i];
        error_power += d * d;
    }
    error_power /= static_cast<double>(s.size());
    if (error_power == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(signal_power / error_power);
}

/// Fraction of timesteps carrying a spike.
inline double afr(const SpikeTrain& train) {
    if (train.spikes.empty()) throw EmptyTrain("afr: empty spike train");
    std::int64_t nonzero = 0;
    for (auto sp : train.spikes) nonzero += (sp != 0);
    return static_cast<double>(nonzero) / static_cast<double>(train.spikes.size());
}

inline std::int64_t spike_count(const SpikeTrain& train) {
    std::int64_t nonzero = 0;
    for (auto sp : train.spikes) nonzero += (sp != 0);
    return nonzero;
}

/// SNR / (RMSE^m * SpikeCount^n). A zero denominator with positive finite
/// SNR yields the +infinity sentinel; with non-positive or non-finite SNR
/// the value is undefined.
inline double fitness(double snr, double rmse_value, double spikes, FitnessParams params = {}) {
    const double denom = std::pow(rmse_value, params.m) * std::pow(spikes, params.n);
    if (denom == 0.0) {
        if (std::isfinite(snr) && snr > 0.0) return std::numeric_limits<double>::infinity();
        throw UndefinedFitness("fitness: zero denominator with non-finite or non-positive SNR");
    }
    return snr / denom;
}

/// Bundles all metrics for one original/reconstructed pair and its spike
/// train. Signal metrics are computed on the original-length sequences;
/// spike metrics on the full train. Never throws for an undefined fitness:
/// a perfect reconstruction reports the +infinity sentinel, other undefined
/// combinations report NaN.
inline MetricsReport evaluate(std::span<const double> s, std::span<const double> r,
                              const SpikeTrain& train, FitnessParams params = {}) {
    MetricsReport report;
    report.rmse = rmse(s, r);
    report.snr_db = snr_db(s, r);
    report.afr = afr(train);
    report.spike_count = spike_count(train);
    try {
        report.fitness = fitness(report.snr_db, report.rmse,
                                 static_cast<double>(report.spike_count), params);
    } catch (const UndefinedFitness&) {
        report.fitness = report.rmse == 0.0 ? std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

inline std::string metrics_csv_header() { return "rmse,snr_db,afr,spike_count,fitness"; }

inline std::string metrics_csv_row(const MetricsReport& report) {
    return fmt_g6(report.rmse) + "," + fmt_g6(report.snr_db) + "," + fmt_g6(report.afr) + "," +
           std::to_string(report.spike_count) + "," + fmt_g6(report.fitness);
}

}  // namespace spikelens
