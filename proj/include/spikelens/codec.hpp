#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikelens/errors.hpp"

namespace spikelens {

enum class Method { SF, TBR };

inline std::string method_name(Method m) { return m == Method::SF ? "sf" : "tbr"; }

inline Method method_from_name(const std::string& name) {
    if (name == "sf") return Method::SF;
    if (name == "tbr") return Method::TBR;
    throw Error("unknown encoding method '" + name + "'");
}

struct EncodingConfig {
    Method method = Method::SF;
    bool adaptive = false;
    double sampling_threshold = 1.0;  // ignored when adaptive == false
    double encoding_threshold = 1.0;
};

/// Resampled signal plus the per-interval sample counts needed to undo
/// the resampling.
struct AdaptiveSample {
    std::vector<double> values;       // length == sum(counts) + 1
    std::vector<std::int64_t> counts; // length == original_length - 1
    std::size_t original_length = 0;
};

/// Ternary spike sequence with everything needed to decode it.
struct SpikeTrain {
    std::vector<std::int8_t> spikes;
    double startpoint = 0.0;
    EncodingConfig config;
    std::optional<std::vector<std::int64_t>> counts;  // present iff adaptive
};

/// Inserts linearly interpolated samples between consecutive points in
/// proportion to the local change: counts[i] = ceil(|s[i+1]-s[i]| / threshold).
/// Flat segments contribute zero samples.
inline AdaptiveSample adaptive_resample(std::span<const double> s, double sampling_threshold) {
    if (s.size() < 2) throw SignalTooShort("adaptive_resample: need at least 2 samples");
    if (!(sampling_threshold > 0)) {
        throw NonPositiveThreshold("adaptive_resample: sampling threshold must be > 0");
    }
    AdaptiveSample out;
    out.original_length = s.size();
    out.counts.resize(s.size() - 1);
    std::int64_t total = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        out.counts[i] =
            static_cast<std::int64_t>(std::ceil(std::abs((s[i + 1] - s[i]) / sampling_threshold)));
        total += out.counts[i];
    }
    out.values.resize(static_cast<std::size_t>(total) + 1);
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double step = s[i + 1] - s[i];
        for (std::int64_t j = 0; j < out.counts[i]; ++j) {
            out.values[n++] = s[i] + (static_cast<double>(j) / static_cast<double>(out.counts[i])) * step;
        }
    }
    out.values.back() = s[s.size() - 1];
    return out;
}

/// Step-forward encoding: a running base moves by one threshold per spike.
inline SpikeTrain sf_encode(std::span<const double> s, double encoding_threshold) {
    if (s.empty()) throw EmptySignal("sf_encode: empty signal");
    if (!(encoding_threshold > 0)) {
        throw NonPositiveThreshold("sf_encode: encoding threshold must be > 0");
    }
    SpikeTrain train;
    train.config = {Method::SF, false, 0.0, encoding_threshold};
    train.startpoint = s[0];
    train.spikes.assign(s.size(), 0);
    double base = s[0];
    for (std::size_t t = 1; t < s.size(); ++t) {
        if (s[t] > base + encoding_threshold) {
            train.spikes[t] = 1;
            base += encoding_threshold;
        } else if (s[t] < base - encoding_threshold) {
            train.spikes[t] = -1;
            base -= encoding_threshold;
        }
    }
    return train;
}

/// Threshold-based representation: spikes wherever the one-step difference
/// exceeds the threshold. The final difference is duplicated so the train
/// has the signal's length.
inline SpikeTrain tbr_encode(std::span<const double> s, double encoding_threshold) {
    if (s.size() < 2) throw SignalTooShort("tbr_encode: need at least 2 samples");
    if (!(encoding_threshold > 0)) {
        throw NonPositiveThreshold("tbr_encode: encoding threshold must be > 0");
    }
    SpikeTrain train;
    train.config = {Method::TBR, false, 0.0, encoding_threshold};
    train.startpoint = s[0];
    std::vector<double> diff(s.size());
    for (std::size_t t = 0; t + 1 < s.size(); ++t) diff[t] = s[t + 1] - s[t];
    diff[s.size() - 1] = diff[s.size() - 2];
    train.spikes.assign(s.size(), 0);
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (diff[t] > encoding_threshold) {
            train.spikes[t] = 1;
        } else if (diff[t] < -encoding_threshold) {
            train.spikes[t] = -1;
        }
    }
    return train;
}

/// Integrates a spike train from its startpoint. spikes[0] never moves the
/// reconstruction; it anchors at the startpoint.
inline std::vector<double> temporal_decode(const SpikeTrain& train) {
    std::vector<double> recon(train.spikes.size());
    if (recon.empty()) return recon;
    recon[0] = train.startpoint;
    const double threshold = train.config.encoding_threshold;
    for (std::size_t t = 1; t < train.spikes.size(); ++t) {
        recon[t] = recon[t - 1] + threshold * static_cast<double>(train.spikes[t]);
    }
    return recon;
}

/// Decodes an adaptively sampled train back to the original signal length
/// by picking the reconstruction at each interval boundary.
inline std::vector<double> adaptive_decode(const SpikeTrain& train) {
    if (!train.counts) throw CountMismatch("adaptive_decode: train carries no counts");
    const auto& counts = *train.counts;
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (static_cast<std::size_t>(total) + 1 != train.spikes.size()) {
        throw CountMismatch("adaptive_decode: sum(counts)+1 != spike count");
    }
    const std::vector<double> recon_a = temporal_decode(train);
    std::vector<double> recon(counts.size() + 1);
    std::size_t m = 0;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        recon[t] = recon_a[m];
        m += static_cast<std::size_t>(counts[t]);
    }
    recon.back() = recon_a.back();
    return recon;
}

/// Resample (when configured) then dispatch to the configured encoder.
inline SpikeTrain encode(std::span<const double> s, const EncodingConfig& cfg) {
    if (s.size() < 2) throw SignalTooShort("encode: need at least 2 samples");
    if (!(cfg.encoding_threshold > 0) || (cfg.adaptive && !(cfg.sampling_threshold > 0))) {
        throw NonPositiveThreshold("encode: thresholds must be > 0");
    }
    SpikeTrain train;
    if (cfg.adaptive) {
        AdaptiveSample sampled = adaptive_resample(s, cfg.sampling_threshold);
        train = cfg.method == Method::SF ? sf_encode(sampled.values, cfg.encoding_threshold)
                                         : tbr_encode(sampled.values, cfg.encoding_threshold);
        train.counts = std::move(sampled.counts);
    } else {
        train = cfg.method == Method::SF ? sf_encode(s, cfg.encoding_threshold)
                                         : tbr_encode(s, cfg.encoding_threshold);
    }
    train.config = cfg;
    return train;
}

/// Inverse of encode(); output length equals the pre-encode signal length.
inline std::vector<double> decode(const SpikeTrain& train) {
    return train.counts ? adaptive_decode(train) : temporal_decode(train);
}

inline nlohmann::json to_json(const SpikeTrain& train) {
    nlohmann::json doc;
    doc["method"] = method_name(train.config.method);
    doc["adaptive"] = train.config.adaptive;
    doc["sampling_threshold"] = train.config.sampling_threshold;
    doc["encoding_threshold"] = train.config.encoding_threshold;
    doc["startpoint"] = train.startpoint;
    if (train.counts) doc["counts"] = *train.counts;
    doc["spikes"] = train.spikes;
    return doc;
}

inline SpikeTrain spike_train_from_json(const nlohmann::json& doc) {
    SpikeTrain train;
    train.config.method = method_from_name(doc.at("method").get<std::string>());
    train.config.adaptive = doc.at("adaptive").get<bool>();
    train.config.sampling_threshold = doc.at("sampling_threshold").get<double>();
    train.config.encoding_threshold = doc.at("encoding_threshold").get<double>();
    train.startpoint = doc.at("startpoint").get<double>();
    if (doc.contains("counts")) {
        train.counts = doc.at("counts").get<std::vector<std::int64_t>>();
    }
    if (train.config.adaptive != train.counts.has_value()) {
        throw Error("spike train document: adaptive flag and counts disagree");
    }
    for (const auto& sp : doc.at("spikes")) {
        const int v = sp.get<int>();
        if (v < -1 || v > 1) throw Error("spike train document: spike outside {-1,0,1}");
        train.spikes.push_back(static_cast<std::int8_t>(v));
    }
    return train;
}

}  // namespace spikelens
