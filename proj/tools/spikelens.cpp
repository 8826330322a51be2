// spikelens CLI: static images -> edge images -> coordinate signals ->
// ternary spike trains, plus the reverse path and the evaluation tooling.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikelens/cohort.hpp"
#include "spikelens/spikelens.hpp"

namespace fs = std::filesystem;
using namespace spikelens;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct InputFlags {
    std::string image_path;
    std::string mnist_path;
    std::string labels_path;
    int index = 0;
};

void add_input_flags(CLI::App* cmd, InputFlags& in, bool with_labels) {
    auto* img = cmd->add_option("--image", in.image_path, "Input PGM image");
    auto* mnist = cmd->add_option("--mnist", in.mnist_path, "IDX image file (gzip ok)");
    cmd->add_option("--index", in.index, "Image index within the IDX file")
        ->check(CLI::NonNegativeNumber);
    if (with_labels) {
        cmd->add_option("--labels", in.labels_path, "IDX label file (gzip ok)");
    }
    img->excludes(mnist);
    mnist->excludes(img);
}

GrayImage load_input_image(const InputFlags& in) {
    if (!in.image_path.empty()) return load_pgm(in.image_path);
    if (in.mnist_path.empty()) throw Error("no input: pass --image or --mnist");
    auto images = load_idx_images(in.mnist_path);
    if (in.index < 0 || static_cast<std::size_t>(in.index) >= images.size()) {
        throw Error("--index " + std::to_string(in.index) + " out of range (dataset has " +
                    std::to_string(images.size()) + " images)");
    }
    return images[static_cast<std::size_t>(in.index)];
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw Error("short write to '" + path.string() + "'");
}

std::string read_text_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string reconstruction_csv(const CoordSignalPair& sig, const std::vector<double>& rx,
                               const std::vector<double>& ry) {
    std::string out = "index,x,y,x_recon,y_recon\n";
    for (std::size_t i = 0; i < sig.x.size(); ++i) {
        out += std::to_string(i) + "," + fmt_g6(sig.x[i]) + "," + fmt_g6(sig.y[i]) + "," +
               fmt_g6(rx[i]) + "," + fmt_g6(ry[i]) + "\n";
    }
    return out;
}

std::string sweep_summary_line(const std::string& tag, const SweepCell& cell) {
    // both aggregations: the mean of the per-image fitness values (used for
    // the argmax) and the fitness of the averaged metrics
    return tag + " sampling_threshold=" + fmt_threshold(cell.sampling_threshold) +
           " encoding_threshold=" + fmt_threshold(cell.encoding_threshold) +
           " mean_fitness=" + fmt_g6(cell.mean_fitness) +
           " fitness_of_means=" + fmt_g6(cell.fitness_of_means) + "\n";
}

struct CodecFlags {
    std::string method = "sf";
    bool adaptive = false;
    double sampling_threshold = 0.1;
    double encoding_threshold = 0.2;

    EncodingConfig config() const {
        return {method_from_name(method), adaptive, sampling_threshold, encoding_threshold};
    }
};

void add_codec_flags(CLI::App* cmd, CodecFlags& cf) {
    cmd->add_option("--method", cf.method, "Encoding method")
        ->check(CLI::IsMember({"sf", "tbr"}));
    cmd->add_flag("--adaptive,!--no-adaptive", cf.adaptive, "Adaptive sampling on/off");
    cmd->add_option("--sampling-threshold", cf.sampling_threshold,
                    "Adaptive sampling threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--encoding-threshold", cf.encoding_threshold, "Encoding threshold")
        ->check(CLI::PositiveNumber);
}

// Returns the X and Y signal datasets for a seeded cohort of edge images.
struct CohortSignals {
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> y;
    std::size_t skipped = 0;
};

CohortSignals cohort_signals(const IdxDataset& ds, const std::vector<std::size_t>& indices,
                             double low, double high) {
    CohortSignals out;
    for (std::size_t idx : indices) {
        const CoordSignalPair sig = extract_coordinates(canny(ds.images[idx], low, high));
        if (sig.x.size() < 2) {
            ++out.skipped;
            continue;
        }
        out.x.push_back(sig.x);
        out.y.push_back(sig.y);
    }
    return out;
}

int run_edges(const InputFlags& in, double low, double high, const std::string& out_dir) {
    const GrayImage img = load_input_image(in);
    const EdgeImage edges = canny(img, low, high);
    if (edges.edge_count() == 0) {
        std::cerr << "warning: empty edge image\n";
    }
    fs::create_directories(out_dir);
    save_pgm((fs::path(out_dir) / "edges.pgm").string(), edges.to_gray());
    return 0;
}

int run_signals(const InputFlags& in, double low, double high, bool use_edges,
                const std::string& out_dir) {
    const GrayImage img = load_input_image(in);
    const CoordSignalPair sig =
        use_edges ? extract_coordinates(canny(img, low, high)) : extract_coordinates(img);
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "signals.csv", write_signals_csv(sig));
    return 0;
}

int run_encode(const InputFlags& in, double low, double high, bool use_edges,
               const CodecFlags& cf, const std::string& out_dir) {
    const GrayImage img = load_input_image(in);
    const CoordSignalPair sig =
        use_edges ? extract_coordinates(canny(img, low, high)) : extract_coordinates(img);
    const EncodingConfig cfg = cf.config();
    const SpikeTrain train_x = encode(sig.x, cfg);
    const SpikeTrain train_y = encode(sig.y, cfg);
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "signals.csv", write_signals_csv(sig));
    write_text_file(fs::path(out_dir) / "spikes_x.json", to_json(train_x).dump(2) + "\n");
    write_text_file(fs::path(out_dir) / "spikes_y.json", to_json(train_y).dump(2) + "\n");
    return 0;
}

int run_decode(const std::string& spikes_x, const std::string& spikes_y,
               const std::string& out_dir) {
    const SpikeTrain train_x = spike_train_from_json(nlohmann::json::parse(read_text_file(spikes_x)));
    const SpikeTrain train_y = spike_train_from_json(nlohmann::json::parse(read_text_file(spikes_y)));
    CoordSignalPair recon;
    recon.x = decode(train_x);
    recon.y = decode(train_y);
    if (recon.x.size() != recon.y.size()) {
        std::cerr << "warning: decoded X and Y lengths differ\n";
    }
    fs::create_directories(out_dir);
    std::string out = "index,x,y\n";
    const std::size_t n = std::min(recon.x.size(), recon.y.size());
    for (std::size_t i = 0; i < n; ++i) {
        out += std::to_string(i) + "," + fmt_g6(recon.x[i]) + "," + fmt_g6(recon.y[i]) + "\n";
    }
    write_text_file(fs::path(out_dir) / "recon_signals.csv", out);
    return 0;
}

int run_metrics(const std::string& signals_csv, const std::string& spikes_x,
                const std::string& spikes_y, FitnessParams params, const std::string& out_dir) {
    const CoordSignalPair sig = read_signals_csv(read_text_file(signals_csv));
    const SpikeTrain train_x = spike_train_from_json(nlohmann::json::parse(read_text_file(spikes_x)));
    const SpikeTrain train_y = spike_train_from_json(nlohmann::json::parse(read_text_file(spikes_y)));
    const MetricsReport rx = evaluate(sig.x, decode(train_x), train_x, params);
    const MetricsReport ry = evaluate(sig.y, decode(train_y), train_y, params);
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "metrics.csv", metrics_csv_header() + "\n" +
                                                           metrics_csv_row(rx) + "\n" +
                                                           metrics_csv_row(ry) + "\n");
    return 0;
}

int run_sweep(const InputFlags& in, double low, double high, const std::string& method,
              bool adaptive, std::size_t samples, std::uint64_t seed, double grid_min,
              double grid_max, double grid_step, FitnessParams params,
              const std::string& out_dir) {
    if (in.mnist_path.empty()) throw Error("sweep: pass --mnist");
    const IdxDataset ds = load_dataset(
        in.mnist_path,
        in.labels_path.empty() ? std::nullopt : std::optional<std::string>(in.labels_path));
    const auto indices = pick_cohort(ds.images.size(), ds.labels, samples, seed);
    const CohortSignals cohort = cohort_signals(ds, indices, low, high);
    if (cohort.skipped > 0) {
        std::cerr << "warning: skipped " << cohort.skipped
                  << " images with fewer than 2 edge pixels\n";
    }

    std::vector<double> axis;
    {
        // Clean tenths stay exact; arbitrary grids fall back to min + k*step.
        const bool tenths = std::abs(grid_min * 10 - std::round(grid_min * 10)) < 1e-9 &&
                            std::abs(grid_step * 10 - std::round(grid_step * 10)) < 1e-9;
        for (int k = 0;; ++k) {
            double v = tenths ? (std::round(grid_min * 10) + k * std::round(grid_step * 10)) / 10.0
                              : grid_min + k * grid_step;
            if (v > grid_max + 1e-12) break;
            axis.push_back(v);
        }
    }

    const SweepGrid gx = grid_sweep(cohort.x, method_from_name(method), adaptive, axis, axis, params);
    const SweepGrid gy = grid_sweep(cohort.y, method_from_name(method), adaptive, axis, axis, params);

    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / "grid_x.csv", write_sweep_csv(gx));
    write_text_file(fs::path(out_dir) / "grid_y.csv", write_sweep_csv(gy));

    // Combined = pooled X and Y signals; the pooled mean of each cell is the
    // count-weighted mean of the per-axis means.
    const double nx = static_cast<double>(cohort.x.size());
    const double ny = static_cast<double>(cohort.y.size());
    const SweepCell* best_comb = nullptr;
    double best_fitness = 0.0;
    for (std::size_t i = 0; i < gx.cells.size(); ++i) {
        if (!gx.cells[i].usable() || !gy.cells[i].usable()) continue;
        const double f =
            (gx.cells[i].mean_fitness * nx + gy.cells[i].mean_fitness * ny) / (nx + ny);
        if (!best_comb || f > best_fitness) {
            best_comb = &gx.cells[i];
            best_fitness = f;
        }
    }

    std::string summary;
    for (const auto& cell : gx.cells) {
        if (cell.sampling_threshold == gx.best.first && cell.encoding_threshold == gx.best.second) {
            summary += sweep_summary_line("best_x", cell);
            break;
        }
    }
    for (const auto& cell : gy.cells) {
        if (cell.sampling_threshold == gy.best.first && cell.encoding_threshold == gy.best.second) {
            summary += sweep_summary_line("best_y", cell);
            break;
        }
    }
    if (best_comb) {
        summary += "best_combined sampling_threshold=" + fmt_threshold(best_comb->sampling_threshold) +
                   " encoding_threshold=" + fmt_threshold(best_comb->encoding_threshold) +
                   " mean_fitness=" + fmt_g6(best_fitness) + "\n";
    }
    write_text_file(fs::path(out_dir) / "summary.txt", summary);
    std::cout << summary;
    return 0;
}

int run_demo(const InputFlags& in, double low, double high, const CodecFlags& cf,
             FitnessParams params, const std::string& out_dir) {
    if (in.mnist_path.empty()) throw Error("demo: pass --mnist");
    if (in.labels_path.empty()) throw MissingLabels("demo: labeled dataset required (--labels)");
    const IdxDataset ds = load_dataset(in.mnist_path, in.labels_path);
    const EncodingConfig cfg = cf.config();

    for (int digit = 0; digit <= 9; ++digit) {
        std::size_t pick = ds.images.size();
        for (std::size_t i = 0; i < ds.labels->size(); ++i) {
            if ((*ds.labels)[i] == digit) {
                pick = i;
                break;
            }
        }
        if (pick == ds.images.size()) {
            throw MissingLabels("demo: dataset has no sample of digit " + std::to_string(digit));
        }
        const GrayImage& img = ds.images[pick];
        const EdgeImage edges = canny(img, low, high);
        const CoordSignalPair sig = extract_coordinates(edges);
        const SpikeTrain train_x = encode(sig.x, cfg);
        const SpikeTrain train_y = encode(sig.y, cfg);
        const std::vector<double> rx = decode(train_x);
        const std::vector<double> ry = decode(train_y);

        CoordSignalPair recon_sig;
        recon_sig.x = rx;
        recon_sig.y = ry;
        recon_sig.source_width = sig.source_width;
        recon_sig.source_height = sig.source_height;

        const fs::path dir = fs::path(out_dir) / ("digit_" + std::to_string(digit));
        fs::create_directories(dir);
        save_pgm((dir / "original.pgm").string(), img);
        save_pgm((dir / "edges.pgm").string(), edges.to_gray());
        write_text_file(dir / "signals.csv", write_signals_csv(sig));
        write_text_file(dir / "spikes_x.json", to_json(train_x).dump(2) + "\n");
        write_text_file(dir / "spikes_y.json", to_json(train_y).dump(2) + "\n");
        write_text_file(dir / "reconstruction.csv", reconstruction_csv(sig, rx, ry));
        save_pgm((dir / "recon.pgm").string(), signals_to_image(recon_sig));
        const MetricsReport mx = evaluate(sig.x, rx, train_x, params);
        const MetricsReport my = evaluate(sig.y, ry, train_y, params);
        write_text_file(dir / "metrics.csv", metrics_csv_header() + "\n" + metrics_csv_row(mx) +
                                                 "\n" + metrics_csv_row(my) + "\n");
    }
    return 0;
}

int run_reduce_stat(const InputFlags& in, double low, double high, std::size_t samples,
                    std::uint64_t seed) {
    if (in.mnist_path.empty()) throw Error("reduce-stat: pass --mnist");
    const IdxDataset ds = load_dataset(
        in.mnist_path,
        in.labels_path.empty() ? std::nullopt : std::optional<std::string>(in.labels_path));
    const auto indices = pick_cohort(ds.images.size(), ds.labels, samples, seed);
    std::vector<GrayImage> subset;
    subset.reserve(indices.size());
    for (std::size_t idx : indices) subset.push_back(ds.images[idx]);
    std::cout << fmt_g6(length_reduction(subset, low, high)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image-to-spike-train encoding pipeline"};
    app.require_subcommand(1);

    InputFlags in;
    double low = kCannyDefaultLow, high = kCannyDefaultHigh;
    bool use_edges = true;
    std::string out_dir = ".";
    CodecFlags cf;
    FitnessParams params;
    std::string spikes_x_path, spikes_y_path, signals_path;
    std::size_t samples = 100;
    std::uint64_t seed = kDefaultSeed;
    double grid_min = 0.1, grid_max = 2.0, grid_step = 0.1;

    auto add_canny_flags = [&](CLI::App* cmd) {
        cmd->add_option("--low", low, "Canny low threshold")->check(CLI::NonNegativeNumber);
        cmd->add_option("--high", high, "Canny high threshold")->check(CLI::NonNegativeNumber);
    };
    auto add_out_flag = [&](CLI::App* cmd) {
        cmd->add_option("-o,--out", out_dir, "Output directory")->required();
    };
    auto add_fitness_flags = [&](CLI::App* cmd) {
        cmd->add_option("--fitness-m", params.m, "RMSE exponent in the fitness")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--fitness-n", params.n, "Spike-count exponent in the fitness")
            ->check(CLI::NonNegativeNumber);
    };

    auto* c_edges = app.add_subcommand("edges", "Detect edges, write a PGM edge image");
    add_input_flags(c_edges, in, false);
    add_canny_flags(c_edges);
    add_out_flag(c_edges);

    auto* c_signals = app.add_subcommand("signals", "Extract X/Y coordinate signals to CSV");
    add_input_flags(c_signals, in, false);
    add_canny_flags(c_signals);
    c_signals->add_flag("--edges,!--no-edges", use_edges, "Run edge detection first (default on)");
    add_out_flag(c_signals);

    auto* c_encode = app.add_subcommand("encode", "Encode an image into X/Y spike trains");
    add_input_flags(c_encode, in, false);
    add_canny_flags(c_encode);
    c_encode->add_flag("--edges,!--no-edges", use_edges, "Run edge detection first (default on)");
    add_codec_flags(c_encode, cf);
    add_out_flag(c_encode);

    auto* c_decode = app.add_subcommand("decode", "Decode spike trains back to signals");
    c_decode->add_option("--spikes-x", spikes_x_path, "X spike-train document")->required();
    c_decode->add_option("--spikes-y", spikes_y_path, "Y spike-train document")->required();
    add_out_flag(c_decode);

    auto* c_metrics = app.add_subcommand("metrics", "Evaluate reconstruction quality");
    c_metrics->add_option("--signals", signals_path, "Original signals CSV")->required();
    c_metrics->add_option("--spikes-x", spikes_x_path, "X spike-train document")->required();
    c_metrics->add_option("--spikes-y", spikes_y_path, "Y spike-train document")->required();
    add_fitness_flags(c_metrics);
    add_out_flag(c_metrics);

    auto* c_sweep = app.add_subcommand("sweep", "Grid-search sampling/encoding thresholds");
    add_input_flags(c_sweep, in, true);
    add_canny_flags(c_sweep);
    c_sweep->add_option("--method", cf.method)->check(CLI::IsMember({"sf", "tbr"}));
    c_sweep->add_flag("--adaptive,!--no-adaptive", cf.adaptive, "Adaptive sampling on/off");
    c_sweep->add_option("--samples", samples, "Cohort size")->check(CLI::PositiveNumber);
    c_sweep->add_option("--seed", seed, "Cohort sampling seed");
    c_sweep->add_option("--grid-min", grid_min)->check(CLI::PositiveNumber);
    c_sweep->add_option("--grid-max", grid_max)->check(CLI::PositiveNumber);
    c_sweep->add_option("--grid-step", grid_step)->check(CLI::PositiveNumber);
    add_fitness_flags(c_sweep);
    add_out_flag(c_sweep);

    auto* c_demo = app.add_subcommand("demo", "Per-digit encode/decode report bundle");
    add_input_flags(c_demo, in, true);
    add_canny_flags(c_demo);
    add_codec_flags(c_demo, cf);
    add_fitness_flags(c_demo);
    add_out_flag(c_demo);

    auto* c_reduce = app.add_subcommand("reduce-stat", "Edge-vs-raw signal length reduction");
    add_input_flags(c_reduce, in, true);
    add_canny_flags(c_reduce);
    c_reduce->add_option("--samples", samples, "Cohort size")->check(CLI::PositiveNumber);
    c_reduce->add_option("--seed", seed, "Cohort sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_edges)) return run_edges(in, low, high, out_dir);
        if (app.got_subcommand(c_signals)) return run_signals(in, low, high, use_edges, out_dir);
        if (app.got_subcommand(c_encode))
            return run_encode(in, low, high, use_edges, cf, out_dir);
        if (app.got_subcommand(c_decode)) return run_decode(spikes_x_path, spikes_y_path, out_dir);
        if (app.got_subcommand(c_metrics))
            return run_metrics(signals_path, spikes_x_path, spikes_y_path, params, out_dir);
        if (app.got_subcommand(c_sweep))
            return run_sweep(in, low, high, cf.method, cf.adaptive, samples, seed, grid_min,
                             grid_max, grid_step, params, out_dir);
        if (app.got_subcommand(c_demo)) return run_demo(in, low, high, cf, params, out_dir);
        if (app.got_subcommand(c_reduce)) return run_reduce_stat(in, low, high, samples, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
