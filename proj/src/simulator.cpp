#include "scma/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "scma/errors.hpp"

namespace scma {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct BlockCounts {
    std::int64_t trials = 0;
    std::int64_t symbol_errors = 0;
    std::int64_t bit_errors = 0;
};

BlockCounts run_block(const ScmaSystem& system, const SimConfig& config, double noise_var, std::uint64_t seed,
                      std::int64_t trials) {
    Rng rng(seed);
    std::uniform_int_distribution<std::uint32_t> label_dist(0, static_cast<std::uint32_t>(system.alphabet_size() - 1));
    const int layers = system.num_layers();
    std::vector<int> sent(static_cast<std::size_t>(layers));
    std::vector<std::uint32_t> sent_bits(static_cast<std::size_t>(layers));
    std::vector<ComplexPoint> words(static_cast<std::size_t>(layers));

    BlockCounts c;
    for (std::int64_t t = 0; t < trials; ++t) {
        for (int j = 0; j < layers; ++j) {
            const auto bits = label_dist(rng);
            const auto& cb = system.codebook(j);
            const int idx = system.mother().index_of_label(bits);
            sent[static_cast<std::size_t>(j)] = idx;
            sent_bits[static_cast<std::size_t>(j)] = cb.label(idx);
            words[static_cast<std::size_t>(j)] = cb.codeword(idx);
        }
        const auto channel = draw_channel(config.channel, layers, system.num_resources(), rng);
        const auto noise = draw_noise(system.num_resources(), noise_var, rng);
        const auto y = superpose(words, channel, noise);
        const auto r = detect(config.engine, y, system, channel, noise_var, config.mpa);
        for (int j = 0; j < layers; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            if (r.hard_symbols[jj] != sent[jj]) ++c.symbol_errors;
            c.bit_errors += std::popcount(r.bit_labels[jj] ^ sent_bits[jj]);
        }
        ++c.trials;
    }
    return c;
}

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

std::string to_string(Engine engine) {
    switch (engine) {
        case Engine::mpa: return "mpa";
        case Engine::mpa_collapsed: return "mpa_collapsed";
        case Engine::split: return "split";
        case Engine::map_oracle: return "map";
    }
    return "unknown";
}

Engine engine_from_string(const std::string& name) {
    if (name == "mpa") return Engine::mpa;
    if (name == "mpa_collapsed") return Engine::mpa_collapsed;
    if (name == "split") return Engine::split;
    if (name == "map" || name == "map_oracle") return Engine::map_oracle;
    throw ParameterError("unknown engine '" + name + "'");
}

void SimConfig::validate() const {
    if (snr_db.empty()) throw ParameterError("SNR grid must not be empty");
    if (stopping.min_errors < 1) throw ParameterError("min_errors must be >= 1");
    if (stopping.max_trials < stopping.min_errors) throw ParameterError("max_trials must be >= min_errors");
    if (block_size < 1) throw ParameterError("block size must be >= 1");
    if (workers < 0) throw ParameterError("workers must be >= 0");
    if (mpa.max_iter < 1) throw ParameterError("max_iter must be >= 1");
}

double wilson_half_width(std::int64_t errors, std::int64_t n) {
    if (n <= 0) return 0.0;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = kZ95 * kZ95;
    return kZ95 / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

double wilson_center(std::int64_t errors, std::int64_t n) {
    if (n <= 0) return 0.0;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = kZ95 * kZ95;
    return (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
}

std::uint64_t block_seed(std::uint64_t point_seed, std::uint64_t block) {
    return splitmix64(splitmix64(point_seed) ^ (block * 0xd1b54a32d192ed03ULL));
}

DetectionResult detect(Engine engine, std::span<const Complex> y, const ScmaSystem& system,
                       const ChannelRealization& channel, double noise_var, const MpaOptions& options) {
    switch (engine) {
        case Engine::mpa: return mpa_detect(y, system, channel, noise_var, options);
        case Engine::mpa_collapsed: return mpa_detect_collapsed(y, system, channel, noise_var, options);
        case Engine::split: return split_detect(y, system, channel, noise_var, options.max_iter);
        case Engine::map_oracle: return map_joint_oracle(y, system, channel, noise_var);
    }
    throw ParameterError("unknown engine");
}

SimPoint run_point(const ScmaSystem& system, const SimConfig& config, double snr_db, std::uint64_t point_seed) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const double noise_var = snr_to_noise_variance(snr_db, system, config.convention).variance;
    const int workers = config.workers > 0 ? config.workers
                                           : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
    const std::int64_t block = config.block_size;
    const std::int64_t max_blocks = (config.stopping.max_trials + block - 1) / block;

    BlockCounts total;
    std::int64_t next_block = 0;
    bool done = false;
    while (!done && next_block < max_blocks) {
        // A wave of blocks is computed concurrently; the stopping rule is then
        // applied in block order, so later blocks past the stop are discarded.
        const std::int64_t wave = std::min<std::int64_t>(workers, max_blocks - next_block);
        std::vector<BlockCounts> results(static_cast<std::size_t>(wave));
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(wave));
        auto work = [&](std::int64_t i) {
            const std::int64_t b = next_block + i;
            const std::int64_t trials = std::min(block, config.stopping.max_trials - b * block);
            try {
                results[static_cast<std::size_t>(i)] =
                    run_block(system, config, noise_var, block_seed(point_seed, static_cast<std::uint64_t>(b)), trials);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        };
        if (wave == 1) {
            work(0);
        } else {
            std::vector<std::thread> threads;
            for (std::int64_t i = 0; i < wave; ++i) threads.emplace_back(work, i);
            for (auto& t : threads) t.join();
        }
        for (std::int64_t i = 0; i < wave; ++i) {
            if (errors[static_cast<std::size_t>(i)]) std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
            const auto& r = results[static_cast<std::size_t>(i)];
            total.trials += r.trials;
            total.symbol_errors += r.symbol_errors;
            total.bit_errors += r.bit_errors;
            if (total.symbol_errors >= config.stopping.min_errors || total.trials >= config.stopping.max_trials) {
                done = true;
                break;
            }
        }
        next_block += wave;
    }

    SimPoint p;
    p.snr_db = snr_db;
    p.trials = total.trials;
    p.symbol_errors = total.symbol_errors;
    p.bit_errors = total.bit_errors;
    const std::int64_t symbols = total.trials * system.num_layers();
    const std::int64_t bits = symbols * system.bits_per_symbol();
    p.ser = symbols > 0 ? static_cast<double>(total.symbol_errors) / static_cast<double>(symbols) : 0.0;
    p.ber = bits > 0 ? static_cast<double>(total.bit_errors) / static_cast<double>(bits) : 0.0;
    p.ser_ci95 = wilson_half_width(total.symbol_errors, symbols);
    p.ber_ci95 = wilson_half_width(total.bit_errors, bits);
    if (config.record_time)
        p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return p;
}

SimResult run_sweep(const ScmaSystem& system, const SimConfig& config) {
    config.validate();
    SimResult r;
    for (std::size_t i = 0; i < config.snr_db.size(); ++i)
        r.points.push_back(run_point(system, config, config.snr_db[i], config.seed ^ static_cast<std::uint64_t>(i)));
    return r;
}

std::string format_row(const SimPoint& p) {
    std::ostringstream os;
    os << format_double(p.snr_db, "%.4f") << ',' << p.trials << ',' << p.symbol_errors << ',' << p.bit_errors << ','
       << format_double(p.ser, "%.9e") << ',' << format_double(p.ber, "%.9e") << ','
       << format_double(p.ser_ci95, "%.6e") << ',' << format_double(p.ber_ci95, "%.6e") << ','
       << format_double(p.seconds, "%.3f");
    return os.str();
}

void write_csv(std::ostream& out, const SimResult& result, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << kCsvHeader << '\n';
    for (const auto& p : result.points) out << format_row(p) << '\n';
}

std::vector<std::string> describe(const ScmaSystem& system, const SimConfig& config) {
    std::ostringstream grid;
    for (std::size_t i = 0; i < config.snr_db.size(); ++i) grid << (i ? " " : "") << format_double(config.snr_db[i], "%g");
    return {
        "design=" + system.design() + " K=" + std::to_string(system.num_resources()) +
            " N=" + std::to_string(system.num_nonzero()) + " J=" + std::to_string(system.num_layers()) +
            " M=" + std::to_string(system.alphabet_size()),
        "channel=" + to_string(config.channel) + " snr_conv=" + to_string(config.convention),
        "snr_db=" + grid.str(),
        "engine=" + to_string(config.engine) + " iters=" + std::to_string(config.mpa.max_iter) +
            " damping=" + format_double(config.mpa.damping, "%g"),
        "seed=" + std::to_string(config.seed) + " min_errors=" + std::to_string(config.stopping.min_errors) +
            " max_trials=" + std::to_string(config.stopping.max_trials) +
            " block_size=" + std::to_string(config.block_size),
    };
}

std::vector<ComparisonCurve> compare_power_variation(const std::vector<double>& snr_db,
                                                     const std::vector<int>& layer_counts, std::uint64_t seed,
                                                     const StoppingRule& stopping, int workers) {
    std::vector<ComparisonCurve> curves;
    SimConfig cfg;
    cfg.channel = ChannelMode::awgn;
    cfg.convention = SnrConvention::per_layer;
    cfg.snr_db = snr_db;
    cfg.seed = seed;
    cfg.stopping = stopping;
    cfg.workers = workers;
    for (int layers : layer_counts) {
        if (layers < 1 || layers > 6) throw ParameterError("power-variation layer counts must lie in [1, 6]");
        const auto scma = design_system(Scheme::four_point, 4, 2, layers, 4);
        const auto lds = build_lds_system(4, 2, layers, 4);
        curves.push_back({"scma_4pt", layers, cfg.channel, run_sweep(scma, cfg)});
        curves.push_back({"lds_qpsk", layers, cfg.channel, run_sweep(lds, cfg)});
    }
    return curves;
}

std::vector<ComparisonCurve> compare_shaping(const std::vector<double>& snr_db, std::uint64_t seed,
                                             const StoppingRule& stopping, int workers) {
    std::vector<ComparisonCurve> curves;
    const auto scma = design_system(Scheme::t16, 4, 2, 2, 16);
    const auto lds = build_lds_system(4, 2, 2, 16);
    for (ChannelMode mode : {ChannelMode::uplink_rayleigh, ChannelMode::awgn}) {
        SimConfig cfg;
        cfg.channel = mode;
        cfg.convention = SnrConvention::total;
        cfg.snr_db = snr_db;
        cfg.seed = seed;
        cfg.stopping = stopping;
        cfg.workers = workers;
        curves.push_back({"scma_t16", 2, mode, run_sweep(scma, cfg)});
        curves.push_back({"lds_16qam", 2, mode, run_sweep(lds, cfg)});
    }
    return curves;
}

void write_comparison_csv(std::ostream& out, const std::string& experiment, const std::vector<ComparisonCurve>& curves,
                          const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "experiment,scheme,layers,channel," << kCsvHeader << '\n';
    for (const auto& c : curves)
        for (const auto& p : c.result.points)
            out << experiment << ',' << c.scheme << ',' << c.layers << ',' << to_string(c.channel) << ','
                << format_row(p) << '\n';
}

}  // namespace scma
