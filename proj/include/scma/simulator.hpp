#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scma/channel.hpp"
#include "scma/codebook.hpp"
#include "scma/detector.hpp"

namespace scma {

enum class Engine { mpa, mpa_collapsed, split, map_oracle };

std::string to_string(Engine engine);
Engine engine_from_string(const std::string& name);

struct StoppingRule {
    std::int64_t min_errors = 100;   // symbol errors
    std::int64_t max_trials = 100000;
};

struct SimConfig {
    ChannelMode channel = ChannelMode::awgn;
    SnrConvention convention = SnrConvention::per_layer;
    std::vector<double> snr_db;
    std::uint64_t seed = 1;
    StoppingRule stopping;
    Engine engine = Engine::mpa;
    MpaOptions mpa;
    /// Threads used for trial blocks; 0 picks the hardware concurrency.
    /// Results do not depend on this value.
    int workers = 0;
    /// Trials per independently seeded block. Part of the random stream.
    int block_size = 128;
    /// Record wall time in the `seconds` column; otherwise write 0.
    bool record_time = false;

    void validate() const;
};

struct SimPoint {
    double snr_db = 0.0;
    std::int64_t trials = 0;
    std::int64_t symbol_errors = 0;
    std::int64_t bit_errors = 0;
    double ser = 0.0;
    double ber = 0.0;
    double ser_ci95 = 0.0;
    double ber_ci95 = 0.0;
    double seconds = 0.0;
};

struct SimResult {
    std::vector<SimPoint> points;
};

/// Half-width of the 95% Wilson score interval for `errors` out of `n`.
double wilson_half_width(std::int64_t errors, std::int64_t n);
/// Center of the same interval.
double wilson_center(std::int64_t errors, std::int64_t n);

/// Counter-based seed of trial block `block` at a point with seed `point_seed`.
std::uint64_t block_seed(std::uint64_t point_seed, std::uint64_t block);

/// Monte Carlo at one SNR, stopping at min_errors symbol errors or max_trials.
SimPoint run_point(const ScmaSystem& system, const SimConfig& config, double snr_db, std::uint64_t point_seed);

/// run_point for every grid SNR with sub-seed seed ^ index.
SimResult run_sweep(const ScmaSystem& system, const SimConfig& config);

/// Detection of one received vector with the configured engine.
DetectionResult detect(Engine engine, std::span<const Complex> y, const ScmaSystem& system,
                       const ChannelRealization& channel, double noise_var, const MpaOptions& options);

inline constexpr const char* kCsvHeader = "snr_db,trials,sym_errors,bit_errors,ser,ber,ser_ci95,ber_ci95,seconds";

/// Writes `# `-prefixed comment lines, the header and one row per point.
void write_csv(std::ostream& out, const SimResult& result, const std::vector<std::string>& comments);
std::string format_row(const SimPoint& p);

/// Config echo used as CSV comments (worker count deliberately absent).
std::vector<std::string> describe(const ScmaSystem& system, const SimConfig& config);

struct ComparisonCurve {
    std::string scheme;
    int layers = 0;
    ChannelMode channel = ChannelMode::awgn;
    SimResult result;
};

/// Rotated 4-point SCMA vs repeated QPSK on K=4, N=2 for each layer count,
/// AWGN, per-layer SNR.
std::vector<ComparisonCurve> compare_power_variation(const std::vector<double>& snr_db,
                                                     const std::vector<int>& layer_counts, std::uint64_t seed,
                                                     const StoppingRule& stopping, int workers = 0);

/// T16QAM vs repeated 16QAM, two disjoint layers, total SNR; both in
/// uplink Rayleigh fading and in AWGN.
std::vector<ComparisonCurve> compare_shaping(const std::vector<double>& snr_db, std::uint64_t seed,
                                             const StoppingRule& stopping, int workers = 0);

void write_comparison_csv(std::ostream& out, const std::string& experiment, const std::vector<ComparisonCurve>& curves,
                          const std::vector<std::string>& comments);

}  // namespace scma
