#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "scma/errors.hpp"
#include "scma/simulator.hpp"

using namespace scma;

namespace {

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

SimConfig quick(std::vector<double> grid, std::int64_t min_errors = 100, std::int64_t max_trials = 20000) {
    SimConfig c;
    c.snr_db = std::move(grid);
    c.stopping = {min_errors, max_trials};
    c.seed = 17;
    return c;
}

}  // namespace

TEST(Simulator, SingleLayerQpskMatchesClosedForm) {
    const auto s = build_lds_system(2, 1, 1, 4);
    auto c = quick({2.0, 5.0, 8.0}, 300, 400000);
    const auto r = run_sweep(s, c);
    for (const auto& p : r.points) {
        const double sigma = std::sqrt(snr_to_noise_variance(p.snr_db, s, SnrConvention::per_layer).variance);
        const double q = qfunc(1.0 / sigma);
        EXPECT_NEAR(p.ser, 2 * q - q * q, 3 * p.ser_ci95) << p.snr_db;
    }
}

TEST(Simulator, NoiselessMapRecovery) {
    const auto s = design_system(Scheme::four_point, 4, 2, 6, 4);
    auto c = quick({60.0}, 1, 1000);
    c.engine = Engine::map_oracle;
    const auto p = run_sweep(s, c).points[0];
    EXPECT_EQ(p.trials, 1000);
    EXPECT_EQ(p.symbol_errors, 0);
}

TEST(Simulator, DeterministicAcrossRunsAndWorkers) {
    const auto s = design_system(Scheme::four_point, 4, 2, 6, 4);
    auto c = quick({2.0, 4.0});
    c.workers = 1;
    std::ostringstream a, b, w;
    write_csv(a, run_sweep(s, c), describe(s, c));
    write_csv(b, run_sweep(s, c), describe(s, c));
    c.workers = 3;
    write_csv(w, run_sweep(s, c), describe(s, c));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str(), w.str());
}

TEST(Simulator, CsvShape) {
    const auto s = design_system(Scheme::four_point, 4, 2, 2, 4);
    auto c = quick({0.0, 2.0, 4.0}, 20, 2000);
    std::ostringstream out;
    write_csv(out, run_sweep(s, c), {"hello"});
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# hello");
    std::getline(in, line);
    EXPECT_EQ(line, kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 3);
}

TEST(Simulator, StoppingRuleAndCounts) {
    const auto s = build_lds_system(4, 2, 6, 4);
    auto c = quick({0.0}, 50, 100000);
    const auto p = run_sweep(s, c).points[0];
    EXPECT_GE(p.symbol_errors, 50);
    EXPECT_LE(p.symbol_errors, p.trials * 6);
    EXPECT_LE(p.bit_errors, p.trials * 6 * 2);
    EXPECT_GE(p.ser, 0.0);
    EXPECT_LE(p.ser, 1.0);
    EXPECT_EQ(p.seconds, 0.0);
}

TEST(Simulator, SerDecreasesAlongGrid) {
    const auto s = design_system(Scheme::four_point, 4, 2, 6, 4);
    const auto r = run_sweep(s, quick({0.0, 2.0, 4.0, 6.0}, 200, 50000));
    for (std::size_t i = 1; i < r.points.size(); ++i)
        EXPECT_LE(r.points[i].ser, r.points[i - 1].ser + 3 * (r.points[i].ser_ci95 + r.points[i - 1].ser_ci95));
}

TEST(Simulator, EnginesAgree) {
    const auto s = design_system(Scheme::four_point, 4, 2, 6, 4);
    auto c = quick({3.0}, 200, 20000);
    const auto mpa = run_sweep(s, c).points[0];
    c.engine = Engine::map_oracle;
    const auto map = run_sweep(s, c).points[0];
    EXPECT_LE(std::abs(mpa.ser - map.ser), 3 * (mpa.ser_ci95 + map.ser_ci95));
}

TEST(Simulator, InvalidConfigs) {
    const auto s = design_system(Scheme::four_point, 4, 2, 2, 4);
    EXPECT_THROW(run_sweep(s, quick({})), ParameterError);
    EXPECT_THROW(run_sweep(s, quick({1.0}, 0, 10)), ParameterError);
    EXPECT_THROW(run_sweep(s, quick({1.0}, 100, 10)), ParameterError);
    auto c = quick({1.0});
    c.engine = Engine::map_oracle;
    EXPECT_THROW(run_sweep(design_system(Scheme::t16, 4, 2, 6, 16), c), CapacityError);
}

TEST(Wilson, ContainsEstimate) {
    for (std::int64_t n : {1, 10, 1000, 100000})
        for (std::int64_t e : {std::int64_t{0}, n / 3, n}) {
            const double p = static_cast<double>(e) / static_cast<double>(n);
            const double c = wilson_center(e, n), h = wilson_half_width(e, n);
            EXPECT_LE(c - h, p + 1e-15);
            EXPECT_GE(c + h, p - 1e-15);
        }
}

TEST(Simulator, BlockSeedsDiffer) {
    EXPECT_NE(block_seed(1, 0), block_seed(1, 1));
    EXPECT_NE(block_seed(1, 0), block_seed(2, 0));
    EXPECT_EQ(block_seed(5, 7), block_seed(5, 7));
}

TEST(Simulator, EngineNames) {
    for (auto e : {Engine::mpa, Engine::mpa_collapsed, Engine::split, Engine::map_oracle})
        EXPECT_EQ(engine_from_string(to_string(e)), e);
}
