// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scma/detector.hpp"
#include "scma/simulator.hpp"
#include "scma/system_io.hpp"

using namespace scma;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string f(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

double tv(const Distribution& a, const Distribution& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d / 2;
}

Outcome combinatorics() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = build_full_graph(4, 2);
    bool ok = g.num_layers() == 6 && g.max_degree() == 3 && g.min_degree() == 3 && g.overloading() == 1.5;
    for (int k = 2; k <= 8 && ok; ++k)
        for (int n = 1; n < k && ok; ++n) {
            const auto full = build_full_graph(k, n);
            const auto j = full.num_layers();
            const auto df = binomial(k - 1, n - 1);
            ok = j == binomial(k, n) && df * k == j * n;
            for (int d : full.degrees()) ok = ok && d == df;
            for (int a = 0; a < j && ok; ++a)
                for (int b = a + 1; b < j && ok; ++b) {
                    const int l = overlap(full.layer(a), full.layer(b));
                    ok = l >= std::max(0, 2 * n - k) && l <= n - 1;
                }
        }
    const double s = seconds_since(t0);
    return {ok && s < 1.0, "J=6 d_f=3 lambda=1.5; exhaustive K<=8 in " + f("%.3f", s) + " s"};
}

Outcome isometry() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto base = i % 2 ? base_lattice(2, 16) : base_lattice(2, 4);
        const auto a = distance_profile(base.points());
        const auto b = distance_profile(rotate(base, rotation_matrix(u(rng))).points());
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));

        const auto mother = i % 3 ? t16qam() : low_projection_16();
        const auto c = distance_profile(mother.points());
        const auto d =
            distance_profile(apply_operator(mother, {{std::polar(1.0, u(rng)), std::polar(1.0, u(rng))}, 1.0}).points());
        for (std::size_t k = 0; k < c.size(); ++k) worst = std::max(worst, std::abs(c[k] - d[k]));
    }
    return {worst <= 1e-9, "max profile deviation " + f("%.2e", worst) + " over 100 rotations + 100 operators"};
}

Outcome rotation_optimum() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto base = base_lattice(2, 4);
    const auto res = optimize_rotation_product_distance(base, 1e-3);
    const double golden = min_product_distance(rotate(base, rotation_matrix(golden_rotation_angle())).points());
    double grid = 0;
    for (double a = 1e-4; a < std::numbers::pi / 2; a += 1e-4)
        grid = std::max(grid, min_product_distance(rotate(base, rotation_matrix(a)).points()));
    const double s = seconds_since(t0);
    const bool ok = std::abs(res.metric - golden) <= 1e-6 && res.metric >= grid - 1e-9 && s < 5.0;
    return {ok, "angle " + f("%.8f", res.angle) + " d_p " + f("%.9f", res.metric) + " vs theta* " +
                    f("%.9f", golden) + ", grid " + f("%.9f", grid) + ", " + f("%.2f", s) + " s"};
}

Outcome projection_variant() {
    const auto r = optimize_rotation_projections(base_lattice(2, 4), 9, 1e-3);
    const auto lp = design_system(Scheme::low_projection, 4, 2, 6, 16);
    const auto counts = projections_per_dim(lp.mother());
    const double dp = min_product_distance(lp.mother().points());
    bool ok = r.projections == std::vector<int>{9, 9} && counts == std::vector<int>{9, 9} && dp == 0.0;
    std::int64_t plain = 0, collapsed = 0;
    for (const auto& c : complexity_report(lp)) {
        ok = ok && c.plain == 4096 && c.collapsed == 729;
        plain = c.plain;
        collapsed = c.collapsed;
    }
    return {ok, "projections (" + std::to_string(counts[0]) + "," + std::to_string(counts[1]) + "), d_p " +
                    f("%g", dp) + ", per-resource " + std::to_string(collapsed) + " vs " + std::to_string(plain)};
}

Outcome mpa_vs_map() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = design_system(Scheme::four_point, 4, 2, 6, 4);
    const double nv = snr_to_noise_variance(8.0, s, SnrConvention::per_layer).variance;
    Rng rng(2718);
    std::uniform_int_distribution<int> u(0, 3);
    const int draws = 2000;
    double tv_sum = 0;
    std::int64_t e_mpa = 0, e_map = 0;
    const auto ch = unit_channel(6, 4);
    for (int i = 0; i < draws; ++i) {
        std::vector<int> sent;
        std::vector<ComplexPoint> words;
        for (int j = 0; j < 6; ++j) {
            sent.push_back(u(rng));
            words.push_back(s.codebook(j).codeword(sent.back()));
        }
        const auto y = superpose(words, ch, draw_noise(4, nv, rng));
        const auto a = mpa_detect(y, s, ch, nv, {8, 0.0});
        const auto b = map_joint_oracle(y, s, ch, nv);
        for (int j = 0; j < 6; ++j) {
            tv_sum += tv(a.marginals[j], b.marginals[j]) / 6;
            e_mpa += a.hard_symbols[j] != sent[j];
            e_map += b.hard_symbols[j] != sent[j];
        }
    }
    const double mean_tv = tv_sum / draws;
    const std::int64_t n = std::int64_t{draws} * 6;
    const double hw = wilson_half_width(e_mpa, n) + wilson_half_width(e_map, n);
    const double diff = std::abs(static_cast<double>(e_mpa - e_map)) / static_cast<double>(n);
    const double s_run = seconds_since(t0);
    return {mean_tv <= 0.05 && diff <= 3 * hw && s_run < 60,
            "mean TV " + f("%.2e", mean_tv) + " over " + std::to_string(draws) + " draws; SER mpa " +
                f("%.3e", static_cast<double>(e_mpa) / n) + " map " + f("%.3e", static_cast<double>(e_map) / n) +
                " (3 half-widths " + f("%.2e", 3 * hw) + "), " + f("%.1f", s_run) + " s"};
}

Outcome equivalence() {
    Rng rng(31415);
    double worst_collapsed = 0, worst_split = 0;
    const auto lp = design_system(Scheme::low_projection, 4, 2, 6, 16);
    const auto t16 = design_system(Scheme::t16, 4, 2, 6, 16, PhaseRule::identity);
    std::uniform_int_distribution<int> u(0, 15);
    for (int i = 0; i < 100; ++i) {
        for (const ScmaSystem* s : {&lp, &t16}) {
            std::vector<ComplexPoint> words;
            for (int j = 0; j < 6; ++j) words.push_back(s->codebook(j).codeword(u(rng)));
            const double nv = 0.02 + 0.001 * i;
            const auto ch = s == &lp ? draw_channel(ChannelMode::uplink_rayleigh, 6, 4, rng) : unit_channel(6, 4);
            const auto y = superpose(words, ch, draw_noise(4, nv, rng));
            const auto a = mpa_detect(y, *s, ch, nv);
            const auto b = s == &lp ? mpa_detect_collapsed(y, *s, ch, nv) : split_detect(y, *s, ch, nv, 8);
            double& worst = s == &lp ? worst_collapsed : worst_split;
            for (int j = 0; j < 6; ++j) worst = std::max(worst, tv(a.marginals[j], b.marginals[j]));
        }
    }
    return {worst_collapsed <= 1e-9 && worst_split <= 1e-9,
            "max TV collapsed " + f("%.2e", worst_collapsed) + ", split " + f("%.2e", worst_split) +
                " over 100 inputs each"};
}

std::string ser_pair(const SimPoint& a, const SimPoint& b) {
    return f("%g", a.snr_db) + "dB " + f("%.2e", a.ser) + "/" + f("%.2e", b.ser);
}

Outcome power_variation() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> grid{3, 4, 5, 6, 7};
    const auto curves = compare_power_variation(grid, {2, 4, 6}, 2024, {200, 2000000});
    const auto& s2 = curves[0].result.points;
    const auto& l2 = curves[1].result.points;
    const auto& s4 = curves[2].result.points;
    const auto& l4 = curves[3].result.points;
    const auto& s6 = curves[4].result.points;
    const auto& l6 = curves[5].result.points;

    bool ok = true;
    std::string detail = "J=6 scma/lds:";
    int mid = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool in_mid = s6[i].ser >= 1e-3 && s6[i].ser <= 1e-1 && l6[i].ser >= 1e-3 && l6[i].ser <= 1e-1;
        if (!in_mid) continue;
        ++mid;
        ok = ok && s6[i].ser <= l6[i].ser;
        detail += " " + ser_pair(s6[i], l6[i]);
    }
    ok = ok && mid >= 3;
    double worst2 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ratio = std::abs(s2[i].ser - l2[i].ser) / (s2[i].ser_ci95 + l2[i].ser_ci95);
        worst2 = std::max(worst2, ratio);
    }
    ok = ok && worst2 <= 3.0;
    // Gap ordering by load is an expectation only.
    auto gap = [&](const std::vector<SimPoint>& a, const std::vector<SimPoint>& b) {
        double g = 0;
        for (std::size_t i = 0; i < a.size(); ++i) g += std::log10(std::max(b[i].ser, 1e-9) / std::max(a[i].ser, 1e-9));
        return g / static_cast<double>(a.size());
    };
    const double g2 = gap(s2, l2), g4 = gap(s4, l4), g6 = gap(s6, l6);
    const bool ordered = g2 <= g4 && g4 <= g6;
    const double s = seconds_since(t0);
    ok = ok && s < 600;
    detail += "; J=2 max |diff| " + f("%.2f", worst2) + " combined half-widths; mean log10 gaps J2 " + f("%.3f", g2) +
              " J4 " + f("%.3f", g4) + " J6 " + f("%.3f", g6) + (ordered ? " (ordered)" : " (NOT ordered, expectation only)") +
              "; " + f("%.0f", s) + " s";
    return {ok, detail};
}

Outcome shaping() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> grid{12, 14, 16, 18, 20};
    const auto curves = compare_shaping(grid, 99, {200, 2000000});
    const auto& t = curves[0].result.points;  // uplink
    const auto& l = curves[1].result.points;
    bool ok = true;
    int mid = 0;
    std::string detail = "uplink t16/lds:";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (l[i].ser < 1e-3 || l[i].ser > 1e-1) continue;
        ++mid;
        ok = ok && t[i].ser <= l[i].ser;
        detail += " " + ser_pair(t[i], l[i]);
    }
    const double spread_t = dimensional_power_metrics(t16qam()).spread;
    const double spread_l = dimensional_power_metrics(repetition_qam(16, 2)).spread;
    const double s = seconds_since(t0);
    ok = ok && mid >= 3 && spread_t > 1.0 && spread_l == 1.0 && s < 600;
    detail += "; spread t16 " + f("%.3f", spread_t) + " lds " + f("%g", spread_l) + "; " + f("%.0f", s) + " s";
    return {ok, detail};
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

Outcome single_user() {
    const auto s = build_lds_system(2, 1, 1, 4);
    SimConfig c;
    c.snr_db = {2, 5, 8};
    c.seed = 77;
    c.stopping = {500, 2000000};
    const auto r = run_sweep(s, c);
    bool ok = true;
    std::string detail;
    for (const auto& p : r.points) {
        const double sigma = std::sqrt(snr_to_noise_variance(p.snr_db, s, SnrConvention::per_layer).variance);
        const double q = qfunc(1.0 / sigma);
        const double expect = 2 * q - q * q;
        ok = ok && std::abs(p.ser - expect) <= 3 * p.ser_ci95;
        detail += f("%g", p.snr_db) + "dB " + f("%.3e", p.ser) + " vs " + f("%.3e", expect) + "; ";
    }
    return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
#ifdef SCMA_CLI_PATH
    const std::string cli = SCMA_CLI_PATH;
    const auto dir = std::filesystem::temp_directory_path() / "scma_acceptance";
    std::filesystem::create_directories(dir);
    const auto sys = (dir / "system.json").string();
    auto run = [&](const std::string& args) { return std::system((cli + " " + args + " 2>&1").c_str()); };
    if (run("design --k 4 --n 2 --j 6 --m 4 --scheme 4pt --out " + sys) != 0) return {false, "design failed"};
    std::vector<std::string> outputs;
    for (const char* w : {"1", "1", "4"}) {
        const auto out = (dir / (std::string("run_") + std::to_string(outputs.size()) + ".csv")).string();
        const std::string args = "simulate --system " + sys +
                                 " --channel downlink --snr 2:8:3 --snr-conv per_layer --engine mpa --iters 8"
                                 " --seed 5 --min-errors 100 --max-trials 20000 --workers " + w + " --out " + out;
        if (run(args) != 0) return {false, "simulate failed"};
        outputs.push_back(slurp(out));
    }
    const bool ok = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    std::filesystem::remove_all(dir);
    return {ok, std::string(ok ? "identical" : "different") + " CSV bytes for repeated runs with 1, 1, 4 workers (" +
                    std::to_string(outputs[0].size()) + " bytes)"};
#else
    return {false, "CLI not built"};
#endif
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"combinatorics", combinatorics},
        {"isometry", isometry},
        {"rotation optimum", rotation_optimum},
        {"projection variant", projection_variant},
        {"mpa vs map", mpa_vs_map},
        {"equivalence suites", equivalence},
        {"power-variation ordering", power_variation},
        {"shaping ordering", shaping},
        {"single-user sanity", single_user},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
