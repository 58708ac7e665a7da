#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scma/detector.hpp"
#include "scma/errors.hpp"
#include "scma/simulator.hpp"
#include "scma/system_io.hpp"

using namespace scma;

namespace {

// "a:b:step" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a)
            throw ParameterError("SNR range must be a:b:step with step > 0 and b >= a");
        const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ParameterError("bad SNR value '" + item + "'");
        }
    }
    return out;
}

std::string fmt(double v, const char* f = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

void print_analysis(const ScmaSystem& system, std::ostream& out) {
    const auto m = compute_metrics(system.mother());
    out << "design      " << system.design() << "\n";
    out << "K N J M     " << system.num_resources() << ' ' << system.num_nonzero() << ' ' << system.num_layers()
        << ' ' << system.alphabet_size() << "\n";
    out << "overloading " << fmt(system.graph().overloading(), "%.4f") << "\n";
    out << "degrees     " << join_ints(system.graph().degrees()) << "\n";
    out << "d_e_min     " << fmt(m.min_euclidean) << "\n";
    out << "d_p_min     " << fmt(m.min_product) << "\n";
    out << "projections " << join_ints(m.projections) << "\n";
    out << "dim_power   ";
    for (std::size_t i = 0; i < m.power.per_dimension.size(); ++i)
        out << (i ? "," : "") << fmt(m.power.per_dimension[i]);
    out << "\n";
    out << "spread      " << (std::isinf(m.power.spread) ? std::string("inf") : fmt(m.power.spread)) << "\n";
    out << "superpos_d  " << fmt(superposition_min_distance(system)) << "\n\n";

    out << "resource  plain  collapsed  split\n";
    const auto report = complexity_report(system);
    for (std::size_t k = 0; k < report.size(); ++k) {
        const auto& r = report[k];
        std::string split = "-";
        if (auto t = r.split_total()) split = std::to_string(*r.split_real) + "+" + std::to_string(*r.split_imag);
        char line[128];
        std::snprintf(line, sizeof line, "%8zu %6lld %10lld  %s\n", k, static_cast<long long>(r.plain),
                      static_cast<long long>(r.collapsed), split.c_str());
        out << line;
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open '" + path + "' for writing");
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCMA codebook design and link-level simulation"};
    app.require_subcommand(1);

    // design
    auto* design = app.add_subcommand("design", "Build a system and write it as JSON");
    int k = 4, n = 2, j = 6, m = 4;
    std::string scheme = "4pt", phases = "lds", design_out;
    design->add_option("--k", k, "resources")->capture_default_str();
    design->add_option("--n", n, "nonzero entries per codeword")->capture_default_str();
    design->add_option("--j", j, "layers")->capture_default_str();
    design->add_option("--m", m, "alphabet size")->capture_default_str();
    design->add_option("--scheme", scheme, "t16 | 4pt | lowproj | lds")->capture_default_str();
    design->add_option("--phases", phases, "lds | identity")->capture_default_str();
    design->add_option("--out", design_out, "output JSON file")->required();

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Print metrics and detector complexity of a system");
    std::string analyze_in;
    analyze->add_option("system", analyze_in, "system JSON file")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo SER/BER sweep");
    std::string sim_system, channel = "awgn", snr = "0:10:2", snr_conv = "per_layer", engine = "mpa", sim_out;
    int iters = 8, workers = 0;
    double damping = 0.0;
    std::uint64_t seed = 1;
    std::int64_t min_errors = 100, max_trials = 100000;
    bool timing = false;
    simulate->add_option("--system", sim_system, "system JSON file")->required();
    simulate->add_option("--channel", channel, "awgn | downlink | uplink")->capture_default_str();
    simulate->add_option("--snr", snr, "a:b:step or comma list (dB)")->capture_default_str();
    simulate->add_option("--snr-conv", snr_conv, "per_layer | total")->capture_default_str();
    simulate->add_option("--engine", engine, "mpa | mpa_collapsed | split | map")->capture_default_str();
    simulate->add_option("--iters", iters, "MPA iterations")->capture_default_str();
    simulate->add_option("--damping", damping, "MPA damping in [0, 1)")->capture_default_str();
    simulate->add_option("--seed", seed)->capture_default_str();
    simulate->add_option("--min-errors", min_errors)->capture_default_str();
    simulate->add_option("--max-trials", max_trials)->capture_default_str();
    simulate->add_option("--workers", workers, "threads, 0 = all cores")->capture_default_str();
    simulate->add_flag("--timing", timing, "fill the seconds column with wall time");
    simulate->add_option("--out", sim_out, "output CSV file (default stdout)");

    // compare
    auto* compare = app.add_subcommand("compare", "SCMA vs LDS experiments");
    std::string experiment, cmp_snr, cmp_out;
    std::uint64_t cmp_seed = 1;
    std::int64_t cmp_min_errors = 100, cmp_max_trials = 100000;
    int cmp_workers = 0;
    std::vector<int> layers{2, 4, 6};
    compare->add_option("--experiment", experiment, "power_variation | shaping")->required();
    compare->add_option("--snr", cmp_snr, "grid override (a:b:step or list)");
    compare->add_option("--layers", layers, "power_variation layer counts")->delimiter(',')->capture_default_str();
    compare->add_option("--seed", cmp_seed)->capture_default_str();
    compare->add_option("--min-errors", cmp_min_errors)->capture_default_str();
    compare->add_option("--max-trials", cmp_max_trials)->capture_default_str();
    compare->add_option("--workers", cmp_workers)->capture_default_str();
    compare->add_option("--out", cmp_out, "output CSV file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*design) {
            const auto system = design_system(scheme_from_string(scheme), k, n, j, m, phase_rule_from_string(phases));
            write_system(system, design_out);
        } else if (*analyze) {
            print_analysis(read_system(analyze_in), std::cout);
        } else if (*simulate) {
            const auto system = read_system(sim_system);
            SimConfig cfg;
            cfg.channel = channel_mode_from_string(channel);
            cfg.convention = snr_convention_from_string(snr_conv);
            cfg.snr_db = parse_grid(snr);
            cfg.seed = seed;
            cfg.stopping = {min_errors, max_trials};
            cfg.engine = engine_from_string(engine);
            cfg.mpa = {iters, damping};
            cfg.workers = workers;
            cfg.record_time = timing;
            const auto result = run_sweep(system, cfg);
            auto comments = describe(system, cfg);
            comments.insert(comments.begin(), "system=" + sim_system);
            if (sim_out.empty()) {
                write_csv(std::cout, result, comments);
            } else {
                auto f = open_out(sim_out);
                write_csv(f, result, comments);
            }
        } else if (*compare) {
            const StoppingRule stop{cmp_min_errors, cmp_max_trials};
            std::vector<ComparisonCurve> curves;
            std::vector<double> grid;
            std::vector<std::string> comments{"experiment=" + experiment};
            if (experiment == "power_variation") {
                grid = parse_grid(cmp_snr.empty() ? "0:12:2" : cmp_snr);
                comments.push_back("K=4 N=2 M=4 channel=awgn snr_conv=per_layer layers=" + join_ints(layers));
                curves = compare_power_variation(grid, layers, cmp_seed, stop, cmp_workers);
            } else if (experiment == "shaping") {
                grid = parse_grid(cmp_snr.empty() ? "10:30:4" : cmp_snr);
                comments.push_back("K=4 N=2 J=2 M=16 channels=uplink,awgn snr_conv=total");
                curves = compare_shaping(grid, cmp_seed, stop, cmp_workers);
            } else {
                throw ParameterError("unknown experiment '" + experiment + "'");
            }
            std::ostringstream g;
            for (std::size_t i = 0; i < grid.size(); ++i) g << (i ? " " : "") << grid[i];
            comments.push_back("snr_db=" + g.str());
            comments.push_back("seed=" + std::to_string(cmp_seed) + " min_errors=" + std::to_string(cmp_min_errors) +
                               " max_trials=" + std::to_string(cmp_max_trials) + " engine=mpa iters=8");
            if (cmp_out.empty()) {
                write_comparison_csv(std::cout, experiment, curves, comments);
            } else {
                auto f = open_out(cmp_out);
                write_comparison_csv(f, experiment, curves, comments);
            }
        }
    } catch (const scma::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
