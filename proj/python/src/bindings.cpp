#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "scma/detector.hpp"
#include "scma/errors.hpp"
#include "scma/simulator.hpp"
#include "scma/system_io.hpp"

namespace py = pybind11;
using namespace scma;

namespace {

py::dict detection_dict(const DetectionResult& r) {
    py::dict d;
    d["marginals"] = r.marginals;
    d["hard_symbols"] = r.hard_symbols;
    d["bit_labels"] = r.bit_labels;
    d["iterations_run"] = r.iterations_run;
    return d;
}

ChannelRealization channel_or_unit(const ScmaSystem& s, const std::optional<std::vector<std::vector<Complex>>>& gains) {
    auto ch = unit_channel(s.num_layers(), s.num_resources());
    if (!gains) return ch;
    if (static_cast<int>(gains->size()) != s.num_layers()) throw ParameterError("gains must be J rows");
    ch.gains.clear();
    for (const auto& row : *gains) {
        if (static_cast<int>(row.size()) != s.num_resources()) throw ParameterError("gain rows must have K entries");
        ch.gains.insert(ch.gains.end(), row.begin(), row.end());
    }
    ch.mode = ChannelMode::uplink_rayleigh;
    return ch;
}

py::dict point_dict(const SimPoint& p) {
    py::dict d;
    d["snr_db"] = p.snr_db;
    d["trials"] = p.trials;
    d["sym_errors"] = p.symbol_errors;
    d["bit_errors"] = p.bit_errors;
    d["ser"] = p.ser;
    d["ber"] = p.ber;
    d["ser_ci95"] = p.ser_ci95;
    d["ber_ci95"] = p.ber_ci95;
    d["seconds"] = p.seconds;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SCMA codebook design, detection and link-level simulation";

    auto base = py::register_exception<Error>(m, "ScmaError", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<IdentityError>(m, "IdentityError", base.ptr());
    py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<ModeError>(m, "ModeError", base.ptr());

    py::class_<FactorGraph>(m, "FactorGraph")
        .def_property_readonly("K", &FactorGraph::num_resources)
        .def_property_readonly("N", &FactorGraph::num_nonzero)
        .def_property_readonly("J", &FactorGraph::num_layers)
        .def_property_readonly("degrees", &FactorGraph::degrees)
        .def_property_readonly("overloading", &FactorGraph::overloading)
        .def("matrix", &FactorGraph::matrix)
        .def("support", [](const FactorGraph& g, int j) { return g.layer(j).support(); });

    m.def("binomial", &binomial);
    m.def("build_full_graph", &build_full_graph, py::arg("K"), py::arg("N"));
    m.def("build_subgraph", &build_subgraph, py::arg("K"), py::arg("N"), py::arg("J"));
    m.def(
        "overlap",
        [](std::vector<std::uint8_t> a, std::vector<std::uint8_t> b) {
            return overlap(LayerSignature(std::move(a), 0), LayerSignature(std::move(b), 1));
        },
        py::arg("f"), py::arg("g"));

    py::class_<MotherConstellation>(m, "MotherConstellation")
        .def_property_readonly("M", &MotherConstellation::size)
        .def_property_readonly("N", &MotherConstellation::dimension)
        .def_property_readonly("points", &MotherConstellation::points)
        .def_property_readonly("labels", &MotherConstellation::labels)
        .def("average_energy", &MotherConstellation::average_energy)
        .def("metrics", [](const MotherConstellation& c) {
            const auto mt = compute_metrics(c);
            py::dict d;
            d["d_e_min"] = mt.min_euclidean;
            d["d_p_min"] = mt.min_product;
            d["projections"] = mt.projections;
            d["dim_power"] = mt.power.per_dimension;
            d["dim_power_spread"] = mt.power.spread;
            return d;
        });

    m.def("golden_rotation_angle", &golden_rotation_angle);
    m.def("t16qam", &t16qam);
    m.def("low_projection_16", &low_projection_16);
    m.def("repetition_qam", &repetition_qam, py::arg("order"), py::arg("dimension"));
    m.def(
        "optimize_rotation_product_distance",
        [](double step) {
            const auto r = optimize_rotation_product_distance(base_lattice(2, 4), step);
            return py::make_tuple(r.angle, r.metric);
        },
        py::arg("grid_step") = 1e-3, "Best rotation of the square {(+-1, +-1)}: (angle, min product distance).");
    m.def(
        "min_product_distance",
        [](const std::vector<RealPoint>& pts, bool differing) {
            return min_product_distance(pts, differing ? ProductConvention::differing_coordinates
                                                       : ProductConvention::all_coordinates);
        },
        py::arg("points"), py::arg("differing_only") = false);

    py::class_<ScmaSystem>(m, "System")
        .def_property_readonly("K", &ScmaSystem::num_resources)
        .def_property_readonly("N", &ScmaSystem::num_nonzero)
        .def_property_readonly("J", &ScmaSystem::num_layers)
        .def_property_readonly("M", &ScmaSystem::alphabet_size)
        .def_property_readonly("design", &ScmaSystem::design)
        .def_property_readonly("graph", &ScmaSystem::graph)
        .def_property_readonly("mother", &ScmaSystem::mother)
        .def("codewords", [](const ScmaSystem& s, int j) { return s.codebook(j).codewords(); })
        .def("to_json", &serialize_system)
        .def_static("from_json", [](const std::string& text) { return parse_system(text); })
        .def("superposition_min_distance", &superposition_min_distance)
        .def("complexity_report", [](const ScmaSystem& s) {
            py::list out;
            for (const auto& r : complexity_report(s)) {
                py::dict d;
                d["plain"] = r.plain;
                d["collapsed"] = r.collapsed;
                d["split"] = r.split_total() ? py::cast(*r.split_total()) : py::none();
                out.append(d);
            }
            return out;
        });

    m.def(
        "design_system",
        [](const std::string& scheme, int k, int n, int j, int order, const std::string& phases) {
            return design_system(scheme_from_string(scheme), k, n, j, order, phase_rule_from_string(phases));
        },
        py::arg("scheme"), py::arg("K") = 4, py::arg("N") = 2, py::arg("J") = 6, py::arg("M") = 4,
        py::arg("phases") = "lds");
    m.def(
        "build_lds_system",
        [](int k, int n, int j, int order) { return build_lds_system(k, n, j, order); }, py::arg("K"), py::arg("N"),
        py::arg("J"), py::arg("qam_order"));

    m.def(
        "noise_variance",
        [](double snr, const ScmaSystem& s, const std::string& conv) {
            return snr_to_noise_variance(snr, s, snr_convention_from_string(conv)).variance;
        },
        py::arg("snr_db"), py::arg("system"), py::arg("convention") = "per_layer");
    m.def(
        "superpose",
        [](const ScmaSystem& s, const std::vector<int>& symbols) {
            if (static_cast<int>(symbols.size()) != s.num_layers()) throw ParameterError("one symbol per layer");
            std::vector<ComplexPoint> words;
            for (int j = 0; j < s.num_layers(); ++j) words.push_back(s.codebook(j).codeword(symbols[j]));
            return superpose(words, unit_channel(s.num_layers(), s.num_resources()),
                             std::vector<Complex>(static_cast<std::size_t>(s.num_resources())));
        },
        py::arg("system"), py::arg("symbols"), "Noiseless unit-channel superposition of one symbol per layer.");

    m.def(
        "mpa_detect",
        [](const std::vector<Complex>& y, const ScmaSystem& s, double nv, int iters, double damping, bool collapsed,
           std::optional<std::vector<std::vector<Complex>>> gains) {
            const auto ch = channel_or_unit(s, gains);
            const MpaOptions o{iters, damping};
            return detection_dict(collapsed ? mpa_detect_collapsed(y, s, ch, nv, o) : mpa_detect(y, s, ch, nv, o));
        },
        py::arg("y"), py::arg("system"), py::arg("noise_var"), py::arg("max_iter") = 8, py::arg("damping") = 0.0,
        py::arg("collapsed") = false, py::arg("gains") = py::none());
    m.def(
        "map_detect",
        [](const std::vector<Complex>& y, const ScmaSystem& s, double nv,
           std::optional<std::vector<std::vector<Complex>>> gains) {
            return detection_dict(map_joint_oracle(y, s, channel_or_unit(s, gains), nv));
        },
        py::arg("y"), py::arg("system"), py::arg("noise_var"), py::arg("gains") = py::none());
    m.def(
        "split_detect",
        [](const std::vector<Complex>& y, const ScmaSystem& s, double nv, int iters,
           std::optional<std::vector<std::vector<Complex>>> gains) {
            return detection_dict(split_detect(y, s, channel_or_unit(s, gains), nv, iters));
        },
        py::arg("y"), py::arg("system"), py::arg("noise_var"), py::arg("max_iter") = 8, py::arg("gains") = py::none());

    m.def(
        "simulate",
        [](const ScmaSystem& s, std::vector<double> snr, const std::string& channel, const std::string& conv,
           const std::string& engine, std::uint64_t seed, std::int64_t min_errors, std::int64_t max_trials,
           int iters, int workers) {
            SimConfig c;
            c.channel = channel_mode_from_string(channel);
            c.convention = snr_convention_from_string(conv);
            c.engine = engine_from_string(engine);
            c.snr_db = std::move(snr);
            c.seed = seed;
            c.stopping = {min_errors, max_trials};
            c.mpa.max_iter = iters;
            c.workers = workers;
            SimResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(s, c);
            }
            std::ostringstream csv;
            write_csv(csv, r, describe(s, c));
            py::list rows;
            for (const auto& p : r.points) rows.append(point_dict(p));
            return py::make_tuple(rows, csv.str());
        },
        py::arg("system"), py::arg("snr_db"), py::arg("channel") = "awgn", py::arg("convention") = "per_layer",
        py::arg("engine") = "mpa", py::arg("seed") = 1, py::arg("min_errors") = 100, py::arg("max_trials") = 100000,
        py::arg("max_iter") = 8, py::arg("workers") = 0,
        "Monte Carlo sweep; returns (rows, csv_text).");
}
