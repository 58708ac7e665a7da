#include "scma/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scma/errors.hpp"
#include "scma/golden_section.hpp"

namespace scma {

Codebook::Codebook(std::vector<ComplexPoint> codewords, LayerSignature support, std::vector<std::uint32_t> labels)
    : codewords_(std::move(codewords)), support_(std::move(support)), labels_(std::move(labels)) {
    if (codewords_.size() != labels_.size()) throw ParameterError("one label per codeword required");
    const auto k = static_cast<std::size_t>(support_.num_resources());
    for (const auto& c : codewords_) {
        if (c.size() != k) throw ParameterError("codeword length must equal K");
        for (std::size_t r = 0; r < k; ++r)
            if (support_.indicator()[r] == 0 && c[r] != Complex(0.0, 0.0))
                throw ParameterError("codeword has energy outside its support");
    }
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::t16: return "t16";
        case Scheme::four_point: return "4pt";
        case Scheme::low_projection: return "lowproj";
        case Scheme::lds: return "lds";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "t16" || name == "scma_t16") return Scheme::t16;
    if (name == "4pt" || name == "scma_4pt") return Scheme::four_point;
    if (name == "lowproj" || name == "scma_lowproj") return Scheme::low_projection;
    if (name == "lds" || name == "lds_qam") return Scheme::lds;
    throw ParameterError("unknown scheme '" + name + "'");
}

std::string to_string(PhaseRule rule) { return rule == PhaseRule::lds ? "lds" : "identity"; }

PhaseRule phase_rule_from_string(const std::string& name) {
    if (name == "lds") return PhaseRule::lds;
    if (name == "identity" || name == "none") return PhaseRule::identity;
    throw ParameterError("unknown phase rule '" + name + "'");
}

MotherConstellation apply_operator(const MotherConstellation& mother, const LayerOperator& op) {
    if (static_cast<int>(op.phases.size()) != mother.dimension())
        throw ParameterError("operator has " + std::to_string(op.phases.size()) + " phases for a " +
                             std::to_string(mother.dimension()) + "-dimensional constellation");
    if (!(op.power_scale > 0.0)) throw ParameterError("power scale must be positive");
    for (const auto& ph : op.phases)
        if (std::abs(std::abs(ph) - 1.0) > 1e-12) throw ParameterError("operator phases must have unit modulus");
    const double amp = std::sqrt(op.power_scale);
    auto points = mother.points();
    for (auto& p : points)
        for (std::size_t n = 0; n < p.size(); ++n) p[n] *= op.phases[n] * amp;
    return MotherConstellation::from_points(std::move(points), mother.labels(), mother.shuffle());
}

std::vector<LayerOperator> lds_phase_signatures(const FactorGraph& graph) {
    const int d_max = graph.max_degree();
    std::vector<LayerOperator> ops(static_cast<std::size_t>(graph.num_layers()));
    for (auto& op : ops) op.phases.assign(static_cast<std::size_t>(graph.num_nonzero()), Complex(1.0, 0.0));
    for (int k = 0; k < graph.num_resources(); ++k) {
        const auto& layers = graph.layers_at(k);
        for (std::size_t t = 0; t < layers.size(); ++t) {
            const int j = layers[t];
            const auto& support = graph.layer(j).support();
            const auto local = std::find(support.begin(), support.end(), k) - support.begin();
            ops[static_cast<std::size_t>(j)].phases[static_cast<std::size_t>(local)] =
                std::polar(1.0, std::numbers::pi * static_cast<double>(t) / d_max);
        }
    }
    return ops;
}

std::vector<LayerOperator> identity_operators(const FactorGraph& graph) {
    LayerOperator op{std::vector<Complex>(static_cast<std::size_t>(graph.num_nonzero()), Complex(1.0, 0.0)), 1.0};
    return std::vector<LayerOperator>(static_cast<std::size_t>(graph.num_layers()), op);
}

Codebook build_codebook(const MotherConstellation& mother, const LayerOperator& op,
                        const LayerSignature& support) {
    if (support.num_nonzero() != mother.dimension())
        throw ParameterError("support has " + std::to_string(support.num_nonzero()) +
                             " nonzeros but the constellation has dimension " +
                             std::to_string(mother.dimension()));
    const auto layer = apply_operator(mother, op);
    const auto v = mapping_matrix(support);
    std::vector<ComplexPoint> codewords;
    codewords.reserve(static_cast<std::size_t>(layer.size()));
    for (const auto& p : layer.points()) {
        ComplexPoint x(static_cast<std::size_t>(v.rows), Complex(0.0, 0.0));
        for (int r = 0; r < v.rows; ++r)
            for (int c = 0; c < v.cols; ++c)
                if (v.at(r, c)) x[static_cast<std::size_t>(r)] += p[static_cast<std::size_t>(c)];
        codewords.push_back(std::move(x));
    }
    return Codebook(std::move(codewords), support, layer.labels());
}

ScmaSystem::ScmaSystem(FactorGraph graph, MotherConstellation mother, std::vector<LayerOperator> operators,
                       std::string design)
    : graph_(std::move(graph)), mother_(std::move(mother)), operators_(std::move(operators)),
      design_(std::move(design)) {
    if (mother_.dimension() != graph_.num_nonzero())
        throw ParameterError("mother constellation dimension must equal N");
    if (static_cast<int>(operators_.size()) != graph_.num_layers())
        throw ParameterError("one operator per layer required");
    for (int j = 0; j < graph_.num_layers(); ++j)
        codebooks_.push_back(build_codebook(mother_, operators_[static_cast<std::size_t>(j)], graph_.layer(j)));
}

ScmaSystem build_system(int num_resources, int num_nonzero, int num_layers, const MotherConstellation& mother,
                        PhaseRule phases, std::string design) {
    auto graph = build_subgraph(num_resources, num_nonzero, num_layers);
    auto ops = phases == PhaseRule::lds ? lds_phase_signatures(graph) : identity_operators(graph);
    return ScmaSystem(std::move(graph), mother, std::move(ops), std::move(design));
}

ScmaSystem build_lds_system(int num_resources, int num_nonzero, int num_layers, int qam_order, PhaseRule phases) {
    return build_system(num_resources, num_nonzero, num_layers, repetition_qam(qam_order, num_nonzero), phases,
                        "lds");
}

MotherConstellation scheme_mother(Scheme scheme, int order, int dimension) {
    auto require = [&](int m, int n) {
        if (order != m || dimension != n)
            throw ParameterError("scheme " + to_string(scheme) + " is defined for M=" + std::to_string(m) +
                                 ", N=" + std::to_string(n));
    };
    switch (scheme) {
        case Scheme::t16: require(16, 2); return t16qam();
        case Scheme::four_point: require(4, 2); return rotated_four_point(four_point_rotation_angle());
        case Scheme::low_projection: require(16, 2); return low_projection_16();
        case Scheme::lds: return repetition_qam(order, dimension);
    }
    throw ParameterError("unknown scheme");
}

ScmaSystem design_system(Scheme scheme, int num_resources, int num_nonzero, int num_layers, int order,
                         PhaseRule phases) {
    return build_system(num_resources, num_nonzero, num_layers, scheme_mother(scheme, order, num_nonzero), phases,
                        to_string(scheme));
}

}  // namespace scma

namespace scma {

namespace {

// Depth-first search over per-layer codeword differences (0 allowed) with the
// squared distance of every resource whose layers are all assigned as bound.
class SuperpositionSearch {
public:
    explicit SuperpositionSearch(const ScmaSystem& system) : system_(system) {
        const int layers = system.num_layers();
        const int k_res = system.num_resources();
        for (int j = 0; j < layers; ++j) {
            const auto& cb = system.codebook(j);
            std::vector<ComplexPoint> diffs{ComplexPoint(static_cast<std::size_t>(k_res), Complex(0.0, 0.0))};
            for (int a = 0; a < cb.size(); ++a) {
                for (int b = 0; b < cb.size(); ++b) {
                    if (a == b) continue;
                    ComplexPoint d(static_cast<std::size_t>(k_res));
                    for (int k = 0; k < k_res; ++k)
                        d[static_cast<std::size_t>(k)] = cb.codeword(a)[static_cast<std::size_t>(k)] - cb.codeword(b)[static_cast<std::size_t>(k)];
                    diffs.push_back(std::move(d));
                }
            }
            diffs_.push_back(std::move(diffs));
        }
        closes_.assign(static_cast<std::size_t>(layers), {});
        for (int k = 0; k < k_res; ++k) {
            const auto& at = system.graph().layers_at(k);
            if (!at.empty()) closes_[static_cast<std::size_t>(at.back())].push_back(k);
        }
        partial_.assign(static_cast<std::size_t>(k_res), Complex(0.0, 0.0));
    }

    double run() {
        best_ = std::numeric_limits<double>::infinity();
        descend(0, 0.0, false);
        return std::sqrt(best_);
    }

private:
    void descend(int layer, double closed, bool any_nonzero) {
        if (layer == system_.num_layers()) {
            if (any_nonzero) best_ = std::min(best_, closed);
            return;
        }
        const auto& support = system_.graph().layer(layer).support();
        const auto& diffs = diffs_[static_cast<std::size_t>(layer)];
        for (std::size_t i = 0; i < diffs.size(); ++i) {
            for (int k : support) partial_[static_cast<std::size_t>(k)] += diffs[i][static_cast<std::size_t>(k)];
            double c = closed;
            for (int k : closes_[static_cast<std::size_t>(layer)]) c += std::norm(partial_[static_cast<std::size_t>(k)]);
            if (c < best_) descend(layer + 1, c, any_nonzero || i != 0);
            for (int k : support) partial_[static_cast<std::size_t>(k)] -= diffs[i][static_cast<std::size_t>(k)];
        }
    }

    const ScmaSystem& system_;
    std::vector<std::vector<ComplexPoint>> diffs_;
    std::vector<std::vector<int>> closes_;
    std::vector<Complex> partial_;
    double best_ = 0.0;
};

}  // namespace

double superposition_min_distance(const ScmaSystem& system) { return SuperpositionSearch(system).run(); }

RotationResult optimize_superposition_rotation(const RealConstellation& base, int num_resources, int num_nonzero,
                                               int num_layers, double grid_step) {
    if (!(grid_step > 0.0)) throw ParameterError("grid step must be positive");
    if (base.dimension() != 2 || num_nonzero != 2)
        throw ParameterError("superposition rotation search needs a planar base and N = 2");
    const auto graph = build_subgraph(num_resources, num_nonzero, num_layers);
    const auto ops = lds_phase_signatures(graph);
    const RealConstellation origin({RealPoint(2, 0.0)}, {0});
    auto objective = [&](double angle) {
        const auto mother = shuffle_construct(rotate(base, rotation_matrix(angle)), origin);
        return superposition_min_distance(ScmaSystem(graph, mother, ops));
    };

    const double half_pi = std::numbers::pi / 2.0;
    double best_angle = 0.0;
    double best_value = -1.0;
    for (int k = 1; k * grid_step < half_pi; ++k) {
        const double v = objective(k * grid_step);
        if (v > best_value) {
            best_value = v;
            best_angle = k * grid_step;
        }
    }
    if (best_value < 0.0) throw ParameterError("grid step leaves no angle inside (0, pi/2)");
    const auto refined = golden_section_maximize(objective, std::max(best_angle - grid_step, 0.5 * best_angle),
                                                 std::min(best_angle + grid_step, 0.5 * (best_angle + half_pi)), 1e-9);
    if (refined.value > best_value) {
        best_value = refined.value;
        best_angle = refined.argmax;
    }
    return {best_angle, rotation_matrix(best_angle), best_value};
}

double four_point_rotation_angle() {
    static const double angle = optimize_superposition_rotation(base_lattice(2, 4), 4, 2, 6, 1e-3).angle;
    return angle;
}

}  // namespace scma
