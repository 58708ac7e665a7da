#pragma once

#include <string>
#include <vector>

#include "scma/constellation.hpp"
#include "scma/factor_graph.hpp"

namespace scma {

/// Per-layer transform of the mother constellation: one unit phase per
/// nonzero dimension and an optional power scale.
struct LayerOperator {
    std::vector<Complex> phases;
    double power_scale = 1.0;
};

/// One layer's M sparse K-dimensional codewords.
class Codebook {
public:
    Codebook(std::vector<ComplexPoint> codewords, LayerSignature support, std::vector<std::uint32_t> labels);

    int size() const { return static_cast<int>(codewords_.size()); }
    int num_resources() const { return support_.num_resources(); }
    const std::vector<ComplexPoint>& codewords() const { return codewords_; }
    const ComplexPoint& codeword(int index) const { return codewords_[static_cast<std::size_t>(index)]; }
    const LayerSignature& support() const { return support_; }
    std::uint32_t label(int index) const { return labels_[static_cast<std::size_t>(index)]; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }

private:
    std::vector<ComplexPoint> codewords_;
    LayerSignature support_;
    std::vector<std::uint32_t> labels_;
};

enum class Scheme {
    t16,            // shuffled golden-rotated 16-point
    four_point,     // rotated square on the real axis, angle from optimize_superposition_rotation
    low_projection, // 16-point with 9 projections per dimension
    lds,            // repeated square QAM
};

enum class PhaseRule {
    lds,       // exp(i pi (t-1) / d_max) per resource
    identity,  // all phases 1 (keeps real/imaginary separability)
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);
std::string to_string(PhaseRule rule);
PhaseRule phase_rule_from_string(const std::string& name);

/// J codebooks over a shared factor graph, all derived from one mother.
class ScmaSystem {
public:
    ScmaSystem(FactorGraph graph, MotherConstellation mother, std::vector<LayerOperator> operators,
               std::string design = "custom");

    int num_resources() const { return graph_.num_resources(); }
    int num_nonzero() const { return graph_.num_nonzero(); }
    int num_layers() const { return graph_.num_layers(); }
    int alphabet_size() const { return mother_.size(); }
    int bits_per_symbol() const { return mother_.bits_per_symbol(); }

    const FactorGraph& graph() const { return graph_; }
    const MotherConstellation& mother() const { return mother_; }
    const std::vector<LayerOperator>& operators() const { return operators_; }
    const std::vector<Codebook>& codebooks() const { return codebooks_; }
    const Codebook& codebook(int layer) const { return codebooks_[static_cast<std::size_t>(layer)]; }
    const std::string& design() const { return design_; }

private:
    FactorGraph graph_;
    MotherConstellation mother_;
    std::vector<LayerOperator> operators_;
    std::vector<Codebook> codebooks_;
    std::string design_;
};

MotherConstellation apply_operator(const MotherConstellation& mother, const LayerOperator& op);

/// Distinct phases for the layers that collide at each resource.
std::vector<LayerOperator> lds_phase_signatures(const FactorGraph& graph);

std::vector<LayerOperator> identity_operators(const FactorGraph& graph);

Codebook build_codebook(const MotherConstellation& mother, const LayerOperator& op,
                        const LayerSignature& support);

ScmaSystem build_system(int num_resources, int num_nonzero, int num_layers, const MotherConstellation& mother,
                        PhaseRule phases = PhaseRule::lds, std::string design = "custom");

/// Repeated square QAM on the same graph and phases as build_system.
ScmaSystem build_lds_system(int num_resources, int num_nonzero, int num_layers, int qam_order,
                            PhaseRule phases = PhaseRule::lds);

/// Smallest distance between the noiseless superpositions sum_j x_j of two
/// distinct joint symbol tuples (unit channel). Zero when the superposition
/// map is not injective.
double superposition_min_distance(const ScmaSystem& system);

/// Rotation in (0, pi/2) of a planar base, carried on the real axis as in
/// rotated_four_point, that maximizes superposition_min_distance of the
/// (K, N, J) system with LDS phases. Grid search refined by golden section.
RotationResult optimize_superposition_rotation(const RealConstellation& base, int num_resources, int num_nonzero,
                                               int num_layers, double grid_step);

/// Optimized angle for the 4-point design on the K=4, N=2, J=6 graph
/// (computed once per process).
double four_point_rotation_angle();

/// Mother constellation for a named scheme; `order` is the alphabet size.
MotherConstellation scheme_mother(Scheme scheme, int order, int dimension);

ScmaSystem design_system(Scheme scheme, int num_resources, int num_nonzero, int num_layers, int order,
                         PhaseRule phases = PhaseRule::lds);

}  // namespace scma
