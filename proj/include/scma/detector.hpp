#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scma/channel.hpp"
#include "scma/codebook.hpp"

namespace scma {

using Distribution = std::vector<double>;

struct DetectionResult {
    std::vector<Distribution> marginals;    // J x M
    std::vector<int> hard_symbols;          // codeword index per layer
    std::vector<std::uint32_t> bit_labels;  // bit pattern of each hard symbol
    int iterations_run = 0;
};

/// Hard decisions from marginals: argmax with ties to the lowest index.
DetectionResult decide(std::vector<Distribution> marginals, const ScmaSystem& system, int iterations);

/// One graph edge (layer j, resource k): the distinct received values the
/// layer can contribute at k and the symbol -> value map.
struct EdgeTable {
    int layer = 0;
    int resource = 0;
    std::vector<Complex> values;
    std::vector<int> value_of_symbol;
};

/// Likelihood factors of one detection problem: y_k compared against the
/// sum of the edge contributions, weighted by exp(-|.|^2 / scale).
struct FactorTables {
    int num_layers = 0;
    int num_resources = 0;
    std::vector<int> alphabet;  // per layer
    std::vector<EdgeTable> edges;
    std::vector<std::vector<int>> edges_at_resource;
    std::vector<std::vector<int>> edges_of_layer;

    void index_edges();
};

struct BeliefState {
    std::vector<Distribution> resource_to_layer;  // one per edge
    std::vector<Distribution> layer_to_resource;  // one per edge
    int iteration = 0;
};

/// Flooding sum-product over a FactorTables problem in the linear domain.
class MessagePassing {
public:
    MessagePassing(FactorTables tables, std::vector<Complex> observation, double likelihood_scale,
                   double damping = 0.0);

    /// All resource nodes, then all layer nodes.
    void iterate();
    void run(int iterations);

    const BeliefState& beliefs() const { return state_; }
    /// Product of incoming resource messages per layer, normalized.
    std::vector<Distribution> marginals() const;
    /// Likelihood evaluations per iteration (sum over resources of the enumerated combinations).
    std::int64_t combinations_per_iteration() const;

private:
    void update_resource(int resource);
    void update_layer(int layer);

    FactorTables tables_;
    double scale_;
    double damping_;
    BeliefState state_;
    // Per resource: mixed-radix sizes of its edges and the likelihood of every
    // value combination (last edge fastest), fixed for the whole run.
    std::vector<std::vector<int>> radix_;
    std::vector<std::vector<double>> likelihood_;
    std::vector<Distribution> mass_;
    std::vector<Distribution> out_;
    std::vector<int> digit_;
    Distribution fresh_;
};

struct MpaOptions {
    int max_iter = 8;
    double damping = 0.0;
};

/// Likelihood tables with h_{j,k} x_{j,k}; `collapse` merges coincident projections.
FactorTables build_tables(const ScmaSystem& system, const ChannelRealization& channel, bool collapse);

DetectionResult mpa_detect(std::span<const Complex> y, const ScmaSystem& system, const ChannelRealization& channel,
                           double noise_var, const MpaOptions& options = {});

/// mpa_detect with resource updates enumerated over distinct projections.
DetectionResult mpa_detect_collapsed(std::span<const Complex> y, const ScmaSystem& system,
                                     const ChannelRealization& channel, double noise_var,
                                     const MpaOptions& options = {});

/// Exact marginals by enumerating all M^J joint hypotheses (M^J <= 2^20).
DetectionResult map_joint_oracle(std::span<const Complex> y, const ScmaSystem& system,
                                 const ChannelRealization& channel, double noise_var);

/// Two MPA instances on real(y) and imag(y) with the real and imaginary
/// factor constellations; marginals are their outer products.
DetectionResult split_detect(std::span<const Complex> y, const ScmaSystem& system, const ChannelRealization& channel,
                             double noise_var, int max_iter = 8);

struct ProjectionTable {
    int layer = 0;
    std::vector<Complex> values;  // distinct codeword entries at this resource
    std::vector<int> value_of_symbol;
};

/// Per resource, the distinct projections of each colliding layer.
std::vector<std::vector<ProjectionTable>> collapse_projections(const ScmaSystem& system);

struct ResourceComplexity {
    std::int64_t plain = 0;               // M^{d_k}
    std::int64_t collapsed = 0;           // prod_j m_{j,k}
    // Present when the system is real/imaginary separable.
    std::optional<std::int64_t> split_real;  // M_real^{d_k}
    std::optional<std::int64_t> split_imag;  // M_imag^{d_k}
    std::optional<std::int64_t> split_total() const {
        if (!split_real || !split_imag) return std::nullopt;
        return *split_real + *split_imag;
    }
};

std::vector<ResourceComplexity> complexity_report(const ScmaSystem& system);

/// Whether the system's codebooks are real/imaginary separable (shuffled
/// mother, operator phases +-1).
bool split_applicable(const ScmaSystem& system);

}  // namespace scma
