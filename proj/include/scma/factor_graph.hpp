#pragma once

#include <cstdint>
#include <vector>

namespace scma {

/// Occupancy pattern of one layer: which of the K resources carry its
/// N nonzero codeword entries.
class LayerSignature {
public:
    LayerSignature(std::vector<std::uint8_t> indicator, int layer_index);

    int num_resources() const { return static_cast<int>(indicator_.size()); }
    int num_nonzero() const { return static_cast<int>(support_.size()); }
    int layer_index() const { return layer_index_; }

    const std::vector<std::uint8_t>& indicator() const { return indicator_; }
    /// Resource indices with indicator 1, ascending.
    const std::vector<int>& support() const { return support_; }

    bool operator==(const LayerSignature& other) const { return indicator_ == other.indicator_; }

private:
    std::vector<std::uint8_t> indicator_;
    std::vector<int> support_;
    int layer_index_;
};

/// K x N binary matrix: I_N with K - N zero rows interleaved.
struct MappingMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> entries;  // row-major

    std::uint8_t at(int r, int c) const { return entries[static_cast<std::size_t>(r * cols + c)]; }
};

class FactorGraph {
public:
    /// Columns must be distinct signatures over the same K with the same N.
    explicit FactorGraph(std::vector<LayerSignature> columns);

    int num_resources() const { return k_; }
    int num_nonzero() const { return n_; }
    int num_layers() const { return static_cast<int>(columns_.size()); }

    double overloading() const { return static_cast<double>(num_layers()) / k_; }

    std::uint8_t at(int resource, int layer) const {
        return columns_[static_cast<std::size_t>(layer)].indicator()[static_cast<std::size_t>(resource)];
    }

    const LayerSignature& layer(int j) const { return columns_[static_cast<std::size_t>(j)]; }
    const std::vector<LayerSignature>& layers() const { return columns_; }

    /// Layers connected to resource k, ascending.
    const std::vector<int>& layers_at(int resource) const {
        return layers_at_[static_cast<std::size_t>(resource)];
    }

    const std::vector<int>& degrees() const { return degrees_; }
    int max_degree() const;
    int min_degree() const;

    /// K x J matrix as nested rows, the layout used in system files.
    std::vector<std::vector<int>> matrix() const;

    bool operator==(const FactorGraph& other) const { return columns_ == other.columns_; }

private:
    int k_ = 0;
    int n_ = 0;
    std::vector<LayerSignature> columns_;
    std::vector<std::vector<int>> layers_at_;
    std::vector<int> degrees_;
};

/// Binomial coefficient for the small arguments used here.
std::int64_t binomial(int n, int k);

/// All C(K, N) signatures in lexicographic order of their support sets.
FactorGraph build_full_graph(int num_resources, int num_nonzero);

/// J of the C(K, N) columns chosen greedily to keep resource degrees
/// balanced, returned in lexicographic order.
FactorGraph build_subgraph(int num_resources, int num_nonzero, int num_layers);

/// Number of resources shared by two distinct layers.
int overlap(const LayerSignature& a, const LayerSignature& b);

MappingMatrix mapping_matrix(const LayerSignature& signature);

}  // namespace scma
