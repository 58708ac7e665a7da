#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace scma {

using Complex = std::complex<double>;
using RealPoint = std::vector<double>;
using ComplexPoint = std::vector<Complex>;

/// Square matrix, row-major.
struct RealMatrix {
    int size = 0;
    std::vector<double> entries;

    double operator()(int r, int c) const { return entries[static_cast<std::size_t>(r * size + c)]; }
    static RealMatrix identity(int n);
};

/// Planar rotation by `angle` radians: (x, y) -> (x cos - y sin, x sin + y cos).
RealMatrix rotation_matrix(double angle);

/// Finite point set in N real dimensions. Each point carries a label used
/// when the set becomes one axis of a shuffled complex constellation.
class RealConstellation {
public:
    RealConstellation(std::vector<RealPoint> points, std::vector<std::uint32_t> labels);

    int dimension() const { return static_cast<int>(points_.front().size()); }
    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<RealPoint>& points() const { return points_; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }

private:
    std::vector<RealPoint> points_;
    std::vector<std::uint32_t> labels_;
};

/// Sizes of the real-axis and imaginary-axis factors of a constellation
/// built by real/imaginary shuffling. Point index = p * imag_size + q.
struct ShuffleSizes {
    int real_size = 0;
    int imag_size = 0;
    bool operator==(const ShuffleSizes&) const = default;
};

/// M points in N complex dimensions with a bijective bit labeling.
class MotherConstellation {
public:
    /// Scales the points to unit average energy. Use for every new design.
    static MotherConstellation assemble(std::vector<ComplexPoint> points,
                                        std::vector<std::uint32_t> labels,
                                        std::optional<ShuffleSizes> shuffle = std::nullopt);

    /// Keeps the points as given (operator outputs, deserialized files).
    static MotherConstellation from_points(std::vector<ComplexPoint> points,
                                           std::vector<std::uint32_t> labels,
                                           std::optional<ShuffleSizes> shuffle = std::nullopt);

    int size() const { return static_cast<int>(points_.size()); }
    int dimension() const { return static_cast<int>(points_.front().size()); }
    int bits_per_symbol() const { return bits_; }

    const std::vector<ComplexPoint>& points() const { return points_; }
    const ComplexPoint& point(int index) const { return points_[static_cast<std::size_t>(index)]; }
    /// Bit pattern carried by point `index`.
    std::uint32_t label(int index) const { return labels_[static_cast<std::size_t>(index)]; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }
    /// Point carrying bit pattern `bits`.
    int index_of_label(std::uint32_t bits) const { return inverse_[bits]; }

    double average_energy() const;
    const std::optional<ShuffleSizes>& shuffle() const { return shuffle_; }

private:
    MotherConstellation(std::vector<ComplexPoint> points, std::vector<std::uint32_t> labels,
                        std::optional<ShuffleSizes> shuffle);

    std::vector<ComplexPoint> points_;
    std::vector<std::uint32_t> labels_;
    std::vector<int> inverse_;
    std::optional<ShuffleSizes> shuffle_;
    int bits_ = 0;
};

enum class ProductConvention {
    /// Product over every coordinate; zero when any coordinate coincides
    /// (differs by at most 1e-9).
    all_coordinates,
    /// Product over coordinates that differ by more than 1e-9 only.
    differing_coordinates,
};

struct DimensionalPower {
    std::vector<double> per_dimension;  // average |x_n|^2 over points
    double spread = 1.0;                // max over points of max_n |x_n|^2 / min_n |x_n|^2
};

struct ConstellationMetrics {
    double min_euclidean = 0.0;
    double min_product = 0.0;
    std::vector<int> projections;
    DimensionalPower power;
};

inline constexpr double kProjectionTolerance = 1e-6;
inline constexpr double kDifferingTolerance = 1e-9;

/// The golden-angle rotation arctan((1 + sqrt 5) / 2).
double golden_rotation_angle();

/// Cartesian product of L-PAM {-(L-1), ..., L-1}; M_r must equal L^N_real.
RealConstellation base_lattice(int real_dimension, int num_points);

RealConstellation rotate(const RealConstellation& c, const RealMatrix& rotation);

double min_euclidean_distance(std::span<const RealPoint> points);
double min_euclidean_distance(std::span<const ComplexPoint> points);

double min_product_distance(std::span<const RealPoint> points,
                            ProductConvention convention = ProductConvention::all_coordinates);
double min_product_distance(std::span<const ComplexPoint> points,
                            ProductConvention convention = ProductConvention::all_coordinates);

/// Sorted list of all pairwise Euclidean distances.
std::vector<double> distance_profile(std::span<const RealPoint> points);
std::vector<double> distance_profile(std::span<const ComplexPoint> points);

/// Distinct values taken in each complex dimension (merged within 1e-6).
std::vector<int> projections_per_dim(const MotherConstellation& mother);

/// Distinct values of one complex coordinate across `values`, merged within `tol`.
std::vector<Complex> distinct_values(std::span<const Complex> values, double tol = kProjectionTolerance);

DimensionalPower dimensional_power_metrics(const MotherConstellation& mother);

ConstellationMetrics compute_metrics(const MotherConstellation& mother);

/// Complex constellation whose n-th coordinate is U_p[n] + i V_q[n],
/// normalized to unit energy. Labels: U's label in the high bits.
MotherConstellation shuffle_construct(const RealConstellation& real_axis,
                                      const RealConstellation& imag_axis);

/// 16 points, N = 2: both axes carry {(+-1, +-1)} rotated by the golden angle.
MotherConstellation t16qam();

/// 4 points, N = 2: the square {(+-1, +-1)} rotated by `angle`, carried on
/// the real axis of each dimension (the layer phases turn it in the plane).
MotherConstellation rotated_four_point(double angle);

/// 16 points, N = 2, 9 projections per dimension.
MotherConstellation low_projection_16();

/// Square QAM symbol repeated over N dimensions, Gray labeled.
MotherConstellation repetition_qam(int order, int dimension);

struct RotationResult {
    double angle = 0.0;
    RealMatrix rotation;
    double metric = 0.0;  // objective value at `angle`
};

/// Grid search over (0, pi/2) refined by golden section; planar bases only.
RotationResult optimize_rotation_product_distance(const RealConstellation& base, double grid_step);

struct ProjectionRotation {
    double angle = 0.0;
    RealMatrix rotation;
    std::vector<int> projections;
    double projection_spacing = 0.0;  // min distance between distinct projections
    double min_product = 0.0;
};

/// Rotation in (0, pi/2) whose shuffled constellation (both axes = rotated
/// base) has at most `target_projections` projections in every dimension,
/// preferring the widest projection spacing. Candidates are the grid points
/// plus the angles where two base points' projections coincide.
ProjectionRotation optimize_rotation_projections(const RealConstellation& base,
                                                 int target_projections, double grid_step);

}  // namespace scma
