#include "scma/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scma/errors.hpp"
#include "scma/golden_section.hpp"

namespace scma {

namespace {

std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
    int b = 0;
    while ((1 << b) < v) ++b;
    return b;
}

double abs_diff(double a, double b) { return std::abs(a - b); }
double abs_diff(const Complex& a, const Complex& b) { return std::abs(a - b); }

template <typename Point>
double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double d = abs_diff(a[n], b[n]);
        s += d * d;
    }
    return s;
}

template <typename Point>
double min_euclidean_impl(std::span<const Point> points) {
    if (points.size() < 2) throw ParameterError("distance metrics need at least two points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::min(best, squared_distance(points[i], points[j]));
    return std::sqrt(best);
}

template <typename Point>
double min_product_impl(std::span<const Point> points, ProductConvention convention) {
    if (points.size() < 2) throw ParameterError("distance metrics need at least two points");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double prod = 1.0;
            for (std::size_t n = 0; n < points[i].size(); ++n) {
                const double d = abs_diff(points[i][n], points[j][n]);
                if (d <= kDifferingTolerance) {
                    if (convention == ProductConvention::differing_coordinates) continue;
                    prod = 0.0;
                    break;
                }
                prod *= d;
            }
            best = std::min(best, prod);
        }
    }
    return best;
}

template <typename Point>
std::vector<double> profile_impl(std::span<const Point> points) {
    std::vector<double> out;
    out.reserve(points.size() * (points.size() - 1) / 2);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            out.push_back(std::sqrt(squared_distance(points[i], points[j])));
    std::sort(out.begin(), out.end());
    return out;
}

void check_distinct(const std::vector<ComplexPoint>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (squared_distance(points[i], points[j]) < 1e-24)
                throw ParameterError("constellation points must be distinct");
}

RealConstellation origin_point(int dimension) {
    return RealConstellation({RealPoint(static_cast<std::size_t>(dimension), 0.0)}, {0});
}

void require_planar(const RealConstellation& base) {
    if (base.dimension() != 2)
        throw ParameterError("rotation search supports 2-dimensional real bases only, got N=" +
                             std::to_string(base.dimension()));
}

// Smallest gap between distinct projections over all dimensions.
double projection_spacing(const MotherConstellation& mother) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<Complex> column(static_cast<std::size_t>(mother.size()));
    for (int n = 0; n < mother.dimension(); ++n) {
        for (int i = 0; i < mother.size(); ++i)
            column[static_cast<std::size_t>(i)] = mother.point(i)[static_cast<std::size_t>(n)];
        const auto values = distinct_values(column);
        for (std::size_t a = 0; a < values.size(); ++a)
            for (std::size_t b = a + 1; b < values.size(); ++b)
                best = std::min(best, std::abs(values[a] - values[b]));
    }
    return best;
}

}  // namespace

RealMatrix RealMatrix::identity(int n) {
    RealMatrix m{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
    for (int i = 0; i < n; ++i) m.entries[static_cast<std::size_t>(i * n + i)] = 1.0;
    return m;
}

RealMatrix rotation_matrix(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return RealMatrix{2, {c, -s, s, c}};
}

RealConstellation::RealConstellation(std::vector<RealPoint> points, std::vector<std::uint32_t> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.empty()) throw ParameterError("real constellation needs at least one point");
    if (labels_.size() != points_.size()) throw ParameterError("one label per point required");
    const std::size_t dim = points_.front().size();
    if (dim == 0) throw ParameterError("real constellation needs dimension >= 1");
    RealPoint centroid(dim, 0.0);
    for (const auto& p : points_) {
        if (p.size() != dim) throw ParameterError("all points must share the dimension");
        for (std::size_t n = 0; n < dim; ++n) centroid[n] += p[n];
    }
    for (double c : centroid)
        if (std::abs(c / static_cast<double>(points_.size())) > 1e-12)
            throw ParameterError("real constellation must be centered at the origin");
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            if (squared_distance(points_[i], points_[j]) < 1e-24)
                throw ParameterError("real constellation points must be distinct");
}

MotherConstellation::MotherConstellation(std::vector<ComplexPoint> points,
                                         std::vector<std::uint32_t> labels,
                                         std::optional<ShuffleSizes> shuffle)
    : points_(std::move(points)), labels_(std::move(labels)), shuffle_(shuffle) {
    const int m = size();
    if (!is_power_of_two(m) || m < 2) throw ParameterError("constellation size must be a power of two >= 2");
    if (labels_.size() != points_.size()) throw ParameterError("one label per point required");
    const std::size_t dim = points_.front().size();
    if (dim == 0) throw ParameterError("constellation needs dimension >= 1");
    for (const auto& p : points_)
        if (p.size() != dim) throw ParameterError("all points must share the dimension");
    bits_ = log2_exact(m);
    inverse_.assign(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        const auto b = labels_[static_cast<std::size_t>(i)];
        if (b >= static_cast<std::uint32_t>(m) || inverse_[b] != -1)
            throw ParameterError("labels must be a bijection onto 0..M-1");
        inverse_[b] = i;
    }
    if (shuffle_ && shuffle_->real_size * shuffle_->imag_size != m)
        throw ParameterError("shuffle sizes must multiply to M");
    check_distinct(points_);
}

MotherConstellation MotherConstellation::assemble(std::vector<ComplexPoint> points,
                                                  std::vector<std::uint32_t> labels,
                                                  std::optional<ShuffleSizes> shuffle) {
    double energy = 0.0;
    for (const auto& p : points)
        for (const auto& v : p) energy += std::norm(v);
    if (points.empty() || energy <= 0.0) throw ParameterError("constellation energy must be positive");
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(points.size()));
    for (auto& p : points)
        for (auto& v : p) v *= scale;
    return MotherConstellation(std::move(points), std::move(labels), shuffle);
}

MotherConstellation MotherConstellation::from_points(std::vector<ComplexPoint> points,
                                                     std::vector<std::uint32_t> labels,
                                                     std::optional<ShuffleSizes> shuffle) {
    if (points.empty()) throw ParameterError("constellation needs points");
    return MotherConstellation(std::move(points), std::move(labels), shuffle);
}

double MotherConstellation::average_energy() const {
    double e = 0.0;
    for (const auto& p : points_)
        for (const auto& v : p) e += std::norm(v);
    return e / size();
}

double golden_rotation_angle() { return std::atan((1.0 + std::sqrt(5.0)) / 2.0); }

RealConstellation base_lattice(int real_dimension, int num_points) {
    if (real_dimension < 1) throw ParameterError("lattice dimension must be >= 1");
    const int levels = static_cast<int>(std::lround(std::pow(num_points, 1.0 / real_dimension)));
    std::int64_t check = 1;
    for (int n = 0; n < real_dimension; ++n) check *= levels;
    if (levels < 2 || check != num_points)
        throw ParameterError("lattice size " + std::to_string(num_points) + " is not L^" +
                             std::to_string(real_dimension) + " for an integer L >= 2");

    const bool gray_labels = is_power_of_two(levels);
    const int bits = log2_exact(levels);
    std::vector<RealPoint> points;
    std::vector<std::uint32_t> labels;
    for (int i = 0; i < num_points; ++i) {
        RealPoint p(static_cast<std::size_t>(real_dimension));
        std::uint32_t label = 0;
        int rest = i;
        // first coordinate is the most significant digit
        for (int n = real_dimension - 1; n >= 0; --n) {
            const int digit = rest % levels;
            rest /= levels;
            p[static_cast<std::size_t>(n)] = 2.0 * digit - (levels - 1);
        }
        if (gray_labels) {
            int shift = 0;
            rest = i;
            for (int n = real_dimension - 1; n >= 0; --n) {
                label |= gray(static_cast<std::uint32_t>(rest % levels)) << shift;
                rest /= levels;
                shift += bits;
            }
        } else {
            label = static_cast<std::uint32_t>(i);
        }
        points.push_back(std::move(p));
        labels.push_back(label);
    }
    return RealConstellation(std::move(points), std::move(labels));
}

RealConstellation rotate(const RealConstellation& c, const RealMatrix& rotation) {
    const int n = c.dimension();
    if (rotation.size != n || rotation.entries.size() != static_cast<std::size_t>(n * n))
        throw ParameterError("rotation dimension does not match the constellation");
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double dot = 0.0;
            for (int r = 0; r < n; ++r) dot += rotation(r, a) * rotation(r, b);
            if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-10)
                throw ParameterError("rotation matrix is not orthogonal");
        }
    }
    std::vector<RealPoint> out;
    out.reserve(static_cast<std::size_t>(c.size()));
    for (const auto& p : c.points()) {
        RealPoint q(static_cast<std::size_t>(n), 0.0);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) q[static_cast<std::size_t>(r)] += rotation(r, k) * p[static_cast<std::size_t>(k)];
        out.push_back(std::move(q));
    }
    return RealConstellation(std::move(out), c.labels());
}

double min_euclidean_distance(std::span<const RealPoint> points) { return min_euclidean_impl(points); }
double min_euclidean_distance(std::span<const ComplexPoint> points) { return min_euclidean_impl(points); }

double min_product_distance(std::span<const RealPoint> points, ProductConvention convention) {
    return min_product_impl(points, convention);
}
double min_product_distance(std::span<const ComplexPoint> points, ProductConvention convention) {
    return min_product_impl(points, convention);
}

std::vector<double> distance_profile(std::span<const RealPoint> points) { return profile_impl(points); }
std::vector<double> distance_profile(std::span<const ComplexPoint> points) { return profile_impl(points); }

std::vector<Complex> distinct_values(std::span<const Complex> values, double tol) {
    std::vector<Complex> reps;
    for (const auto& v : values) {
        const bool seen = std::any_of(reps.begin(), reps.end(),
                                      [&](const Complex& r) { return std::abs(r - v) <= tol; });
        if (!seen) reps.push_back(v);
    }
    return reps;
}

std::vector<int> projections_per_dim(const MotherConstellation& mother) {
    std::vector<int> counts;
    std::vector<Complex> column(static_cast<std::size_t>(mother.size()));
    for (int n = 0; n < mother.dimension(); ++n) {
        for (int i = 0; i < mother.size(); ++i)
            column[static_cast<std::size_t>(i)] = mother.point(i)[static_cast<std::size_t>(n)];
        counts.push_back(static_cast<int>(distinct_values(column).size()));
    }
    return counts;
}

DimensionalPower dimensional_power_metrics(const MotherConstellation& mother) {
    DimensionalPower out;
    out.per_dimension.assign(static_cast<std::size_t>(mother.dimension()), 0.0);
    out.spread = 1.0;
    for (const auto& p : mother.points()) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) {
            // Entries that vanish up to rounding count as exact zeros.
            const double e = std::abs(p[n]) <= kDifferingTolerance ? 0.0 : std::norm(p[n]);
            out.per_dimension[n] += std::norm(p[n]);
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        if (hi == 0.0) continue;
        out.spread = std::max(out.spread, lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo);
    }
    for (auto& e : out.per_dimension) e /= mother.size();
    return out;
}

ConstellationMetrics compute_metrics(const MotherConstellation& mother) {
    ConstellationMetrics m;
    m.min_euclidean = min_euclidean_distance(mother.points());
    m.min_product = min_product_distance(mother.points());
    m.projections = projections_per_dim(mother);
    m.power = dimensional_power_metrics(mother);
    return m;
}

MotherConstellation shuffle_construct(const RealConstellation& real_axis,
                                      const RealConstellation& imag_axis) {
    if (real_axis.dimension() != imag_axis.dimension())
        throw ParameterError("real and imaginary constellations must share the dimension");
    const int mu = real_axis.size();
    const int mv = imag_axis.size();
    if (!is_power_of_two(mu) || !is_power_of_two(mv) || mu * mv < 2)
        throw ParameterError("shuffled factor sizes must be powers of two with product >= 2");
    const int imag_bits = log2_exact(mv);
    const auto dim = static_cast<std::size_t>(real_axis.dimension());

    std::vector<ComplexPoint> points;
    std::vector<std::uint32_t> labels;
    for (int p = 0; p < mu; ++p) {
        for (int q = 0; q < mv; ++q) {
            ComplexPoint x(dim);
            for (std::size_t n = 0; n < dim; ++n)
                x[n] = Complex(real_axis.points()[static_cast<std::size_t>(p)][n],
                               imag_axis.points()[static_cast<std::size_t>(q)][n]);
            points.push_back(std::move(x));
            labels.push_back((real_axis.labels()[static_cast<std::size_t>(p)] << imag_bits) |
                             imag_axis.labels()[static_cast<std::size_t>(q)]);
        }
    }
    return MotherConstellation::assemble(std::move(points), std::move(labels), ShuffleSizes{mu, mv});
}

MotherConstellation t16qam() {
    const auto axis = rotate(base_lattice(2, 4), rotation_matrix(golden_rotation_angle()));
    return shuffle_construct(axis, axis);
}

MotherConstellation rotated_four_point(double angle) {
    const auto axis = rotate(base_lattice(2, 4), rotation_matrix(angle));
    return shuffle_construct(axis, origin_point(2));
}

MotherConstellation low_projection_16() {
    const auto base = base_lattice(2, 4);
    const auto found = optimize_rotation_projections(base, 9, 1e-3);
    const auto axis = rotate(base, found.rotation);
    return shuffle_construct(axis, axis);
}

MotherConstellation repetition_qam(int order, int dimension) {
    const int levels = static_cast<int>(std::lround(std::sqrt(order)));
    if (levels < 2 || levels * levels != order || !is_power_of_two(order))
        throw ParameterError("repetition QAM needs a square power-of-two order, got " + std::to_string(order));
    if (dimension < 1) throw ParameterError("dimension must be >= 1");
    const int bits = log2_exact(levels);
    std::vector<ComplexPoint> points;
    std::vector<std::uint32_t> labels;
    for (int re = 0; re < levels; ++re) {
        for (int im = 0; im < levels; ++im) {
            const Complex s(2.0 * re - (levels - 1), 2.0 * im - (levels - 1));
            points.emplace_back(static_cast<std::size_t>(dimension), s);
            labels.push_back((gray(static_cast<std::uint32_t>(re)) << bits) | gray(static_cast<std::uint32_t>(im)));
        }
    }
    return MotherConstellation::assemble(std::move(points), std::move(labels), ShuffleSizes{levels, levels});
}

RotationResult optimize_rotation_product_distance(const RealConstellation& base, double grid_step) {
    if (!(grid_step > 0.0)) throw ParameterError("grid step must be positive");
    require_planar(base);
    const double half_pi = std::numbers::pi / 2.0;
    auto objective = [&](double angle) {
        return min_product_distance(rotate(base, rotation_matrix(angle)).points());
    };

    double best_angle = 0.0;
    double best_value = -1.0;
    for (int k = 1;; ++k) {
        const double angle = k * grid_step;
        if (angle >= half_pi) break;
        const double v = objective(angle);
        if (v > best_value) {
            best_value = v;
            best_angle = angle;
        }
    }
    if (best_value < 0.0) throw ParameterError("grid step leaves no angle inside (0, pi/2)");

    const double lo = std::max(best_angle - grid_step, 0.5 * best_angle);
    const double hi = std::min(best_angle + grid_step, 0.5 * (best_angle + half_pi));
    const auto refined = golden_section_maximize(objective, lo, hi, 1e-8);
    if (refined.value > best_value) {
        best_value = refined.value;
        best_angle = refined.argmax;
    }
    return {best_angle, rotation_matrix(best_angle), best_value};
}

ProjectionRotation optimize_rotation_projections(const RealConstellation& base,
                                                 int target_projections, double grid_step) {
    if (!(grid_step > 0.0)) throw ParameterError("grid step must be positive");
    require_planar(base);
    const double half_pi = std::numbers::pi / 2.0;

    std::vector<double> candidates;
    for (int k = 1;; ++k) {
        const double angle = k * grid_step;
        if (angle >= half_pi) break;
        candidates.push_back(angle);
    }
    // Projections of two points coincide on an axis only where their
    // difference vector is rotated onto the other axis.
    const auto& pts = base.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[i][0] - pts[j][0];
            const double dy = pts[i][1] - pts[j][1];
            for (double angle : {std::atan2(dx, dy), std::atan2(-dy, dx)}) {
                double a = std::fmod(angle, half_pi);
                if (a < 0.0) a += half_pi;
                if (a > 1e-12 && a < half_pi - 1e-12) candidates.push_back(a);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());

    std::optional<ProjectionRotation> best;
    for (double angle : candidates) {
        const auto axis = rotate(base, rotation_matrix(angle));
        const auto mother = shuffle_construct(axis, axis);
        const auto counts = projections_per_dim(mother);
        if (*std::max_element(counts.begin(), counts.end()) > target_projections) continue;
        const double spacing = projection_spacing(mother);
        if (!best || spacing > best->projection_spacing + 1e-12) {
            best = ProjectionRotation{angle, rotation_matrix(angle), counts, spacing,
                                      min_product_distance(mother.points())};
        }
    }
    if (!best)
        throw NotFoundError("no rotation reaches " + std::to_string(target_projections) +
                            " projections per dimension");
    return *best;
}

}  // namespace scma
