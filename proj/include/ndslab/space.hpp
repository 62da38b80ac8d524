#pragma once

#include <string>
#include <vector>

#include "ndslab/errors.hpp"

namespace ndslab {

// Two points are treated as the same element of the space when their
// distance is below this tolerance (canonical-equality threshold).
inline constexpr double kPointEqTol = 1e-12;

// Images that land outside the domain by at most this much are snapped onto
// the boundary; larger excursions raise DomainError.
inline constexpr double kSnapTol = 1e-12;

enum class SpaceKind { Interval, Box, Circle };
enum class Metric { Euclidean, Chebyshev, Arc };

struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(double x) : coords{x} {}
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}

    int dim() const { return static_cast<int>(coords.size()); }
    // Scalar accessor for 1-d spaces.
    double x() const { return coords.at(0); }
};

// A compact metric domain: interval, axis-aligned box, or circle of a given
// circumference (coordinates are canonical representatives in
// [0, circumference)).
class Space {
public:
    static Space interval(double lo, double hi, Metric metric = Metric::Euclidean);
    static Space box(std::vector<double> lo, std::vector<double> hi,
                     Metric metric = Metric::Chebyshev);
    static Space circle(double circumference = 1.0);

    SpaceKind kind() const { return kind_; }
    Metric metric() const { return metric_; }
    int dimension() const { return static_cast<int>(lo_.size()); }
    double lo(int axis = 0) const { return lo_.at(axis); }
    double hi(int axis = 0) const { return hi_.at(axis); }
    double circumference() const { return circumference_; }
    double diameter() const;

    bool operator==(const Space& other) const;

    // Wraps a circle coordinate to [0, circumference); identity elsewhere.
    double wrap(double x) const;
    // How far a scalar coordinate lies outside [lo, hi] on the given axis
    // (0 for circle coordinates, which always wrap).
    double excursion(double x, int axis = 0) const;
    double excursion(const Point& p) const;

    bool contains(const Point& p, double tol = 0.0) const;

    // Canonicalizes and validates a point: wraps circle coordinates, snaps
    // coordinates within kSnapTol onto the boundary, raises DomainError for
    // anything farther outside or with the wrong dimension.
    Point point(std::vector<double> coords) const;
    Point point(double x) const { return point(std::vector<double>{x}); }
    Point canonical(Point p) const;

    double distance(const Point& a, const Point& b) const;
    // Fast path for 1-d spaces.
    double distance1(double a, double b) const;

    std::string describe() const;

private:
    Space() = default;

    SpaceKind kind_ = SpaceKind::Interval;
    Metric metric_ = Metric::Euclidean;
    std::vector<double> lo_, hi_;
    double circumference_ = 1.0;
};

// Canonicalized finite point set: points are wrapped/validated, sorted
// lexicographically and deduplicated at distance < kPointEqTol.
class PointSet {
public:
    PointSet(const Space& space, std::vector<Point> points);
    static PointSet from_scalars(const Space& space, const std::vector<double>& xs);

    const Space& space() const { return space_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }
    std::vector<double> scalars() const;

    // One row per point, 17-significant-digit decimals.
    std::string to_csv() const;

private:
    Space space_;
    std::vector<Point> points_;
};

double distance(const Space& space, const Point& a, const Point& b);

// Exact brute-force Hausdorff distance between two nonempty point sets.
double hausdorff(const Space& space, const PointSet& a, const PointSet& b);

// Deterministic uniform grid: `resolution` points per axis including both
// endpoints for intervals/boxes, evenly spaced representatives for circles.
PointSet grid(const Space& space, int resolution);

// Greedy first-seen eps-net over the cloud in stored order: a point becomes
// a center iff it is at distance >= eps from every previously accepted
// center. The result covers the cloud at radius eps.
PointSet epsilon_cluster(const Space& space, const PointSet& cloud, double eps);

} // namespace ndslab
