#include "ndslab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ndslab/json_out.hpp"

namespace ndslab {

Space Space::interval(double lo, double hi, Metric metric) {
    if (!(lo < hi))
        throw ConfigError("interval requires lo < hi");
    if (metric == Metric::Arc)
        throw ConfigError("arc metric is only defined on a circle");
    Space s;
    s.kind_ = SpaceKind::Interval;
    s.metric_ = metric;
    s.lo_ = {lo};
    s.hi_ = {hi};
    return s;
}

Space Space::box(std::vector<double> lo, std::vector<double> hi, Metric metric) {
    if (lo.empty() || lo.size() != hi.size())
        throw ConfigError("box requires matching nonempty lo/hi vectors");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i]))
            throw ConfigError("box requires lo[i] < hi[i] on every axis");
    if (metric == Metric::Arc)
        throw ConfigError("arc metric is only defined on a circle");
    Space s;
    s.kind_ = SpaceKind::Box;
    s.metric_ = metric;
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
}

Space Space::circle(double circumference) {
    if (!(circumference > 0))
        throw ConfigError("circle requires positive circumference");
    Space s;
    s.kind_ = SpaceKind::Circle;
    s.metric_ = Metric::Arc;
    s.lo_ = {0.0};
    s.hi_ = {circumference};
    s.circumference_ = circumference;
    return s;
}

double Space::diameter() const {
    switch (kind_) {
    case SpaceKind::Circle:
        return circumference_ / 2.0;
    case SpaceKind::Interval:
        return hi_[0] - lo_[0];
    case SpaceKind::Box: {
        if (metric_ == Metric::Chebyshev) {
            double d = 0.0;
            for (std::size_t i = 0; i < lo_.size(); ++i)
                d = std::max(d, hi_[i] - lo_[i]);
            return d;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < lo_.size(); ++i)
            s += (hi_[i] - lo_[i]) * (hi_[i] - lo_[i]);
        return std::sqrt(s);
    }
    }
    return 0.0;
}

bool Space::operator==(const Space& other) const {
    return kind_ == other.kind_ && metric_ == other.metric_ && lo_ == other.lo_ &&
           hi_ == other.hi_ && circumference_ == other.circumference_;
}

double Space::wrap(double x) const {
    if (kind_ != SpaceKind::Circle)
        return x;
    double r = std::fmod(x, circumference_);
    if (r < 0.0)
        r += circumference_;
    if (r >= circumference_) // fmod artifacts at the seam
        r = 0.0;
    return r;
}

double Space::excursion(double x, int axis) const {
    if (kind_ == SpaceKind::Circle)
        return 0.0;
    if (x < lo_[axis])
        return lo_[axis] - x;
    if (x > hi_[axis])
        return x - hi_[axis];
    return 0.0;
}

double Space::excursion(const Point& p) const {
    if (p.dim() != dimension())
        throw DomainError("point dimension does not match space");
    double worst = 0.0;
    for (int i = 0; i < dimension(); ++i)
        worst = std::max(worst, excursion(p.coords[i], i));
    return worst;
}

bool Space::contains(const Point& p, double tol) const {
    if (p.dim() != dimension())
        return false;
    if (kind_ == SpaceKind::Circle)
        return true;
    for (int i = 0; i < dimension(); ++i)
        if (excursion(p.coords[i], i) > tol)
            return false;
    return true;
}

Point Space::canonical(Point p) const {
    if (p.dim() != dimension())
        throw DomainError("point dimension does not match space");
    for (int i = 0; i < dimension(); ++i) {
        double& x = p.coords[i];
        if (!std::isfinite(x))
            throw DomainError("point coordinate is not finite");
        if (kind_ == SpaceKind::Circle) {
            x = wrap(x);
            continue;
        }
        const double e = excursion(x, i);
        if (e > kSnapTol)
            throw DomainError("point lies outside the domain");
        x = std::min(std::max(x, lo_[i]), hi_[i]);
    }
    return p;
}

Point Space::point(std::vector<double> coords) const {
    return canonical(Point(std::move(coords)));
}

double Space::distance1(double a, double b) const {
    if (kind_ == SpaceKind::Circle) {
        double d = std::fabs(wrap(a) - wrap(b));
        return std::min(d, circumference_ - d);
    }
    return std::fabs(a - b);
}

double Space::distance(const Point& a, const Point& b) const {
    if (a.dim() != dimension() || b.dim() != dimension())
        throw DomainError("distance: point dimension does not match space");
    if (dimension() == 1)
        return distance1(a.coords[0], b.coords[0]);
    if (metric_ == Metric::Chebyshev) {
        double d = 0.0;
        for (int i = 0; i < dimension(); ++i)
            d = std::max(d, std::fabs(a.coords[i] - b.coords[i]));
        return d;
    }
    double s = 0.0;
    for (int i = 0; i < dimension(); ++i) {
        double di = a.coords[i] - b.coords[i];
        s += di * di;
    }
    return std::sqrt(s);
}

std::string Space::describe() const {
    switch (kind_) {
    case SpaceKind::Interval:
        return "interval[" + format_real(lo_[0]) + "," + format_real(hi_[0]) + "]";
    case SpaceKind::Circle:
        return "circle(" + format_real(circumference_) + ")";
    case SpaceKind::Box:
        return "box(d=" + std::to_string(dimension()) + ")";
    }
    return "?";
}

namespace {

bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(),
                                        b.coords.begin(), b.coords.end());
}

} // namespace

PointSet::PointSet(const Space& space, std::vector<Point> points) : space_(space) {
    for (auto& p : points)
        p = space.canonical(std::move(p));
    std::sort(points.begin(), points.end(), lex_less);
    points_.reserve(points.size());
    for (auto& p : points) {
        if (!points_.empty() && space_.distance(points_.back(), p) < kPointEqTol)
            continue;
        points_.push_back(std::move(p));
    }
}

PointSet PointSet::from_scalars(const Space& space, const std::vector<double>& xs) {
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (double x : xs)
        pts.emplace_back(x);
    return PointSet(space, std::move(pts));
}

std::vector<double> PointSet::scalars() const {
    std::vector<double> xs;
    xs.reserve(points_.size());
    for (const auto& p : points_)
        xs.push_back(p.x());
    return xs;
}

std::string PointSet::to_csv() const {
    std::vector<std::string> header;
    for (int i = 0; i < space_.dimension(); ++i)
        header.push_back("x" + std::to_string(i));
    CsvWriter csv(header);
    for (const auto& p : points_)
        csv.row(p.coords);
    return csv.str();
}

double distance(const Space& space, const Point& a, const Point& b) {
    return space.distance(a, b);
}

double hausdorff(const Space& space, const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty())
        throw EmptySetError("hausdorff requires nonempty sets");
    auto directed = [&](const PointSet& from, const PointSet& to) {
        double worst = 0.0;
        for (std::size_t i = 0; i < from.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < to.size(); ++j)
                best = std::min(best, space.distance(from[i], to[j]));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

PointSet grid(const Space& space, int resolution) {
    if (resolution < 2)
        throw ConfigError("grid requires resolution >= 2");
    std::vector<Point> pts;
    if (space.kind() == SpaceKind::Circle) {
        pts.reserve(resolution);
        for (int i = 0; i < resolution; ++i)
            pts.emplace_back(space.circumference() * static_cast<double>(i) /
                             static_cast<double>(resolution));
        return PointSet(space, std::move(pts));
    }
    const int d = space.dimension();
    std::vector<int> idx(d, 0);
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (int i = 0; i < d; ++i)
            t *= static_cast<std::size_t>(resolution);
        return t;
    }();
    pts.reserve(total);
    for (std::size_t c = 0; c < total; ++c) {
        std::vector<double> coords(d);
        for (int i = 0; i < d; ++i) {
            const double t = static_cast<double>(idx[i]) / static_cast<double>(resolution - 1);
            coords[i] = space.lo(i) + t * (space.hi(i) - space.lo(i));
        }
        pts.emplace_back(std::move(coords));
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[i] < resolution)
                break;
            idx[i] = 0;
        }
    }
    return PointSet(space, std::move(pts));
}

PointSet epsilon_cluster(const Space& space, const PointSet& cloud, double eps) {
    if (!(eps > 0))
        throw ConfigError("epsilon_cluster requires eps > 0");
    if (cloud.empty())
        throw EmptySetError("epsilon_cluster requires a nonempty cloud");
    std::vector<Point> centers;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        bool covered = false;
        // Scan newest centers first: in the sorted cloud the covering center
        // is almost always the most recent one.
        for (auto it = centers.rbegin(); it != centers.rend(); ++it) {
            if (space.distance(*it, cloud[i]) < eps) {
                covered = true;
                break;
            }
        }
        if (!covered)
            centers.push_back(cloud[i]);
    }
    return PointSet(space, std::move(centers));
}

} // namespace ndslab
