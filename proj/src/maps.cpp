#include "ndslab/maps.hpp"

#include <algorithm>
#include <cmath>

#include "ndslab/json_out.hpp"

namespace ndslab {

MapRep::MapRep(Space space, Pwl node)
    : space_(std::move(space)),
      node_(std::make_shared<const std::variant<Pwl, Catalog, Compose>>(std::move(node))) {
    const auto& pw = std::get<Pwl>(*node_);
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < pw.xs.size(); ++i)
        lip = std::max(lip, std::fabs((pw.ys[i + 1] - pw.ys[i]) / (pw.xs[i + 1] - pw.xs[i])));
    lipschitz_ = lip;
}

MapRep::MapRep(Space space, Catalog node)
    : space_(std::move(space)),
      node_(std::make_shared<const std::variant<Pwl, Catalog, Compose>>(std::move(node))) {
    const auto& c = std::get<Catalog>(*node_);
    const double lo = space_.lo(), hi = space_.hi();
    switch (c.kind) {
    case CatalogKind::Identity: lipschitz_ = 1.0; break;
    case CatalogKind::Constant: lipschitz_ = 0.0; break;
    case CatalogKind::Affine: lipschitz_ = std::fabs(c.p[0]); break;
    case CatalogKind::Power: {
        const double k = c.p[0];
        const double m = std::max(std::fabs(lo), std::fabs(hi));
        lipschitz_ = k * std::pow(m, k - 1.0);
        break;
    }
    case CatalogKind::Tent: lipschitz_ = std::fabs(c.p[0]); break;
    case CatalogKind::Logistic:
        lipschitz_ = c.p[0] * std::max(std::fabs(1.0 - 2.0 * lo), std::fabs(1.0 - 2.0 * hi));
        break;
    case CatalogKind::Rotation: lipschitz_ = 1.0; break;
    case CatalogKind::Clamp: lipschitz_ = 1.0; break;
    }
}

MapRep::MapRep(Space space, Compose node)
    : space_(std::move(space)),
      node_(std::make_shared<const std::variant<Pwl, Catalog, Compose>>(std::move(node))) {
    double lip = 1.0;
    for (const auto& part : std::get<Compose>(*node_).parts)
        lip *= part.lipschitz();
    lipschitz_ = lip;
}

void MapRep::require_interval(const Space& s, const char* what) {
    if (s.kind() != SpaceKind::Interval)
        throw ConfigError(std::string(what) + " is only defined on an interval");
    if (s.dimension() != 1)
        throw ConfigError(std::string(what) + " requires a 1-d space");
}

MapRep MapRep::pwl(const Space& space, std::vector<std::pair<double, double>> breakpoints) {
    require_interval(space, "pwl map");
    if (breakpoints.size() < 2)
        throw ConfigError("pwl map needs at least two breakpoints");
    Pwl node;
    for (auto& [x, y] : breakpoints) {
        if (!node.xs.empty() && !(x > node.xs.back()))
            throw ConfigError("pwl breakpoint x-values must be strictly increasing");
        node.xs.push_back(x);
        node.ys.push_back(y);
    }
    if (node.xs.front() != space.lo() || node.xs.back() != space.hi())
        throw ConfigError("pwl breakpoints must span the full domain");
    for (double y : node.ys)
        if (space.excursion(y) > 0.0)
            throw ConfigError("pwl breakpoint y-values must lie inside the domain");
    return MapRep(space, std::move(node));
}

MapRep MapRep::identity(const Space& space) {
    if (space.dimension() != 1)
        throw ConfigError("identity map requires a 1-d space");
    return MapRep(space, Catalog{CatalogKind::Identity, {}});
}

MapRep MapRep::constant(const Space& space, double c) {
    if (space.dimension() != 1)
        throw ConfigError("constant map requires a 1-d space");
    if (space.excursion(space.wrap(c)) > 0.0)
        throw ConfigError("constant map value must lie inside the domain");
    return MapRep(space, Catalog{CatalogKind::Constant, {c}});
}

MapRep MapRep::affine(const Space& space, double a, double b) {
    require_interval(space, "affine map");
    return MapRep(space, Catalog{CatalogKind::Affine, {a, b}});
}

MapRep MapRep::power(const Space& space, double k) {
    require_interval(space, "power map");
    if (!(k >= 1.0))
        throw ConfigError("power map requires exponent k >= 1");
    if (space.lo() < 0.0 && k != std::floor(k))
        throw ConfigError("non-integer power map requires a nonnegative domain");
    return MapRep(space, Catalog{CatalogKind::Power, {k}});
}

MapRep MapRep::tent(const Space& space, double slope) {
    require_interval(space, "tent map");
    return MapRep(space, Catalog{CatalogKind::Tent, {slope}});
}

MapRep MapRep::logistic(const Space& space, double r) {
    require_interval(space, "logistic map");
    return MapRep(space, Catalog{CatalogKind::Logistic, {r}});
}

MapRep MapRep::rotation(const Space& space, double alpha) {
    if (space.kind() != SpaceKind::Circle)
        throw ConfigError("rotation is only defined on a circle");
    return MapRep(space, Catalog{CatalogKind::Rotation, {alpha}});
}

MapRep MapRep::clamp(const Space& space, double lo, double hi) {
    require_interval(space, "clamp map");
    if (!(lo <= hi))
        throw ConfigError("clamp requires lo <= hi");
    return MapRep(space, Catalog{CatalogKind::Clamp, {lo, hi}});
}

MapRep MapRep::catalog(const Space& space, const std::string& name,
                       const std::vector<double>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw ConfigError("catalog map '" + name + "' expects " + std::to_string(n) +
                              " parameter(s)");
    };
    if (name == "identity") { need(0); return identity(space); }
    if (name == "constant") { need(1); return constant(space, params[0]); }
    if (name == "affine")   { need(2); return affine(space, params[0], params[1]); }
    if (name == "power")    { need(1); return power(space, params[0]); }
    if (name == "tent")     { if (params.empty()) return tent(space); need(1); return tent(space, params[0]); }
    if (name == "logistic") { need(1); return logistic(space, params[0]); }
    if (name == "rotation") { need(1); return rotation(space, params[0]); }
    if (name == "clamp")    { need(2); return clamp(space, params[0], params[1]); }
    throw ConfigError("unknown catalog map '" + name + "'");
}

MapRep MapRep::compose(std::vector<MapRep> parts) {
    if (parts.empty())
        throw ConfigError("compose requires at least one part");
    for (std::size_t i = 1; i < parts.size(); ++i)
        if (!(parts[i].space() == parts[0].space()))
            throw DomainError("compose: parts live on different spaces");
    Space sp = parts[0].space();
    return MapRep(std::move(sp), Compose{std::move(parts)});
}

MapRep compose(std::vector<MapRep> parts) { return MapRep::compose(std::move(parts)); }

double MapRep::eval_raw(double x) const {
    struct Visitor {
        const MapRep& self;
        double x;
        double operator()(const Pwl& p) const {
            const auto& xs = p.xs;
            // Locate the half-open segment [x_i, x_{i+1}) containing x; the
            // last breakpoint is handled by the final segment.
            std::size_t i = static_cast<std::size_t>(
                std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
            if (i > 0)
                --i;
            if (i + 1 >= xs.size())
                i = xs.size() - 2;
            const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
            return p.ys[i] + t * (p.ys[i + 1] - p.ys[i]);
        }
        double operator()(const Catalog& c) const {
            switch (c.kind) {
            case CatalogKind::Identity: return x;
            case CatalogKind::Constant: return self.space_.wrap(c.p[0]);
            case CatalogKind::Affine: return c.p[0] * x + c.p[1];
            case CatalogKind::Power: return std::pow(x, c.p[0]);
            case CatalogKind::Tent:
                return x < 0.5 ? c.p[0] * x : c.p[0] * (1.0 - x);
            case CatalogKind::Logistic: return c.p[0] * x * (1.0 - x);
            case CatalogKind::Rotation: return self.space_.wrap(x + c.p[0]);
            case CatalogKind::Clamp: return std::min(std::max(x, c.p[0]), c.p[1]);
            }
            return x;
        }
        double operator()(const Compose& co) const {
            double v = x;
            for (auto it = co.parts.rbegin(); it != co.parts.rend(); ++it)
                v = it->eval_raw(v);
            return v;
        }
    };
    return std::visit(Visitor{*this, x}, *node_);
}

Point MapRep::eval(const Point& x) const {
    if (x.dim() != 1)
        throw DomainError("map evaluation requires a 1-d point");
    if (!space_.contains(x, kSnapTol))
        throw DomainError("map evaluation: point outside the domain");
    const double in = space_.kind() == SpaceKind::Circle
                          ? space_.wrap(x.coords[0])
                          : std::min(std::max(x.coords[0], space_.lo()), space_.hi());
    const double out = eval_raw(in);
    return space_.point(out); // snaps within kSnapTol, throws beyond
}

bool MapRep::is_composition() const { return std::holds_alternative<Compose>(*node_); }

const std::vector<MapRep>& MapRep::parts() const {
    return std::get<Compose>(*node_).parts;
}

bool MapRep::is_pwl() const { return std::holds_alternative<Pwl>(*node_); }

std::vector<double> MapRep::input_breakpoints() const {
    if (is_pwl())
        return std::get<Pwl>(*node_).xs;
    if (is_composition())
        return parts().back().input_breakpoints();
    return {};
}

std::string MapRep::form_name() const {
    struct Visitor {
        std::string operator()(const Pwl&) const { return "pwl"; }
        std::string operator()(const Catalog& c) const {
            switch (c.kind) {
            case CatalogKind::Identity: return "identity";
            case CatalogKind::Constant: return "constant";
            case CatalogKind::Affine: return "affine";
            case CatalogKind::Power: return "power";
            case CatalogKind::Tent: return "tent";
            case CatalogKind::Logistic: return "logistic";
            case CatalogKind::Rotation: return "rotation";
            case CatalogKind::Clamp: return "clamp";
            }
            return "?";
        }
        std::string operator()(const Compose&) const { return "compose"; }
    };
    return std::visit(Visitor{}, *node_);
}

void MapRep::describe_json(JsonWriter& w) const {
    struct Visitor {
        const MapRep& self;
        JsonWriter& w;
        void operator()(const Pwl& p) const {
            w.begin_object();
            w.key("form").value("pwl");
            w.key("points").begin_array();
            for (std::size_t i = 0; i < p.xs.size(); ++i) {
                w.begin_array();
                w.value(p.xs[i]);
                w.value(p.ys[i]);
                w.end_array();
            }
            w.end_array();
            w.end_object();
        }
        void operator()(const Catalog& c) const {
            w.begin_object();
            w.key("form").value("catalog");
            w.key("name").value(self.form_name());
            w.key("params").begin_array();
            for (double v : c.p)
                w.value(v);
            w.end_array();
            w.end_object();
        }
        void operator()(const Compose& co) const {
            w.begin_object();
            w.key("form").value("compose");
            w.key("parts").begin_array();
            for (const auto& part : co.parts)
                part.describe_json(w);
            w.end_array();
            w.end_object();
        }
    };
    std::visit(Visitor{*this, w}, *node_);
}

SelfMapReport self_map_check(const MapRep& map, const Space& space, int resolution) {
    if (resolution < 2)
        throw ConfigError("self_map_check requires resolution >= 2");
    const PointSet samples = grid(space, resolution);
    std::vector<double> xs;
    for (const auto& p : samples.points())
        xs.push_back(p.x());
    for (double b : map.input_breakpoints())
        xs.push_back(b);
    SelfMapReport report;
    report.worst_point = Point(xs.empty() ? 0.0 : xs.front());
    for (double x : xs) {
        const double y = map.eval_raw(x);
        const double e = space.excursion(y);
        if (e > report.worst_excursion) {
            report.worst_excursion = e;
            report.worst_point = Point(x);
        }
    }
    report.ok = report.worst_excursion == 0.0;
    return report;
}

double lipschitz_bound(const MapRep& map) { return map.lipschitz(); }

} // namespace ndslab
