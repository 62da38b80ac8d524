#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ndslab/space.hpp"

namespace ndslab {

class JsonWriter;

enum class CatalogKind { Identity, Constant, Affine, Power, Tent, Logistic, Rotation, Clamp };

// An evaluable continuous self-map candidate f: X -> X over a 1-d space,
// as a polyline, a closed-form catalog entry, or a composition of parts.
// Values are immutable; eval is pure and reentrant. A composition stores its
// parts and applies them sequentially (never flattened), so iterating a
// system directly and via a composed iterate map performs the exact same
// floating-point operations in the same order.
class MapRep {
public:
    // Polyline through (x,y) breakpoints, x strictly increasing from the
    // domain's lo to its hi, all y inside the domain. Intervals only.
    static MapRep pwl(const Space& space, std::vector<std::pair<double, double>> breakpoints);

    static MapRep identity(const Space& space);
    static MapRep constant(const Space& space, double c);
    static MapRep affine(const Space& space, double a, double b);
    static MapRep power(const Space& space, double k);
    static MapRep tent(const Space& space, double slope = 2.0);
    static MapRep logistic(const Space& space, double r);
    static MapRep rotation(const Space& space, double alpha);
    static MapRep clamp(const Space& space, double lo, double hi);
    static MapRep catalog(const Space& space, const std::string& name,
                          const std::vector<double>& params);

    // Composition: parts are listed outermost-first and applied right-to-left
    // (the last part acts first). All parts must share one space.
    static MapRep compose(std::vector<MapRep> parts);

    const Space& space() const { return space_; }
    // Declared upper bound for the Lipschitz constant on the domain.
    double lipschitz() const { return lipschitz_; }

    // Raw scalar evaluation: assumes a canonical in-domain input, wraps
    // circle outputs, performs no domain enforcement on the image.
    double eval_raw(double x) const;

    // Checked evaluation: validates the input, snaps images within kSnapTol
    // onto the boundary and raises DomainError beyond that.
    Point eval(const Point& x) const;

    bool is_composition() const;
    const std::vector<MapRep>& parts() const;
    bool is_pwl() const;
    // Breakpoint x-coordinates of the first map applied (empty when that map
    // is not a polyline); used to sharpen self-map validation.
    std::vector<double> input_breakpoints() const;

    std::string form_name() const;
    void describe_json(JsonWriter& w) const;

private:
    struct Pwl {
        std::vector<double> xs, ys;
    };
    struct Catalog {
        CatalogKind kind;
        std::vector<double> p;
    };
    struct Compose {
        std::vector<MapRep> parts;
    };

    MapRep(Space space, Pwl node);
    MapRep(Space space, Catalog node);
    MapRep(Space space, Compose node);

    static void require_interval(const Space& s, const char* what);

    Space space_;
    double lipschitz_ = 0.0;
    std::shared_ptr<const std::variant<Pwl, Catalog, Compose>> node_;
};

// Composition helper mirroring MapRep::compose.
MapRep compose(std::vector<MapRep> parts);

struct SelfMapReport {
    bool ok = true;
    Point worst_point;          // input whose image lands farthest outside
    double worst_excursion = 0; // 0 when the sampled range stays inside
};

// Evaluates the map on grid(space, resolution) plus the polyline breakpoints
// of the first map applied and reports the worst image excursion outside the
// domain. Never throws for out-of-domain images.
SelfMapReport self_map_check(const MapRep& map, const Space& space, int resolution);

double lipschitz_bound(const MapRep& map);

} // namespace ndslab
