#include "ndslab/system.hpp"

#include <algorithm>
#include <cmath>

#include "ndslab/json_out.hpp"

namespace ndslab {

// ---------------------------------------------------------------------------
// Gamma

Gamma Gamma::linear(long coef) {
    if (coef < 1)
        throw ConfigError("gamma: linear coefficient must be >= 1");
    Gamma g;
    g.coef_ = coef;
    return g;
}

Gamma Gamma::list(std::vector<long> values) {
    if (values.empty())
        throw ConfigError("gamma: empty index list");
    long prev = 0;
    for (long v : values) {
        if (v <= prev)
            throw ConfigError("gamma not increasing");
        prev = v;
    }
    Gamma g;
    g.values_ = std::move(values);
    return g;
}

long Gamma::k(int n) const {
    if (n < 1)
        throw IndexError("gamma index must be >= 1");
    if (coef_ > 0)
        return coef_ * static_cast<long>(n);
    if (static_cast<std::size_t>(n) > values_.size())
        throw IndexError("gamma index beyond the explicit list");
    return values_[static_cast<std::size_t>(n) - 1];
}

std::optional<int> Gamma::max_n() const {
    if (coef_ > 0)
        return std::nullopt;
    return static_cast<int>(values_.size());
}

bool Gamma::additive(int horizon) const {
    int h = horizon;
    if (auto mx = max_n())
        h = std::min(h, *mx);
    for (int n = 1; n <= h; ++n)
        for (int m = n; n + m <= h; ++m)
            if (k(n) + k(m) != k(n + m))
                return false;
    return true;
}

std::string Gamma::describe() const {
    if (coef_ > 0)
        return "linear(" + std::to_string(coef_) + "n)";
    std::string s = "list(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(values_[i]);
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// MapSequence

MapSequence MapSequence::explicit_list(std::vector<MapRep> maps, TailRule tail) {
    if (maps.empty())
        throw ConfigError("explicit sequence needs at least one map");
    if (tail == TailRule::Family)
        throw ConfigError("family tail requires explicit_with_family_tail");
    return MapSequence(Node(Explicit{std::move(maps), tail, nullptr}));
}

MapSequence MapSequence::explicit_with_family_tail(std::vector<MapRep> maps,
                                                   std::string family_name,
                                                   std::function<MapRep(int)> generator,
                                                   std::optional<MapRep> declared_limit) {
    if (maps.empty())
        throw ConfigError("explicit sequence needs at least one map");
    auto fam = std::make_shared<Family>();
    fam->name = std::move(family_name);
    fam->generator = std::move(generator);
    fam->limit = std::move(declared_limit);
    return MapSequence(Node(Explicit{std::move(maps), TailRule::Family, std::move(fam)}));
}

MapSequence MapSequence::periodic(std::vector<MapRep> block) {
    if (block.empty())
        throw ConfigError("periodic sequence needs a nonempty block");
    return MapSequence(Node(Periodic{std::move(block)}));
}

MapSequence MapSequence::family(std::string name, std::function<MapRep(int)> generator,
                                std::optional<MapRep> declared_limit) {
    auto fam = std::make_shared<Family>();
    fam->name = std::move(name);
    fam->generator = std::move(generator);
    fam->limit = std::move(declared_limit);
    return MapSequence(Node(std::move(fam)));
}

MapSequence MapSequence::shifted(MapSequence base, int k) {
    if (k < 1)
        throw ConfigError("shift requires k >= 1");
    return MapSequence(Node(Shifted{std::make_shared<const MapSequence>(std::move(base)), k}));
}

MapSequence MapSequence::induced(MapSequence base, Gamma gamma) {
    return MapSequence(
        Node(Induced{std::make_shared<const MapSequence>(std::move(base)), std::move(gamma)}));
}

MapRep MapSequence::at(int n) const {
    if (n < 1)
        throw IndexError("sequence index must be >= 1");
    struct Visitor {
        int n;
        static MapRep memoized(const std::shared_ptr<Family>& f, int n) {
            std::lock_guard<std::mutex> lock(f->mutex);
            auto it = f->memo.find(n);
            if (it != f->memo.end())
                return it->second;
            MapRep m = f->generator(n);
            f->memo.emplace(n, m);
            return m;
        }
        MapRep operator()(const Explicit& e) const {
            const int size = static_cast<int>(e.maps.size());
            if (n <= size)
                return e.maps[static_cast<std::size_t>(n) - 1];
            switch (e.tail) {
            case TailRule::None:
                throw IndexError("sequence index " + std::to_string(n) +
                                 " beyond explicit list without tail rule");
            case TailRule::RepeatLast:
                return e.maps.back();
            case TailRule::Cycle:
                return e.maps[static_cast<std::size_t>((n - 1) % size)];
            case TailRule::Family:
                return memoized(e.tail_family, n);
            }
            throw IndexError("unreachable tail rule");
        }
        MapRep operator()(const Periodic& p) const {
            const int size = static_cast<int>(p.block.size());
            return p.block[static_cast<std::size_t>((n - 1) % size)];
        }
        MapRep operator()(const std::shared_ptr<Family>& f) const { return memoized(f, n); }
        MapRep operator()(const Shifted& s) const { return s.base->at(n + s.k - 1); }
        MapRep operator()(const Induced& ind) const {
            const long k_hi = ind.gamma.k(n);
            const long k_lo = n == 1 ? 0 : ind.gamma.k(n - 1);
            std::vector<MapRep> parts;
            parts.reserve(static_cast<std::size_t>(k_hi - k_lo));
            for (long i = k_hi; i > k_lo; --i) // outermost-first: f_{k_n} ... f_{k_{n-1}+1}
                parts.push_back(ind.base->at(static_cast<int>(i)));
            return MapRep::compose(std::move(parts));
        }
    };
    return std::visit(Visitor{n}, *node_);
}

bool MapSequence::is_periodic() const { return std::holds_alternative<Periodic>(*node_); }

const std::vector<MapRep>& MapSequence::periodic_block() const {
    if (!is_periodic())
        throw ConfigError("sequence is not periodic");
    return std::get<Periodic>(*node_).block;
}

std::optional<MapRep> MapSequence::declared_limit() const {
    if (auto* f = std::get_if<std::shared_ptr<Family>>(node_.get()))
        return (*f)->limit;
    if (auto* e = std::get_if<Explicit>(node_.get()); e && e->tail_family)
        return e->tail_family->limit;
    if (auto* s = std::get_if<Shifted>(node_.get()))
        return s->base->declared_limit();
    return std::nullopt;
}

const Gamma* MapSequence::induced_gamma() const {
    if (auto* ind = std::get_if<Induced>(node_.get()))
        return &ind->gamma;
    return nullptr;
}

std::optional<int> MapSequence::max_index() const {
    struct Visitor {
        std::optional<int> operator()(const Explicit& e) const {
            if (e.tail == TailRule::None)
                return static_cast<int>(e.maps.size());
            return std::nullopt;
        }
        std::optional<int> operator()(const Periodic&) const { return std::nullopt; }
        std::optional<int> operator()(const std::shared_ptr<Family>&) const { return std::nullopt; }
        std::optional<int> operator()(const Shifted& s) const {
            auto base = s.base->max_index();
            if (!base)
                return std::nullopt;
            return *base - (s.k - 1);
        }
        std::optional<int> operator()(const Induced& ind) const {
            auto limit_n = ind.gamma.max_n();
            auto base_max = ind.base->max_index();
            if (!base_max)
                return limit_n;
            // largest n with gamma(n) <= base_max
            int n = 0;
            try {
                while (true) {
                    if (limit_n && n >= *limit_n)
                        break;
                    if (ind.gamma.k(n + 1) > *base_max)
                        break;
                    ++n;
                }
            } catch (const IndexError&) {
            }
            return n;
        }
    };
    return std::visit(Visitor{}, *node_);
}

std::string MapSequence::describe() const {
    struct Visitor {
        std::string operator()(const Explicit& e) const {
            return "explicit(" + std::to_string(e.maps.size()) + ")";
        }
        std::string operator()(const Periodic& p) const {
            return "periodic(k=" + std::to_string(p.block.size()) + ")";
        }
        std::string operator()(const std::shared_ptr<Family>& f) const {
            return "family(" + f->name + ")";
        }
        std::string operator()(const Shifted& s) const {
            return s.base->describe() + "/shift" + std::to_string(s.k);
        }
        std::string operator()(const Induced& ind) const {
            return ind.base->describe() + "/induced:" + ind.gamma.describe();
        }
    };
    return std::visit(Visitor{}, *node_);
}

// ---------------------------------------------------------------------------
// System

System::System(Space space, MapSequence seq, std::string label, std::optional<MapRep> limit)
    : space_(std::move(space)),
      seq_(std::move(seq)),
      label_(std::move(label)),
      limit_(std::move(limit)),
      validated_(std::make_shared<std::pair<std::mutex, std::map<int, bool>>>()) {
    if (space_.dimension() != 1)
        throw ConfigError("systems require a 1-d space");
    if (!limit_)
        limit_ = seq_.declared_limit();
    if (limit_ && !(limit_->space() == space_))
        throw DomainError("declared limit lives on a different space");
}

void System::validate_map(const MapRep& m, int n) const {
    if (!(m.space() == space_))
        throw DomainError("map f_" + std::to_string(n) + " lives on a different space");
    const auto report = self_map_check(m, space_, validation_resolution_);
    if (report.worst_excursion > kSnapTol)
        throw DomainError("map f_" + std::to_string(n) + " is not a self-map (excursion " +
                          format_real(report.worst_excursion) + " at x = " +
                          format_real(report.worst_point.x()) + ")");
}

MapRep System::nth_map(int n) const {
    MapRep m = seq_.at(n);
    {
        std::lock_guard<std::mutex> lock(validated_->first);
        if (validated_->second.count(n))
            return m;
    }
    validate_map(m, n); // concurrent duplicate validation is idempotent
    {
        std::lock_guard<std::mutex> lock(validated_->first);
        validated_->second.emplace(n, true);
    }
    return m;
}

std::string Trajectory::to_csv() const {
    std::vector<std::string> header{"n"};
    const int d = x0.dim();
    for (int i = 0; i < d; ++i)
        header.push_back("x" + std::to_string(i));
    CsvWriter csv(std::move(header));
    for (std::size_t n = 0; n < points.size(); ++n) {
        std::vector<double> row{static_cast<double>(n)};
        row.insert(row.end(), points[n].coords.begin(), points[n].coords.end());
        csv.row(row);
    }
    return csv.str();
}

double iterate1(const System& sys, double x, long n) {
    double v = sys.space().kind() == SpaceKind::Circle
                   ? sys.space().wrap(x)
                   : std::min(std::max(x, sys.space().lo()), sys.space().hi());
    for (long i = 1; i <= n; ++i) {
        const MapRep m = sys.nth_map(static_cast<int>(i));
        v = m.eval_raw(v);
        const double e = sys.space().excursion(v);
        if (e > kSnapTol)
            throw DomainError("orbit left the domain at step " + std::to_string(i));
        if (e > 0.0)
            v = std::min(std::max(v, sys.space().lo()), sys.space().hi());
    }
    return v;
}

Point iterate(const System& sys, const Point& x, long n) {
    if (n < 0)
        throw ConfigError("iterate requires n >= 0");
    if (!sys.space().contains(x, kSnapTol))
        throw DomainError("iterate: start point outside the domain");
    return sys.space().point(iterate1(sys, x.x(), n));
}

std::vector<double> orbit(const System& sys, double x0, long N) {
    if (sys.space().excursion(sys.space().wrap(x0)) > kSnapTol)
        throw DomainError("orbit: start point outside the domain");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(N) + 1);
    double v = sys.space().kind() == SpaceKind::Circle
                   ? sys.space().wrap(x0)
                   : std::min(std::max(x0, sys.space().lo()), sys.space().hi());
    xs.push_back(v);
    for (long i = 1; i <= N; ++i) {
        const MapRep m = sys.nth_map(static_cast<int>(i));
        v = m.eval_raw(v);
        const double e = sys.space().excursion(v);
        if (e > kSnapTol)
            throw DomainError("orbit left the domain at step " + std::to_string(i));
        if (e > 0.0)
            v = std::min(std::max(v, sys.space().lo()), sys.space().hi());
        xs.push_back(v);
    }
    return xs;
}

Trajectory trajectory(const System& sys, const Point& x, long N) {
    if (N < 1)
        throw ConfigError("trajectory requires N >= 1");
    Trajectory t;
    t.x0 = sys.space().point(x.coords);
    const auto xs = orbit(sys, x.x(), N);
    t.points.reserve(xs.size());
    for (double v : xs)
        t.points.push_back(sys.space().point(v));
    return t;
}

System shift(const System& sys, int k) {
    return System(sys.space(), MapSequence::shifted(sys.sequence(), k),
                  sys.label() + "/shift" + std::to_string(k), sys.limit());
}

System induce(const System& sys, const Gamma& gamma) {
    return System(sys.space(), MapSequence::induced(sys.sequence(), gamma),
                  sys.label() + "/induced", std::nullopt);
}

bool gamma_additive(const Gamma& gamma, int horizon) { return gamma.additive(horizon); }

std::pair<MapRep, std::vector<MapRep>> periodic_reduce(const System& sys) {
    if (!sys.sequence().is_periodic())
        throw ConfigError("periodic_reduce requires a periodic sequence");
    const auto& block = sys.sequence().periodic_block();
    const int k = static_cast<int>(block.size());
    std::vector<MapRep> g_parts;
    g_parts.reserve(block.size());
    for (int i = k - 1; i >= 0; --i) // f_k o ... o f_1, outermost-first
        g_parts.push_back(block[static_cast<std::size_t>(i)]);
    MapRep g = MapRep::compose(std::move(g_parts));
    std::vector<MapRep> residues;
    residues.reserve(block.size());
    residues.push_back(MapRep::identity(sys.space()));
    for (int j = 1; j < k; ++j) {
        std::vector<MapRep> parts;
        parts.reserve(static_cast<std::size_t>(j));
        for (int i = j - 1; i >= 0; --i)
            parts.push_back(block[static_cast<std::size_t>(i)]);
        residues.push_back(MapRep::compose(std::move(parts)));
    }
    return {std::move(g), std::move(residues)};
}

MapRep iterate_map(const System& sys, long n) {
    if (n < 0)
        throw ConfigError("iterate_map requires n >= 0");
    if (n == 0)
        return MapRep::identity(sys.space());
    std::vector<MapRep> parts;
    parts.reserve(static_cast<std::size_t>(n));
    for (long i = n; i >= 1; --i)
        parts.push_back(sys.nth_map(static_cast<int>(i)));
    return MapRep::compose(std::move(parts));
}

MapRep star_iterate(const System& sys, long n, long m) {
    if (n < 0 || m < 0)
        throw ConfigError("star_iterate requires nonnegative indices");
    return iterate_map(sys, n + m);
}

// ---------------------------------------------------------------------------
// Named convergent families

FamilySpec make_family(const Space& space, const std::string& name,
                       const std::vector<double>& params) {
    FamilySpec spec;
    spec.name = name;
    if (name == "constant_harmonic") {
        // f_n constant with value 1/(n+1); uniform limit constant 0.
        if (!params.empty())
            throw ConfigError("family 'constant_harmonic' takes no parameters");
        spec.generator = [space](int n) {
            return MapRep::constant(space, 1.0 / static_cast<double>(n + 1));
        };
        spec.limit = MapRep::constant(space, 0.0);
        return spec;
    }
    if (name == "power") {
        // f_n(x) = x^n; pointwise limit is discontinuous, no uniform limit.
        if (!params.empty())
            throw ConfigError("family 'power' takes no parameters");
        spec.generator = [space](int n) {
            return MapRep::power(space, static_cast<double>(n));
        };
        return spec;
    }
    if (name == "affine_drift") {
        // f_n(x) = a x + b + c/(n+1); uniform limit a x + b.
        if (params.size() != 3)
            throw ConfigError("family 'affine_drift' expects params [a, b, c]");
        const double a = params[0], b = params[1], c = params[2];
        spec.generator = [space, a, b, c](int n) {
            return MapRep::affine(space, a, b + c / static_cast<double>(n + 1));
        };
        spec.limit = MapRep::affine(space, a, b);
        return spec;
    }
    if (name == "example3") {
        // Three-segment polylines pinching onto the plateau map: f_1 = f_2
        // runs (0,0)-(1/2,1/3)-(1,1/2); for n >= 3 the graph is
        // (0,0)-(1/n,1/(n+1))-(1/2,1/2)-(1,1/2). The limit fixes [0,1/2] and
        // sends (1/2,1] to 1/2.
        if (!params.empty())
            throw ConfigError("family 'example3' takes no parameters");
        spec.generator = [space](int n) {
            if (n <= 2)
                return MapRep::pwl(space, {{0.0, 0.0}, {0.5, 1.0 / 3.0}, {1.0, 0.5}});
            const double xn = 1.0 / static_cast<double>(n);
            const double yn = 1.0 / static_cast<double>(n + 1);
            return MapRep::pwl(space, {{0.0, 0.0}, {xn, yn}, {0.5, 0.5}, {1.0, 0.5}});
        };
        spec.limit = MapRep::pwl(space, {{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.5}});
        return spec;
    }
    throw ConfigError("unknown family '" + name + "'");
}

std::vector<std::string> family_names() {
    return {"constant_harmonic", "power", "affine_drift", "example3"};
}

} // namespace ndslab
