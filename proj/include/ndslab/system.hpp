#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndslab/maps.hpp"

namespace ndslab {

enum class TailRule { None, RepeatLast, Cycle, Family };

// Strictly increasing index sequence n -> k_n (1-based), either a closed
// linear form k_n = coef*n or an explicit finite list.
class Gamma {
public:
    static Gamma linear(long coef);
    static Gamma list(std::vector<long> values);

    long k(int n) const; // throws IndexError beyond a finite list
    // Largest usable n (empty for closed forms).
    std::optional<int> max_n() const;
    // Checks k_n + k_m = k_{n+m} for all n,m >= 1 with n+m <= horizon
    // (clipped to the list length when finite).
    bool additive(int horizon) const;

    std::string describe() const;

private:
    Gamma() = default;
    long coef_ = 0; // 0 means explicit list
    std::vector<long> values_;
};

// A rule producing the n-th map f_n (indices start at 1).
class MapSequence {
public:
    static MapSequence explicit_list(std::vector<MapRep> maps, TailRule tail);
    // Explicit prefix whose tail follows an indexed family formula: the
    // generator is evaluated at the absolute index n for n beyond the list.
    static MapSequence explicit_with_family_tail(std::vector<MapRep> maps,
                                                 std::string family_name,
                                                 std::function<MapRep(int)> generator,
                                                 std::optional<MapRep> declared_limit);
    static MapSequence periodic(std::vector<MapRep> block);
    // Indexed family n -> f_n with an optional declared uniform limit.
    static MapSequence family(std::string name, std::function<MapRep(int)> generator,
                              std::optional<MapRep> declared_limit);
    static MapSequence shifted(MapSequence base, int k);
    static MapSequence induced(MapSequence base, Gamma gamma);

    // The n-th map under the rule, n >= 1. Family generators are memoized
    // per index (idempotent fill, safe to call concurrently).
    MapRep at(int n) const;

    bool is_periodic() const;
    const std::vector<MapRep>& periodic_block() const;
    std::optional<MapRep> declared_limit() const;
    const Gamma* induced_gamma() const;
    // Largest defined index (empty when the sequence is total).
    std::optional<int> max_index() const;

    std::string describe() const;

private:
    struct Family {
        std::string name;
        std::function<MapRep(int)> generator;
        std::optional<MapRep> limit;
        mutable std::map<int, MapRep> memo;
        mutable std::mutex mutex;
    };
    struct Explicit {
        std::vector<MapRep> maps;
        TailRule tail;
        std::shared_ptr<Family> tail_family; // set iff tail == TailRule::Family
    };
    struct Periodic {
        std::vector<MapRep> block;
    };
    struct Shifted {
        std::shared_ptr<const MapSequence> base;
        int k;
    };
    struct Induced {
        std::shared_ptr<const MapSequence> base;
        Gamma gamma;
    };

    using Node = std::variant<Explicit, Periodic, std::shared_ptr<Family>, Shifted, Induced>;
    explicit MapSequence(Node node) : node_(std::make_shared<Node>(std::move(node))) {}

    std::shared_ptr<Node> node_;
};

// A nonautonomous system: a compact 1-d space with a map sequence. Maps are
// validated as self-maps on a grid when first produced.
class System {
public:
    System(Space space, MapSequence seq, std::string label,
           std::optional<MapRep> limit = std::nullopt);

    const Space& space() const { return space_; }
    const MapSequence& sequence() const { return seq_; }
    const std::string& label() const { return label_; }
    // Declared uniform limit of (f_n), from the rule or set explicitly.
    const std::optional<MapRep>& limit() const { return limit_; }

    MapRep nth_map(int n) const;

private:
    void validate_map(const MapRep& m, int n) const;

    Space space_;
    MapSequence seq_;
    std::string label_;
    std::optional<MapRep> limit_;
    int validation_resolution_ = 33;
    mutable std::shared_ptr<std::pair<std::mutex, std::map<int, bool>>> validated_;
};

struct Trajectory {
    Point x0;
    std::vector<Point> points; // x_0..x_N with x_n = f_1^n(x0)
    long steps() const { return static_cast<long>(points.size()) - 1; }
    std::string to_csv() const;
};

// f_1^n(x): sequential application of f_1,...,f_n; n = 0 is the identity.
Point iterate(const System& sys, const Point& x, long n);
double iterate1(const System& sys, double x, long n);

// Scalar orbit prefix x_0..x_N.
std::vector<double> orbit(const System& sys, double x0, long N);
Trajectory trajectory(const System& sys, const Point& x, long N);

// The system whose n-th map is f_{n+k-1}; shift(sys, 1) behaves like sys.
System shift(const System& sys, int k);

// The system whose n-th map is f_{k_n} o ... o f_{k_{n-1}+1} (k_0 = 0).
System induce(const System& sys, const Gamma& gamma);

// g = f_k o ... o f_1 for a periodic block of length k, plus the residue
// maps residues[j] = f_j o ... o f_1 (residues[0] = identity).
std::pair<MapRep, std::vector<MapRep>> periodic_reduce(const System& sys);

// The n-iterate as a composition map (identity for n = 0).
MapRep iterate_map(const System& sys, long n);

// Index-addition form of the iterate product: the iterate map for n + m.
// Generally different from composing the two iterate maps.
MapRep star_iterate(const System& sys, long n, long m);

// Named convergent families available to scenario files.
struct FamilySpec {
    std::string name;
    std::function<MapRep(int)> generator;
    std::optional<MapRep> limit;
};
FamilySpec make_family(const Space& space, const std::string& name,
                       const std::vector<double>& params);
std::vector<std::string> family_names();

} // namespace ndslab
