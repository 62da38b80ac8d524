#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ndslab/system.hpp"

namespace ndslab {

struct OmegaParams {
    long burn_in = 1000;
    long keep = 10000;
    double eps = 1e-3;
};

// Finite eps-net estimate of an omega-limit set: the clustered orbit window
// with indices in (burn_in, burn_in + keep].
struct OmegaEstimate {
    PointSet centers;
    long burn_in;
    long keep;
    double eps;
    std::string system_label;
    Point x0;
};

OmegaEstimate omega_limit(const System& sys, const Point& x, const OmegaParams& params);

// Per grid point, the tail cluster centers of (f_1^n(x)) over the window
// (N - window, N]; max_jump is the largest Hausdorff distance between the
// value sets at adjacent grid points (1-d grids).
struct LimitProfile {
    PointSet grid_points;
    std::vector<PointSet> values;
    double max_jump;
    long N;
    long window;
    double eps;
};

LimitProfile pointwise_limit_profile(const System& sys, const PointSet& grid, long N,
                                     long window, double eps);

// A map-sequence view bound to a grid: (n, grid index) -> scalar image.
// Factories below cover raw generator sequences and derived iterate views.
using SeqView = std::function<double(int n, std::size_t x_index)>;

SeqView generator_view(const System& sys, const PointSet& grid);
SeqView map_view(const MapRep& map, const PointSet& grid);
// f_1^{n+offset}(x_i) from a precomputed orbit table, n = 1..N.
SeqView iterate_view(const System& sys, const PointSet& grid, int N, int offset);
SeqView post_compose_view(const MapRep& outer, SeqView inner);

struct AsymptoticsReport {
    std::vector<std::vector<double>> per_x_defect; // [x][n-1], n = 1..N
    std::vector<double> uniform_defect;            // [n-1]
    bool decision_pointwise;
    bool decision_uniform;
    double eps;
    int tail_start;
    int N;
    // Density diagnostics: fraction of n <= N with defect < eps.
    std::vector<double> per_x_density;
    double uniform_density;
    std::vector<double> per_x_tail_max;
};

// Fills all defect series; the decisions hold iff every defect with
// n > tail_start stays below eps (per point, resp. for the grid maximum).
AsymptoticsReport asymptotic_report(const SeqView& a, const SeqView& b, const PointSet& grid,
                                    int N, double eps, int tail_start);

struct UniformLimitReport {
    std::vector<double> sup_defect; // [n-1], n = 1..N
    bool converges;
    double eps_at_tail; // max over the last quartile
    double tol;
};

// sup_defect(n) = max over the grid of d(f_n(x), phi(x)); converges iff the
// last-quartile maximum stays below tol.
UniformLimitReport uniform_limit(const System& sys, const PointSet& grid, int N, double tol);

enum class IterateFamily { Iterates, PhiIterates };

struct EquicontinuityReport {
    struct Row {
        double delta;
        double eps_observed;
    };
    std::vector<Row> table; // sorted by delta, eps_observed nondecreasing
    std::string family_label;
    bool verdict_hint; // the observed modulus shrinks at the smallest delta
};

// eps_observed(delta) = max over n <= N and grid pairs with d(x,y) < delta
// of d(g_n(x), g_n(y)), where g_n ranges over the chosen iterate family.
EquicontinuityReport equicontinuity(const System& sys, IterateFamily family,
                                    const PointSet& grid, int N,
                                    const std::vector<double>& deltas);

} // namespace ndslab
