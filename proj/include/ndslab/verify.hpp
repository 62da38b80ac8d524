#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndslab/analysis.hpp"

namespace ndslab {

// Outcome of one check. passed holds exactly when max_defect <= tolerance;
// checks with side conditions fold a violation into max_defect so the
// equivalence stays intact. series rows carry the per-step defects with the
// named columns (last column is always the defect).
struct VerdictReport {
    std::string check_name;
    bool passed = false;
    double max_defect = 0.0;
    double tolerance = 0.0;
    std::vector<std::string> series_columns;
    std::vector<std::vector<double>> series;

    std::string series_csv() const;
};

// Composition split: f_1^n against the k-shifted path f_k^{n-k+1} o f_1^{k-1}
// for all 2 <= k <= k_max, k <= n <= n_max and every grid point. Both paths
// perform the same map applications in the same order, so the tolerance is 0.
VerdictReport check_split(const System& sys, int k_max, int n_max, const PointSet& grid,
                          double tolerance = 0.0);

// Periodic decomposition f_1^{kl+j} = residues[j] o g^l, tolerance 0.
VerdictReport check_periodic(const System& sys, int l_max, const PointSet& grid,
                             double tolerance = 0.0);

struct InducedVerdict {
    VerdictReport verdict;
    bool gamma_additive = false;
    int additivity_horizon = 16;
};

// Induced-system identity: the n-th induced iterate equals the base iterate
// at index k_n, tolerance 0. Also reports whether gamma is additive.
InducedVerdict check_induced(const System& sys, const Gamma& gamma, int n_max,
                             const PointSet& grid, int additivity_horizon = 16,
                             double tolerance = 0.0);

struct UniapVerdict {
    VerdictReport verdict;
    double tail_max_defect = 0.0;   // max over n > tail_start of the left side
    double inequality_excess = 0.0; // max over n of (L_n - R_n - slack), clamped at 0
    double margin_no_slack = 0.0;   // max over n of (L_n - R_n)
    double margin_with_slack = 0.0; // max over n of (L_n - R_n - slack)
    double slack = 0.0;             // lipschitz(phi) * grid spacing
    bool uniform_converges = false;
};

// Uniform-asymptotic shadow for (phi o f_1^n) vs (f_1^{n+1}): checks
//   max_grid d(phi(f_1^n x), f_1^{n+1} x) <= max_grid d(phi y, f_{n+1} y) + slack
// for every n <= N, and that the left side decays below eps on the tail.
UniapVerdict check_uniap(const System& sys, const PointSet& grid, int N, double eps,
                         int tail_start);

struct ActionParams {
    int m_max = 16;
    int N = 200;
    double eps = 1e-2;
    int tail_start = -1;            // -1: N/2
    std::optional<int> anchor_n;    // fixed n instead of the tail window
};

// Action of the limit map on iterates: d(phi^m(f_1^n x), f_1^{n+m} x) < eps
// over the tail window (or at the fixed anchor index, where the identity is
// expected to fail for systems whose early maps differ from phi).
VerdictReport check_action(const System& sys, const PointSet& grid, const ActionParams& params);

// phi-invariance of the estimated omega-limit set: Hausdorff distance
// between phi(Omega) and Omega.
VerdictReport check_kempf(const System& sys, const Point& x, const OmegaParams& omega,
                          double tol);

struct FixedPointResult {
    Point y;
    double residual = 0.0;      // certified minimum over the candidate scans
    double phi_gap_at_y = 0.0;  // d(phi(y), y) at the selected point
    VerdictReport verdict;
};

// Fixed point of phi inside the estimated omega-limit set: minimizes
// d(phi(y), y) over the cluster centers and the step displacement
// d(x_n, x_{n+1}) over the raw orbit tail.
FixedPointResult find_fixed_point(const System& sys, const Point& x, const OmegaParams& omega,
                                  double tol);

struct PeriodicPointResult {
    std::optional<int> n_found;
    VerdictReport verdict;
};

// Tail recurrence: smallest n <= n_max whose score
//   max(d(x_m, x_{m+n}), max(0, d(phi^n(x_m), x_m) - drift_n))
// at the tail reference point x_m stays below eps; drift_n is the telescoped
// Lipschitz bound on the nonautonomous deviation from phi^n.
PeriodicPointResult check_periodic_point(const System& sys, const Point& x,
                                         const OmegaParams& tail, int n_max, double eps,
                                         const PointSet& drift_grid);

// Conjugacy transport: max over n <= N and grid x of
// d(h(f_1^n x), g_1^n(h x)), plus the per-generator defect series.
VerdictReport check_conjugacy(const System& sys_x, const System& sys_y, const MapRep& h,
                              const PointSet& grid, int N, double tol);

} // namespace ndslab
