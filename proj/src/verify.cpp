#include "ndslab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ndslab/json_out.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

std::string VerdictReport::series_csv() const {
    CsvWriter csv(series_columns);
    for (const auto& row : series)
        csv.row(row);
    return csv.str();
}

namespace {

const MapRep& require_limit(const System& sys, const char* check) {
    if (!sys.limit())
        throw ConfigError(std::string(check) + " requires a declared limit map");
    return *sys.limit();
}

double max_grid_spacing(const PointSet& grid) {
    double spacing = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        spacing = std::max(spacing, grid.space().distance(grid[i], grid[i + 1]));
    return spacing;
}

} // namespace

VerdictReport check_split(const System& sys, int k_max, int n_max, const PointSet& grid,
                          double tolerance) {
    if (!(2 <= k_max && k_max <= n_max))
        throw ConfigError("check_split requires 2 <= k_max <= n_max");
    VerdictReport rep;
    rep.check_name = "split";
    rep.tolerance = tolerance;
    rep.series_columns = {"k", "n", "defect"};

    std::vector<System> shifted_by_k;
    shifted_by_k.reserve(static_cast<std::size_t>(k_max - 1));
    for (int k = 2; k <= k_max; ++k)
        shifted_by_k.push_back(shift(sys, k));

    // defect[k-2][n-k] per (k, n); per-x work is independent.
    std::vector<std::vector<double>> worst(
        static_cast<std::size_t>(k_max - 1),
        std::vector<double>(static_cast<std::size_t>(n_max), 0.0));
    std::vector<std::vector<std::vector<double>>> per_x(grid.size());
    parallel_for(grid.size(), [&](std::size_t xi) {
        const auto direct = orbit(sys, grid[xi].x(), n_max);
        auto& mine = per_x[xi];
        mine.assign(static_cast<std::size_t>(k_max - 1),
                    std::vector<double>(static_cast<std::size_t>(n_max), 0.0));
        for (int k = 2; k <= k_max; ++k) {
            // Walk the shifted system from f_1^{k-1}(x); after m steps this
            // is f_{k+m-1} o ... o f_k o f_1^{k-1}(x), to be compared with
            // f_1^{k-1+m}(x).
            const auto tail = orbit(shifted_by_k[static_cast<std::size_t>(k) - 2],
                                    direct[static_cast<std::size_t>(k) - 1], n_max - k + 1);
            for (int n = k; n <= n_max; ++n) {
                const double a = direct[static_cast<std::size_t>(n)];
                const double b = tail[static_cast<std::size_t>(n - k + 1)];
                mine[static_cast<std::size_t>(k) - 2][static_cast<std::size_t>(n) - 1] =
                    sys.space().distance1(a, b);
            }
        }
    });
    for (const auto& mine : per_x)
        for (std::size_t a = 0; a < mine.size(); ++a)
            for (std::size_t b = 0; b < mine[a].size(); ++b)
                worst[a][b] = std::max(worst[a][b], mine[a][b]);

    rep.max_defect = 0.0;
    for (int k = 2; k <= k_max; ++k)
        for (int n = k; n <= n_max; ++n) {
            const double d =
                worst[static_cast<std::size_t>(k) - 2][static_cast<std::size_t>(n) - 1];
            rep.series.push_back({static_cast<double>(k), static_cast<double>(n), d});
            rep.max_defect = std::max(rep.max_defect, d);
        }
    rep.passed = rep.max_defect <= rep.tolerance;
    return rep;
}

VerdictReport check_periodic(const System& sys, int l_max, const PointSet& grid,
                             double tolerance) {
    if (l_max < 0)
        throw ConfigError("check_periodic requires l_max >= 0");
    auto [g, residues] = periodic_reduce(sys); // throws ConfigError when not periodic
    const int k = static_cast<int>(residues.size());
    VerdictReport rep;
    rep.check_name = "periodic";
    rep.tolerance = tolerance;
    rep.series_columns = {"l", "j", "defect"};

    std::vector<std::vector<double>> worst(
        static_cast<std::size_t>(l_max + 1), std::vector<double>(static_cast<std::size_t>(k), 0.0));
    std::vector<std::vector<std::vector<double>>> per_x(grid.size());
    parallel_for(grid.size(), [&](std::size_t xi) {
        const auto direct = orbit(sys, grid[xi].x(), static_cast<long>(k) * l_max + (k - 1));
        auto& mine = per_x[xi];
        mine.assign(static_cast<std::size_t>(l_max + 1),
                    std::vector<double>(static_cast<std::size_t>(k), 0.0));
        double power = grid[xi].x(); // g^l(x), advanced incrementally
        for (int l = 0; l <= l_max; ++l) {
            for (int j = 0; j < k; ++j) {
                const double via_reduce = residues[static_cast<std::size_t>(j)].eval_raw(power);
                const double via_orbit =
                    direct[static_cast<std::size_t>(k) * static_cast<std::size_t>(l) +
                           static_cast<std::size_t>(j)];
                mine[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] =
                    sys.space().distance1(via_orbit, via_reduce);
            }
            if (l < l_max)
                power = g.eval_raw(power);
        }
    });
    for (const auto& mine : per_x)
        for (std::size_t a = 0; a < mine.size(); ++a)
            for (std::size_t b = 0; b < mine[a].size(); ++b)
                worst[a][b] = std::max(worst[a][b], mine[a][b]);

    rep.max_defect = 0.0;
    for (int l = 0; l <= l_max; ++l)
        for (int j = 0; j < k; ++j) {
            const double d = worst[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            rep.series.push_back({static_cast<double>(l), static_cast<double>(j), d});
            rep.max_defect = std::max(rep.max_defect, d);
        }
    rep.passed = rep.max_defect <= rep.tolerance;
    return rep;
}

InducedVerdict check_induced(const System& sys, const Gamma& gamma, int n_max,
                             const PointSet& grid, int additivity_horizon, double tolerance) {
    if (n_max < 1)
        throw ConfigError("check_induced requires n_max >= 1");
    int n_hi = n_max;
    if (auto mx = gamma.max_n())
        n_hi = std::min(n_hi, *mx);
    const System ind = induce(sys, gamma);

    InducedVerdict out;
    out.additivity_horizon = additivity_horizon;
    out.gamma_additive = gamma.additive(additivity_horizon);
    out.verdict.check_name = "induced";
    out.verdict.tolerance = tolerance;
    out.verdict.series_columns = {"n", "defect"};

    std::vector<double> worst(static_cast<std::size_t>(n_hi), 0.0);
    std::vector<std::vector<double>> per_x(grid.size());
    parallel_for(grid.size(), [&](std::size_t xi) {
        const auto base = orbit(sys, grid[xi].x(), gamma.k(n_hi));
        const auto hat = orbit(ind, grid[xi].x(), n_hi);
        auto& mine = per_x[xi];
        mine.assign(static_cast<std::size_t>(n_hi), 0.0);
        for (int n = 1; n <= n_hi; ++n)
            mine[static_cast<std::size_t>(n) - 1] = sys.space().distance1(
                hat[static_cast<std::size_t>(n)], base[static_cast<std::size_t>(gamma.k(n))]);
    });
    for (const auto& mine : per_x)
        for (std::size_t i = 0; i < mine.size(); ++i)
            worst[i] = std::max(worst[i], mine[i]);

    out.verdict.max_defect = 0.0;
    for (int n = 1; n <= n_hi; ++n) {
        const double d = worst[static_cast<std::size_t>(n) - 1];
        out.verdict.series.push_back({static_cast<double>(n), d});
        out.verdict.max_defect = std::max(out.verdict.max_defect, d);
    }
    out.verdict.passed = out.verdict.max_defect <= out.verdict.tolerance;
    return out;
}

UniapVerdict check_uniap(const System& sys, const PointSet& grid, int N, double eps,
                         int tail_start) {
    const MapRep phi = require_limit(sys, "check_uniap");
    if (tail_start < 0 || tail_start >= N)
        throw ConfigError("check_uniap requires 0 <= tail_start < N");

    UniapVerdict out;
    out.slack = phi.lipschitz() * max_grid_spacing(grid);
    out.uniform_converges = uniform_limit(sys, grid, N, eps).converges;

    // Orbit tables to N+1 per grid point.
    std::vector<std::vector<double>> table(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { table[i] = orbit(sys, grid[i].x(), N + 1); });

    out.verdict.check_name = "uniap";
    out.verdict.tolerance = eps;
    out.verdict.series_columns = {"n", "left", "right", "defect"};

    double margin_no_slack = -std::numeric_limits<double>::infinity();
    double tail_max = 0.0;
    std::vector<double> lefts, rights;
    for (int n = 0; n <= N; ++n) {
        double left = 0.0; // max_x d(phi(f_1^n x), f_1^{n+1} x)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double z = table[i][static_cast<std::size_t>(n)];
            left = std::max(left, sys.space().distance1(phi.eval_raw(z),
                                                        table[i][static_cast<std::size_t>(n) + 1]));
        }
        double right = 0.0; // max_y d(phi(y), f_{n+1}(y)) over the grid
        const MapRep fnext = sys.nth_map(n + 1);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double y = grid[i].x();
            right = std::max(right, sys.space().distance1(phi.eval_raw(y), fnext.eval_raw(y)));
        }
        margin_no_slack = std::max(margin_no_slack, left - right);
        if (n > tail_start)
            tail_max = std::max(tail_max, left);
        lefts.push_back(left);
        rights.push_back(right);
    }
    out.margin_no_slack = margin_no_slack;
    out.margin_with_slack = margin_no_slack - out.slack;
    out.inequality_excess = std::max(0.0, out.margin_with_slack);
    out.tail_max_defect = tail_max;

    // The defect column carries each n's contribution to the verdict: the
    // tail decay term plus any inequality violation pushed past eps, so the
    // series maximum equals max_defect and passed <=> max_defect <= eps.
    out.verdict.max_defect = 0.0;
    for (int n = 0; n <= N; ++n) {
        const double excess_n = lefts[static_cast<std::size_t>(n)] -
                                rights[static_cast<std::size_t>(n)] - out.slack;
        double contribution = n > tail_start ? lefts[static_cast<std::size_t>(n)] : 0.0;
        if (excess_n > 0.0)
            contribution = std::max(contribution, eps + excess_n);
        out.verdict.series.push_back({static_cast<double>(n), lefts[static_cast<std::size_t>(n)],
                                      rights[static_cast<std::size_t>(n)], contribution});
        out.verdict.max_defect = std::max(out.verdict.max_defect, contribution);
    }
    out.verdict.passed = out.verdict.max_defect <= eps;
    return out;
}

VerdictReport check_action(const System& sys, const PointSet& grid, const ActionParams& params) {
    const MapRep phi = require_limit(sys, "check_action");
    if (params.m_max < 0)
        throw ConfigError("check_action requires m_max >= 0");
    VerdictReport rep;
    rep.check_name = params.anchor_n ? "action_anchored" : "action";
    rep.tolerance = params.eps;
    rep.series_columns = {"m", "n", "defect"};

    const int N = params.N;
    const int tail_start = params.tail_start >= 0 ? params.tail_start : N / 2;
    const int n_lo = params.anchor_n ? *params.anchor_n : tail_start + 1;
    const int n_hi = params.anchor_n ? *params.anchor_n : N;
    if (n_lo < 0)
        throw ConfigError("check_action anchor must be >= 0");

    std::vector<std::vector<double>> table(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        table[i] = orbit(sys, grid[i].x(), n_hi + params.m_max);
    });

    // worst[m][n - n_lo] = max over the grid of d(phi^m(x_n), x_{n+m})
    std::vector<std::vector<double>> worst(
        static_cast<std::size_t>(params.m_max + 1),
        std::vector<double>(static_cast<std::size_t>(n_hi - n_lo + 1), 0.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int n = n_lo; n <= n_hi; ++n) {
            double z = table[i][static_cast<std::size_t>(n)]; // phi^m(x_n), incrementally
            for (int m = 0; m <= params.m_max; ++m) {
                const double d = sys.space().distance1(
                    z, table[i][static_cast<std::size_t>(n + m)]);
                auto& slot =
                    worst[static_cast<std::size_t>(m)][static_cast<std::size_t>(n - n_lo)];
                slot = std::max(slot, d);
                if (m < params.m_max)
                    z = phi.eval_raw(z);
            }
        }
    }
    rep.max_defect = 0.0;
    for (int m = 0; m <= params.m_max; ++m)
        for (int n = n_lo; n <= n_hi; ++n) {
            const double d =
                worst[static_cast<std::size_t>(m)][static_cast<std::size_t>(n - n_lo)];
            rep.series.push_back({static_cast<double>(m), static_cast<double>(n), d});
            rep.max_defect = std::max(rep.max_defect, d);
        }
    rep.passed = rep.max_defect <= rep.tolerance;
    return rep;
}

VerdictReport check_kempf(const System& sys, const Point& x, const OmegaParams& omega,
                          double tol) {
    const MapRep phi = require_limit(sys, "check_kempf");
    const OmegaEstimate est = omega_limit(sys, x, omega);
    std::vector<Point> mapped;
    mapped.reserve(est.centers.size());
    for (std::size_t i = 0; i < est.centers.size(); ++i)
        mapped.push_back(phi.eval(est.centers[i]));
    const PointSet image(sys.space(), std::move(mapped));
    VerdictReport rep;
    rep.check_name = "kempf";
    rep.tolerance = tol;
    rep.max_defect = hausdorff(sys.space(), image, est.centers);
    rep.passed = rep.max_defect <= tol;
    return rep;
}

FixedPointResult find_fixed_point(const System& sys, const Point& x, const OmegaParams& omega,
                                  double tol) {
    const MapRep phi = require_limit(sys, "find_fixed_point");
    FixedPointResult out;
    out.verdict.check_name = "fixed_point";
    out.verdict.tolerance = tol;
    out.verdict.series_columns = {"candidate", "score"};

    const OmegaEstimate est = omega_limit(sys, x, omega);
    double best = std::numeric_limits<double>::infinity();
    double best_y = est.centers[0].x();
    // Candidates from the cluster centers, scored by the phi-gap.
    for (std::size_t i = 0; i < est.centers.size(); ++i) {
        const double y = est.centers[i].x();
        const double score = sys.space().distance1(phi.eval_raw(y), y);
        if (score < best) {
            best = score;
            best_y = y;
        }
    }
    out.verdict.series.push_back({0.0, best});
    // Candidates from the raw orbit tail, scored by the step displacement
    // d(x_n, x_{n+1}) — the finite stand-in for the minimized increment.
    const auto xs = orbit(sys, x.x(), omega.burn_in + omega.keep + 1);
    double best_step = std::numeric_limits<double>::infinity();
    for (long n = omega.burn_in + 1; n <= omega.burn_in + omega.keep; ++n) {
        const double d = sys.space().distance1(xs[static_cast<std::size_t>(n)],
                                               xs[static_cast<std::size_t>(n) + 1]);
        if (d < best_step) {
            best_step = d;
            if (d < best) {
                best = d;
                best_y = xs[static_cast<std::size_t>(n)];
            }
        }
    }
    out.verdict.series.push_back({1.0, best_step});
    out.y = sys.space().point(best_y);
    out.residual = best;
    out.phi_gap_at_y = sys.space().distance1(phi.eval_raw(best_y), best_y);
    out.verdict.max_defect = best;
    out.verdict.passed = best <= tol;
    return out;
}

PeriodicPointResult check_periodic_point(const System& sys, const Point& x,
                                         const OmegaParams& tail, int n_max, double eps,
                                         const PointSet& drift_grid) {
    const MapRep phi = require_limit(sys, "check_periodic_point");
    if (n_max < 1)
        throw ConfigError("check_periodic_point requires n_max >= 1");
    PeriodicPointResult out;
    out.verdict.check_name = "periodic_point";
    out.verdict.tolerance = eps;
    out.verdict.series_columns = {"n", "score"};

    const long m0 = tail.burn_in + tail.keep; // tail reference index
    const auto xs = orbit(sys, x.x(), m0 + n_max);
    const double ref = xs[static_cast<std::size_t>(m0)];

    // Grid-estimated generator defects feed the telescoped drift bound
    // drift_n = sum_{j=1..n} L_phi^{n-j} * sup_y d(phi y, f_{m0+j} y).
    const double lip = phi.lipschitz();
    std::vector<double> gen_defect(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int j = 1; j <= n_max; ++j) {
        const MapRep fj = sys.nth_map(static_cast<int>(m0) + j);
        double d = 0.0;
        for (std::size_t i = 0; i < drift_grid.size(); ++i) {
            const double y = drift_grid[i].x();
            d = std::max(d, sys.space().distance1(phi.eval_raw(y), fj.eval_raw(y)));
        }
        gen_defect[static_cast<std::size_t>(j)] = d;
    }

    double phi_iter = ref;
    double drift = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        phi_iter = phi.eval_raw(phi_iter);
        drift = lip * drift + gen_defect[static_cast<std::size_t>(n)];
        const double step = sys.space().distance1(ref, xs[static_cast<std::size_t>(m0 + n)]);
        const double cross = sys.space().distance1(phi_iter, ref);
        const double score = std::max(step, std::max(0.0, cross - drift));
        out.verdict.series.push_back({static_cast<double>(n), score});
        if (score < best)
            best = score;
        if (!out.n_found && score <= eps)
            out.n_found = n;
    }
    out.verdict.max_defect = best;
    out.verdict.passed = best <= eps;
    return out;
}

VerdictReport check_conjugacy(const System& sys_x, const System& sys_y, const MapRep& h,
                              const PointSet& grid, int N, double tol) {
    if (!(h.space() == sys_x.space()))
        throw DomainError("check_conjugacy: h must be defined on the source space");
    VerdictReport rep;
    rep.check_name = "conjugacy";
    rep.tolerance = tol;
    rep.series_columns = {"n", "defect", "generator_defect"};

    const Space& ys = sys_y.space();
    auto into_y = [&](double v) {
        const double w = ys.wrap(v);
        if (ys.excursion(w) > kSnapTol)
            throw DomainError("check_conjugacy: h image left the target space");
        return std::min(std::max(w, ys.lo()), ys.hi());
    };

    std::vector<std::vector<double>> defect(grid.size());
    std::vector<std::vector<double>> gen_defect(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double x0 = grid[i].x();
        const auto ox = orbit(sys_x, x0, N);
        const auto oy = orbit(sys_y, into_y(h.eval_raw(x0)), N);
        auto& d = defect[i];
        auto& gd = gen_defect[i];
        d.resize(static_cast<std::size_t>(N));
        gd.resize(static_cast<std::size_t>(N));
        for (int n = 1; n <= N; ++n) {
            d[static_cast<std::size_t>(n) - 1] =
                ys.distance1(into_y(h.eval_raw(ox[static_cast<std::size_t>(n)])),
                             oy[static_cast<std::size_t>(n)]);
            // per-generator defect at this grid point: d(h(f_n x), g_n(h x))
            const double fx = sys_x.nth_map(n).eval_raw(x0);
            const double hy = into_y(h.eval_raw(x0));
            gd[static_cast<std::size_t>(n) - 1] =
                ys.distance1(into_y(h.eval_raw(fx)), sys_y.nth_map(n).eval_raw(hy));
        }
    });

    rep.max_defect = 0.0;
    for (int n = 1; n <= N; ++n) {
        double worst = 0.0, worst_gen = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, defect[i][static_cast<std::size_t>(n) - 1]);
            worst_gen = std::max(worst_gen, gen_defect[i][static_cast<std::size_t>(n) - 1]);
        }
        rep.series.push_back({static_cast<double>(n), worst, worst_gen});
        rep.max_defect = std::max(rep.max_defect, worst);
    }
    rep.passed = rep.max_defect <= tol;
    return rep;
}

} // namespace ndslab
