#include "ndslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ndslab/parallel.hpp"

namespace ndslab {

OmegaEstimate omega_limit(const System& sys, const Point& x, const OmegaParams& params) {
    if (params.keep < 1)
        throw ConfigError("omega_limit requires keep >= 1");
    if (!(params.eps > 0))
        throw ConfigError("omega_limit requires eps > 0");
    if (params.burn_in < 0)
        throw ConfigError("omega_limit requires burn_in >= 0");
    const auto xs = orbit(sys, x.x(), params.burn_in + params.keep);
    std::vector<double> window(xs.begin() + params.burn_in + 1, xs.end());
    PointSet cloud = PointSet::from_scalars(sys.space(), window);
    PointSet centers = epsilon_cluster(sys.space(), cloud, params.eps);
    return OmegaEstimate{std::move(centers), params.burn_in, params.keep,
                         params.eps,         sys.label(),    sys.space().point(x.coords)};
}

LimitProfile pointwise_limit_profile(const System& sys, const PointSet& grid, long N,
                                     long window, double eps) {
    if (window < 1 || window > N)
        throw ConfigError("limit profile requires 1 <= window <= N");
    if (grid.empty())
        throw EmptySetError("limit profile requires a nonempty grid");
    std::vector<PointSet> values;
    values.reserve(grid.size());
    std::vector<std::unique_ptr<PointSet>> slots(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto xs = orbit(sys, grid[i].x(), N);
        std::vector<double> tail(xs.begin() + (N - window) + 1, xs.end());
        PointSet cloud = PointSet::from_scalars(sys.space(), tail);
        slots[i] = std::make_unique<PointSet>(epsilon_cluster(sys.space(), cloud, eps));
    });
    for (auto& s : slots)
        values.push_back(std::move(*s));
    double max_jump = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        max_jump = std::max(max_jump, hausdorff(sys.space(), values[i], values[i + 1]));
    return LimitProfile{grid, std::move(values), max_jump, N, window, eps};
}

SeqView generator_view(const System& sys, const PointSet& grid) {
    auto pts = std::make_shared<std::vector<double>>();
    for (const auto& p : grid.points())
        pts->push_back(p.x());
    return [sys, pts](int n, std::size_t i) { return sys.nth_map(n).eval_raw((*pts)[i]); };
}

SeqView map_view(const MapRep& map, const PointSet& grid) {
    auto pts = std::make_shared<std::vector<double>>();
    for (const auto& p : grid.points())
        pts->push_back(p.x());
    return [map, pts](int, std::size_t i) { return map.eval_raw((*pts)[i]); };
}

SeqView iterate_view(const System& sys, const PointSet& grid, int N, int offset) {
    auto table = std::make_shared<std::vector<std::vector<double>>>(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        (*table)[i] = orbit(sys, grid[i].x(), N + offset);
    });
    return [table, offset](int n, std::size_t i) {
        return (*table)[i][static_cast<std::size_t>(n + offset)];
    };
}

SeqView post_compose_view(const MapRep& outer, SeqView inner) {
    return [outer, inner = std::move(inner)](int n, std::size_t i) {
        return outer.eval_raw(inner(n, i));
    };
}

AsymptoticsReport asymptotic_report(const SeqView& a, const SeqView& b, const PointSet& grid,
                                    int N, double eps, int tail_start) {
    if (grid.empty())
        throw EmptySetError("asymptotic_report requires a nonempty grid");
    if (tail_start < 0 || tail_start >= N)
        throw ConfigError("asymptotic_report requires 0 <= tail_start < N");
    AsymptoticsReport rep;
    rep.eps = eps;
    rep.tail_start = tail_start;
    rep.N = N;
    rep.per_x_defect.assign(grid.size(), {});
    parallel_for(grid.size(), [&](std::size_t i) {
        auto& series = rep.per_x_defect[i];
        series.resize(static_cast<std::size_t>(N));
        for (int n = 1; n <= N; ++n)
            series[static_cast<std::size_t>(n) - 1] =
                grid.space().distance1(a(n, i), b(n, i));
    });
    rep.uniform_defect.assign(static_cast<std::size_t>(N), 0.0);
    for (int n = 0; n < N; ++n) {
        double m = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            m = std::max(m, rep.per_x_defect[i][static_cast<std::size_t>(n)]);
        rep.uniform_defect[static_cast<std::size_t>(n)] = m;
    }
    rep.per_x_density.resize(grid.size());
    rep.per_x_tail_max.resize(grid.size());
    rep.decision_pointwise = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        int below = 0;
        double tail_max = 0.0;
        for (int n = 1; n <= N; ++n) {
            const double d = rep.per_x_defect[i][static_cast<std::size_t>(n) - 1];
            if (d < eps)
                ++below;
            if (n > tail_start)
                tail_max = std::max(tail_max, d);
        }
        rep.per_x_density[i] = static_cast<double>(below) / static_cast<double>(N);
        rep.per_x_tail_max[i] = tail_max;
        if (tail_max >= eps)
            rep.decision_pointwise = false;
    }
    int below_uniform = 0;
    double tail_max_uniform = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double d = rep.uniform_defect[static_cast<std::size_t>(n) - 1];
        if (d < eps)
            ++below_uniform;
        if (n > tail_start)
            tail_max_uniform = std::max(tail_max_uniform, d);
    }
    rep.uniform_density = static_cast<double>(below_uniform) / static_cast<double>(N);
    rep.decision_uniform = tail_max_uniform < eps;
    return rep;
}

UniformLimitReport uniform_limit(const System& sys, const PointSet& grid, int N, double tol) {
    if (!sys.limit())
        throw ConfigError("uniform_limit requires a declared limit map");
    if (grid.empty())
        throw EmptySetError("uniform_limit requires a nonempty grid");
    const MapRep& phi = *sys.limit();
    UniformLimitReport rep;
    rep.tol = tol;
    rep.sup_defect.assign(static_cast<std::size_t>(N), 0.0);
    std::vector<double> phi_vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        phi_vals[i] = phi.eval_raw(grid[i].x());
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ni) {
        const int n = static_cast<int>(ni) + 1;
        const MapRep fn = sys.nth_map(n);
        double m = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            m = std::max(m, grid.space().distance1(fn.eval_raw(grid[i].x()), phi_vals[i]));
        rep.sup_defect[ni] = m;
    });
    double tail_max = 0.0;
    for (int n = 3 * N / 4 + 1; n <= N; ++n)
        tail_max = std::max(tail_max, rep.sup_defect[static_cast<std::size_t>(n) - 1]);
    rep.eps_at_tail = tail_max;
    rep.converges = tail_max < tol;
    return rep;
}

EquicontinuityReport equicontinuity(const System& sys, IterateFamily family,
                                    const PointSet& grid, int N,
                                    const std::vector<double>& deltas) {
    if (deltas.empty())
        throw ConfigError("equicontinuity requires at least one delta");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0))
            throw ConfigError("equicontinuity deltas must be positive");
        if (i && !(deltas[i - 1] < deltas[i]))
            throw ConfigError("equicontinuity deltas must be sorted ascending");
    }
    if (family == IterateFamily::PhiIterates && !sys.limit())
        throw ConfigError("phi-iterate family requires a declared limit map");

    // Orbit table per grid point (n = 0..N), optionally post-composed.
    std::vector<std::vector<double>> table(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        table[i] = orbit(sys, grid[i].x(), N);
        if (family == IterateFamily::PhiIterates)
            for (auto& v : table[i])
                v = sys.limit()->eval_raw(v);
    });

    EquicontinuityReport rep;
    rep.family_label = family == IterateFamily::Iterates ? "iterates" : "phi_iterates";

    // Pair distances on the grid; each delta scans the pairs below it.
    struct PairGap {
        double dist;
        std::size_t i, j;
    };
    std::vector<PairGap> pairs;
    pairs.reserve(grid.size() * (grid.size() - 1) / 2);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
            pairs.push_back({grid.space().distance(grid[i], grid[j]), i, j});
    std::sort(pairs.begin(), pairs.end(),
              [](const PairGap& a, const PairGap& b) { return a.dist < b.dist; });

    std::vector<double> pair_spread(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
        double worst = 0.0;
        const auto& a = table[pairs[p].i];
        const auto& b = table[pairs[p].j];
        for (int n = 1; n <= N; ++n)
            worst = std::max(worst, grid.space().distance1(a[static_cast<std::size_t>(n)],
                                                           b[static_cast<std::size_t>(n)]));
        pair_spread[p] = worst;
    });

    // Pair distances are themselves rounded, so admit them up to the
    // canonical equality tolerance below each delta.
    std::size_t cursor = 0;
    double running = 0.0;
    for (double delta : deltas) {
        while (cursor < pairs.size() && pairs[cursor].dist < delta + kPointEqTol) {
            running = std::max(running, pair_spread[cursor]);
            ++cursor;
        }
        rep.table.push_back({delta, running});
    }
    const double front = rep.table.front().eps_observed;
    const double back = rep.table.back().eps_observed;
    rep.verdict_hint = front <= 0.5 * back || back == 0.0;
    return rep;
}

} // namespace ndslab
