#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ndslab/space.hpp"
#include "test_util.hpp"

using namespace ndslab;

namespace {

// Independent brute-force Hausdorff oracle: builds the full distance matrix
// and reduces it, touching none of the library's set machinery.
double hausdorff_oracle(const Space& sp, const std::vector<Point>& a,
                        const std::vector<Point>& b) {
    std::vector<std::vector<double>> m(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m[i][j] = sp.distance(a[i], b[j]);
    double d_ab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            row_min = std::min(row_min, m[i][j]);
        d_ab = std::max(d_ab, row_min);
    }
    double d_ba = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        double col_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i)
            col_min = std::min(col_min, m[i][j]);
        d_ba = std::max(d_ba, col_min);
    }
    return std::max(d_ab, d_ba);
}

} // namespace

TEST_CASE("distance on interval, circle and box") {
    const Space unit = Space::interval(0.0, 1.0);
    CHECK(unit.distance(Point(0.2), Point(0.7)) == doctest::Approx(0.5).epsilon(1e-15));

    const Space circ = Space::circle(1.0);
    CHECK(circ.distance(Point(0.05), Point(0.95)) == doctest::Approx(0.1).epsilon(1e-12));

    const Space box = Space::box({0.0, 0.0}, {1.0, 1.0}, Metric::Chebyshev);
    CHECK(box.distance(Point({0.0, 0.0}), Point({0.3, 0.5})) == 0.5);

    const Space box_e = Space::box({0.0, 0.0}, {1.0, 1.0}, Metric::Euclidean);
    CHECK(box_e.distance(Point({0.0, 0.0}), Point({0.3, 0.5})) ==
          doctest::Approx(std::sqrt(0.34)).epsilon(1e-15));
}

TEST_CASE("distance rejects dimension mismatches") {
    const Space box = Space::box({0.0, 0.0}, {1.0, 1.0});
    CHECK_THROWS_AS(box.distance(Point(0.5), Point({0.1, 0.2})), DomainError);
}

TEST_CASE("metric axioms hold on sampled triples") {
    Lcg rng(42);
    const Space spaces[] = {Space::interval(0.0, 1.0), Space::circle(2.5),
                            Space::box({-1.0, 0.0}, {1.0, 3.0}, Metric::Chebyshev),
                            Space::box({-1.0, 0.0}, {1.0, 3.0}, Metric::Euclidean)};
    for (const Space& sp : spaces) {
        for (int trial = 0; trial < 200; ++trial) {
            auto sample = [&] {
                std::vector<double> c;
                for (int i = 0; i < sp.dimension(); ++i)
                    c.push_back(rng.in(sp.lo(i), sp.hi(i)));
                return sp.point(c);
            };
            const Point a = sample(), b = sample(), c = sample();
            CHECK(sp.distance(a, a) == 0.0);
            CHECK(sp.distance(a, b) == sp.distance(b, a));
            CHECK(sp.distance(a, c) <= sp.distance(a, b) + sp.distance(b, c) + 1e-12);
            CHECK(sp.distance(a, b) >= 0.0);
        }
    }
}

TEST_CASE("circle points are canonical representatives") {
    const Space circ = Space::circle(1.0);
    CHECK(circ.point(1.25).x() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(circ.point(-0.25).x() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(circ.point(1.0).x() == 0.0);
}

TEST_CASE("hausdorff distance matches the brute-force oracle") {
    const Space unit = Space::interval(0.0, 1.0);
    const PointSet a01(unit, {Point(0.1), Point(0.9)});
    CHECK(hausdorff(unit, a01, a01) == 0.0);

    const PointSet zero(unit, {Point(0.0)});
    const PointSet one(unit, {Point(1.0)});
    CHECK(hausdorff(unit, zero, one) == 1.0);

    const PointSet ends(unit, {Point(0.0), Point(1.0)});
    const PointSet mid(unit, {Point(0.5)});
    CHECK(hausdorff(unit, ends, mid) ==
          hausdorff_oracle(unit, {Point(0.0), Point(1.0)}, {Point(0.5)}));
    CHECK(hausdorff(unit, ends, mid) == 0.5);

    Lcg rng(7);
    for (const Space& sp : {Space::interval(0.0, 1.0), Space::circle(1.0)}) {
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<Point> a, b;
            const int na = 1 + static_cast<int>(rng.in(0, 12));
            const int nb = 1 + static_cast<int>(rng.in(0, 12));
            for (int i = 0; i < na; ++i)
                a.emplace_back(rng.in(0.0, 1.0));
            for (int i = 0; i < nb; ++i)
                b.emplace_back(rng.in(0.0, 1.0));
            const PointSet pa(sp, a), pb(sp, b);
            // Oracle runs on the canonicalized sets (duplicates removed).
            CHECK(hausdorff(sp, pa, pb) == hausdorff_oracle(sp, pa.points(), pb.points()));
        }
    }
}

TEST_CASE("hausdorff rejects empty sets") {
    const Space unit = Space::interval(0.0, 1.0);
    const PointSet a(unit, {Point(0.5)});
    CHECK_THROWS_AS(hausdorff(unit, a, PointSet(unit, {})), EmptySetError);
}

TEST_CASE("hausdorff is zero exactly for equal canonical sets") {
    const Space circ = Space::circle(1.0);
    const PointSet a(circ, {Point(0.0), Point(0.5)});
    const PointSet b(circ, {Point(1.0), Point(0.5)}); // 1.0 wraps to 0.0
    CHECK(hausdorff(circ, a, b) == 0.0);
    const PointSet c(circ, {Point(0.25), Point(0.5)});
    CHECK(hausdorff(circ, a, c) > 0.0);
}

TEST_CASE("grid generation") {
    const Space unit = Space::interval(0.0, 1.0);
    const PointSet g3 = grid(unit, 3);
    REQUIRE(g3.size() == 3);
    CHECK(g3[0].x() == 0.0);
    CHECK(g3[1].x() == 0.5);
    CHECK(g3[2].x() == 1.0);

    const PointSet c4 = grid(Space::circle(1.0), 4);
    REQUIRE(c4.size() == 4);
    CHECK(c4[0].x() == 0.0);
    CHECK(c4[1].x() == 0.25);
    CHECK(c4[2].x() == 0.5);
    CHECK(c4[3].x() == 0.75);

    const Space box = Space::box({0.0, 0.0}, {1.0, 1.0});
    const PointSet corners = grid(box, 2);
    REQUIRE(corners.size() == 4);
    CHECK(corners[0].coords == std::vector<double>{0.0, 0.0});
    CHECK(corners[3].coords == std::vector<double>{1.0, 1.0});

    CHECK_THROWS_AS(grid(unit, 1), ConfigError);

    // Deterministic across runs.
    const PointSet again = grid(unit, 101);
    const PointSet once = grid(unit, 101);
    REQUIRE(again.size() == once.size());
    for (std::size_t i = 0; i < again.size(); ++i)
        CHECK(again[i].x() == once[i].x());
}

TEST_CASE("epsilon clustering follows the greedy first-seen rule") {
    const Space unit = Space::interval(0.0, 1.0);

    const PointSet near_dup(unit, {Point(0.50), Point(0.5000001), Point(0.9)});
    const PointSet c1 = epsilon_cluster(unit, near_dup, 0.01);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0].x() == 0.50);
    CHECK(c1[1].x() == 0.9);

    const PointSet whole = epsilon_cluster(unit, grid(unit, 101), 2.0);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].x() == 0.0);

    // Hand-run of the greedy rule: 0 kept, 0.4 rejected (0.4 < 0.5),
    // 0.8 kept (0.8 >= 0.5 from 0, 0.4 >= ... no, 0.4 from 0.4 is moot).
    const PointSet three(unit, {Point(0.0), Point(0.4), Point(0.8)});
    const PointSet c3 = epsilon_cluster(unit, three, 0.5);
    REQUIRE(c3.size() == 2);
    CHECK(c3[0].x() == 0.0);
    CHECK(c3[1].x() == 0.8);
}

TEST_CASE("epsilon clustering: separation, covering, determinism") {
    Lcg rng(99);
    for (const Space& sp : {Space::interval(0.0, 1.0), Space::circle(1.0)}) {
        for (double eps : {0.05, 0.2}) {
            std::vector<Point> cloud;
            for (int i = 0; i < 300; ++i)
                cloud.emplace_back(rng.in(0.0, 1.0));
            const PointSet ps(sp, cloud);
            const PointSet centers = epsilon_cluster(sp, ps, eps);
            for (std::size_t i = 0; i < centers.size(); ++i)
                for (std::size_t j = i + 1; j < centers.size(); ++j)
                    CHECK(sp.distance(centers[i], centers[j]) >= eps);
            for (std::size_t i = 0; i < ps.size(); ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < centers.size(); ++j)
                    best = std::min(best, sp.distance(ps[i], centers[j]));
                CHECK(best < eps);
            }
            const PointSet rerun = epsilon_cluster(sp, ps, eps);
            REQUIRE(rerun.size() == centers.size());
            for (std::size_t i = 0; i < rerun.size(); ++i)
                CHECK(rerun[i].x() == centers[i].x());
        }
    }
}

TEST_CASE("point sets canonicalize, sort and deduplicate") {
    const Space unit = Space::interval(0.0, 1.0);
    const PointSet ps(unit, {Point(0.9), Point(0.1), Point(0.1 + 1e-15)});
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].x() == 0.1);
    CHECK(ps[1].x() == 0.9);
    CHECK_THROWS_AS(PointSet(unit, {Point(1.5)}), DomainError);
}

TEST_CASE("point set CSV uses 17 significant digits") {
    const Space unit = Space::interval(0.0, 1.0);
    const PointSet ps(unit, {Point(1.0 / 3.0)});
    CHECK(ps.to_csv() == "x0\n0.33333333333333331\n");
}

TEST_CASE("space invariants and errors") {
    CHECK_THROWS_AS(Space::interval(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(Space::circle(0.0), ConfigError);
    CHECK_THROWS_AS(Space::box({0.0}, {0.0}), ConfigError);
    CHECK_THROWS_AS(Space::interval(0.0, 1.0, Metric::Arc), ConfigError);
    const Space unit = Space::interval(0.0, 1.0);
    CHECK_THROWS_AS(unit.point(std::numeric_limits<double>::quiet_NaN()), DomainError);
}
