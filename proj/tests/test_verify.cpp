#include <doctest.h>

#include <cmath>

#include "ndslab/verify.hpp"
#include "test_util.hpp"

using namespace ndslab;

namespace {

const Space unit = Space::interval(0.0, 1.0);
const double kGolden = 0.61803398874989485;

System family_sys(const std::string& name, std::vector<double> params = {}) {
    FamilySpec spec = make_family(unit, name, params);
    return System(unit, MapSequence::family(spec.name, spec.generator, spec.limit), name);
}

System autonomous(const MapRep& f, const std::string& label) {
    return System(f.space(), MapSequence::explicit_list({f}, TailRule::RepeatLast), label, f);
}

System block_sys() {
    return System(unit,
                  MapSequence::periodic(
                      {MapRep::affine(unit, -1.0, 1.0), MapRep::power(unit, 2)}),
                  "block");
}

} // namespace

TEST_CASE("split identity check passes with defect exactly zero") {
    for (const System& sys :
         {block_sys(), family_sys("example3"), family_sys("constant_harmonic")}) {
        const VerdictReport rep = check_split(sys, 8, 64, grid(sys.space(), 33));
        CHECK(rep.passed);
        CHECK(rep.max_defect == 0.0);
    }
    // Closed form spot check: both split paths of the constant family end at
    // the same constant 1/6 after five steps.
    const System con = family_sys("constant_harmonic");
    CHECK(iterate1(con, 0.3, 5) == 1.0 / 6.0);
    CHECK_THROWS_AS(check_split(con, 1, 64, grid(unit, 5)), ConfigError);
}

TEST_CASE("periodic decomposition check and the spot orbit value") {
    const System blk = block_sys();
    const VerdictReport rep = check_periodic(blk, 16, grid(unit, 101));
    CHECK(rep.passed);
    CHECK(rep.max_defect == 0.0);

    // Hand iteration oracle: 0.3 -> 0.7 -> 0.49 -> 0.51 -> 0.2601 -> 0.7399.
    double x = 0.3;
    const double steps[] = {0.7, 0.49, 0.51, 0.2601, 0.7399};
    for (int n = 1; n <= 5; ++n) {
        x = (n % 2 == 1) ? 1.0 - x : x * x;
        CHECK(std::fabs(x - steps[n - 1]) <= 1e-12);
    }
    CHECK(std::fabs(iterate1(blk, 0.3, 5) - 0.7399) <= 1e-12);

    // Degenerate single-map block reduces to plain powers.
    const System single(unit, MapSequence::periodic({MapRep::tent(unit)}), "single");
    const VerdictReport rep1 = check_periodic(single, 8, grid(unit, 33));
    CHECK(rep1.passed);
    CHECK(rep1.max_defect == 0.0);

    const System notper = family_sys("example3");
    CHECK_THROWS_AS(check_periodic(notper, 4, grid(unit, 5)), ConfigError);
}

TEST_CASE("induced identity check with additivity flags") {
    const System ex3 = family_sys("example3");

    const InducedVerdict lin = check_induced(ex3, Gamma::linear(2), 10, grid(unit, 33));
    CHECK(lin.verdict.passed);
    CHECK(lin.verdict.max_defect == 0.0);
    CHECK(lin.gamma_additive);

    const InducedVerdict sparse =
        check_induced(ex3, Gamma::list({2, 3, 5, 8}), 10, grid(unit, 33));
    CHECK(sparse.verdict.passed);
    CHECK(sparse.verdict.max_defect == 0.0);
    CHECK_FALSE(sparse.gamma_additive);

    const InducedVerdict trivial = check_induced(ex3, Gamma::linear(1), 10, grid(unit, 33));
    CHECK(trivial.verdict.passed);
    CHECK(trivial.verdict.max_defect == 0.0);
}

TEST_CASE("uniform-asymptotic check on the drifting contraction") {
    const System sys = family_sys("affine_drift", {0.5, 0.25, 0.1});
    const UniapVerdict rep = check_uniap(sys, grid(unit, 101), 200, 1e-2, 100);
    CHECK(rep.verdict.passed);
    CHECK(rep.uniform_converges);
    CHECK(rep.inequality_excess == 0.0);
    // The left side is the x-independent drift at index n+1.
    for (const auto& row : rep.verdict.series) {
        const double n = row[0], left = row[1];
        CHECK(std::fabs(left - 0.1 / (n + 2.0)) <= 1e-12);
    }
    // Margins: left and right estimate the same sup, so no slack is needed.
    CHECK(std::fabs(rep.margin_no_slack) <= 1e-15);
}

TEST_CASE("uniform-asymptotic check on the harmonic constants") {
    const System sys = family_sys("constant_harmonic");
    const UniapVerdict rep = check_uniap(sys, grid(unit, 101), 100, 0.05, 40);
    CHECK(rep.verdict.passed);
    CHECK(rep.margin_no_slack == 0.0);
    CHECK(rep.tail_max_defect == doctest::Approx(1.0 / 43.0).epsilon(1e-12));
}

TEST_CASE("uniform-asymptotic check with the limit as every member") {
    const System sys = autonomous(MapRep::affine(unit, 0.5, 0.25), "pure");
    const UniapVerdict rep = check_uniap(sys, grid(unit, 101), 50, 1e-2, 25);
    CHECK(rep.verdict.passed);
    CHECK(rep.verdict.max_defect == 0.0);
    CHECK(rep.margin_no_slack == 0.0);
}

TEST_CASE("action check passes on the contraction tail") {
    const System sys = family_sys("affine_drift", {0.5, 0.25, 0.1});
    ActionParams params;
    params.m_max = 4;
    params.N = 200;
    params.eps = 1e-2;
    params.tail_start = 100;
    const VerdictReport rep = check_action(sys, grid(unit, 101), params);
    CHECK(rep.passed);
    // m = 0 rows compare a point with itself.
    for (const auto& row : rep.series)
        if (row[0] == 0.0)
            CHECK(row[2] == 0.0);
}

TEST_CASE("anchored action check fails as the worked example predicts") {
    const System ex3 = family_sys("example3");
    ActionParams params;
    params.m_max = 16;
    params.eps = 1e-2;
    params.anchor_n = 1;
    const VerdictReport rep = check_action(ex3, grid(unit, 101), params);
    CHECK_FALSE(rep.passed);
    CHECK(rep.max_defect >= 0.4); // |1/2 - 1/(m+2)| at x = 1 for large m
}

TEST_CASE("omega invariance: exact fixed point, rotations, identity") {
    const System pure = autonomous(MapRep::affine(unit, 0.5, 0.25), "pure");
    const VerdictReport exact = check_kempf(pure, Point(0.1), {1000, 10000, 1e-3}, 5e-3);
    CHECK(exact.passed);
    CHECK(exact.max_defect == 0.0);

    const Space circ = Space::circle(1.0);
    const System rot = autonomous(MapRep::rotation(circ, kGolden), "rotation");
    const VerdictReport dense = check_kempf(rot, Point(0.0), {1000, 20000, 1e-3}, 5e-3);
    CHECK(dense.passed);
    CHECK(dense.max_defect <= 2e-3);

    const System ident = autonomous(MapRep::identity(unit), "identity");
    const VerdictReport fix = check_kempf(ident, Point(0.42), {100, 1000, 1e-3}, 5e-3);
    CHECK(fix.passed);
    CHECK(fix.max_defect == 0.0);
}

TEST_CASE("fixed point search on the contractions") {
    const System pure = autonomous(MapRep::affine(unit, 0.5, 0.25), "pure");
    const FixedPointResult a = find_fixed_point(pure, Point(0.1), {1000, 10000, 1e-3}, 1e-6);
    CHECK(a.verdict.passed);
    CHECK(a.y.x() == 0.5);
    CHECK(a.residual == 0.0);

    // Drifting contraction: the step displacement decays like 0.2/n^2.
    const System drift = family_sys("affine_drift", {0.5, 0.25, 0.1});
    const FixedPointResult b = find_fixed_point(drift, Point(0.1), {1000, 20000, 1e-3}, 1e-6);
    CHECK(b.verdict.passed);
    CHECK(b.residual <= 1e-9);
    CHECK(std::fabs(b.y.x() - 0.5) < 1e-3);

    const System ident = autonomous(MapRep::identity(unit), "identity");
    const FixedPointResult c = find_fixed_point(ident, Point(0.42), {100, 1000, 1e-3}, 1e-6);
    CHECK(c.residual == 0.0);
    CHECK(c.y.x() == 0.42);

    // Orbit of 1 under the pinched polylines: every tail point is already
    // fixed by the plateau limit map.
    const System ex3 = family_sys("example3");
    const FixedPointResult d = find_fixed_point(ex3, Point(1.0), {1000, 10000, 1e-3}, 1e-6);
    CHECK(d.verdict.passed);
    CHECK(d.residual <= 1e-6);
    CHECK(d.y.x() <= 1e-3); // near the limit point 0
}

TEST_CASE("periodic point detection") {
    const System pure = autonomous(MapRep::affine(unit, 0.5, 0.25), "pure");
    const PeriodicPointResult fixed =
        check_periodic_point(pure, Point(0.1), {1000, 1000, 1e-3}, 8, 1e-6, grid(unit, 33));
    CHECK(fixed.verdict.passed);
    REQUIRE(fixed.n_found.has_value());
    CHECK(*fixed.n_found == 1);

    const Space circ = Space::circle(1.0);
    const System quarter = autonomous(MapRep::rotation(circ, 0.25), "quarter");
    const PeriodicPointResult four =
        check_periodic_point(quarter, Point(0.1), {1000, 1000, 1e-3}, 16, 1e-6, grid(circ, 33));
    CHECK(four.verdict.passed);
    REQUIRE(four.n_found.has_value());
    CHECK(*four.n_found == 4);

    // Golden rotation: minimal return distances beat 1e-6 nowhere below 65.
    double oracle_min = 1.0;
    for (int n = 1; n <= 64; ++n) {
        const double frac = std::fmod(n * kGolden, 1.0);
        oracle_min = std::min(oracle_min, std::min(frac, 1.0 - frac));
    }
    CHECK(oracle_min > 1e-6);

    const System golden = autonomous(MapRep::rotation(circ, kGolden), "golden");
    const PeriodicPointResult none =
        check_periodic_point(golden, Point(0.1), {1000, 1000, 1e-3}, 64, 1e-6, grid(circ, 33));
    CHECK_FALSE(none.verdict.passed);
    CHECK_FALSE(none.n_found.has_value());
    CHECK(none.verdict.max_defect == doctest::Approx(oracle_min).epsilon(1e-9));
}

TEST_CASE("conjugacy transport through the reflection") {
    const System blk = block_sys();
    const MapRep h = MapRep::affine(unit, -1.0, 1.0);
    // g_n = h o f_n o h, built as explicit compositions.
    const MapRep g1 = compose({h, MapRep::affine(unit, -1.0, 1.0), h});
    const MapRep g2 = compose({h, MapRep::power(unit, 2), h});
    const System mirrored(unit, MapSequence::periodic({g1, g2}), "mirrored");

    const VerdictReport rep = check_conjugacy(blk, mirrored, h, grid(unit, 101), 100, 1e-9);
    CHECK(rep.passed);
    CHECK(rep.max_defect <= 1e-12);

    const System same = block_sys();
    const VerdictReport ident =
        check_conjugacy(blk, same, MapRep::identity(unit), grid(unit, 101), 50, 1e-12);
    CHECK(ident.passed);
    CHECK(ident.max_defect == 0.0);
}

TEST_CASE("swapped-block conjugacy fails loudly") {
    const System blk = block_sys();
    const System swapped(
        unit,
        MapSequence::periodic({MapRep::power(unit, 2), MapRep::affine(unit, -1.0, 1.0)}),
        "swapped");
    const VerdictReport rep =
        check_conjugacy(blk, swapped, MapRep::identity(unit), grid(unit, 101), 100, 1e-9);
    CHECK_FALSE(rep.passed);
    CHECK(rep.max_defect > 0.1);
    // Oracle at x = 0.3, n = 1: |0.7 - 0.09| = 0.61.
    CHECK(rep.max_defect >= 0.6);
}

TEST_CASE("verdict reports are deterministic") {
    const System blk = block_sys();
    const VerdictReport a = check_periodic(blk, 8, grid(unit, 33));
    const VerdictReport b = check_periodic(blk, 8, grid(unit, 33));
    CHECK(a.series_csv() == b.series_csv());
    CHECK(a.max_defect == b.max_defect);
    CHECK(a.passed == b.passed);
}

TEST_CASE("verdict invariant: passed iff max_defect <= tolerance") {
    const System drift = family_sys("affine_drift", {0.5, 0.25, 0.1});
    std::vector<VerdictReport> reports;
    reports.push_back(check_split(drift, 4, 16, grid(unit, 9)));
    reports.push_back(check_uniap(drift, grid(unit, 33), 100, 1e-2, 50).verdict);
    reports.push_back(check_kempf(drift, Point(0.1), {100, 2000, 1e-3}, 5e-3));
    reports.push_back(
        check_periodic_point(drift, Point(0.1), {100, 1000, 1e-3}, 8, 1e-6, grid(unit, 9))
            .verdict);
    for (const auto& rep : reports)
        CHECK(rep.passed == (rep.max_defect <= rep.tolerance));
}

TEST_CASE("the defect series maximum equals max_defect") {
    const System drift = family_sys("affine_drift", {0.5, 0.25, 0.1});
    const System blk = block_sys();
    std::vector<VerdictReport> reports;
    reports.push_back(check_split(drift, 4, 16, grid(unit, 17)));
    reports.push_back(check_periodic(blk, 8, grid(unit, 17)));
    reports.push_back(check_induced(blk, Gamma::linear(2), 6, grid(unit, 17)).verdict);
    reports.push_back(check_uniap(drift, grid(unit, 33), 100, 1e-2, 50).verdict);
    {
        ActionParams p;
        p.m_max = 3;
        p.N = 60;
        p.tail_start = 30;
        reports.push_back(check_action(drift, grid(unit, 17), p));
    }
    for (const auto& rep : reports) {
        REQUIRE(!rep.series.empty());
        double worst = 0.0;
        for (const auto& row : rep.series)
            worst = std::max(worst, row.back());
        CHECK(worst == rep.max_defect);
    }
}

TEST_CASE("checks that need a limit refuse to run without one") {
    const System tent(
        unit, MapSequence::explicit_list({MapRep::tent(unit)}, TailRule::RepeatLast), "tent");
    CHECK_THROWS_AS(check_kempf(tent, Point(0.1), {10, 100, 1e-3}, 5e-3), ConfigError);
    CHECK_THROWS_AS(check_uniap(tent, grid(unit, 9), 10, 1e-2, 5), ConfigError);
    CHECK_THROWS_AS(find_fixed_point(tent, Point(0.1), {10, 100, 1e-3}, 1e-6), ConfigError);
}
