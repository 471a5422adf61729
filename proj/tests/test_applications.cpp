#include <doctest.h>

#include <cmath>

#include "dinv/applications.hpp"
#include "dinv/catalog.hpp"
#include "oracles.hpp"

using namespace dinv;
using oracles::vec;

namespace {

const double kPi = 3.14159265358979323846;

WarpedSpec interval_warped(const std::string& warping, double lo = -1.4, double hi = 1.4) {
    Box base_box, fiber_box;
    base_box.axes = {{lo, hi}};
    fiber_box.axes = {{0.0, 2 * kPi}};
    MetricField base(1, {{parse_expression("1", {"t1"})}}, base_box);
    MetricField fiber(1, {{parse_expression("1", {"v1"})}}, fiber_box);
    return WarpedSpec{std::move(base), std::move(fiber), parse_expression(warping, {"t1"}), false};
}

WarpedSpec plane_warped(const std::string& warping) {
    Box base_box, fiber_box;
    base_box.axes = {{-1.0, 1.0}, {-1.0, 1.0}};
    fiber_box.axes = {{0.0, 2 * kPi}};
    std::vector<std::string> vars = {"t1", "t2"};
    std::vector<std::vector<Expression>> g = {
        {parse_expression("1", vars), parse_expression("0", vars)},
        {parse_expression("0", vars), parse_expression("1", vars)}};
    MetricField base(2, std::move(g), base_box);
    MetricField fiber(1, {{parse_expression("1", {"v1"})}}, fiber_box);
    return WarpedSpec{std::move(base), std::move(fiber), parse_expression(warping, vars), false};
}

OptimizerOptions fast_opts(int restarts = 8) {
    OptimizerOptions o;
    o.restarts = restarts;
    return o;
}

std::vector<Point> interval_sample(double lo, double hi, int count) {
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i)
        pts.push_back(vec({lo + (i + 0.5) * (hi - lo) / count}));
    return pts;
}

}  // namespace

TEST_CASE("laplacian of the warping function") {
    WarpedSpec w1 = interval_warped("1+0*t1");
    CHECK(laplacian_of_warping(w1, vec({0.3})) == doctest::Approx(0.0));

    // geometer's sign: Delta cos = +cos on a flat interval
    WarpedSpec wc = interval_warped("cos(t1)");
    for (double tt : {-1.0, 0.0, 0.7})
        CHECK(laplacian_of_warping(wc, vec({tt})) == doctest::Approx(std::cos(tt)).epsilon(1e-10));

    WarpedSpec wl = plane_warped("t1");
    CHECK(laplacian_of_warping(wl, vec({0.2, -0.3})) == doctest::Approx(0.0));

    // curved base: polar coordinates, f = ln r is harmonic in 2-d
    std::vector<std::string> vars = {"t1", "t2"};
    std::vector<std::vector<Expression>> g = {
        {parse_expression("1", vars), parse_expression("0", vars)},
        {parse_expression("0", vars), parse_expression("t1^2", vars)}};
    Box base_box, fiber_box;
    base_box.axes = {{0.5, 3.0}, {0.0, 2 * kPi}};
    fiber_box.axes = {{0.0, 2 * kPi}};
    MetricField base(2, std::move(g), base_box);
    MetricField fiber(1, {{parse_expression("1", {"v1"})}}, fiber_box);
    WarpedSpec wp{std::move(base), std::move(fiber), parse_expression("ln(t1)", vars), false};
    CHECK(laplacian_of_warping(wp, vec({1.7, 1.0})) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("warped inequality: round sphere equality") {
    ManifoldRecord rec = resolve_catalog("warped-s2");
    for (double tt : {-1.2, -0.3, 0.0, 0.9}) {
        WarpedCheckReport rep = warped_inequality_check(*rec.warped, 1.0, 0.0, vec({tt}));
        CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(rep.margin) <= 1e-6);
        CHECK(rep.passed);
    }
}

TEST_CASE("warped inequality: trivial product and cylinder") {
    WarpedSpec triv = interval_warped("1+0*t1");
    WarpedCheckReport rep = warped_inequality_check(triv, 0.3, 0.0, vec({0.1}));
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.margin >= 0.0);

    // cylinder E^1 x S^1 in E^3: H^2 = 1/4, f == 1
    WarpedCheckReport cyl = warped_inequality_check(triv, 0.25, 0.0, vec({-0.4}));
    CHECK(cyl.margin == doctest::Approx(0.25));
    CHECK(cyl.passed);

    WarpedSpec bad = interval_warped("t1");  // f <= 0 in the domain
    CHECK_THROWS_AS(warped_inequality_check(bad, 0.0, 0.0, vec({-0.5})), EvalError);
}

TEST_CASE("warped obstruction flags") {
    auto sample = interval_sample(-1.3, 1.3, 9);

    WarpedFlags harmonic = warped_obstruction_flags(interval_warped("t1+2"), sample);
    CHECK(harmonic.harmonic);
    CHECK_FALSE(harmonic.eigenfunction);
    REQUIRE(harmonic.labels.size() >= 2);

    WarpedFlags eig = warped_obstruction_flags(interval_warped("cos(t1)"), sample);
    CHECK_FALSE(eig.harmonic);
    CHECK(eig.eigenfunction);
    CHECK(eig.lambda == doctest::Approx(1.0).epsilon(1e-8));

    WarpedFlags none = warped_obstruction_flags(interval_warped("exp(t1)"), sample);
    CHECK_FALSE(none.harmonic);
    CHECK_FALSE(none.eigenfunction);  // Delta f / f = -1 < 0
    CHECK(none.labels.empty());
}

TEST_CASE("spectral bounds: sphere, projective space, flat torus") {
    OptimizerOptions o = fast_opts();

    ManifoldRecord sphere = resolve_catalog("sphere:3");
    CurvatureTensor Rs = curvature_via_gauss(
        second_fundamental_form(*sphere.immersion, vec({0.0, 0.0, 0.0})), 0.0);
    DeltaMap sres = delta_all(Rs, o);
    SpectralReport srep = spectral_bound_check(sphere, sres);
    CHECK(srep.passed);
    CHECK(std::abs(srep.nagano_margin) <= 1e-9);  // lambda_1 = n = n rho
    auto [sdhat, sarg] = delta_hat0(sres, 3);
    CHECK(best_living_test(sphere, sdhat).is_best);

    ManifoldRecord rp = resolve_catalog("rp:3");
    CurvatureTensor Rrp = riemann_from_metric(*rp.metric, rp.metric->domain().center());
    DeltaMap rpres = delta_all(Rrp, o);
    SpectralReport rprep = spectral_bound_check(rp, rpres);
    CHECK(rprep.passed);
    auto [rdhat, rarg] = delta_hat0(rpres, 3);
    CHECK(rdhat == doctest::Approx(1.0).epsilon(1e-5));
    BestLivingReport bl = best_living_test(rp, rdhat);
    CHECK_FALSE(bl.is_best);  // 2(n+1) != n
    CHECK(bl.lambda1 == doctest::Approx(8.0));
    CHECK(bl.gap == doctest::Approx(8.0 - 3.0).epsilon(1e-4));

    ManifoldRecord torus = resolve_catalog("flat-torus");
    CurvatureTensor Rt = riemann_from_metric(*torus.metric, torus.metric->domain().center());
    DeltaMap tres = delta_all(Rt, o);
    CHECK(spectral_bound_check(torus, tres).passed);
    auto [tdhat, targ] = delta_hat0(tres, 2);
    CHECK_FALSE(best_living_test(torus, tdhat).is_best);

    ManifoldRecord no_lambda = resolve_catalog("catenoid");
    CHECK_THROWS(spectral_bound_check(no_lambda, tres));
}

TEST_CASE("average bound: quadrature reproduces the sphere area") {
    ManifoldRecord sphere = resolve_catalog("sphere:2");
    AverageBoundReport rep = average_bound_test(sphere, 40, fast_opts(2));
    CHECK(rep.quad_volume == doctest::Approx(4 * kPi).epsilon(0.01));
    CHECK(rep.mean_dhat0 == doctest::Approx(1.0).epsilon(0.02));
    CHECK_FALSE(rep.fires);  // lambda_1 = n: strict inequality fails
}

TEST_CASE("average bound: rp and flat torus fire") {
    ManifoldRecord rp = resolve_catalog("rp:2");
    AverageBoundReport rep = average_bound_test(rp, 40, fast_opts(2));
    CHECK(rep.fires);
    CHECK(rep.margin == doctest::Approx(2.0 * 3.0 - 2.0).epsilon(0.05));

    ManifoldRecord torus = resolve_catalog("flat-torus");
    AverageBoundReport trep = average_bound_test(torus, 10, fast_opts(2));
    CHECK(trep.fires);
    CHECK(trep.mean_dhat0 == doctest::Approx(0.0));
}

TEST_CASE("minimal obstruction") {
    OptimizerOptions o = fast_opts(4);

    std::vector<CurvatureTensor> sphere_data = {CurvatureTensor::constant_curvature(2, 1.0)};
    ObstructionReport rep = minimal_obstruction(sphere_data, o);
    CHECK(rep.delta_fires);
    CHECK(rep.ricci_fires);
    CHECK(rep.max_delta == doctest::Approx(1.0));
    CHECK(rep.max_ric == doctest::Approx(1.0));

    std::vector<CurvatureTensor> flat_data = {CurvatureTensor::zero(3)};
    ObstructionReport frep = minimal_obstruction(flat_data, o);
    CHECK_FALSE(frep.delta_fires);
    CHECK_FALSE(frep.ricci_fires);

    // catenoid: K <= 0 everywhere, neither obstruction fires
    ManifoldRecord cat = resolve_catalog("catenoid");
    std::vector<CurvatureTensor> cat_data;
    for (double u : {1.0, 3.0})
        for (double v : {-0.8, 0.2, 0.9})
            cat_data.push_back(
                curvature_via_gauss(second_fundamental_form(*cat.immersion, vec({u, v})), 0.0));
    ObstructionReport crep = minimal_obstruction(cat_data, o);
    CHECK_FALSE(crep.delta_fires);
    CHECK_FALSE(crep.ricci_fires);
}

TEST_CASE("lagrangian obstruction") {
    OptimizerOptions o = fast_opts(4);

    // RP^3(1): finite pi_1 and delta(2) = 2 > 0
    std::vector<CurvatureTensor> rp3 = {CurvatureTensor::constant_curvature(3, 1.0)};
    LagrangianObstructionReport rep = lagrangian_obstruction(rp3, std::nullopt, true, o);
    CHECK(rep.verdict == ObstructionVerdict::Fires);
    CHECK(rep.max_delta == doctest::Approx(3.0));  // delta(emptyset) = tau

    // flat torus: hypothesis fails (b1 != 0)
    std::vector<CurvatureTensor> torus = {CurvatureTensor::zero(2)};
    CHECK(lagrangian_obstruction(torus, false, std::nullopt, o).verdict ==
          ObstructionVerdict::NotFired);

    // missing flags: inconclusive, never a pass
    CHECK(lagrangian_obstruction(rp3, std::nullopt, std::nullopt, o).verdict ==
          ObstructionVerdict::Inconclusive);

    // whitney metric: delta >= 0 with a zero at the double point; with
    // flags asserted the scan still fires away from it (sharpness remark)
    ImmersionField w = whitney_immersion(3);
    std::vector<CurvatureTensor> wdata = {
        curvature_via_gauss(second_fundamental_form(w, vec({0.0, 0.0, 0.0})), 0.0)};
    LagrangianObstructionReport wrep = lagrangian_obstruction(wdata, true, std::nullopt, o);
    CHECK(wrep.verdict == ObstructionVerdict::NotFired);  // delta == 0 at the double point only
    CHECK(std::abs(wrep.max_delta) <= 1e-6);
}
