#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hodegeo/numeric.hpp"
#include "support.hpp"

using namespace hodegeo;

namespace {

Semispray spinning_particle(int n = 1) {
    std::vector<Expr> coeffs;
    for (int i = 1; i <= n; ++i)
        coeffs.push_back(parse_expression("omega^2*y2_" + std::to_string(i) + "/12", n, 3));
    return make_semispray(n, 3, std::move(coeffs), {"omega"});
}

JetPoint spinning_init(double omega = 2.0) {
    // x(t) = sin(omega t): x=0, x'=omega, x''=0, x'''=-omega^3
    JetPoint p = JetPoint::make(1, 3);
    p.params["omega"] = omega;
    p.y[0][0] = omega;
    p.y[2][0] = -omega * omega * omega / 6.0;
    return p;
}

double flow_error_vs_sin(double h) {
    Semispray s = spinning_particle();
    Trajectory traj = integrate_semispray_flow(s, spinning_init(), {0.0, 1.0, h});
    double worst = 0.0;
    for (std::size_t m = 0; m < traj.times.size(); ++m)
        worst = std::max(worst, std::abs(traj.states[m][0] - std::sin(2.0 * traj.times[m])));
    return worst;
}

}  // namespace

TEST_CASE("RK4 reproduces the spinning-particle closed form") {
    CHECK(flow_error_vs_sin(1e-3) < 1e-8);
}

TEST_CASE("RK4 has observed order four") {
    double e4 = flow_error_vs_sin(4e-3);
    double e2 = flow_error_vs_sin(2e-3);
    double e1 = flow_error_vs_sin(1e-3);
    double r1 = e4 / e2;
    double r2 = e2 / e1;
    CHECK(r1 > 12.0);
    CHECK(r1 < 20.0);
    CHECK(r2 > 12.0);
    CHECK(r2 < 20.0);
}

TEST_CASE("linear scalar flow: y2' = -3 y2") {
    Semispray s = make_semispray(1, 2, {parse_expression("y2_1", 1, 2)});
    JetPoint init = JetPoint::make(1, 2);
    init.y[0][0] = 0.5;
    init.y[1][0] = 1.0;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 1.0, 1e-3});
    CHECK(std::abs(traj.states.back()[2] - std::exp(-3.0)) < 1e-8);
}

TEST_CASE("Jacobi flow matches closed-form variations of the spinning particle") {
    Semispray s = spinning_particle();
    Trajectory traj = integrate_semispray_flow(s, spinning_init(), {0.0, 1.0, 1e-3});

    // xi'''' + 4 xi'' = 0 with N = 0, so nabla = d/dt.
    // init (0, 1, 0, 0) -> xi(t) = t
    VariationSeries lin = integrate_jacobi(s, traj, {{0.0}, {1.0}, {0.0}, {0.0}}, {0.0, 1.0, 1e-3});
    double worst = 0.0;
    for (std::size_t m = 0; m < lin.times.size(); ++m)
        worst = std::max(worst, std::abs(lin.values[m][0] - lin.times[m]));
    CHECK(worst < 1e-8);

    // init (1, 0, -omega^2, 0) -> xi(t) = cos(omega t)
    VariationSeries cosv =
        integrate_jacobi(s, traj, {{1.0}, {0.0}, {-4.0}, {0.0}}, {0.0, 1.0, 1e-3});
    worst = 0.0;
    for (std::size_t m = 0; m < cosv.times.size(); ++m)
        worst = std::max(worst, std::abs(cosv.values[m][0] - std::cos(2.0 * cosv.times[m])));
    CHECK(worst < 1e-8);
}

TEST_CASE("free particle Jacobi solutions are affine") {
    Semispray s = make_semispray(1, 1, {Expr::zero()});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 0.3;
    init.y[0][0] = 1.2;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 1.0, 1e-2});
    VariationSeries v = integrate_jacobi(s, traj, {{0.7}, {-0.4}}, {0.0, 1.0, 1e-2});
    for (std::size_t m = 0; m < v.times.size(); ++m)
        CHECK(std::abs(v.values[m][0] - (0.7 - 0.4 * v.times[m])) < 1e-12);
}

TEST_CASE("variation oracle is exactly linear for straight-line flows") {
    Semispray s = make_semispray(1, 1, {Expr::zero()});
    JetPoint init = JetPoint::make(1, 1);
    init.y[0][0] = 1.0;
    VariationSeries v =
        variation_oracle(s, init, {{0.5}, {2.0}}, 1e-3, {0.0, 1.0, 1e-2});
    for (std::size_t m = 0; m < v.times.size(); ++m)
        CHECK(std::abs(v.values[m][0] - (0.5 + 2.0 * v.times[m])) < 1e-12);
}

TEST_CASE("variation oracle vs Jacobi flow on the spinning particle") {
    Semispray s = spinning_particle();
    JetPoint init = spinning_init();
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);

    // ordinary derivatives of xi(t) = cos(2t) at t = 0; N = 0 makes the
    // covariant initial data identical
    std::vector<std::vector<double>> jets = {{1.0}, {0.0}, {-4.0}, {0.0}};
    std::vector<std::vector<double>> cov = covariant_from_jet(s, init, jets);
    for (int a = 0; a <= 3; ++a) CHECK(cov[static_cast<std::size_t>(a)][0] == jets[static_cast<std::size_t>(a)][0]);

    VariationSeries jac = integrate_jacobi(s, traj, cov, cfg);
    VariationSeries fd1 = variation_oracle(s, init, jets, 1e-3, cfg);
    double dev1 = series_max_error(jac, fd1);
    CHECK(dev1 < 1e-5);
    // The flow is linear, so the s^2 coefficient of the central difference
    // vanishes identically: the deviation is integrator-level for any s.
    VariationSeries fd2 = variation_oracle(s, init, jets, 5e-4, cfg);
    CHECK(series_max_error(jac, fd2) < 1e-5);
}

TEST_CASE("tangent direction: the oracle reproduces dx/dt") {
    // direction = jet of the geodesic itself, so the variation is V(t,s) = c(t+s)
    Semispray s = make_semispray(1, 1, {parse_expression("x1*y1_1", 1, 1)});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 0.2;
    init.y[0][0] = 0.8;
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    double x1 = init.y[0][0];                           // x'(0)
    double x2 = -2.0 * evaluate(s.coeffs[0], init);     // x''(0)
    VariationSeries v = variation_oracle(s, init, {{x1}, {x2}}, 1e-3, cfg);
    double worst = 0.0;
    for (std::size_t m = 0; m < v.times.size(); ++m)
        worst = std::max(worst, std::abs(v.values[m][0] - traj.states[m][1]));
    CHECK(worst < 1e-5);
}

TEST_CASE("oracle error drops by about 4 when s is halved on a nonlinear flow") {
    Semispray s = make_semispray(1, 1, {parse_expression("x1*y1_1", 1, 1)});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 0.2;
    init.y[0][0] = 0.8;
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    std::vector<std::vector<double>> jets = {{0.5}, {0.3}};
    VariationSeries jac = integrate_jacobi(s, traj, covariant_from_jet(s, init, jets), cfg);
    double dev1 = series_max_error(jac, variation_oracle(s, init, jets, 4e-2, cfg));
    double dev2 = series_max_error(jac, variation_oracle(s, init, jets, 2e-2, cfg));
    CHECK(dev1 / dev2 > 3.0);
    CHECK(dev1 / dev2 < 5.0);
}

TEST_CASE("oracle with matched data through the covariant conversion, k = 1") {
    // nontrivial connection: G = x*y
    Semispray s = make_semispray(1, 1, {parse_expression("x1*y1_1", 1, 1)});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 0.2;
    init.y[0][0] = 0.8;
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);

    std::vector<std::vector<double>> jets = {{0.3}, {-0.1}};
    std::vector<std::vector<double>> cov = covariant_from_jet(s, init, jets);
    // nabla xi = xi' + N xi with N = x1 = 0.2
    CHECK(cov[1][0] == doctest::Approx(-0.1 + 0.2 * 0.3));
    // and the inverse conversion round-trips
    std::vector<std::vector<double>> back = jet_from_covariant(s, init, cov);
    CHECK(back[0][0] == doctest::Approx(jets[0][0]));
    CHECK(back[1][0] == doctest::Approx(jets[1][0]));

    VariationSeries jac = integrate_jacobi(s, traj, cov, cfg);
    VariationSeries fd = variation_oracle(s, init, jets, 1e-3, cfg);
    CHECK(series_max_error(jac, fd) < 1e-5);
}

TEST_CASE("tangent vector of a geodesic is a Jacobi field (k = 1)") {
    Semispray s = make_semispray(1, 1, {parse_expression("x1*y1_1", 1, 1)});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 0.1;
    init.y[0][0] = 1.0;
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    // xi = dx/dt: initial jets xi(0) = y(0), xi'(0) = x''(0) = -2G
    JetPoint p0 = traj.point_at(0);
    double xi0 = p0.y[0][0];
    double xi1 = -2.0 * evaluate(s.coeffs[0], p0);
    auto cov = covariant_from_jet(s, p0, {{xi0}, {xi1}});
    VariationSeries jac = integrate_jacobi(s, traj, cov, cfg);
    // compare against the trajectory's own velocity samples
    double worst = 0.0;
    for (std::size_t m = 0; m < traj.times.size(); ++m)
        worst = std::max(worst, std::abs(jac.values[m][0] - traj.states[m][1]));
    CHECK(worst < 1e-6);
}

TEST_CASE("covariant Jacobi integration in dimension 2: sphere tangent field") {
    // Along a metric geodesic the tangent field has nabla xi = 0 and stays a
    // Jacobi field, so the integrated variation must track y^(1)(t).
    ExprMatrix g(2, 2);
    g.at(0, 0) = Expr::one();
    g.at(0, 1) = Expr::zero();
    g.at(1, 0) = Expr::zero();
    g.at(1, 1) = parse_expression("sin(x1)^2", 2, 1);
    Semispray s = [&] {
        Christoffel ch = christoffel(make_metric(g));
        std::vector<Expr> coeffs(2);
        for (int i = 0; i < 2; ++i) {
            Expr acc = Expr::zero();
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    acc = acc + Expr::rational(1, 2) * ch.at(i, a, b) *
                                    Expr::variable(jet_var(1, a + 1)) *
                                    Expr::variable(jet_var(1, b + 1));
            coeffs[static_cast<std::size_t>(i)] = simplify(acc);
        }
        return make_semispray(2, 1, std::move(coeffs));
    }();
    JetPoint init = JetPoint::make(2, 1);
    init.x = {0.7, 0.2};
    init.y[0] = {0.3, 0.5};
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    VariationSeries jac = integrate_jacobi(s, traj, {{0.3, 0.5}, {0.0, 0.0}}, cfg);
    double worst = 0.0;
    for (std::size_t m = 0; m < traj.times.size(); ++m)
        for (int i = 0; i < 2; ++i)
            worst = std::max(worst, std::abs(jac.values[m][static_cast<std::size_t>(i)] -
                                             traj.states[m][static_cast<std::size_t>(2 + i)]));
    CHECK(worst < 1e-8);
    // and nabla xi stays numerically zero
    for (std::size_t m = 0; m < jac.times.size(); m += 100)
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(jac.values[m][static_cast<std::size_t>(2 + i)]) < 1e-8);
}

TEST_CASE("grids starting away from zero") {
    Semispray s = make_semispray(1, 1, {parse_expression("x1*y1_1", 1, 1)});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 0.2;
    init.y[0][0] = 0.8;
    IntegratorConfig cfg{0.5, 1.5, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    CHECK(traj.times.front() == doctest::Approx(0.5));
    CHECK(traj.times.back() == doctest::Approx(1.5));
    VariationSeries v =
        integrate_jacobi(s, traj, covariant_from_jet(s, init, {{0.3}, {0.1}}), cfg);
    CHECK(v.times.size() == traj.times.size());
    // a t0 mismatch is rejected
    CHECK_THROWS_AS(integrate_jacobi(s, traj, {{0.3}, {0.1}}, {0.0, 1.0, 1e-3}), NumericError);
}

TEST_CASE("series_max_error basics") {
    VariationSeries a;
    a.n = 1;
    a.depth = 0;
    a.times = {0.0, 0.5, 1.0};
    a.values = {{1.0}, {2.0}, {3.0}};
    VariationSeries b = a;
    CHECK(series_max_error(a, b) == 0.0);
    for (auto& v : b.values) v[0] += 1e-4;
    CHECK(series_max_error(a, b) == doctest::Approx(1e-4));
    b.times[1] = 0.6;
    CHECK_THROWS_AS(series_max_error(a, b), NumericError);
}

TEST_CASE("grid validation") {
    Semispray s = make_semispray(1, 1, {Expr::zero()});
    JetPoint init = JetPoint::make(1, 1);
    init.y[0][0] = 1.0;
    CHECK_THROWS_AS(integrate_semispray_flow(s, init, {0.0, 1.0, -1e-3}), NumericError);
    CHECK_THROWS_AS(integrate_semispray_flow(s, init, {1.0, 0.0, 1e-3}), NumericError);
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 1.0, 1e-2});
    CHECK_THROWS_AS(integrate_jacobi(s, traj, {{1.0}, {0.0}}, {0.0, 1.0, 2e-2}), NumericError);
    CHECK_THROWS_AS(integrate_jacobi(s, traj, {{1.0}}, {0.0, 1.0, 1e-2}), ShapeError);
}

TEST_CASE("non-regular samples are flagged") {
    // start with y^(1) = 0: flagged, integration proceeds
    Semispray s = make_semispray(1, 1, {parse_expression("x1", 1, 1)});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 1.0;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 0.1, 1e-2});
    CHECK_FALSE(traj.regular.front());
    CHECK(traj.regular.back());
}

TEST_CASE("CSV export layout") {
    Semispray s = make_semispray(1, 2, {parse_expression("y2_1", 1, 2)});
    JetPoint init = JetPoint::make(1, 2);
    init.y[0][0] = 1.0;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 0.01, 1e-2});
    std::ostringstream os;
    write_csv(os, traj);
    std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) == "t,x1,y1_1,y2_1");

    VariationSeries v = integrate_jacobi(s, traj, {{1.0}, {0.0}, {0.0}}, {0.0, 0.01, 1e-2});
    std::ostringstream os2;
    write_csv(os2, v);
    std::string text2 = os2.str();
    CHECK(text2.substr(0, text2.find('\n')) == "t,xi1,nabla1_1,nabla2_1");
}

TEST_CASE("finite-difference Jacobi residual of the integrated variation is O(h^2)-small") {
    Semispray s = spinning_particle();
    JetPoint init = spinning_init();
    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    VariationSeries v = integrate_jacobi(s, traj, {{1.0}, {0.0}, {-4.0}, {0.0}}, cfg);
    // N = 0 here, so the residual is xi'''' + omega^2 xi'' by plain differences
    double h = cfg.step;
    double worst = 0.0;
    for (std::size_t m = 2; m + 2 < v.times.size(); m += 10) {
        auto xi = [&](std::size_t i) { return v.values[i][0]; };
        double d2 = (xi(m - 1) - 2 * xi(m) + xi(m + 1)) / (h * h);
        double d4 = (xi(m - 2) - 4 * xi(m - 1) + 6 * xi(m) - 4 * xi(m + 1) + xi(m + 2)) /
                    (h * h * h * h);
        worst = std::max(worst, std::abs(d4 + 4.0 * d2));
    }
    CHECK(worst < 1e-2);
}
