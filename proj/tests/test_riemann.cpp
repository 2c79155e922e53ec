#include <doctest.h>

#include <cmath>

#include "hodegeo/riemann.hpp"
#include "support.hpp"

using namespace hodegeo;

namespace {

Metric flat_metric(int n) {
    ExprMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = i == j ? Expr::one() : Expr::zero();
    return make_metric(std::move(g));
}

Metric sphere_metric() {
    ExprMatrix g(2, 2);
    g.at(0, 0) = Expr::one();
    g.at(0, 1) = Expr::zero();
    g.at(1, 0) = Expr::zero();
    g.at(1, 1) = parse_expression("sin(x1)^2", 2, 1);
    return make_metric(std::move(g));
}

Metric conformal_1d() {
    ExprMatrix g(1, 1);
    g.at(0, 0) = parse_expression("exp(2*x1)", 1, 1);
    return make_metric(std::move(g));
}

}  // namespace

TEST_CASE("metric validation") {
    ExprMatrix bad(2, 2);
    bad.at(0, 0) = Expr::one();
    bad.at(0, 1) = Expr::variable(base_var(1));
    bad.at(1, 0) = Expr::zero();
    bad.at(1, 1) = Expr::one();
    CHECK_THROWS_AS(make_metric(bad), ModelError);

    ExprMatrix fiber(1, 1);
    fiber.at(0, 0) = Expr::variable(jet_var(1, 1));
    CHECK_THROWS_AS(make_metric(fiber), ModelError);

    ExprMatrix degenerate(1, 1);
    degenerate.at(0, 0) = Expr::zero();
    CHECK_THROWS_AS(make_metric(degenerate), ModelError);
}

TEST_CASE("Christoffel symbols: flat, sphere, conformal") {
    Metric flat = flat_metric(2);
    Christoffel cf = christoffel(flat);
    for (const Expr& e : cf.data) CHECK(e.is_zero());

    Metric sph = sphere_metric();
    Christoffel cs = christoffel(sph);
    CHECK(equal_randomized(cs.at(0, 1, 1), parse_expression("-sin(x1)*cos(x1)", 2, 1), 2, 1)
              .equal);
    CHECK(equal_randomized(cs.at(1, 0, 1), parse_expression("cos(x1)/sin(x1)", 2, 1), 2, 1)
              .equal);
    CHECK(cs.at(1, 0, 1) == cs.at(1, 1, 0));  // symmetry in the lower pair

    Metric conf = conformal_1d();
    Christoffel cc = christoffel(conf);
    CHECK(equal_randomized(cc.at(0, 0, 0), Expr::one(), 1, 1).equal);
}

TEST_CASE("prolongation Lagrangian") {
    Metric flat = flat_metric(2);
    Prolongation pf = prolong_lagrangian(flat);
    CHECK(pf.z2[0] == Expr::variable(jet_var(2, 1)));
    CHECK(pf.z2[1] == Expr::variable(jet_var(2, 2)));
    CHECK(pf.lagrangian ==
          simplify(parse_expression("(y2_1^2 + y2_2^2)/2", 2, 2)));

    Metric sph = sphere_metric();
    Prolongation ps = prolong_lagrangian(sph);
    CHECK(equal_randomized(ps.z2[0],
                           parse_expression("y2_1 - sin(x1)*cos(x1)*y1_2^2/2", 2, 2), 2, 2)
              .equal);
}

TEST_CASE("Euler-Lagrange semispray of the flat metric is free") {
    Semispray s = el_semispray3(flat_metric(2));
    CHECK(s.k == 3);
    for (const Expr& g : s.coeffs) CHECK(g.is_zero());
}

TEST_CASE("order-3 connection of the prolongation: N_(1) = gamma y^(1)") {
    for (int which = 0; which < 3; ++which) {
        Metric g = which == 0 ? flat_metric(2) : (which == 1 ? sphere_metric() : conformal_1d());
        Semispray s3 = el_semispray3(g);
        ConnectionCoeffs nc = canonical_connection(s3);
        Christoffel ch = christoffel(g);
        for (int i = 0; i < g.n; ++i) {
            for (int j = 0; j < g.n; ++j) {
                Expr expect = Expr::zero();
                for (int k = 0; k < g.n; ++k)
                    expect = expect + ch.at(i, k, j) * Expr::variable(jet_var(1, k + 1));
                CHECK(equal_randomized(nc.level(1).at(i, j), simplify(expect), g.n, 3).equal);
                // independent of y^(2), y^(3)
                CHECK(max_var_level(nc.level(1).at(i, j)) <= 1);
            }
        }
    }
}

TEST_CASE("covariant acceleration is half the covariant velocity derivative") {
    for (int which = 0; which < 2; ++which) {
        Metric g = which == 0 ? flat_metric(2) : sphere_metric();
        Semispray s3 = el_semispray3(g);
        ConnectionCoeffs nc = canonical_connection(s3);
        Prolongation pr = prolong_lagrangian(g);
        VectorComponents y1(static_cast<std::size_t>(g.n));
        for (int i = 0; i < g.n; ++i) y1[static_cast<std::size_t>(i)] = Expr::variable(jet_var(1, i + 1));
        VectorComponents ny = nabla_vector(s3, nc, y1);
        for (int i = 0; i < g.n; ++i) {
            Expr half = simplify(Expr::rational(1, 2) * ny[static_cast<std::size_t>(i)]);
            CHECK(half == pr.z2[static_cast<std::size_t>(i)]);  // exact structural identity
        }
    }
}

TEST_CASE("Riemann tensor conventions") {
    RiemannTensor rf = riemann_tensor(flat_metric(2));
    for (const Expr& e : rf.data) CHECK(e.is_zero());

    Metric sph = sphere_metric();
    RiemannTensor rs = riemann_tensor(sph);
    // antisymmetry in the last index pair
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    CHECK(simplify(rs.at(i, j, k, l) + rs.at(i, j, l, k)).is_zero());

    // the spray relation R^i_j = R^i_{kjl} y^k y^l against the k=1 curvature
    Semispray spray1 = metric_spray(sph);
    CurvatureComponents cc = curvature_canonical(spray1);
    ExprMatrix contracted = riemann_contracted(sph);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(equal_randomized(cc.level(0).at(i, j), contracted.at(i, j), 2, 1).equal);

    // sectional curvature of the unit sphere: R^1_{212} = sin^2(x1)
    CHECK(equal_randomized(rs.at(0, 1, 0, 1), parse_expression("sin(x1)^2", 2, 1), 2, 1).equal);
}

TEST_CASE("top curvature component encodes the metric curvature: 3 R_(2) = 2 R") {
    for (int which = 0; which < 2; ++which) {
        Metric g = which == 0 ? flat_metric(2) : sphere_metric();
        Semispray s3 = el_semispray3(g);
        CurvatureComponents cc = curvature_canonical(s3);
        ExprMatrix rij = riemann_contracted(g);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                Expr lhs = simplify(Expr::integer(3) * cc.level(2).at(i, j));
                Expr rhs = simplify(Expr::integer(2) * rij.at(i, j));
                CHECK(equal_randomized(lhs, rhs, g.n, 3).equal);
            }
    }
}

TEST_CASE("middle curvature component: 3 R_(1) = nabla R + R-gradient term") {
    Metric g = sphere_metric();
    Semispray s3 = el_semispray3(g);
    ConnectionCoeffs nc = canonical_connection(s3);
    CurvatureComponents cc = curvature_canonical(s3);
    ExprMatrix rij = riemann_contracted(g);
    RiemannTensor rt = riemann_tensor(g);
    VectorComponents y1 = {Expr::variable(jet_var(1, 1)), Expr::variable(jet_var(1, 2))};
    VectorComponents ny = nabla_vector(s3, nc, y1);
    Tensor11 nr = nabla_tensor11(s3, nc, rij);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Expr extra = Expr::zero();
            for (int s = 0; s < 2; ++s)
                for (int k = 0; k < 2; ++k)
                    extra = extra + rt.at(i, j, s, k) * ny[static_cast<std::size_t>(s)] *
                                        Expr::variable(jet_var(1, k + 1));
            Expr lhs = simplify(Expr::integer(3) * cc.level(1).at(i, j));
            Expr rhs = simplify(nr.at(i, j) + extra);
            CHECK(equal_randomized(lhs, rhs, 2, 3).equal);
        }
}

TEST_CASE("biharmonic residual vanishes along the Euler-Lagrange flow") {
    // flat: x'''' = 0, any init
    Metric flat = flat_metric(2);
    Semispray sf = el_semispray3(flat);
    JetPoint init = JetPoint::make(2, 3);
    init.x = {0.1, 0.2};
    init.y[0] = {0.4, -0.3};
    init.y[1] = {0.2, 0.1};
    init.y[2] = {-0.05, 0.3};
    Trajectory tf = integrate_semispray_flow(sf, init, {0.0, 1.0, 1e-2});
    for (double r : biharmonic_residual(flat, tf)) CHECK(r < 1e-8);

    // sphere, generic init: the flow satisfies its own Euler-Lagrange equation
    Metric sph = sphere_metric();
    Semispray ss = el_semispray3(sph);
    JetPoint gi = JetPoint::make(2, 3);
    gi.x = {0.8, 0.3};
    gi.y[0] = {0.2, 0.4};
    gi.y[1] = {0.05, -0.1};
    gi.y[2] = {0.02, 0.03};
    Trajectory ts = integrate_semispray_flow(ss, gi, {0.0, 1.0, 1e-3});
    for (double r : biharmonic_residual(sph, ts)) CHECK(r < 1e-6);
}

TEST_CASE("metric geodesics are biharmonic and track the order-3 flow") {
    Metric sph = sphere_metric();
    Semispray s3 = el_semispray3(sph);
    Semispray s1 = metric_spray(sph);

    std::vector<double> x0 = {0.7, 0.2};
    std::vector<double> v0 = {0.3, 0.5};
    JetPoint j3 = metric_geodesic_jet3(sph, x0, v0);
    // z^(2) = 0 at the initial point by construction
    Christoffel ch = christoffel(sph);
    JetPoint j1 = JetPoint::make(2, 1);
    j1.x = x0;
    j1.y[0] = v0;
    for (int i = 0; i < 2; ++i) {
        double gyy = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) gyy += evaluate(ch.at(i, a, b), j1) * v0[static_cast<std::size_t>(a)] * v0[static_cast<std::size_t>(b)];
        CHECK(j3.y[1][static_cast<std::size_t>(i)] == doctest::Approx(-0.5 * gyy));
    }

    IntegratorConfig cfg{0.0, 1.0, 1e-3};
    Trajectory t3 = integrate_semispray_flow(s3, j3, cfg);
    Trajectory t1 = integrate_semispray_flow(s1, j1, cfg);
    double dev = 0.0;
    for (std::size_t m = 0; m < t3.times.size(); ++m)
        for (int i = 0; i < 2; ++i)
            dev = std::max(dev, std::abs(t3.states[m][static_cast<std::size_t>(i)] -
                                         t1.states[m][static_cast<std::size_t>(i)]));
    CHECK(dev < 1e-6);

    for (double r : biharmonic_residual(sph, t3)) CHECK(r < 1e-6);
}
