#include <doctest.h>

#include "hodegeo/numeric.hpp"
#include "hodegeo/semispray.hpp"
#include "support.hpp"

using namespace hodegeo;

namespace {

Semispray spray(int n, int k, std::vector<std::string> g,
                std::vector<std::string> params = {}) {
    std::vector<Expr> coeffs;
    for (const auto& text : g) coeffs.push_back(parse_expression(text, n, k));
    return make_semispray(n, k, std::move(coeffs), std::move(params));
}

}  // namespace

TEST_CASE("make_semispray validates arity and jet levels") {
    CHECK_NOTHROW(spray(1, 3, {"omega^2*y2_1/12"}, {"omega"}));
    CHECK_NOTHROW(spray(1, 1, {"0"}));
    CHECK_THROWS_AS(make_semispray(2, 1, {Expr::zero()}), ModelError);
    // G referencing y3_1 in an order-2 model
    Expr bad = parse_expression("y3_1", 1, 3);
    CHECK_THROWS_AS(make_semispray(1, 2, {bad}), ModelError);
    // undeclared parameter
    Expr withp = parse_expression("mu*x1", 1, 1);
    CHECK_THROWS_AS(make_semispray(1, 1, {withp}), ModelError);
}

TEST_CASE("the derivation action on coordinates") {
    Semispray s = spray(2, 3, {"x1*y3_2", "y1_1^2"});
    for (int i = 1; i <= 2; ++i) {
        CHECK(s.apply(Expr::variable(base_var(i))) == Expr::variable(jet_var(1, i)));
        for (int a = 1; a <= 2; ++a)
            CHECK(s.apply(Expr::variable(jet_var(a, i))) ==
                  simplify(Expr::integer(a + 1) * Expr::variable(jet_var(a + 1, i))));
        CHECK(s.apply(Expr::variable(jet_var(3, i))) ==
              simplify(Expr::integer(-4) * s.coeffs[static_cast<std::size_t>(i - 1)]));
    }
}

TEST_CASE("hand-expanded applications") {
    Semispray s2 = spray(1, 2, {"y2_1^2"});
    CHECK(s2.apply(Expr::variable(jet_var(2, 1))) ==
          simplify(parse_expression("-3*y2_1^2", 1, 2)));

    Semispray s1 = spray(1, 1, {"x1*y1_1"});
    CHECK(s1.apply(s1.coeffs[0]) ==
          simplify(parse_expression("y1_1^2 - 2*x1^2*y1_1", 1, 1)));
}

TEST_CASE("iterated application") {
    Semispray free1 = spray(1, 1, {"0"});
    CHECK(free1.apply_power(Expr::variable(base_var(1)), 0) == Expr::variable(base_var(1)));
    CHECK(free1.apply_power(Expr::variable(base_var(1)), 2).is_zero());

    Semispray s2 = spray(1, 2, {"y2_1"});
    CHECK(s2.apply_power(Expr::integer(5), 2).is_zero());
}

TEST_CASE("Leibniz rule for the derivation") {
    Semispray s = spray(1, 2, {"x1*y2_1 - y1_1^2"});
    Expr f = parse_expression("x1*y1_1^2", 1, 2);
    Expr g = parse_expression("sin(x1) + y2_1", 1, 2);
    Expr lhs = s.apply(simplify(f * g));
    Expr rhs = simplify(s.apply(f) * g + f * s.apply(g));
    CHECK(equal_randomized(lhs, rhs, 1, 2).equal);
}

TEST_CASE("Tulczyjev operator truncates at the top level") {
    CHECK(tulczyjew(Expr::variable(base_var(1)), 1, 3) == Expr::variable(jet_var(1, 1)));
    CHECK(tulczyjew(Expr::variable(jet_var(2, 1)), 1, 3) ==
          simplify(parse_expression("3*y3_1", 1, 3)));
    CHECK(tulczyjew(Expr::variable(jet_var(3, 1)), 1, 3).is_zero());
}

TEST_CASE("d_T iterates match S iterates on base functions up to order k") {
    Semispray s = spray(1, 3, {"x1*y3_1 + y2_1^2"});
    Expr x = parse_expression("x1^2 + sin(x1)", 1, 3);
    Expr dt = x;
    for (int a = 1; a <= 3; ++a) {
        dt = tulczyjew(dt, 1, 3);
        CHECK(equal_randomized(dt, s.apply_power(x, a), 1, 3).equal);
    }
    // S and d_T agree on any function independent of the top level
    Expr f = parse_expression("y2_1^2*x1 + y1_1", 1, 3);
    CHECK(equal_randomized(tulczyjew(f, 1, 3), s.apply(f), 1, 3).equal);
}

TEST_CASE("geodesic system: straight lines for the free particle") {
    Semispray s = spray(1, 1, {"0"});
    JetPoint init = JetPoint::make(1, 1);
    init.x[0] = 1.0;
    init.y[0][0] = 2.0;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 1.0, 1e-2});
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        CHECK(traj.states[m][0] == doctest::Approx(1.0 + 2.0 * traj.times[m]).epsilon(1e-12));
        CHECK(traj.states[m][1] == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("geodesic system: jet-space flow matches the scalar closed forms") {
    // k=2, G = y2_1: y^(2)' = -3 y^(2), so y^(2)(1) = e^{-3}
    Semispray s = spray(1, 2, {"y2_1"});
    JetPoint init = JetPoint::make(1, 2);
    init.y[0][0] = 1.0;
    init.y[1][0] = 1.0;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 1.0, 1e-3});
    CHECK(std::abs(traj.states.back()[2] - std::exp(-3.0)) < 1e-8);
}

TEST_CASE("flow satisfies the order-(k+1) ODE by finite differences") {
    // spinning particle, omega = 2: x'''' + 4 x'' = 0
    Semispray s = spray(1, 3, {"omega^2*y2_1/12"}, {"omega"});
    JetPoint init = JetPoint::make(1, 3);
    init.params["omega"] = 2.0;
    init.y[0][0] = 2.0;
    init.y[2][0] = -8.0 / 6.0;
    double h = 1e-3;
    Trajectory traj = integrate_semispray_flow(s, init, {0.0, 1.0, h});
    // centered 4th derivative of x at interior points vs -(k+1)! G = -24 G
    for (std::size_t m = 200; m < traj.times.size() - 200; m += 100) {
        auto x = [&](std::size_t i) { return traj.states[i][0]; };
        double d4 =
            (x(m - 2) - 4 * x(m - 1) + 6 * x(m) - 4 * x(m + 1) + x(m + 2)) / (h * h * h * h);
        JetPoint p = traj.point_at(m);
        double rhs = -24.0 * evaluate(s.coeffs[0], p);
        CHECK(std::abs(d4 - rhs) < 1e-2 * (1.0 + std::abs(rhs)));
    }
}
