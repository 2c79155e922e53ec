#include <doctest.h>

#include "hodegeo/checks.hpp"
#include "hodegeo/curvature.hpp"
#include "hodegeo/riemann.hpp"
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

TEST_CASE("spinning particle curvature components") {
    Semispray s = spray(1, 3, {"omega^2*y2_1/12"}, {"omega"});
    CurvatureComponents cc = curvature_canonical(s);
    CHECK(cc.level(0).at(0, 0).is_zero());
    CHECK(cc.level(1).at(0, 0).is_zero());
    Expr expected = simplify(parse_expression("omega^2/3", 1, 3));
    CHECK(cc.level(2).at(0, 0) == expected);

    // and in dimension 3 the top component is (omega^2/3) * identity
    Semispray s3 = spray(3, 3, {"omega^2*y2_1/12", "omega^2*y2_2/12", "omega^2*y2_3/12"},
                         {"omega"});
    CurvatureComponents cc3 = curvature_canonical(s3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(cc3.level(0).at(i, j).is_zero());
            CHECK(cc3.level(1).at(i, j).is_zero());
            CHECK(cc3.level(2).at(i, j) == (i == j ? expected : Expr::zero()));
        }
}

TEST_CASE("closed-form curvature at low order") {
    Semispray s1 = spray(1, 1, {"x1*y1_1"});
    CurvatureComponents cc1 = curvature_canonical(s1);
    CHECK(cc1.level(0).at(0, 0) == simplify(parse_expression("y1_1 - x1^2", 1, 1)));

    Semispray s2 = spray(1, 2, {"y2_1"});
    CurvatureComponents cc2 = curvature_canonical(s2);
    CHECK(cc2.level(1).at(0, 0) == Expr::rational(-3, 2));
    CHECK(cc2.level(0).at(0, 0) == Expr::one());
}

TEST_CASE("general formula with an ad-hoc connection, hand expansion") {
    Semispray s = spray(1, 2, {"y2_1^2"});
    ExprMatrix n1(1, 1), n2(1, 1);
    n1.at(0, 0) = Expr::variable(jet_var(2, 1));
    ConnectionCoeffs adhoc = make_connection(1, 2, {n1, n2});
    CurvatureComponents cc = curvature_general(s, adhoc);
    CHECK(cc.level(1).at(0, 0) == simplify(parse_expression("-2*y2_1^2", 1, 2)));
}

TEST_CASE("zero semispray with zero connection has zero curvature") {
    Semispray z = spray(1, 3, {"0"});
    ConnectionCoeffs zero =
        make_connection(1, 3, {ExprMatrix(1, 1), ExprMatrix(1, 1), ExprMatrix(1, 1)});
    CurvatureComponents cc = curvature_general(z, zero);
    for (int a = 0; a <= 2; ++a) CHECK(mat_is_zero(cc.level(a)));
}

TEST_CASE("general formula collapses to the canonical one on the canonical connection") {
    for (int n = 1; n <= 2; ++n) {
        for (int k = 1; k <= 3; ++k) {
            Semispray s =
                random_semispray(n, k, 2, 3, 2000 + static_cast<std::uint64_t>(10 * n + k));
            CurvatureComponents general = curvature_general(s, canonical_connection(s));
            CurvatureComponents canonical = curvature_canonical(s);
            for (int a = 0; a <= k - 1; ++a)
                CHECK(mat_equal_randomized(general.level(a), canonical.level(a), n, k).equal);
        }
    }
}

TEST_CASE("order-1 canonical curvature matches the independently expanded formula") {
    // R^i_j = 2 (dG/dx - N dG/dy)^i_j - S(N^i_j) + (N N)^i_j with N = dG/dy,
    // assembled here from raw partials rather than adapted_derivative.
    Semispray s = spray(2, 1, {"x1*y1_2^2", "sin(x2)*y1_1"});
    ConnectionCoeffs nc = canonical_connection(s);
    CurvatureComponents cc = curvature_canonical(s);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            std::vector<Expr> terms;
            Expr dg = differentiate(s.coeffs[static_cast<std::size_t>(i)], base_var(j + 1));
            for (int l = 0; l < 2; ++l)
                dg = dg - nc.level(1).at(l, j) *
                              differentiate(s.coeffs[static_cast<std::size_t>(i)], jet_var(1, l + 1));
            Expr r = Expr::integer(2) * dg - s.apply(nc.level(1).at(i, j));
            for (int m = 0; m < 2; ++m) r = r + nc.level(1).at(i, m) * nc.level(1).at(m, j);
            CHECK(equal_randomized(cc.level(0).at(i, j), simplify(r), 2, 1).equal);
        }
    }
}

TEST_CASE("metric spray curvature annihilates the velocity") {
    // 2-sphere metric: R^i_j y^j = 0 along the fiber coordinate
    ExprMatrix g(2, 2);
    g.at(0, 0) = Expr::one();
    g.at(0, 1) = Expr::zero();
    g.at(1, 0) = Expr::zero();
    g.at(1, 1) = parse_expression("sin(x1)^2", 2, 1);
    Metric metric = make_metric(g);
    Semispray s = metric_spray(metric);
    CurvatureComponents cc = curvature_canonical(s);
    for (int i = 0; i < 2; ++i) {
        Expr contracted = Expr::zero();
        for (int j = 0; j < 2; ++j)
            contracted = contracted + cc.level(0).at(i, j) * Expr::variable(jet_var(1, j + 1));
        CHECK(equal_randomized(simplify(contracted), Expr::zero(), 2, 1).equal);
    }
}

TEST_CASE("coefficient rescaling is consistent with re-derivation") {
    Semispray s = spray(1, 2, {"y2_1^2 + x1*y1_1"});
    Semispray s2 = spray(1, 2, {"3*(y2_1^2 + x1*y1_1)"});
    CurvatureComponents a = curvature_canonical(s2);
    // recompute from scratch on the scaled coefficients; no shortcut assumed
    std::vector<Expr> scaled = {simplify(Expr::integer(3) * s.coeffs[0])};
    CurvatureComponents b = curvature_canonical(make_semispray(1, 2, scaled));
    for (int lv = 0; lv <= 1; ++lv)
        CHECK(mat_equal_randomized(a.level(lv), b.level(lv), 1, 2).equal);
}
