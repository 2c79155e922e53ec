#include "hodegeo/curvature.hpp"

namespace hodegeo {

namespace {

ExprMatrix adapted_gradient(const Semispray& s, const ConnectionCoeffs& nc, int level) {
    ExprMatrix out(s.n, s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            out.at(i, j) =
                adapted_derivative(s.coeffs[static_cast<std::size_t>(i)], level, j + 1, nc);
    return out;
}

}  // namespace

CurvatureComponents curvature_general(const Semispray& s, const ConnectionCoeffs& nc) {
    if (nc.n != s.n || nc.k != s.k) throw ShapeError("connection does not match semispray");
    ITensors its = i_tensors(s, nc);
    CurvatureComponents cc;
    cc.n = s.n;
    cc.k = s.k;
    const ExprMatrix& n1 = nc.level(1);
    for (int a = 0; a <= s.k - 1; ++a) {
        ExprMatrix r = mat_scale(adapted_gradient(s, nc, a), Rational(s.k + 1));
        if (a >= 1) r = mat_sub(r, mat_scale(nc.level(s.k + 1 - a), Rational(a)));
        r = mat_sub(r, mat_apply(s, nc.level(s.k - a)));
        r = mat_add(r, mat_mul(nc.level(s.k - a), n1));
        for (int b = 2; b <= s.k - a; ++b)
            r = mat_add(r, mat_mul(nc.level(s.k + 1 - a - b), its.level(b)));
        cc.levels.push_back(std::move(r));
    }
    return cc;
}

CurvatureComponents curvature_canonical(const Semispray& s) {
    ConnectionCoeffs nc = canonical_connection(s);
    CurvatureComponents cc;
    cc.n = s.n;
    cc.k = s.k;
    // R_(0) = (k+1) dG/dx| - S(N_(k)) + N_(k) N_(1)
    ExprMatrix r0 = mat_scale(adapted_gradient(s, nc, 0), Rational(s.k + 1));
    r0 = mat_sub(r0, mat_apply(s, nc.level(s.k)));
    r0 = mat_add(r0, mat_mul(nc.level(s.k), nc.level(1)));
    cc.levels.push_back(std::move(r0));
    for (int a = 1; a <= s.k - 1; ++a) {
        ExprMatrix r = mat_scale(mat_sub(adapted_gradient(s, nc, a), nc.level(s.k + 1 - a)),
                                 Rational(s.k + 1));
        cc.levels.push_back(std::move(r));
    }
    return cc;
}

}  // namespace hodegeo
