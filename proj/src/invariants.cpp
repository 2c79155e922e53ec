#include "hodegeo/invariants.hpp"

namespace hodegeo {

namespace {

void require_shape(const Semispray& s, int k, const char* which) {
    if (s.n != 1 || s.k != k)
        throw ShapeError(std::string(which) + " requires n = 1, k = " + std::to_string(k));
}

}  // namespace

Expr wuenschmann_w3(const Semispray& s) {
    require_shape(s, 2, "W3");
    const Expr& g = s.coeffs[0];
    Expr gx = differentiate(g, base_var(1));
    Expr gy1 = differentiate(g, jet_var(1, 1));
    Expr gy2 = differentiate(g, jet_var(2, 1));
    Expr expr = Expr::rational(-1, 2) * s.apply_power(gy2, 2) -
                Expr::integer(3) * gy2 * s.apply(gy2) + Expr::integer(3) * s.apply(gy1) -
                Expr::integer(2) * Expr::power(gy2, Rational(3)) +
                Expr::integer(6) * gy1 * gy2 - Expr::integer(6) * gx;
    return simplify(expr);
}

Expr fels_w4(const Semispray& s) {
    require_shape(s, 3, "W4");
    const Expr& g = s.coeffs[0];
    Expr gy1 = differentiate(g, jet_var(1, 1));
    Expr gy2 = differentiate(g, jet_var(2, 1));
    Expr gy3 = differentiate(g, jet_var(3, 1));
    Expr expr = Expr::rational(-2, 3) * s.apply_power(gy3, 2) -
                Expr::integer(4) * gy3 * s.apply(gy3) + Expr::integer(4) * s.apply(gy2) -
                Expr::rational(8, 3) * Expr::power(gy3, Rational(3)) +
                Expr::integer(8) * gy2 * gy3 - Expr::integer(8) * gy1;
    return simplify(expr);
}

Expr invariant_via_curvature(const Semispray& s) {
    if (s.n != 1 || (s.k != 2 && s.k != 3))
        throw ShapeError("curvature-form invariant requires n = 1 and k in {2, 3}");
    ConnectionCoeffs nc = canonical_connection(s);
    CurvatureComponents cc = curvature_canonical(s);
    Tensor11 top = cc.level(s.k - 1);
    Tensor11 ntop = nabla_tensor11(s, nc, top);
    Expr out = ntop.at(0, 0) - Expr::integer(2) * cc.level(s.k - 2).at(0, 0);
    return simplify(out);
}

namespace {

InvariantReport build_report(const Semispray& s, std::string which, Expr direct,
                             std::uint64_t seed) {
    InvariantReport rep;
    rep.which = std::move(which);
    rep.direct = std::move(direct);
    rep.curvature_form = invariant_via_curvature(s);
    SampleOptions opts;
    opts.seed = seed;
    rep.identity_verified =
        equal_randomized(rep.direct, rep.curvature_form, s.n, s.k, opts).equal;
    if (rep.direct.is_zero()) {
        rep.verdict = Vanishing::ExactZero;
    } else {
        SampleReport r = equal_randomized(rep.direct, Expr::zero(), s.n, s.k, opts);
        rep.sample_max = r.max_err;
        rep.verdict = r.equal ? Vanishing::SampledZero : Vanishing::NonZero;
    }
    return rep;
}

}  // namespace

InvariantReport variationality_report(const Semispray& s, std::uint64_t seed) {
    require_shape(s, 3, "variationality report");
    InvariantReport rep = build_report(s, "W4", fels_w4(s), seed);
    if (rep.verdict == Vanishing::NonZero) {
        rep.notes =
            "fails the W4 necessary condition (not variational); witness W4 = " +
            to_string(rep.direct);
    } else {
        rep.notes =
            "passes the W4 necessary condition; the second Fels invariant is not computed, "
            "so this is necessity only";
    }
    rep.notes += "; W4 relates to Fels' I1 by W4 = -3*I1";
    return rep;
}

InvariantReport invariant_report(const Semispray& s, std::uint64_t seed) {
    if (s.n == 1 && s.k == 2) {
        InvariantReport rep = build_report(s, "W3", wuenschmann_w3(s), seed);
        rep.notes = rep.verdict == Vanishing::NonZero
                        ? "W3 does not vanish: no associated conformal Lorentzian structure"
                        : "W3 vanishes on all evidence gathered";
        return rep;
    }
    if (s.n == 1 && s.k == 3) return variationality_report(s, seed);
    throw ShapeError("invariants are defined for n = 1 with k = 2 (W3) or k = 3 (W4)");
}

}  // namespace hodegeo
