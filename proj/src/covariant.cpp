#include "hodegeo/covariant.hpp"

namespace hodegeo {

namespace {

long long factorial(int m) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

void check_arity(const Semispray& s, const VectorComponents& x) {
    if (static_cast<int>(x.size()) != s.n)
        throw ShapeError("vector components must have arity n = " + std::to_string(s.n));
}

}  // namespace

VectorComponents nabla_vector(const Semispray& s, const ConnectionCoeffs& nc,
                              const VectorComponents& x) {
    check_arity(s, x);
    const ExprMatrix& n1 = nc.level(1);
    VectorComponents out(x.size());
    for (int i = 0; i < s.n; ++i) {
        std::vector<Expr> terms;
        terms.push_back(s.apply(x[static_cast<std::size_t>(i)]));
        for (int j = 0; j < s.n; ++j)
            terms.push_back(n1.at(i, j) * x[static_cast<std::size_t>(j)]);
        out[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }
    return out;
}

OneForm nabla_oneform(const Semispray& s, const ConnectionCoeffs& nc, const OneForm& w) {
    check_arity(s, w);
    const ExprMatrix& n1 = nc.level(1);
    OneForm out(w.size());
    for (int j = 0; j < s.n; ++j) {
        std::vector<Expr> terms;
        terms.push_back(s.apply(w[static_cast<std::size_t>(j)]));
        for (int i = 0; i < s.n; ++i)
            terms.push_back(Expr::negate(w[static_cast<std::size_t>(i)] * n1.at(i, j)));
        out[static_cast<std::size_t>(j)] = simplify(Expr::sum(std::move(terms)));
    }
    return out;
}

Tensor11 nabla_tensor11(const Semispray& s, const ConnectionCoeffs& nc, const Tensor11& a) {
    if (a.rows != s.n || a.cols != s.n) throw ShapeError("tensor must be n x n");
    const ExprMatrix& n1 = nc.level(1);
    return mat_add(mat_apply(s, a), mat_sub(mat_mul(n1, a), mat_mul(a, n1)));
}

VectorComponents nabla_power(const Semispray& s, const ConnectionCoeffs& nc,
                             const VectorComponents& x, int m) {
    if (m < 0) throw Error("nabla_power requires m >= 0");
    VectorComponents acc = x;
    for (auto& e : acc) e = simplify(e);
    for (int i = 0; i < m; ++i) acc = nabla_vector(s, nc, acc);
    return acc;
}

VectorComponents nabla_alpha_dual(const Semispray& s, const DualCoeffs& dc,
                                  const VectorComponents& x, int alpha) {
    check_arity(s, x);
    if (alpha < 1 || alpha > s.k) throw ShapeError("alpha out of range 1..k");
    // Precompute S^m(X) for m = 0..alpha.
    std::vector<VectorComponents> spow(static_cast<std::size_t>(alpha) + 1);
    spow[0] = x;
    for (auto& e : spow[0]) e = simplify(e);
    for (int m = 1; m <= alpha; ++m) {
        spow[static_cast<std::size_t>(m)].resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            spow[static_cast<std::size_t>(m)][i] =
                s.apply(spow[static_cast<std::size_t>(m - 1)][i]);
    }
    VectorComponents out(x.size());
    long long afact = factorial(alpha);
    for (int i = 0; i < s.n; ++i) {
        std::vector<Expr> terms;
        terms.push_back(spow[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(i)]);
        for (int b = 1; b <= alpha; ++b) {
            Rational w(afact / factorial(alpha - b));
            for (int j = 0; j < s.n; ++j) {
                terms.push_back(Expr::number(w) * dc.level(b).at(i, j) *
                                spow[static_cast<std::size_t>(alpha - b)][static_cast<std::size_t>(j)]);
            }
        }
        out[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }
    return out;
}

NewtonoidField newtonoid_prolongation(const Semispray& s, const VectorComponents& x) {
    check_arity(s, x);
    NewtonoidField f;
    f.base = x;
    for (auto& e : f.base) e = simplify(e);
    VectorComponents spow = f.base;
    for (int a = 1; a <= s.k; ++a) {
        for (auto& e : spow) e = s.apply(e);
        VectorComponents level(spow.size());
        Rational w(1, factorial(a));
        for (std::size_t i = 0; i < spow.size(); ++i)
            level[i] = simplify(Expr::number(w) * spow[i]);
        f.jets.push_back(std::move(level));
    }
    return f;
}

Expr newtonoid_derivation(const Semispray& s, const VectorComponents& x, const Expr& f) {
    check_arity(s, x);
    NewtonoidField nf = newtonoid_prolongation(s, x);
    std::vector<Expr> terms;
    for (int j = 1; j <= s.n; ++j) {
        Expr fx = differentiate(f, base_var(j));
        if (!fx.is_zero()) terms.push_back(nf.base[static_cast<std::size_t>(j - 1)] * fx);
    }
    for (int a = 1; a <= s.k; ++a) {
        for (int j = 1; j <= s.n; ++j) {
            Expr fy = differentiate(f, jet_var(a, j));
            if (!fy.is_zero())
                terms.push_back(nf.jets[static_cast<std::size_t>(a - 1)]
                                       [static_cast<std::size_t>(j - 1)] *
                                fy);
        }
    }
    return simplify(Expr::sum(std::move(terms)));
}

VectorComponents symmetry_residual_raw(const Semispray& s, const VectorComponents& x) {
    check_arity(s, x);
    VectorComponents out(x.size());
    Rational kp1f(factorial(s.k + 1));
    for (int i = 0; i < s.n; ++i) {
        Expr top = s.apply_power(x[static_cast<std::size_t>(i)], s.k + 1);
        Expr drift = newtonoid_derivation(s, x, s.coeffs[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = simplify(top + Expr::number(kp1f) * drift);
    }
    return out;
}

VectorComponents symmetry_residual_covariant(const Semispray& s, const VectorComponents& x) {
    check_arity(s, x);
    ConnectionCoeffs nc = canonical_connection(s);
    CurvatureComponents cc = curvature_canonical(s);
    // All powers nabla^a X for a = 0..k+1.
    std::vector<VectorComponents> pows;
    pows.push_back(x);
    for (auto& e : pows[0]) e = simplify(e);
    for (int a = 1; a <= s.k + 1; ++a) pows.push_back(nabla_vector(s, nc, pows.back()));
    VectorComponents out(x.size());
    for (int i = 0; i < s.n; ++i) {
        std::vector<Expr> terms;
        terms.push_back(Expr::rational(1, factorial(s.k)) *
                        pows[static_cast<std::size_t>(s.k + 1)][static_cast<std::size_t>(i)]);
        for (int a = 0; a <= s.k - 1; ++a) {
            Rational w(1, factorial(a));
            for (int j = 0; j < s.n; ++j)
                terms.push_back(Expr::number(w) * cc.level(a).at(i, j) *
                                pows[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)]);
        }
        out[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }
    return out;
}

LieSymmetryReport lie_symmetry_check(const Semispray& s, const VectorComponents& x, int trials,
                                     double tol, std::uint64_t seed) {
    check_arity(s, x);
    for (const Expr& e : x) {
        if (max_var_level(e) > 0)
            throw ShapeError("Lie symmetry candidate must depend on base coordinates only");
    }
    VectorComponents raw = symmetry_residual_raw(s, x);
    VectorComponents cov = symmetry_residual_covariant(s, x);
    SampleOptions opts;
    opts.trials = trials;
    opts.tol = tol;
    LieSymmetryReport rep;
    rep.raw_vanishes = true;
    rep.covariant_vanishes = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        opts.seed = seed + i;
        SampleReport r = equal_randomized(raw[i], Expr::zero(), s.n, s.k, opts);
        rep.raw_vanishes = rep.raw_vanishes && r.equal;
        rep.max_raw = std::max(rep.max_raw, r.max_err);
        SampleReport c = equal_randomized(cov[i], Expr::zero(), s.n, s.k, opts);
        rep.covariant_vanishes = rep.covariant_vanishes && c.equal;
        rep.max_covariant = std::max(rep.max_covariant, c.max_err);
    }
    rep.is_symmetry = rep.raw_vanishes && rep.covariant_vanishes;
    return rep;
}

}  // namespace hodegeo
