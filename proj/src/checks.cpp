#include "hodegeo/checks.hpp"

#include <random>

#include "hodegeo/invariants.hpp"

namespace hodegeo {

namespace {

long long factorial(int m) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

CheckResult from_report(std::string name, const SampleReport& rep, std::string note = "") {
    CheckResult r;
    r.name = std::move(name);
    r.pass = rep.equal;
    r.max_err = rep.max_err;
    r.note = std::move(note);
    return r;
}

SampleReport merge(SampleReport a, const SampleReport& b) {
    a.equal = a.equal && b.equal;
    a.max_err = std::max(a.max_err, b.max_err);
    a.samples += b.samples;
    return a;
}

SampleReport vec_equal(const VectorComponents& a, const VectorComponents& b, int n, int k,
                       const SampleOptions& opts) {
    SampleReport rep;
    SampleOptions o = opts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        o.seed = opts.seed + i;
        rep = merge(rep, equal_randomized(a[i], b[i], n, k, o));
    }
    return rep;
}

}  // namespace

Expr random_polynomial(int n, int k, int degree, int terms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<VarId> vars;
    for (int i = 1; i <= n; ++i) vars.push_back(base_var(i));
    for (int a = 1; a <= k; ++a)
        for (int i = 1; i <= n; ++i) vars.push_back(jet_var(a, i));
    std::vector<Expr> out;
    for (int t = 0; t < terms; ++t) {
        long long c = static_cast<long long>(rng() % 7) - 3;
        if (c == 0) c = 1;
        std::vector<Expr> factors;
        factors.push_back(Expr::integer(c));
        int d = static_cast<int>(rng() % static_cast<std::uint64_t>(degree + 1));
        for (int j = 0; j < d; ++j)
            factors.push_back(Expr::variable(vars[rng() % vars.size()]));
        out.push_back(Expr::product(std::move(factors)));
    }
    return simplify(Expr::sum(std::move(out)));
}

Semispray random_semispray(int n, int k, int degree, int terms, std::uint64_t seed) {
    std::vector<Expr> coeffs;
    for (int i = 0; i < n; ++i)
        coeffs.push_back(random_polynomial(n, k, degree, terms, seed + 7919 * (i + 1)));
    return make_semispray(n, k, std::move(coeffs));
}

std::vector<CheckResult> identity_suite(const Semispray& s, const SampleOptions& opts) {
    std::vector<CheckResult> out;
    ConnectionCoeffs nc = canonical_connection(s);
    DualCoeffs from_primal = dual_from_primal(nc);
    DualCoeffs recursive = dual_recursive(s);

    {
        SampleReport rep;
        SampleOptions o = opts;
        for (int a = 1; a <= s.k; ++a) {
            o.seed = opts.seed + static_cast<std::uint64_t>(a);
            rep = merge(rep, mat_equal_randomized(from_primal.level(a), recursive.level(a), s.n,
                                                  s.k, o));
        }
        out.push_back(from_report("dual coefficients: coframe recursion vs direct recursion", rep));
    }
    {
        ITensors its = i_tensors(s, nc);
        SampleReport rep;
        SampleOptions o = opts;
        for (int a = 2; a <= s.k; ++a) {
            o.seed = opts.seed + 100 + static_cast<std::uint64_t>(a);
            rep = merge(rep, mat_equal_randomized(its.level(a), ExprMatrix(s.n, s.n), s.n, s.k, o));
        }
        if (s.k == 1) rep.samples = 0;
        out.push_back(from_report("obstruction tensors vanish for the canonical connection", rep,
                                  s.k == 1 ? "trivial at order 1" : ""));
    }
    {
        CurvatureComponents general = curvature_general(s, nc);
        CurvatureComponents canonical = curvature_canonical(s);
        SampleReport rep;
        SampleOptions o = opts;
        for (int a = 0; a <= s.k - 1; ++a) {
            o.seed = opts.seed + 200 + static_cast<std::uint64_t>(a);
            rep = merge(rep,
                        mat_equal_randomized(general.level(a), canonical.level(a), s.n, s.k, o));
        }
        out.push_back(from_report("general curvature formula vs canonical formula", rep));
    }
    {
        VectorComponents x(static_cast<std::size_t>(s.n));
        for (int i = 0; i < s.n; ++i)
            x[static_cast<std::size_t>(i)] =
                random_polynomial(s.n, s.k, 2, 3, opts.seed + 300 + static_cast<std::uint64_t>(i));
        SampleReport rep;
        SampleOptions o = opts;
        for (int a = 1; a <= s.k; ++a) {
            VectorComponents lhs = nabla_alpha_dual(s, recursive, x, a);
            VectorComponents rhs = nabla_power(s, nc, x, a);
            o.seed = opts.seed + 400 + static_cast<std::uint64_t>(a);
            rep = merge(rep, vec_equal(lhs, rhs, s.n, s.k, o));
        }
        out.push_back(from_report("iterated derivative: M-based form vs nabla powers", rep));
    }
    {
        VectorComponents x(static_cast<std::size_t>(s.n));
        for (int i = 0; i < s.n; ++i)
            x[static_cast<std::size_t>(i)] =
                random_polynomial(s.n, s.k, 2, 3, opts.seed + 500 + static_cast<std::uint64_t>(i));
        VectorComponents cov = symmetry_residual_covariant(s, x);
        VectorComponents raw = symmetry_residual_raw(s, x);
        VectorComponents scaled(raw.size());
        Rational w(1, factorial(s.k));
        for (std::size_t i = 0; i < raw.size(); ++i)
            scaled[i] = simplify(Expr::number(w) * raw[i]);
        SampleOptions o = opts;
        o.seed = opts.seed + 600;
        out.push_back(from_report("covariant symmetry residual = raw residual / k!",
                                  vec_equal(cov, scaled, s.n, s.k, o)));
    }
    if (s.n == 1 && (s.k == 2 || s.k == 3)) {
        Expr direct = s.k == 2 ? wuenschmann_w3(s) : fels_w4(s);
        Expr via_curv = invariant_via_curvature(s);
        SampleOptions o = opts;
        o.seed = opts.seed + 700;
        out.push_back(from_report(
            s.k == 2 ? "W3 = nabla R_(1) - 2 R_(0)" : "W4 = nabla R_(2) - 2 R_(1)",
            equal_randomized(direct, via_curv, s.n, s.k, o)));
    }
    return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace hodegeo
