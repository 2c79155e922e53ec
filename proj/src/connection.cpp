#include "hodegeo/connection.hpp"

namespace hodegeo {

ExprMatrix mat_mul(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.cols != b.rows) throw ShapeError("matrix product shape mismatch");
    ExprMatrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < b.cols; ++j) {
            std::vector<Expr> terms;
            terms.reserve(static_cast<std::size_t>(a.cols));
            for (int s = 0; s < a.cols; ++s) terms.push_back(a.at(i, s) * b.at(s, j));
            out.at(i, j) = simplify(Expr::sum(std::move(terms)));
        }
    }
    return out;
}

ExprMatrix mat_add(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("matrix sum shape mismatch");
    ExprMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = simplify(a.data[i] + b.data[i]);
    return out;
}

ExprMatrix mat_sub(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("matrix difference shape mismatch");
    ExprMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = simplify(a.data[i] - b.data[i]);
    return out;
}

ExprMatrix mat_scale(const ExprMatrix& a, const Rational& c) {
    ExprMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = simplify(Expr::number(c) * a.data[i]);
    return out;
}

ExprMatrix mat_apply(const Semispray& s, const ExprMatrix& a) {
    ExprMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = s.apply(a.data[i]);
    return out;
}

ExprMatrix mat_simplify(const ExprMatrix& a) {
    ExprMatrix out(a.rows, a.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = simplify(a.data[i]);
    return out;
}

bool mat_is_zero(const ExprMatrix& a) {
    for (const Expr& e : a.data)
        if (!simplify(e).is_zero()) return false;
    return true;
}

SampleReport mat_equal_randomized(const ExprMatrix& a, const ExprMatrix& b, int n, int k,
                                  const SampleOptions& opts) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("matrix comparison shape mismatch");
    SampleReport rep;
    SampleOptions o = opts;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        o.seed = opts.seed + i;
        SampleReport r = equal_randomized(a.data[i], b.data[i], n, k, o);
        rep.equal = rep.equal && r.equal;
        rep.max_err = std::max(rep.max_err, r.max_err);
        rep.samples += r.samples;
    }
    return rep;
}

ConnectionCoeffs make_connection(int n, int k, std::vector<ExprMatrix> levels) {
    if (static_cast<int>(levels.size()) != k)
        throw ShapeError("expected " + std::to_string(k) + " coefficient matrices");
    for (const ExprMatrix& m : levels)
        if (m.rows != n || m.cols != n) throw ShapeError("connection matrix must be n x n");
    ConnectionCoeffs nc;
    nc.n = n;
    nc.k = k;
    nc.levels.reserve(levels.size());
    for (ExprMatrix& m : levels) nc.levels.push_back(mat_simplify(m));
    nc.canonical = false;
    return nc;
}

ConnectionCoeffs canonical_connection(const Semispray& s) {
    ConnectionCoeffs nc;
    nc.n = s.n;
    nc.k = s.k;
    nc.canonical = true;

    ExprMatrix n1(s.n, s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            n1.at(i, j) = differentiate(s.coeffs[static_cast<std::size_t>(i)], jet_var(s.k, j + 1));
    nc.levels.push_back(n1);

    for (int a = 2; a <= s.k; ++a) {
        const ExprMatrix& prev = nc.levels.back();
        ExprMatrix next = mat_scale(mat_sub(mat_apply(s, prev), mat_mul(prev, n1)),
                                    Rational(1, a));
        nc.levels.push_back(std::move(next));
    }
    return nc;
}

DualCoeffs dual_from_primal(const ConnectionCoeffs& nc) {
    DualCoeffs dc;
    dc.n = nc.n;
    dc.k = nc.k;
    dc.levels.push_back(nc.level(1));
    for (int a = 2; a <= nc.k; ++a) {
        ExprMatrix m = nc.level(a);
        for (int b = 1; b <= a - 1; ++b)
            m = mat_add(m, mat_mul(nc.level(a - b), dc.level(b)));
        dc.levels.push_back(std::move(m));
    }
    return dc;
}

DualCoeffs dual_recursive(const Semispray& s) {
    DualCoeffs dc;
    dc.n = s.n;
    dc.k = s.k;
    ExprMatrix m1(s.n, s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            m1.at(i, j) = differentiate(s.coeffs[static_cast<std::size_t>(i)], jet_var(s.k, j + 1));
    dc.levels.push_back(m1);
    for (int a = 2; a <= s.k; ++a) {
        const ExprMatrix& prev = dc.levels.back();
        ExprMatrix next = mat_scale(mat_add(mat_apply(s, prev), mat_mul(m1, prev)),
                                    Rational(1, a));
        dc.levels.push_back(std::move(next));
    }
    return dc;
}

Expr adapted_derivative(const Expr& f, int level, int j, const ConnectionCoeffs& nc) {
    if (level < 0 || level > nc.k) throw ShapeError("adapted derivative level out of range 0..k");
    if (j < 1 || j > nc.n) throw ShapeError("adapted derivative index out of range");
    VarId v = level == 0 ? base_var(j) : jet_var(level, j);
    std::vector<Expr> terms;
    terms.push_back(differentiate(f, v));
    for (int b = 1; b <= nc.k - level; ++b) {
        for (int l = 1; l <= nc.n; ++l) {
            Expr fy = differentiate(f, jet_var(level + b, l));
            if (fy.is_zero()) continue;
            terms.push_back(Expr::negate(nc.level(b).at(l - 1, j - 1) * fy));
        }
    }
    return simplify(Expr::sum(std::move(terms)));
}

ITensors i_tensors(const Semispray& s, const ConnectionCoeffs& nc) {
    if (nc.n != s.n || nc.k != s.k) throw ShapeError("connection does not match semispray");
    ITensors it;
    it.n = s.n;
    it.k = s.k;
    if (s.k < 2) return it;
    const ExprMatrix& n1 = nc.level(1);
    // I_(2) = 2 N_(2) - S(N_(1)) + N_(1) N_(1)
    it.levels.push_back(mat_add(mat_sub(mat_scale(nc.level(2), Rational(2)), mat_apply(s, n1)),
                                mat_mul(n1, n1)));
    for (int a = 3; a <= s.k; ++a) {
        ExprMatrix m = mat_sub(mat_scale(nc.level(a), Rational(a)), mat_apply(s, nc.level(a - 1)));
        m = mat_add(m, mat_mul(nc.level(a - 1), n1));
        for (int b = 2; b <= a - 1; ++b) m = mat_add(m, mat_mul(nc.level(a - b), it.level(b)));
        it.levels.push_back(std::move(m));
    }
    return it;
}

}  // namespace hodegeo
