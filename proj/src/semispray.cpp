#include "hodegeo/semispray.hpp"

#include <algorithm>

namespace hodegeo {

namespace {

void validate_expr(const Expr& e, int n, int k, const std::vector<std::string>& params,
                   const std::string& what) {
    for (const VarId& v : variables_of(e)) {
        if (v.index < 1 || v.index > n)
            throw ModelError(what + " references variable index " + std::to_string(v.index) +
                             " outside 1.." + std::to_string(n));
        if (v.level > k)
            throw ModelError(what + " references jet level " + std::to_string(v.level) +
                             " above order " + std::to_string(k));
    }
    for (const std::string& p : parameters_of(e)) {
        if (std::find(params.begin(), params.end(), p) == params.end())
            throw ModelError(what + " references undeclared parameter '" + p + "'");
    }
}

}  // namespace

Semispray make_semispray(int n, int k, std::vector<Expr> coeffs,
                         std::vector<std::string> params) {
    if (n < 1) throw ModelError("dimension must be >= 1");
    if (k < 1) throw ModelError("order must be >= 1");
    if (static_cast<int>(coeffs.size()) != n)
        throw ModelError("expected " + std::to_string(n) + " semispray coefficients, got " +
                         std::to_string(coeffs.size()));
    Semispray s;
    s.n = n;
    s.k = k;
    s.params = std::move(params);
    s.coeffs.reserve(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        validate_expr(coeffs[i], n, k, s.params, "G^" + std::to_string(i + 1));
        s.coeffs.push_back(simplify(coeffs[i]));
    }
    return s;
}

Expr Semispray::apply(const Expr& f) const {
    std::vector<Expr> terms;
    for (int i = 1; i <= n; ++i) {
        Expr fx = differentiate(f, base_var(i));
        if (!fx.is_zero()) terms.push_back(Expr::variable(jet_var(1, i)) * fx);
    }
    for (int a = 1; a <= k - 1; ++a) {
        for (int i = 1; i <= n; ++i) {
            Expr fy = differentiate(f, jet_var(a, i));
            if (!fy.is_zero())
                terms.push_back(Expr::integer(a + 1) * Expr::variable(jet_var(a + 1, i)) * fy);
        }
    }
    for (int i = 1; i <= n; ++i) {
        Expr fy = differentiate(f, jet_var(k, i));
        if (!fy.is_zero())
            terms.push_back(Expr::integer(-(k + 1)) * coeffs[static_cast<std::size_t>(i - 1)] * fy);
    }
    return simplify(Expr::sum(std::move(terms)));
}

Expr Semispray::apply_power(const Expr& f, int m) const {
    if (m < 0) throw Error("apply_power requires m >= 0");
    Expr acc = simplify(f);
    for (int i = 0; i < m; ++i) acc = apply(acc);
    return acc;
}

Expr tulczyjew(const Expr& f, int n, int k) {
    std::vector<Expr> terms;
    for (int i = 1; i <= n; ++i) {
        Expr fx = differentiate(f, base_var(i));
        if (!fx.is_zero()) terms.push_back(Expr::variable(jet_var(1, i)) * fx);
    }
    for (int a = 1; a <= k - 1; ++a) {
        for (int i = 1; i <= n; ++i) {
            Expr fy = differentiate(f, jet_var(a, i));
            if (!fy.is_zero())
                terms.push_back(Expr::integer(a + 1) * Expr::variable(jet_var(a + 1, i)) * fy);
        }
    }
    return simplify(Expr::sum(std::move(terms)));
}

GeodesicSystem geodesic_system(const Semispray& s) {
    GeodesicSystem g;
    g.n = s.n;
    g.k = s.k;
    g.coeffs = s.coeffs;
    return g;
}

void GeodesicSystem::rhs(const JetPoint& p, std::vector<double>& out) const {
    out.resize(state_size());
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i) out[pos++] = p.y[0][static_cast<std::size_t>(i)];
    for (int a = 1; a <= k - 1; ++a)
        for (int i = 0; i < n; ++i)
            out[pos++] = (a + 1) * p.y[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i)
        out[pos++] = -(k + 1) * evaluate(coeffs[static_cast<std::size_t>(i)], p);
}

JetPoint state_to_point(int n, int k, const std::vector<double>& state,
                        const std::map<std::string, double>& params) {
    if (state.size() != static_cast<std::size_t>(n) * (k + 1))
        throw ShapeError("state vector has wrong length");
    JetPoint p = JetPoint::make(n, k);
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i) p.x[static_cast<std::size_t>(i)] = state[pos++];
    for (int a = 0; a < k; ++a)
        for (int i = 0; i < n; ++i)
            p.y[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = state[pos++];
    p.params = params;
    return p;
}

std::vector<double> point_to_state(const JetPoint& p) {
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(p.n) * (p.k + 1));
    for (int i = 0; i < p.n; ++i) s.push_back(p.x[static_cast<std::size_t>(i)]);
    for (int a = 0; a < p.k; ++a)
        for (int i = 0; i < p.n; ++i)
            s.push_back(p.y[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]);
    return s;
}

}  // namespace hodegeo
