#include "hodegeo/riemann.hpp"

namespace hodegeo {

namespace {

// Determinant by cofactor expansion; n <= 4 keeps this small.
Expr det_expr(const ExprMatrix& m) {
    int n = m.rows;
    if (n == 1) return m.at(0, 0);
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j) {
        ExprMatrix minor(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Expr term = m.at(0, j) * det_expr(minor);
        terms.push_back(j % 2 == 0 ? term : Expr::negate(term));
    }
    return simplify(Expr::sum(std::move(terms)));
}

ExprMatrix adjugate(const ExprMatrix& m) {
    int n = m.rows;
    ExprMatrix out(n, n);
    if (n == 1) {
        out.at(0, 0) = Expr::one();
        return out;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ExprMatrix minor(n - 1, n - 1);
            int rr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int cc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc++) = m.at(r, c);
                }
                ++rr;
            }
            Expr cof = det_expr(minor);
            if ((i + j) % 2 == 1) cof = simplify(Expr::negate(cof));
            out.at(j, i) = cof;  // transpose of the cofactor matrix
        }
    }
    return out;
}

}  // namespace

Metric make_metric(ExprMatrix g) {
    if (g.rows != g.cols) throw ModelError("metric must be square");
    if (g.rows < 1 || g.rows > 4) throw ModelError("metric dimension must be within 1..4");
    Metric m;
    m.n = g.rows;
    m.g = mat_simplify(g);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            if (m.g.at(i, j) != m.g.at(j, i)) throw ModelError("metric must be symmetric");
            if (max_var_level(m.g.at(i, j)) > 0)
                throw ModelError("metric entries must depend on base coordinates only");
        }
    m.det = det_expr(m.g);
    SampleReport nz = equal_randomized(m.det, Expr::zero(), m.n, 1, {});
    if (nz.equal) throw ModelError("metric determinant vanishes identically");
    ExprMatrix adj = adjugate(m.g);
    Expr inv_det = Expr::power(m.det, Rational(-1));
    m.g_inv = ExprMatrix(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) m.g_inv.at(i, j) = simplify(adj.at(i, j) * inv_det);
    return m;
}

Christoffel christoffel(const Metric& g) {
    Christoffel ch;
    ch.n = g.n;
    ch.data.assign(static_cast<std::size_t>(g.n) * g.n * g.n, Expr::zero());
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            for (int k = j; k < g.n; ++k) {
                std::vector<Expr> terms;
                for (int l = 0; l < g.n; ++l) {
                    Expr inner = differentiate(g.g.at(l, j), base_var(k + 1)) +
                                 differentiate(g.g.at(l, k), base_var(j + 1)) -
                                 differentiate(g.g.at(j, k), base_var(l + 1));
                    terms.push_back(g.g_inv.at(i, l) * inner);
                }
                Expr val = simplify(Expr::rational(1, 2) * Expr::sum(std::move(terms)));
                ch.at(i, j, k) = val;
                ch.at(i, k, j) = val;
            }
        }
    }
    return ch;
}

Prolongation prolong_lagrangian(const Metric& g) {
    Christoffel ch = christoffel(g);
    Prolongation pr;
    pr.z2.resize(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        std::vector<Expr> terms;
        terms.push_back(Expr::variable(jet_var(2, i + 1)));
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                terms.push_back(Expr::rational(1, 2) * ch.at(i, j, k) *
                                Expr::variable(jet_var(1, j + 1)) *
                                Expr::variable(jet_var(1, k + 1)));
        pr.z2[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }
    std::vector<Expr> lterms;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            lterms.push_back(Expr::rational(1, 2) * g.g.at(i, j) *
                             pr.z2[static_cast<std::size_t>(i)] * pr.z2[static_cast<std::size_t>(j)]);
    pr.lagrangian = simplify(Expr::sum(std::move(lterms)));
    return pr;
}

Semispray metric_spray(const Metric& g) {
    Christoffel ch = christoffel(g);
    std::vector<Expr> coeffs(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        std::vector<Expr> terms;
        for (int j = 0; j < g.n; ++j)
            for (int l = 0; l < g.n; ++l)
                terms.push_back(Expr::rational(1, 2) * ch.at(i, j, l) *
                                Expr::variable(jet_var(1, j + 1)) *
                                Expr::variable(jet_var(1, l + 1)));
        coeffs[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }
    return make_semispray(g.n, 1, std::move(coeffs));
}

Semispray el_semispray3(const Metric& g) {
    Prolongation pr = prolong_lagrangian(g);
    const Expr& l2 = pr.lagrangian;
    std::vector<Expr> el(static_cast<std::size_t>(g.n));
    for (int l = 0; l < g.n; ++l) {
        Expr dx = differentiate(l2, base_var(l + 1));
        Expr dy1 = differentiate(l2, jet_var(1, l + 1));
        Expr dy2 = differentiate(l2, jet_var(2, l + 1));
        Expr dt1 = tulczyjew(dy1, g.n, 3);
        Expr dt2 = tulczyjew(tulczyjew(dy2, g.n, 3), g.n, 3);
        el[static_cast<std::size_t>(l)] = simplify(dx - dt1 + Expr::rational(1, 2) * dt2);
    }
    std::vector<Expr> coeffs(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        std::vector<Expr> terms;
        for (int l = 0; l < g.n; ++l)
            terms.push_back(g.g_inv.at(i, l) * el[static_cast<std::size_t>(l)]);
        coeffs[static_cast<std::size_t>(i)] =
            simplify(Expr::rational(1, 6) * Expr::sum(std::move(terms)));
    }
    return make_semispray(g.n, 3, std::move(coeffs));
}

RiemannTensor riemann_tensor(const Metric& g) {
    Christoffel ch = christoffel(g);
    RiemannTensor rt;
    rt.n = g.n;
    rt.data.assign(static_cast<std::size_t>(g.n) * g.n * g.n * g.n, Expr::zero());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                for (int l = 0; l < g.n; ++l) {
                    std::vector<Expr> terms;
                    terms.push_back(differentiate(ch.at(i, j, l), base_var(k + 1)));
                    terms.push_back(Expr::negate(differentiate(ch.at(i, j, k), base_var(l + 1))));
                    for (int s = 0; s < g.n; ++s) {
                        terms.push_back(ch.at(i, k, s) * ch.at(s, j, l));
                        terms.push_back(Expr::negate(ch.at(i, l, s) * ch.at(s, j, k)));
                    }
                    rt.at(i, j, k, l) = simplify(Expr::sum(std::move(terms)));
                }
    return rt;
}

ExprMatrix riemann_contracted(const Metric& g) {
    RiemannTensor rt = riemann_tensor(g);
    ExprMatrix out(g.n, g.n);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            std::vector<Expr> terms;
            for (int k = 0; k < g.n; ++k)
                for (int l = 0; l < g.n; ++l)
                    terms.push_back(rt.at(i, k, j, l) * Expr::variable(jet_var(1, k + 1)) *
                                    Expr::variable(jet_var(1, l + 1)));
            out.at(i, j) = simplify(Expr::sum(std::move(terms)));
        }
    return out;
}

std::vector<double> biharmonic_residual(const Metric& g, const Trajectory& traj) {
    if (traj.n != g.n || traj.k != 3)
        throw ShapeError("expected an order-3 trajectory in the metric's dimension");
    Semispray s3 = el_semispray3(g);
    ConnectionCoeffs nc = canonical_connection(s3);
    ExprMatrix rij = riemann_contracted(g);

    VectorComponents y1(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) y1[static_cast<std::size_t>(i)] = Expr::variable(jet_var(1, i + 1));
    VectorComponents ny = nabla_vector(s3, nc, y1);
    VectorComponents n3y = nabla_power(s3, nc, y1, 3);

    VectorComponents residual(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        std::vector<Expr> terms;
        terms.push_back(n3y[static_cast<std::size_t>(i)]);
        for (int j = 0; j < g.n; ++j)
            terms.push_back(rij.at(i, j) * ny[static_cast<std::size_t>(j)]);
        residual[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }

    std::vector<double> out;
    out.reserve(traj.times.size());
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        JetPoint p = traj.point_at(m);
        double worst = 0.0;
        for (const Expr& e : residual) worst = std::max(worst, std::abs(evaluate(e, p)));
        out.push_back(worst);
    }
    return out;
}

JetPoint metric_geodesic_jet3(const Metric& g, const std::vector<double>& x0,
                              const std::vector<double>& v0) {
    if (static_cast<int>(x0.size()) != g.n || static_cast<int>(v0.size()) != g.n)
        throw ShapeError("initial position/velocity must have length n");
    // Acceleration of the metric geodesic: A^i(x, y^(1)) = -gamma^i_{jk} y^(1)j y^(1)k = x''.
    Christoffel ch = christoffel(g);
    VectorComponents acc(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        std::vector<Expr> terms;
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                terms.push_back(Expr::negate(ch.at(i, j, k) * Expr::variable(jet_var(1, j + 1)) *
                                             Expr::variable(jet_var(1, k + 1))));
        acc[static_cast<std::size_t>(i)] = simplify(Expr::sum(std::move(terms)));
    }
    JetPoint low = JetPoint::make(g.n, 1);
    low.x = x0;
    low.y[0] = v0;

    JetPoint p = JetPoint::make(g.n, 3);
    p.x = x0;
    p.y[0] = v0;
    for (int i = 0; i < g.n; ++i)
        p.y[1][static_cast<std::size_t>(i)] = evaluate(acc[static_cast<std::size_t>(i)], low) / 2.0;
    // x''' = dA/dx^s x'^s + dA/dy^(1)s A^s.
    for (int i = 0; i < g.n; ++i) {
        double third = 0.0;
        for (int ss = 0; ss < g.n; ++ss) {
            third += evaluate(differentiate(acc[static_cast<std::size_t>(i)], base_var(ss + 1)), low) *
                     v0[static_cast<std::size_t>(ss)];
            third += evaluate(differentiate(acc[static_cast<std::size_t>(i)], jet_var(1, ss + 1)), low) *
                     evaluate(acc[static_cast<std::size_t>(ss)], low);
        }
        p.y[2][static_cast<std::size_t>(i)] = third / 6.0;
    }
    return p;
}

}  // namespace hodegeo
