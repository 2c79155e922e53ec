#pragma once

#include "hodegeo/numeric.hpp"

namespace hodegeo {

/// Semi-Riemannian metric with entries over the base coordinates only;
/// the inverse is computed symbolically by adjugate over determinant.
/// Dimension is capped at 4 to keep the symbolic inverse tractable.
struct Metric {
    int n = 1;
    ExprMatrix g;
    ExprMatrix g_inv;
    Expr det;
};

Metric make_metric(ExprMatrix g);

struct Christoffel {
    int n = 1;
    std::vector<Expr> data;  // gamma^i_{jk}, symmetric in (j,k)

    const Expr& at(int i, int j, int k) const {
        return data[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    Expr& at(int i, int j, int k) { return data[(static_cast<std::size_t>(i) * n + j) * n + k]; }
};

struct RiemannTensor {
    int n = 1;
    std::vector<Expr> data;  // R^i_{jkl}, antisymmetric in (k,l)

    const Expr& at(int i, int j, int k, int l) const {
        return data[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
    Expr& at(int i, int j, int k, int l) {
        return data[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
};

/// Levi-Civita symbols gamma^i_{jk} = (1/2) g^{il} (dg_{lj}/dx^k + dg_{lk}/dx^j - dg_{jk}/dx^l).
Christoffel christoffel(const Metric& g);

struct Prolongation {
    VectorComponents z2;  // covariant acceleration z^(2)i = y^(2)i + (1/2) gamma y^(1) y^(1)
    Expr lagrangian;      // L2 = (1/2) g_ij z^(2)i z^(2)j
};

Prolongation prolong_lagrangian(const Metric& g);

/// Geodesic spray of the metric: order 1, G^i = (1/2) gamma^i_{jl} y^(1)j y^(1)l.
Semispray metric_spray(const Metric& g);

/// Euler-Lagrange semispray of L2: order 3 with
/// G^i = (1/6) g^{il} (dL2/dx^l - d_T(dL2/dy^(1)l) + (1/2) d_T^2(dL2/dy^(2)l)).
Semispray el_semispray3(const Metric& g);

/// Curvature tensor of the metric, with the index convention fixed so that the
/// geodesic spray's Jacobi endomorphism satisfies R^i_j = R^i_{kjl} y^k y^l.
RiemannTensor riemann_tensor(const Metric& g);

/// Contraction R^i_j = R^i_{kjl} y^(1)k y^(1)l as expressions.
ExprMatrix riemann_contracted(const Metric& g);

/// Per-sample max |nabla^3 y^(1)i + R^i_j nabla y^(1)j| along a trajectory of
/// the order-3 Euler-Lagrange semispray.
std::vector<double> biharmonic_residual(const Metric& g, const Trajectory& traj);

/// Order-3 initial jet of the metric geodesic through (x0, v0):
/// y^(1) = v0, y^(2) = -(1/2) gamma(v0, v0), y^(3) consistent with the flow.
JetPoint metric_geodesic_jet3(const Metric& g, const std::vector<double>& x0,
                              const std::vector<double>& v0);

}  // namespace hodegeo
