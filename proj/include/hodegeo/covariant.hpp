#pragma once

#include <vector>

#include "hodegeo/curvature.hpp"

namespace hodegeo {

/// Components of a vector field on the base manifold; entries may depend on
/// any jet variables unless an operation says otherwise.
using VectorComponents = std::vector<Expr>;
using OneForm = std::vector<Expr>;
using Tensor11 = ExprMatrix;

/// Newtonoid prolongation of base components: level-a components are
/// (1/a!) S^a of the base components.
struct NewtonoidField {
    VectorComponents base;
    std::vector<VectorComponents> jets;  // jets[a-1] = (1/a!) S^a(X), a = 1..k
};

/// Dynamical covariant derivative on vector components:
/// nabla X^i = S(X^i) + N_(1)^i_j X^j.
VectorComponents nabla_vector(const Semispray& s, const ConnectionCoeffs& nc,
                              const VectorComponents& x);
/// (nabla w)_j = S(w_j) - w_i N_(1)^i_j.
OneForm nabla_oneform(const Semispray& s, const ConnectionCoeffs& nc, const OneForm& w);
/// (nabla A)^i_j = S(A^i_j) + N_(1)^i_l A^l_j - A^i_l N_(1)^l_j.
Tensor11 nabla_tensor11(const Semispray& s, const ConnectionCoeffs& nc, const Tensor11& a);

VectorComponents nabla_power(const Semispray& s, const ConnectionCoeffs& nc,
                             const VectorComponents& x, int m);

/// The M-based iterated derivative:
/// nabla^(a) X^i = S^a(X^i) + sum_{b=1}^{a} (a!/(a-b)!) M_(b)^i_j S^{a-b}(X^j).
/// Coincides with nabla^a exactly for the canonical dual coefficients.
VectorComponents nabla_alpha_dual(const Semispray& s, const DualCoeffs& dc,
                                  const VectorComponents& x, int alpha);

NewtonoidField newtonoid_prolongation(const Semispray& s, const VectorComponents& x);

/// Action of the prolonged field as a derivation:
/// Xhat(f) = X^j df/dx^j + sum_a (1/a!) S^a(X^j) df/dy^(a)j.
Expr newtonoid_derivation(const Semispray& s, const VectorComponents& x, const Expr& f);

/// residual^i = S^{k+1}(X^i) + (k+1)! Xhat(G^i); zero iff X generates a
/// dynamical symmetry.
VectorComponents symmetry_residual_raw(const Semispray& s, const VectorComponents& x);

/// residual^i = (1/k!) nabla^{k+1} X^i + sum_a (1/a!) R_(a)^i_j nabla^a X^j,
/// canonical connection throughout. Proportional to the raw residual by 1/k!.
VectorComponents symmetry_residual_covariant(const Semispray& s, const VectorComponents& x);

struct LieSymmetryReport {
    bool is_symmetry = false;
    bool raw_vanishes = false;
    bool covariant_vanishes = false;
    double max_raw = 0.0;        // largest sampled relative residual, raw route
    double max_covariant = 0.0;  // same for the covariant route
};

/// X must depend on base coordinates only.
LieSymmetryReport lie_symmetry_check(const Semispray& s, const VectorComponents& x, int trials,
                                     double tol, std::uint64_t seed = 1);

}  // namespace hodegeo
