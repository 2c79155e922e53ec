#pragma once

#include <vector>

#include "hodegeo/connection.hpp"

namespace hodegeo {

/// Components R_(0)..R_(k-1) of the Jacobi endomorphism, reported over the
/// adapted coframe; they drive the Jacobi equation
///   (1/k!) nabla^{k+1} xi + sum_a (1/a!) R_(a) nabla^a xi = 0.
struct CurvatureComponents {
    int n = 1;
    int k = 1;
    std::vector<ExprMatrix> levels;  // levels[a] = R_(a), a = 0..k-1

    const ExprMatrix& level(int a) const { return levels[static_cast<std::size_t>(a)]; }
};

/// Curvature for an arbitrary connection:
///   R_(a) = (k+1) dG/dy^(a)| - a N_(k+1-a) - S(N_(k-a)) + N_(k-a) N_(1)
///           + sum_{b=2}^{k-a} N_(k+1-a-b) I_(b),
/// with the adapted-frame derivative dG/dy^(a)| and the obstruction tensors I.
CurvatureComponents curvature_general(const Semispray& s, const ConnectionCoeffs& nc);

/// Curvature for the canonical connection:
///   R_(a) = (k+1) (dG/dy^(a)| - N_(k+1-a)),  a = 1..k-1,
///   R_(0) = (k+1) dG/dx| - S(N_(k)) + N_(k) N_(1).
CurvatureComponents curvature_canonical(const Semispray& s);

}  // namespace hodegeo
