#pragma once

#include <vector>

#include "hodegeo/matrix.hpp"
#include "hodegeo/semispray.hpp"

namespace hodegeo {

/// Primal coefficients N_(1)..N_(k) of a nonlinear connection on the order-k
/// jet space. For the canonical connection of a semispray,
///   N_(1) = dG/dy^(k)  and  a N_(a) = S(N_(a-1)) - N_(a-1) N_(1).
struct ConnectionCoeffs {
    int n = 1;
    int k = 1;
    std::vector<ExprMatrix> levels;  // levels[a-1] = N_(a)
    bool canonical = false;

    const ExprMatrix& level(int a) const { return levels[static_cast<std::size_t>(a - 1)]; }
};

/// Dual coefficients M_(1)..M_(k) of the adapted coframe delta y^(a).
struct DualCoeffs {
    int n = 1;
    int k = 1;
    std::vector<ExprMatrix> levels;  // levels[a-1] = M_(a)

    const ExprMatrix& level(int a) const { return levels[static_cast<std::size_t>(a - 1)]; }
};

/// Obstruction tensors I_(2)..I_(k); identically zero exactly when the
/// connection satisfies the canonical recursion.
struct ITensors {
    int n = 1;
    int k = 1;
    std::vector<ExprMatrix> levels;  // levels[a-2] = I_(a); empty for k = 1

    const ExprMatrix& level(int a) const { return levels[static_cast<std::size_t>(a - 2)]; }
};

ConnectionCoeffs canonical_connection(const Semispray& s);

/// Connection with user-supplied coefficient matrices (not assumed canonical).
ConnectionCoeffs make_connection(int n, int k, std::vector<ExprMatrix> levels);

/// M from N through the coframe recursion
///   M_(1) = N_(1),  M_(a) = N_(a) + sum_{b=1}^{a-1} N_(a-b) M_(b).
DualCoeffs dual_from_primal(const ConnectionCoeffs& nc);

/// Canonical dual coefficients straight from the semispray:
///   M_(1) = dG/dy^(k),  a M_(a) = S(M_(a-1)) + M_(1) M_(a-1).
DualCoeffs dual_recursive(const Semispray& s);

/// Adapted-frame derivative delta f / delta y^(level)j; level 0 is delta/delta x^j.
/// j is 1-based.
Expr adapted_derivative(const Expr& f, int level, int j, const ConnectionCoeffs& nc);

ITensors i_tensors(const Semispray& s, const ConnectionCoeffs& nc);

}  // namespace hodegeo
