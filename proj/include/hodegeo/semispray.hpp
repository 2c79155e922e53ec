#pragma once

#include <map>
#include <string>
#include <vector>

#include "hodegeo/expr.hpp"

namespace hodegeo {

/// Semispray of order k on an n-dimensional base: the vector field
///   S = y^(1)i d/dx^i + sum_{a=1}^{k-1} (a+1) y^(a+1)i d/dy^(a)i
///       - (k+1) G^i d/dy^(k)i
/// encoding the system of (k+1)-order ODEs
///   (1/(k+1)!) x^(k+1) + G(x, y^(1), ..., y^(k)) = 0.
struct Semispray {
    int n = 1;
    int k = 1;
    std::vector<Expr> coeffs;           // G^i, simplified
    std::vector<std::string> params;    // declared parameter names

    /// S(f), simplified.
    Expr apply(const Expr& f) const;
    /// m-fold application of S with intermediate simplification.
    Expr apply_power(const Expr& f, int m) const;
};

Semispray make_semispray(int n, int k, std::vector<Expr> coeffs,
                         std::vector<std::string> params = {});

/// Tulczyjev operator d_T = y^(1)i d/dx^i + ... + k y^(k)i d/dy^(k-1)i
/// (no d/dy^(k) term). Agrees with any semispray's S on functions that do not
/// depend on the top level y^(k).
Expr tulczyjew(const Expr& f, int n, int k);

/// First-order system equivalent to the flow of S; state is laid out as
/// (x^1..x^n, y^(1)1..y^(1)n, ..., y^(k)1..y^(k)n).
struct GeodesicSystem {
    int n = 1;
    int k = 1;
    std::vector<Expr> coeffs;  // G^i
    std::size_t state_size() const { return static_cast<std::size_t>(n) * (k + 1); }
    void rhs(const JetPoint& p, std::vector<double>& out) const;
};

GeodesicSystem geodesic_system(const Semispray& s);

JetPoint state_to_point(int n, int k, const std::vector<double>& state,
                        const std::map<std::string, double>& params);
std::vector<double> point_to_state(const JetPoint& p);

}  // namespace hodegeo
