#pragma once

#include <iosfwd>
#include <vector>

#include "hodegeo/covariant.hpp"
#include "hodegeo/semispray.hpp"

namespace hodegeo {

/// Fixed-step classical 4th-order Runge-Kutta over [t0, t1].
struct IntegratorConfig {
    double t0 = 0.0;
    double t1 = 1.0;
    double step = 1e-3;
};

/// Numeric jet lift of a geodesic sampled on a uniform grid.
struct Trajectory {
    int n = 0;
    int k = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // jet state per sample
    std::vector<bool> regular;                // slit-bundle flag per sample
    std::map<std::string, double> params;

    JetPoint point_at(std::size_t i) const;
};

/// Variation vector with its covariant derivatives sampled along a trajectory;
/// values[i] holds (xi, nabla xi, ..., nabla^depth xi), each of length n.
struct VariationSeries {
    int n = 0;
    int depth = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> values;
};

Trajectory integrate_semispray_flow(const Semispray& s, const JetPoint& init,
                                    const IntegratorConfig& cfg);

/// Integrates the covariant Jacobi system along the geodesic that `traj`
/// samples, co-integrating base and variation so that connection and
/// curvature coefficients are evaluated at the RK4 stage points.
/// `init` holds (xi, nabla xi, ..., nabla^k xi) at cfg.t0, k+1 rows of n.
VariationSeries integrate_jacobi(const Semispray& s, const Trajectory& traj,
                                 const std::vector<std::vector<double>>& init,
                                 const IntegratorConfig& cfg);

/// Central-difference geodesic-variation oracle: integrates the two perturbed
/// geodesics with initial jets init +- s * direction (level-a entry perturbs
/// y^(a) by s * direction[a]/a!) and returns (V(t,s) - V(t,-s)) / (2s).
/// `direction` holds the ordinary derivatives xi^(a)(t0), a = 0..k.
VariationSeries variation_oracle(const Semispray& s, const JetPoint& init,
                                 const std::vector<std::vector<double>>& direction, double offset,
                                 const IntegratorConfig& cfg);

/// Max over samples and shared components of |a - b|; grids must align.
double series_max_error(const VariationSeries& a, const VariationSeries& b);

/// Conversion between ordinary t-derivatives of a variation vector and its
/// covariant derivatives at a jet point, via the canonical dual coefficients:
/// nabla^a xi = xi^(a) + sum_{b=1}^{a} (a!/(a-b)!) M_(b) xi^(a-b).
std::vector<std::vector<double>> covariant_from_jet(const Semispray& s, const JetPoint& at,
                                                    const std::vector<std::vector<double>>& jets);
std::vector<std::vector<double>> jet_from_covariant(const Semispray& s, const JetPoint& at,
                                                    const std::vector<std::vector<double>>& cov);

void write_csv(std::ostream& os, const Trajectory& traj);
void write_csv(std::ostream& os, const VariationSeries& series);

}  // namespace hodegeo
