#pragma once

#include <string>

#include "hodegeo/covariant.hpp"

namespace hodegeo {

enum class Vanishing { ExactZero, SampledZero, NonZero };

struct InvariantReport {
    std::string which;           // "W3" or "W4"
    Expr direct;                 // the invariant from its defining formula
    Expr curvature_form;         // nabla R_(k-1) - 2 R_(k-2)
    bool identity_verified = false;
    Vanishing verdict = Vanishing::NonZero;
    double sample_max = 0.0;     // largest sampled relative magnitude of `direct`
    std::string notes;
};

/// Wuenschmann invariant of a scalar third-order equation (n = 1, k = 2):
/// W3 = -1/2 S^2(G_y2) - 3 G_y2 S(G_y2) + 3 S(G_y1) - 2 G_y2^3 + 6 G_y1 G_y2 - 6 G_x.
Expr wuenschmann_w3(const Semispray& s);

/// Fels-related invariant of a scalar fourth-order equation (n = 1, k = 3):
/// W4 = -2/3 S^2(G_y3) - 4 G_y3 S(G_y3) + 4 S(G_y2) - 8/3 G_y3^3 + 8 G_y2 G_y3 - 8 G_y1.
Expr fels_w4(const Semispray& s);

/// The same invariants through curvature: nabla R_(k-1) - 2 R_(k-2) with the
/// canonical connection; k must be 2 or 3 and n must be 1.
Expr invariant_via_curvature(const Semispray& s);

/// Necessary-condition report for variationality of a scalar fourth-order
/// equation; the second Fels invariant is not computed.
InvariantReport variationality_report(const Semispray& s, std::uint64_t seed = 1);

InvariantReport invariant_report(const Semispray& s, std::uint64_t seed = 1);

}  // namespace hodegeo
