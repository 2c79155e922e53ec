#pragma once

#include <random>
#include <vector>

#include "hodegeo/expr.hpp"

namespace hodegeo::testing {

inline Expr parse1(const std::string& text, int n = 1, int k = 1) {
    return parse_expression(text, n, k);
}

/// Central finite difference in one jet coordinate, the independent oracle for
/// symbolic differentiation.
inline double central_difference(const Expr& e, const VarId& v, JetPoint p, double h = 1e-5) {
    double saved = p.coord(v);
    p.coord(v) = saved + h;
    double hi = evaluate(e, p);
    p.coord(v) = saved - h;
    double lo = evaluate(e, p);
    return (hi - lo) / (2.0 * h);
}

inline JetPoint sample_point(int n, int k, std::uint64_t seed,
                             const std::vector<std::string>& params = {}) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return -2.0 + 4.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    JetPoint p = JetPoint::make(n, k);
    for (auto& v : p.x) v = u();
    for (auto& level : p.y)
        for (auto& v : level) v = u();
    if (k >= 1) {
        while (!p.regular())
            for (auto& v : p.y[0]) v = u();
    }
    for (const auto& name : params) p.params[name] = u();
    return p;
}

}  // namespace hodegeo::testing
