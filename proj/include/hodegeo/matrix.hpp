#pragma once

#include <vector>

#include "hodegeo/expr.hpp"
#include "hodegeo/semispray.hpp"

namespace hodegeo {

/// Dense matrix of expressions, row-major, 0-based accessors.
struct ExprMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Expr> data;

    ExprMatrix() = default;
    ExprMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

    static ExprMatrix identity(int m) {
        ExprMatrix out(m, m);
        for (int i = 0; i < m; ++i) out.at(i, i) = Expr::one();
        return out;
    }

    Expr& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    const Expr& at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

ExprMatrix mat_mul(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix mat_add(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix mat_sub(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix mat_scale(const ExprMatrix& a, const Rational& c);
/// Entrywise application of the semispray derivation S.
ExprMatrix mat_apply(const Semispray& s, const ExprMatrix& a);
ExprMatrix mat_simplify(const ExprMatrix& a);
bool mat_is_zero(const ExprMatrix& a);

/// Largest relative mismatch of entries under randomized sampling.
SampleReport mat_equal_randomized(const ExprMatrix& a, const ExprMatrix& b, int n, int k,
                                  const SampleOptions& opts = {});

}  // namespace hodegeo
