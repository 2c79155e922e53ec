#pragma once

#include <string>
#include <vector>

#include "hodegeo/covariant.hpp"

namespace hodegeo {

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_err = 0.0;
    std::string note;
};

/// Randomized identity suite for one semispray: dual-coefficient consistency,
/// vanishing obstruction tensors, general vs canonical curvature, iterated vs
/// M-based covariant derivatives, residual proportionality, and the W3/W4
/// curvature identities where (n, k) admits them. Deterministic per seed.
std::vector<CheckResult> identity_suite(const Semispray& s, const SampleOptions& opts);

bool all_pass(const std::vector<CheckResult>& results);

/// Deterministic sparse polynomial in the (n, k) jet variables; used to
/// exercise identities on generic inputs.
Expr random_polynomial(int n, int k, int degree, int terms, std::uint64_t seed);

/// Deterministic random polynomial semispray.
Semispray random_semispray(int n, int k, int degree, int terms, std::uint64_t seed);

}  // namespace hodegeo
