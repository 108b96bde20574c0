#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qreg/dataset.hpp"

namespace qreg {

// The twelve regression complexity measures. Correlation measures live in
// [0, 1]; residual- and distance-based measures are >= 0; t2 = n / d.
struct ComplexityProfile {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    double t2 = 0.0;

    static const std::array<const char*, 12>& feature_names();
    double value(int index) const; // by feature_names() position
};

// Spearman rank correlation with fractional (tie-averaged) ranks; throws
// UndefinedCorrelationError on constant input.
double spearman_rho(std::span<const double> a, std::span<const double> b);

// Fractional ranks, 1-based, ties averaged.
std::vector<double> fractional_ranks(std::span<const double> v);

struct LinearModel {
    double intercept = 0.0;
    std::vector<double> coef;

    double predict(std::span<const double> x) const;
};

// Least squares with intercept; rank-deficient designs get the minimum-norm
// solution (eigen pseudo-inverse of the normal equations).
LinearModel ols_fit(const Matrix& X, std::span<const double> y);

// Prim's algorithm on Euclidean distances; n-1 edges as (low, high) index
// pairs in insertion order, distance ties broken toward the lower index.
std::vector<std::pair<int, int>> minimum_spanning_tree(const Matrix& X);

// All twelve measures over the scaled dataset (X in [-pi, pi], y in [-1, 1]).
// The seed fixes the interpolation coefficients used by l3 and s4.
ComplexityProfile compute_profile(const RegressionDataset& data, std::uint64_t seed);

} // namespace qreg
