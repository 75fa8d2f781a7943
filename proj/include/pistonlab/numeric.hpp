#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "pistonlab/errors.hpp"

namespace pistonlab {

/// Neumaier variant of Kahan summation. Accumulates long mode sums without
/// the O(n·eps) drift of naive addition.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Bisect f on [lo, hi]; f(lo) and f(hi) must have opposite (nonzero) signs.
/// Converges to |hi - lo| <= max(abs_tol, a few ulp of the iterate).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double abs_tol, int max_iter = 200);

/// One weighted linear least-squares problem: minimize || W (A x - y) ||_2.
/// Columns are equilibrated to unit norm internally; `condition` is the ratio
/// of the largest to smallest |R_ii| of the equilibrated QR factor.
struct LeastSquaresResult {
    std::vector<double> coefficients;
    double condition = 0.0;
    double max_weighted_residual = 0.0;    // max_i w_i |(A x - y)_i|
};

LeastSquaresResult solve_weighted_least_squares(const std::vector<std::vector<double>>& columns,
                                                const std::vector<double>& rhs,
                                                const std::vector<double>& weights);

/// Closed forms of M_k = \int_Omega^infty w^k e^{-w t} dw for k = 0..4,
/// used by the certified truncation-tail bounds.
struct ExpMoments {
    double m[5];
};
ExpMoments exp_moments(double omega, double t);

} // namespace pistonlab
