#pragma once

#include <cstdint>

namespace reorg {

// Regularized incomplete beta function I_x(a, b).
double reg_inc_beta(double a, double b, double x);

// Inverse of I_x(a, b) in x, solved by bisection to 1e-10.
double beta_quantile(double p, double a, double b);

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

// Exact Clopper-Pearson interval for `hits` successes in `samples` trials at
// confidence `conf` (two-sided), via the Beta-quantile characterization.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t samples, double conf = 0.99);

}  // namespace reorg
