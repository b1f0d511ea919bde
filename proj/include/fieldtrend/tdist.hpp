#pragma once

namespace fieldtrend {

// Regularized incomplete beta I_x(a, b). y must equal 1 - x; passing it
// separately keeps precision when x is close to 1.
double incomplete_beta(double a, double b, double x, double y);

// Student's t distribution with df degrees of freedom.
double t_cdf(double t, double df);

// Inverse CDF. Throws InvalidProbability / InvalidDf on bad arguments and
// NonConvergence if |cdf(result) - p| cannot be brought below 1e-10.
double t_quantile(double p, int df);

}  // namespace fieldtrend
