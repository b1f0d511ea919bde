#include "fieldtrend/tdist.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fieldtrend/error.hpp"

namespace fieldtrend {

namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorKind::NonConvergence, "incomplete beta continued fraction did not converge");
}

double t_pdf(double t, double df) {
  const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                          0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(t * t / df));
}

}  // namespace

double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

double t_cdf(double t, double df) {
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double t2 = t * t;
  const double x = df / (df + t2);
  const double y = t2 / (df + t2);
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x, y);
  return t > 0 ? 1.0 - tail : tail;
}

double t_quantile(double p, int df) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidProbability, "t_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  if (df < 1) throw Error(ErrorKind::InvalidDf, "t_quantile: df must be >= 1, got " + std::to_string(df));
  if (p == 0.5) return 0.0;
  // Antisymmetry: solve in the upper half and flip.
  if (p < 0.5) return -t_quantile(1.0 - p, df);

  constexpr double kTol = 1e-10;
  const double nu = df;

  // Bracket [lo, hi] with cdf(lo) < p <= cdf(hi).
  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, nu) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Error(ErrorKind::NonConvergence, "t_quantile: bracket overflow");
  }

  // Newton steps, falling back to bisection whenever a step leaves the bracket.
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    const double f = t_cdf(t, nu) - p;
    if (std::fabs(f) < 0.01 * kTol) return t;
    if (f < 0) lo = t; else hi = t;
    const double step = f / t_pdf(t, nu);
    double next = t - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t || hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
      if (std::fabs(t_cdf(next, nu) - p) < kTol) return next;
      break;
    }
    t = next;
  }
  if (std::fabs(t_cdf(t, nu) - p) < kTol) return t;
  throw Error(ErrorKind::NonConvergence, "t_quantile did not converge for p=" + std::to_string(p) +
                                             ", df=" + std::to_string(df));
}

}  // namespace fieldtrend
