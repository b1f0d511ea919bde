#pragma once

// Reference computations used only by tests. Each one takes a different
// route from the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix c(a.size(), std::vector<double>(b.front().size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b.front().size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.front().size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.front().size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Gauss-Jordan inversion with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

struct OlsResult {
  double b0, b1;
  std::vector<double> residuals;
  Matrix hc0;  // 2x2 sandwich covariance
};

// b = (X'X)^-1 X'y and V = (X'X)^-1 X' diag(e^2) X (X'X)^-1 by explicit matrices.
inline OlsResult matrix_ols(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  Matrix x(n, std::vector<double>(2));
  Matrix yy(n, std::vector<double>(1));
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = {1.0, t[i]};
    yy[i][0] = y[i];
  }
  const Matrix xt = transpose(x);
  const Matrix bread = invert(multiply(xt, x));
  const Matrix b = multiply(bread, multiply(xt, yy));
  OlsResult r{b[0][0], b[1][0], {}, {}};
  Matrix omega(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - r.b0 - r.b1 * t[i];
    r.residuals.push_back(e);
    omega[i][i] = e * e;
  }
  r.hc0 = multiply(multiply(bread, multiply(multiply(xt, omega), x)), bread);
  return r;
}

inline double t_pdf(double t, double df) {
  return std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * std::numbers::pi) -
                  (df + 1) / 2 * std::log(1 + t * t / df));
}

// CDF by composite Simpson integration of the density from 0 to t.
inline double t_cdf_quadrature(double t, double df, int intervals = 20000) {
  const double h = t / intervals;
  double s = t_pdf(0, df) + t_pdf(t, df);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * t_pdf(i * h, df);
  return 0.5 + s * h / 3.0;
}

// Quantile by bisection on the quadrature CDF (p > 0.5).
inline double t_quantile_quadrature(double p, double df) {
  double lo = 0.0, hi = 1.0;
  while (t_cdf_quadrature(hi, df) < p) hi *= 2;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_cdf_quadrature(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Insertion sort: deliberately not std::sort.
inline std::vector<std::string> insertion_sorted(std::vector<std::string> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j] < v[j - 1]; --j) std::swap(v[j], v[j - 1]);
  return v;
}

// Minimal well-formedness check: balanced tags, quoted attributes, escaped text.
inline bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      if (s[i] == '&') {
        const auto semi = s.find(';', i);
        if (semi == std::string::npos || semi - i > 6) return false;
      }
      ++i;
      continue;
    }
    const auto close = s.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?") || tag.starts_with("!")) continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2) return false;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else if (tag.ends_with("/")) {
      continue;
    } else {
      stack.push_back(tag.substr(0, tag.find(' ')));
    }
  }
  return stack.empty();
}

inline std::size_t count_occurrences(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace oracle
