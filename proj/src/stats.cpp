#include "fieldtrend/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fieldtrend/error.hpp"

namespace fieldtrend {

std::size_t Histogram::total() const noexcept {
  return std::accumulate(bin_counts.begin(), bin_counts.end(), std::size_t{0}) + underflow + overflow;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "summarize: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  SummaryStats s;
  s.n = sorted.size();
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.n);
  const std::size_t mid = s.n / 2;
  s.median = (s.n % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  s.min = sorted.front();
  s.max = sorted.back();
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "quantile: no values");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

TukeyBox tukey_box(std::span<const double> values) {
  if (values.size() < 4) throw Error(ErrorKind::TooFewValues, "tukey_box needs at least 4 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  TukeyBox b;
  b.q1 = quantile_sorted(sorted, 0.25);
  b.median = quantile_sorted(sorted, 0.5);
  b.q3 = quantile_sorted(sorted, 0.75);
  b.iqr = b.q3 - b.q1;
  b.lower_fence = b.q1 - 1.5 * b.iqr;
  b.upper_fence = b.q3 + 1.5 * b.iqr;

  // The quartiles always lie inside the fences, so both adjacent values exist.
  auto first_in = std::lower_bound(sorted.begin(), sorted.end(), b.lower_fence);
  auto last_in = std::upper_bound(sorted.begin(), sorted.end(), b.upper_fence);
  b.lower_adjacent = *first_in;
  b.upper_adjacent = *(last_in - 1);
  b.outliers.assign(sorted.begin(), first_in);
  b.outliers.insert(b.outliers.end(), last_in, sorted.end());
  return b;
}

DiffSeries year_over_year(const FieldSeries& series) {
  if (series.size() < 2) throw Error(ErrorKind::TooFewYears, "field " + series.id() + ": need two years for differences");
  DiffSeries d;
  d.field_id = series.id();
  auto counts = series.counts();
  for (std::size_t k = 1; k < counts.size(); ++k) {
    d.years.push_back(series.first_year() + static_cast<int>(k));
    d.diffs.push_back(counts[k] - counts[k - 1]);
  }
  return d;
}

std::vector<YearStats> per_year_summary(const Corpus& corpus) {
  std::vector<YearStats> out;
  std::vector<double> column(corpus.size());
  for (int y = corpus.first_year(); y <= corpus.last_year(); ++y) {
    for (std::size_t f = 0; f < corpus.size(); ++f) {
      column[f] = static_cast<double>(corpus.fields()[f].count_at(y));
    }
    out.push_back({y, summarize(column)});
  }
  return out;
}

std::vector<YearStats> diff_key_figures(const Corpus& corpus) {
  std::vector<DiffSeries> diffs;
  diffs.reserve(corpus.size());
  for (const auto& f : corpus.fields()) diffs.push_back(year_over_year(f));

  std::vector<YearStats> out;
  std::vector<double> column(diffs.size());
  const std::size_t n_diffs = diffs.front().diffs.size();
  for (std::size_t k = 0; k < n_diffs; ++k) {
    for (std::size_t f = 0; f < diffs.size(); ++f) column[f] = static_cast<double>(diffs[f].diffs[k]);
    out.push_back({diffs.front().years[k], summarize(column)});
  }
  return out;
}

std::size_t sturges_bins(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::EmptyInput, "sturges_bins: n must be positive");
  // ceil(log2 n) computed exactly on integers.
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits + 1;
}

Histogram histogram(std::span<const double> values, std::optional<std::size_t> bins) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "histogram: no values");
  if (bins && *bins == 0) throw Error(ErrorKind::InvalidSpec, "histogram: bins must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  std::size_t n_bins = bins.value_or(sturges_bins(values.size()));

  Histogram h;
  if (lo == hi) {
    // Degenerate range: one unit-width bin centred on the value.
    n_bins = 1;
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(n_bins);
  h.bin_edges.resize(n_bins + 1);
  for (std::size_t k = 0; k < n_bins; ++k) h.bin_edges[k] = lo + width * static_cast<double>(k);
  h.bin_edges[n_bins] = hi;
  h.bin_counts.assign(n_bins, 0);

  // Bin k holds edges[k] <= v < edges[k + 1]; the maximum goes to the last bin.
  const auto inner_begin = h.bin_edges.begin() + 1;
  const auto inner_end = h.bin_edges.end() - 1;
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::upper_bound(inner_begin, inner_end, v) - inner_begin);
    ++h.bin_counts[idx];
  }
  return h;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::LengthMismatch, "pearson: sequences differ in length");
  if (xs.size() < 2) throw Error(ErrorKind::TooFewValues, "pearson: need at least two pairs");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ZeroVariance, "pearson: constant sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

FieldSeries aggregate_total(const Corpus& corpus) {
  std::vector<Count> totals(static_cast<std::size_t>(corpus.n_years()), 0);
  for (const auto& f : corpus.fields()) {
    auto c = f.counts();
    for (std::size_t k = 0; k < totals.size(); ++k) totals[k] += c[k];
  }
  return FieldSeries(kTotalFieldId, "Total", "", corpus.first_year(), std::move(totals));
}

}  // namespace fieldtrend
