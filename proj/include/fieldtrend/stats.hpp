#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldtrend/domain.hpp"

namespace fieldtrend {

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  std::optional<double> sd;  // sample sd, absent for n == 1
  double min = 0.0;
  double max = 0.0;
};

struct TukeyBox {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0;
  double upper_fence = 0.0;
  double lower_adjacent = 0.0;
  double upper_adjacent = 0.0;
  std::vector<double> outliers;  // ascending
};

struct DiffSeries {
  std::string field_id;
  std::vector<int> years;   // second..last year of the source
  std::vector<Count> diffs;  // count(y) - count(y - 1)
};

struct Histogram {
  std::vector<double> bin_edges;  // bins + 1 entries
  std::vector<std::size_t> bin_counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  std::size_t total() const noexcept;
};

// Per-year cross-field statistics (one row of a key-figures table).
struct YearStats {
  int year = 0;
  SummaryStats stats;
};

SummaryStats summarize(std::span<const double> values);

// Linear interpolation between order statistics, h = (n - 1) p.
double quantile_sorted(std::span<const double> sorted, double p);

TukeyBox tukey_box(std::span<const double> values);

DiffSeries year_over_year(const FieldSeries& series);

// Cross-field summary of counts for every year.
std::vector<YearStats> per_year_summary(const Corpus& corpus);

// Cross-field summary of year-over-year differences for every year after the first.
std::vector<YearStats> diff_key_figures(const Corpus& corpus);

// bins == nullopt selects Sturges' rule.
Histogram histogram(std::span<const double> values, std::optional<std::size_t> bins = std::nullopt);
std::size_t sturges_bins(std::size_t n);

double pearson(std::span<const double> xs, std::span<const double> ys);

inline constexpr const char* kTotalFieldId = "TOTAL";

FieldSeries aggregate_total(const Corpus& corpus);

}  // namespace fieldtrend
