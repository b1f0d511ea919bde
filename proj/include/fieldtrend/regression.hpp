#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldtrend/domain.hpp"
#include "fieldtrend/stats.hpp"

namespace fieldtrend {

// HC0 is the plain sandwich; HC1 scales it by n / (n - 2).
enum class HcVariant { HC0, HC1 };

const char* to_string(HcVariant v) noexcept;
std::optional<HcVariant> parse_hc_variant(std::string_view text) noexcept;

struct ConfidenceInterval {
  double level = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

// Straight-line growth model counts = b0 + b1 * T + e with T = year - baseline_year.
struct TrendFit {
  std::string series_id;
  std::string group;  // broad section (fields) or parent field id (terms)
  int first_year = 0;
  int baseline_year = 0;
  std::size_t n = 0;
  double b0 = 0.0;
  double b1 = 0.0;
  std::vector<double> times;
  std::vector<double> counts;
  std::vector<double> residuals;
  double sigma2 = 0.0;
  int df = 0;

  // Filled by with_robust_se.
  std::optional<HcVariant> hc_variant;
  double se_b0 = 0.0;
  double se_b1 = 0.0;

  // Filled by confidence_interval.
  std::optional<ConfidenceInterval> ci_b1;

  int last_year() const noexcept { return first_year + static_cast<int>(n) - 1; }
};

struct RobustVariance {
  double var_b0 = 0.0;
  double var_b1 = 0.0;
  double cov_b0b1 = 0.0;
};

struct FitOptions {
  std::optional<int> baseline_year;  // nullopt: first year of the series
  HcVariant variant = HcVariant::HC1;
  double level = 0.95;
};

struct FitKeyFigures {
  SummaryStats intercepts;
  SummaryStats slopes;
  double intercept_slope_r = 0.0;
};

struct RankedFits {
  std::vector<TrendFit> fits;  // ascending b1, ties by series_id
};

TrendFit ols_fit(std::string series_id, int first_year, std::span<const double> counts,
                 std::optional<int> baseline_year = std::nullopt);
TrendFit ols_fit(const FieldSeries& series, std::optional<int> baseline_year = std::nullopt);

RobustVariance robust_variance(const TrendFit& fit, HcVariant variant);
TrendFit with_robust_se(TrendFit fit, HcVariant variant);

// Requires with_robust_se to have been applied.
TrendFit confidence_interval(TrendFit fit, double level);

// ols_fit + with_robust_se + confidence_interval.
TrendFit fit_series(const FieldSeries& series, const FitOptions& options);

// One fit per field in canonical field order.
std::vector<TrendFit> fit_all(const Corpus& corpus, const FitOptions& options);

FitKeyFigures fit_key_figures(std::span<const TrendFit> fits);

// slope * multiplier; the default multiplier is the number of one-year
// intervals in the fitted range (last_year - first_year).
double projected_change(const TrendFit& fit, std::optional<double> multiplier = std::nullopt);
double projected_change(double slope, double multiplier);

RankedFits rank_by_slope(std::vector<TrendFit> fits);

struct CtFrequency {
  std::string ct_name;
  Count count = 0;
  double percent = 0.0;  // of the parent field's total in the focus year
};

struct Drilldown {
  std::string field_id;
  std::string field_name;
  int focus_year = 0;
  Count parent_total = 0;
  std::vector<CtFrequency> top;  // descending count, ties by ct_name
  // Years shared by all top terms; fits are only computed when it spans >= 3 years.
  std::optional<std::pair<int, int>> fit_range;
  std::vector<TrendFit> fits;  // same order as top
  RankedFits ranked;
};

double percent_of(Count part, Count total) noexcept;

Drilldown drilldown(const CtCorpus& ct_corpus, std::string_view field_id, int focus_year,
                    std::size_t top_k, const FitOptions& options = {});

}  // namespace fieldtrend
