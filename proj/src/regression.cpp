#include "fieldtrend/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fieldtrend/error.hpp"
#include "fieldtrend/tdist.hpp"

namespace fieldtrend {

namespace {

struct Weights {
  std::vector<double> w0;  // b0 = sum w0_i P_i
  std::vector<double> w1;  // b1 = sum w1_i P_i
};

// Rows of (X'X)^-1 X' for the design x_i = (1, T_i).
Weights ols_weights(std::span<const double> times) {
  const double n = static_cast<double>(times.size());
  const double t_mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  double sxx = 0.0;
  for (double t : times) sxx += (t - t_mean) * (t - t_mean);
  if (sxx == 0.0) throw Error(ErrorKind::DegenerateDesign, "all time values are equal");
  Weights w;
  for (double t : times) {
    const double w1 = (t - t_mean) / sxx;
    w.w1.push_back(w1);
    w.w0.push_back(1.0 / n - t_mean * w1);
  }
  return w;
}

}  // namespace

const char* to_string(HcVariant v) noexcept {
  return v == HcVariant::HC0 ? "hc0" : "hc1";
}

std::optional<HcVariant> parse_hc_variant(std::string_view text) noexcept {
  if (text == "hc0" || text == "HC0") return HcVariant::HC0;
  if (text == "hc1" || text == "HC1") return HcVariant::HC1;
  return std::nullopt;
}

TrendFit ols_fit(std::string series_id, int first_year, std::span<const double> counts,
                 std::optional<int> baseline_year) {
  if (counts.size() < 3) {
    throw Error(ErrorKind::TooFewYears,
                "series " + series_id + ": a trend fit needs at least 3 years, got " + std::to_string(counts.size()));
  }
  TrendFit fit;
  fit.series_id = std::move(series_id);
  fit.first_year = first_year;
  fit.baseline_year = baseline_year.value_or(first_year);
  fit.n = counts.size();
  fit.df = static_cast<int>(fit.n) - 2;
  fit.counts.assign(counts.begin(), counts.end());
  for (std::size_t i = 0; i < fit.n; ++i) {
    fit.times.push_back(static_cast<double>(first_year + static_cast<int>(i) - fit.baseline_year));
  }

  const double n = static_cast<double>(fit.n);
  const double t_mean = std::accumulate(fit.times.begin(), fit.times.end(), 0.0) / n;
  const double p_mean = std::accumulate(fit.counts.begin(), fit.counts.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < fit.n; ++i) {
    const double dt = fit.times[i] - t_mean;
    sxx += dt * dt;
    sxy += dt * (fit.counts[i] - p_mean);
  }
  if (sxx == 0.0) throw Error(ErrorKind::DegenerateDesign, "series " + fit.series_id + ": all time values equal");
  fit.b1 = sxy / sxx;
  fit.b0 = p_mean - fit.b1 * t_mean;

  double rss = 0.0;
  for (std::size_t i = 0; i < fit.n; ++i) {
    const double e = fit.counts[i] - fit.b0 - fit.b1 * fit.times[i];
    fit.residuals.push_back(e);
    rss += e * e;
  }
  fit.sigma2 = rss / static_cast<double>(fit.df);
  return fit;
}

TrendFit ols_fit(const FieldSeries& series, std::optional<int> baseline_year) {
  const auto values = series.values();
  TrendFit fit = ols_fit(series.id(), series.first_year(), values, baseline_year);
  fit.group = series.broad_section();
  return fit;
}

RobustVariance robust_variance(const TrendFit& fit, HcVariant variant) {
  const Weights w = ols_weights(fit.times);
  RobustVariance v;
  for (std::size_t i = 0; i < fit.n; ++i) {
    const double e2 = fit.residuals[i] * fit.residuals[i];
    v.var_b0 += w.w0[i] * w.w0[i] * e2;
    v.var_b1 += w.w1[i] * w.w1[i] * e2;
    v.cov_b0b1 += w.w0[i] * w.w1[i] * e2;
  }
  if (variant == HcVariant::HC1) {
    const double scale = static_cast<double>(fit.n) / static_cast<double>(fit.n - 2);
    v.var_b0 *= scale;
    v.var_b1 *= scale;
    v.cov_b0b1 *= scale;
  }
  return v;
}

TrendFit with_robust_se(TrendFit fit, HcVariant variant) {
  const RobustVariance v = robust_variance(fit, variant);
  fit.hc_variant = variant;
  fit.se_b0 = std::sqrt(v.var_b0);
  fit.se_b1 = std::sqrt(v.var_b1);
  return fit;
}

TrendFit confidence_interval(TrendFit fit, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::InvalidProbability, "confidence level must lie in (0, 1)");
  }
  if (!fit.hc_variant) {
    throw Error(ErrorKind::InvalidSpec, "series " + fit.series_id + ": robust standard errors not computed");
  }
  const double t = t_quantile(1.0 - (1.0 - level) / 2.0, fit.df);
  const double half = t * fit.se_b1;
  fit.ci_b1 = ConfidenceInterval{level, fit.b1 - half, fit.b1 + half};
  return fit;
}

TrendFit fit_series(const FieldSeries& series, const FitOptions& options) {
  return confidence_interval(with_robust_se(ols_fit(series, options.baseline_year), options.variant),
                             options.level);
}

std::vector<TrendFit> fit_all(const Corpus& corpus, const FitOptions& options) {
  std::vector<TrendFit> fits;
  fits.reserve(corpus.size());
  for (const auto& field : corpus.fields()) {
    try {
      fits.push_back(fit_series(field, options));
    } catch (const Error& e) {
      throw Error(e.kind(), "field " + field.id() + ": " + e.detail());
    }
  }
  return fits;
}

FitKeyFigures fit_key_figures(std::span<const TrendFit> fits) {
  if (fits.size() < 2) throw Error(ErrorKind::TooFewValues, "key figures need at least two fits");
  std::vector<double> intercepts, slopes;
  for (const auto& f : fits) {
    intercepts.push_back(f.b0);
    slopes.push_back(f.b1);
  }
  FitKeyFigures k;
  k.intercepts = summarize(intercepts);
  k.slopes = summarize(slopes);
  k.intercept_slope_r = pearson(intercepts, slopes);
  return k;
}

double projected_change(double slope, double multiplier) { return slope * multiplier; }

double projected_change(const TrendFit& fit, std::optional<double> multiplier) {
  return projected_change(fit.b1, multiplier.value_or(static_cast<double>(fit.last_year() - fit.first_year)));
}

RankedFits rank_by_slope(std::vector<TrendFit> fits) {
  std::stable_sort(fits.begin(), fits.end(), [](const TrendFit& a, const TrendFit& b) {
    if (a.b1 != b.b1) return a.b1 < b.b1;
    return a.series_id < b.series_id;
  });
  return RankedFits{std::move(fits)};
}

double percent_of(Count part, Count total) noexcept {
  if (total == 0) return 0.0;
  return static_cast<double>(part) * 100.0 / static_cast<double>(total);
}

Drilldown drilldown(const CtCorpus& ct_corpus, std::string_view field_id, int focus_year,
                    std::size_t top_k, const FitOptions& options) {
  const FieldSeries& field = ct_corpus.parent().at(field_id);
  if (!field.covers(focus_year)) {
    throw Error(ErrorKind::YearOutOfRange, "year " + std::to_string(focus_year) + " outside field " + field.id());
  }
  if (top_k == 0) throw Error(ErrorKind::InvalidSpec, "top_k must be >= 1");

  std::vector<const CtSeries*> terms;
  for (const CtSeries* t : ct_corpus.terms_of(field.id())) {
    if (t->covers(focus_year)) terms.push_back(t);
  }
  std::sort(terms.begin(), terms.end(), [focus_year](const CtSeries* a, const CtSeries* b) {
    const Count ca = a->count_at(focus_year);
    const Count cb = b->count_at(focus_year);
    if (ca != cb) return ca > cb;
    return a->ct_name() < b->ct_name();
  });
  if (terms.size() > top_k) terms.resize(top_k);

  Drilldown d;
  d.field_id = field.id();
  d.field_name = field.name();
  d.focus_year = focus_year;
  d.parent_total = field.count_at(focus_year);
  for (const CtSeries* t : terms) {
    const Count c = t->count_at(focus_year);
    d.top.push_back({t->ct_name(), c, percent_of(c, d.parent_total)});
  }
  if (terms.empty()) return d;

  int first = terms.front()->first_year();
  int last = terms.front()->last_year();
  for (const CtSeries* t : terms) {
    first = std::max(first, t->first_year());
    last = std::min(last, t->last_year());
  }
  if (last - first + 1 < 3) return d;
  d.fit_range = std::make_pair(first, last);

  for (const CtSeries* t : terms) {
    const auto all = t->values();
    std::span<const double> window(all.data() + (first - t->first_year()),
                                   static_cast<std::size_t>(last - first + 1));
    TrendFit fit = ols_fit(t->ct_name(), first, window, options.baseline_year);
    fit.group = field.id();
    d.fits.push_back(confidence_interval(with_robust_se(std::move(fit), options.variant), options.level));
  }
  d.ranked = rank_by_slope(d.fits);
  return d;
}

}  // namespace fieldtrend
