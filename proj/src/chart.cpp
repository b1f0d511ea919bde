#include "fieldtrend/chart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "fieldtrend/error.hpp"

namespace fieldtrend {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Range {
  double lo;
  double hi;
};

// Data extent widened by 5% on each side; a zero-width extent gets +-1.
Range padded(double lo, double hi) {
  if (lo == hi) return {lo - 1.0, hi + 1.0};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

Range extent(const std::vector<double>& v) {
  const auto [a, b] = std::minmax_element(v.begin(), v.end());
  return padded(*a, *b);
}

std::string num(double v) {
  std::string s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-9) v = 0.0;
  return fmt::format("{:.6g}", v);
}

class Plot {
 public:
  Plot(const ChartOptions& opt, std::string_view title, int bottom_margin = 60)
      : width_(opt.width), height_(opt.height), bottom_(bottom_margin) {
    if (width_ <= left_ + right_ || height_ <= top_ + bottom_) {
      throw Error(ErrorKind::InvalidSpec, "chart size too small");
    }
    out_ += fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n",
        width_, height_);
    out_ += fmt::format("<rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                        width_, height_);
    if (!title.empty()) {
      out_ += fmt::format("<text class=\"title\" x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                          num(width_ / 2.0), xml_escape(title));
    }
  }

  void set_ranges(Range x, Range y) {
    x_ = x;
    y_ = y;
  }

  double px(double x) const { return left_ + (x - x_.lo) / (x_.hi - x_.lo) * plot_width(); }
  double py(double y) const { return top_ + (y_.hi - y) / (y_.hi - y_.lo) * plot_height(); }
  double plot_width() const { return width_ - left_ - right_; }
  double plot_height() const { return height_ - top_ - bottom_; }
  double bottom_y() const { return height_ - bottom_; }

  void axes() {
    out_ += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000000\"/>\n",
                        num(left_), num(bottom_y()), num(width_ - right_));
    out_ += fmt::format("<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\"/>\n",
                        num(left_), num(top_), num(bottom_y()));
  }

  void y_ticks() {
    for (int i = 0; i <= 4; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      const double y = py(v);
      out_ += fmt::format("<line class=\"tick\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000000\"/>\n",
                          num(left_ - 4), num(y), num(left_));
      out_ += fmt::format("<text class=\"tick-label\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                          num(left_ - 6), num(y + 4), tick_label(v));
    }
  }

  void x_ticks_linear() {
    for (int i = 0; i <= 4; ++i) x_tick(x_.lo + (x_.hi - x_.lo) * i / 4.0, tick_label(x_.lo + (x_.hi - x_.lo) * i / 4.0));
  }

  void x_tick(double v, const std::string& label) {
    const double x = px(v);
    out_ += fmt::format("<line class=\"tick\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\"/>\n",
                        num(x), num(bottom_y()), num(bottom_y() + 4));
    out_ += fmt::format("<text class=\"tick-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(x),
                        num(bottom_y() + 16), xml_escape(label));
  }

  void axis_labels(std::string_view x_label, std::string_view y_label) {
    if (!x_label.empty()) {
      out_ += fmt::format("<text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                          num(left_ + plot_width() / 2), num(height_ - 8.0), xml_escape(x_label));
    }
    if (!y_label.empty()) {
      out_ += fmt::format(
          "<text class=\"axis-label\" x=\"14\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">{1}</text>\n",
          num(top_ + plot_height() / 2), xml_escape(y_label));
    }
  }

  void zero_line() {
    if (y_.lo < 0.0 && y_.hi > 0.0) {
      out_ += fmt::format(
          "<line class=\"zero\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n",
          num(left_), num(py(0.0)), num(width_ - right_));
    }
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& entries) {
    double x = left_ + 8;
    for (const auto& [label, colour] : entries) {
      out_ += fmt::format("<rect class=\"swatch\" x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", num(x),
                          num(top_ - 14), colour);
      out_ += fmt::format("<text class=\"legend\" x=\"{}\" y=\"{}\">{}</text>\n", num(x + 14), num(top_ - 5),
                          xml_escape(label));
      x += 24 + 7.0 * static_cast<double>(label.size());
    }
  }

  std::string& body() { return out_; }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  int width_;
  int height_;
  double left_ = 80;
  double right_ = 20;
  double top_ = 50;
  double bottom_;
  Range x_{0, 1};
  Range y_{0, 1};
  std::string out_;
};

// Stable colour per group: index into the palette by sorted group name.
std::map<std::string, std::string> group_colours(const std::vector<std::string>& groups) {
  std::set<std::string> distinct(groups.begin(), groups.end());
  distinct.erase(kTotalFieldId);
  std::map<std::string, std::string> out;
  std::size_t k = 0;
  for (const auto& g : distinct) out[g] = kPalette[k++ % std::size(kPalette)];
  out[kTotalFieldId] = "#000000";
  return out;
}

std::vector<std::pair<std::string, std::string>> legend_entries(const std::map<std::string, std::string>& colours,
                                                                 const std::vector<std::string>& used) {
  std::set<std::string> present(used.begin(), used.end());
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [g, c] : colours) {
    if (!g.empty() && present.count(g)) out.emplace_back(g, c);
  }
  return out;
}

void check_finite(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidSpec, "chart data contains a non-finite value");
}

std::string spaghetti(const SpaghettiData& d, const ChartOptions& opt) {
  if (d.series.empty()) throw Error(ErrorKind::EmptyData, "spaghetti chart needs at least one series");
  std::vector<double> xs, ys;
  std::vector<std::string> groups;
  for (const auto& s : d.series) {
    if (s.values.empty()) throw Error(ErrorKind::EmptyData, "series '" + s.label + "' has no points");
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      check_finite(s.values[k]);
      xs.push_back(s.first_year + static_cast<double>(k));
      ys.push_back(s.values[k]);
    }
    groups.push_back(s.group);
  }
  const auto colours = group_colours(groups);

  Plot p(opt, d.title);
  p.set_ranges(extent(xs), extent(ys));
  p.axes();
  p.y_ticks();
  const auto [min_year, max_year] = std::minmax_element(xs.begin(), xs.end());
  for (int y = static_cast<int>(*min_year); y <= static_cast<int>(*max_year); ++y) p.x_tick(y, std::to_string(y));
  p.axis_labels("Publication year", "Number of publications");
  p.legend(legend_entries(colours, groups));

  for (const auto& s : d.series) {
    const bool total = s.group == kTotalFieldId;
    std::string points;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      if (k) points += ' ';
      points += num(p.px(s.first_year + static_cast<double>(k))) + ',' + num(p.py(s.values[k]));
    }
    p.body() += fmt::format(
        "<polyline class=\"series\" data-label=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
        xml_escape(s.label), points, colours.at(s.group), total ? "2.5" : "1");
  }
  return p.finish();
}

std::string hist(const HistogramData& d, const ChartOptions& opt) {
  const Histogram& h = d.histogram;
  if (h.bin_counts.empty() || h.bin_edges.size() != h.bin_counts.size() + 1) {
    throw Error(ErrorKind::EmptyData, "histogram has no bins");
  }
  const double max_count = static_cast<double>(*std::max_element(h.bin_counts.begin(), h.bin_counts.end()));
  Plot p(opt, d.title);
  p.set_ranges(padded(h.bin_edges.front(), h.bin_edges.back()), padded(0.0, std::max(max_count, 1.0)));
  p.axes();
  p.y_ticks();
  p.x_ticks_linear();
  p.axis_labels("Difference to previous year", "Frequency");
  for (std::size_t k = 0; k < h.bin_counts.size(); ++k) {
    const double x0 = p.px(h.bin_edges[k]);
    const double x1 = p.px(h.bin_edges[k + 1]);
    const double y0 = p.py(0.0);
    const double y1 = p.py(static_cast<double>(h.bin_counts[k]));
    p.body() += fmt::format(
        "<rect class=\"bar\" data-count=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#1f77b4\" stroke=\"#ffffff\"/>\n",
        h.bin_counts[k], num(x0), num(y1), num(x1 - x0), num(y0 - y1));
  }
  return p.finish();
}

std::string box(const BoxData& d, const ChartOptions& opt) {
  if (d.groups.empty()) throw Error(ErrorKind::EmptyData, "box chart needs at least one group");
  std::vector<TukeyBox> boxes;
  std::vector<double> all;
  for (const auto& g : d.groups) {
    for (double v : g.values) check_finite(v);
    if (g.values.size() < 4)
      throw Error(ErrorKind::EmptyData, "box '" + g.label + "' needs at least 4 values, got " + std::to_string(g.values.size()));
    boxes.push_back(tukey_box(g.values));
    all.insert(all.end(), g.values.begin(), g.values.end());
  }
  const double n = static_cast<double>(d.groups.size());
  Plot p(opt, d.title);
  p.set_ranges(padded(0.5, n + 0.5), extent(all));
  p.axes();
  p.y_ticks();
  p.axis_labels("", "Number of publications");
  const double half = std::min(30.0, 0.3 * p.plot_width() / n);
  for (std::size_t k = 0; k < d.groups.size(); ++k) {
    const auto& b = boxes[k];
    const double cx = p.px(static_cast<double>(k + 1));
    p.x_tick(static_cast<double>(k + 1), d.groups[k].label);
    auto hline = [&](const char* cls, double v, double w) {
      p.body() += fmt::format("<line class=\"{0}\" x1=\"{1}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\" stroke=\"#000000\"/>\n", cls,
                              num(cx - w), num(p.py(v)), num(cx + w));
    };
    auto vline = [&](double a, double c) {
      p.body() += fmt::format("<line class=\"whisker\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\"/>\n",
                              num(cx), num(p.py(a)), num(p.py(c)));
    };
    p.body() += fmt::format(
        "<rect class=\"box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#d9e6f2\" stroke=\"#000000\"/>\n",
        num(cx - half), num(p.py(b.q3)), num(2 * half), num(p.py(b.q1) - p.py(b.q3)));
    hline("median", b.median, half);
    vline(b.q3, b.upper_adjacent);
    vline(b.q1, b.lower_adjacent);
    hline("cap", b.upper_adjacent, half / 2);
    hline("cap", b.lower_adjacent, half / 2);
    for (double v : d.groups[k].values) {
      const bool outlier = v < b.lower_fence || v > b.upper_fence;
      p.body() += fmt::format("<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                              outlier ? "outlier" : "point", num(cx), num(p.py(v)), outlier ? "3" : "1.5",
                              outlier ? "#d62728" : "#555555");
    }
  }
  return p.finish();
}

std::string ci_dot(const CiDotData& d, const ChartOptions& opt) {
  const auto& fits = d.ranked.fits;
  if (fits.empty()) throw Error(ErrorKind::EmptyData, "ci chart needs at least one fit");
  std::vector<double> ys;
  std::vector<std::string> groups;
  for (const auto& f : fits) {
    if (!f.ci_b1) throw Error(ErrorKind::KindMismatch, "fit '" + f.series_id + "' has no confidence interval");
    check_finite(f.ci_b1->lower);
    check_finite(f.ci_b1->upper);
    ys.push_back(f.ci_b1->lower);
    ys.push_back(f.ci_b1->upper);
    ys.push_back(f.b1);
    groups.push_back(f.group);
  }
  const auto colours = group_colours(groups);
  const double n = static_cast<double>(fits.size());
  Plot p(opt, d.title, 130);
  p.set_ranges(padded(1.0, n), extent(ys));
  p.axes();
  p.y_ticks();
  p.zero_line();
  p.axis_labels("", "Slope (publications per year)");
  p.legend(legend_entries(colours, groups));
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const auto& f = fits[k];
    const double cx = p.px(static_cast<double>(k + 1));
    const std::string& colour = colours.at(f.group);
    p.body() += fmt::format("<line class=\"ci\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"{3}\"/>\n", num(cx),
                            num(p.py(f.ci_b1->lower)), num(p.py(f.ci_b1->upper)), colour);
    p.body() += fmt::format(
        "<circle class=\"estimate\" data-label=\"{}\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
        xml_escape(f.series_id), num(cx), num(p.py(f.b1)), colour);
    const double ly = p.bottom_y() + 10;
    p.body() += fmt::format(
        "<text class=\"series-label\" x=\"{0}\" y=\"{1}\" text-anchor=\"end\" font-size=\"9\" transform=\"rotate(-60 {0} {1})\">{2}</text>\n",
        num(cx), num(ly), xml_escape(f.series_id));
  }
  return p.finish();
}

std::string scatter(const ScatterData& d, const ChartOptions& opt) {
  if (d.xs.size() != d.ys.size()) throw Error(ErrorKind::LengthMismatch, "scatter needs paired values");
  if (d.xs.empty()) throw Error(ErrorKind::EmptyData, "scatter chart needs at least one point");
  for (std::size_t i = 0; i < d.xs.size(); ++i) {
    check_finite(d.xs[i]);
    check_finite(d.ys[i]);
  }
  Plot p(opt, d.title);
  const Range xr = extent(d.xs);
  const Range yr = extent(d.ys);
  p.set_ranges(xr, yr);
  p.axes();
  p.y_ticks();
  p.x_ticks_linear();
  p.axis_labels(d.x_label, d.y_label);

  if (d.fit_line && d.xs.size() >= 2) {
    const double n = static_cast<double>(d.xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < d.xs.size(); ++i) {
      mx += d.xs[i];
      my += d.ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < d.xs.size(); ++i) {
      sxx += (d.xs[i] - mx) * (d.xs[i] - mx);
      sxy += (d.xs[i] - mx) * (d.ys[i] - my);
    }
    if (sxx > 0) {
      const double slope = sxy / sxx;
      const double x0 = xr.lo, x1 = xr.hi;
      // Clip the fitted line to the plotting area.
      auto clip_y = [&](double y) { return std::clamp(y, yr.lo, yr.hi); };
      p.body() += fmt::format(
          "<line class=\"fit\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#d62728\"/>\n", num(p.px(x0)),
          num(p.py(clip_y(my + slope * (x0 - mx)))), num(p.px(x1)), num(p.py(clip_y(my + slope * (x1 - mx)))));
    }
  }
  for (std::size_t i = 0; i < d.xs.size(); ++i) {
    p.body() += fmt::format("<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#1f77b4\"/>\n",
                            num(p.px(d.xs[i])), num(p.py(d.ys[i])));
  }
  return p.finish();
}

}  // namespace

const char* to_string(ChartKind kind) noexcept {
  switch (kind) {
    case ChartKind::Spaghetti: return "spaghetti";
    case ChartKind::Histogram: return "hist";
    case ChartKind::Box: return "box";
    case ChartKind::CiDot: return "ci";
    case ChartKind::Scatter: return "scatter";
  }
  return "unknown";
}

std::optional<ChartKind> parse_chart_kind(std::string_view text) noexcept {
  for (ChartKind k : {ChartKind::Spaghetti, ChartKind::Histogram, ChartKind::Box, ChartKind::CiDot, ChartKind::Scatter}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

ChartDocument render_chart(ChartKind kind, const ChartData& data, const ChartOptions& options) {
  ChartDocument doc{kind, options.width, options.height, {}};
  auto mismatch = [kind] {
    return Error(ErrorKind::KindMismatch, std::string("data does not match chart kind '") + to_string(kind) + "'");
  };
  switch (kind) {
    case ChartKind::Spaghetti:
      if (auto* d = std::get_if<SpaghettiData>(&data)) doc.svg = spaghetti(*d, options); else throw mismatch();
      break;
    case ChartKind::Histogram:
      if (auto* d = std::get_if<HistogramData>(&data)) doc.svg = hist(*d, options); else throw mismatch();
      break;
    case ChartKind::Box:
      if (auto* d = std::get_if<BoxData>(&data)) doc.svg = box(*d, options); else throw mismatch();
      break;
    case ChartKind::CiDot:
      if (auto* d = std::get_if<CiDotData>(&data)) doc.svg = ci_dot(*d, options); else throw mismatch();
      break;
    case ChartKind::Scatter:
      if (auto* d = std::get_if<ScatterData>(&data)) doc.svg = scatter(*d, options); else throw mismatch();
      break;
  }
  return doc;
}

SpaghettiData spaghetti_from_corpus(const Corpus& corpus, bool include_total) {
  SpaghettiData d;
  d.title = "Annual number of publications per field";
  for (const auto& f : corpus.fields()) d.series.push_back({f.id(), f.broad_section(), f.first_year(), f.values()});
  if (include_total) {
    const FieldSeries total = aggregate_total(corpus);
    d.series.push_back({total.id(), kTotalFieldId, total.first_year(), total.values()});
  }
  return d;
}

SpaghettiData spaghetti_from_terms(const CtCorpus& ct_corpus, const Drilldown& drilldown) {
  SpaghettiData d;
  d.title = "Annual number of publications per controlled term in " +
            (drilldown.field_name.empty() ? drilldown.field_id : drilldown.field_name);
  for (const auto& row : drilldown.top) {
    for (const CtSeries* t : ct_corpus.terms_of(drilldown.field_id)) {
      if (t->ct_name() == row.ct_name) d.series.push_back({t->ct_name(), t->ct_name(), t->first_year(), t->values()});
    }
  }
  return d;
}

BoxData box_from_corpus(const Corpus& corpus) {
  BoxData d;
  d.title = "Number of publications per field by year";
  for (int y = corpus.first_year(); y <= corpus.last_year(); ++y) {
    BoxGroup g{std::to_string(y), {}};
    for (const auto& f : corpus.fields()) g.values.push_back(static_cast<double>(f.count_at(y)));
    d.groups.push_back(std::move(g));
  }
  return d;
}

ScatterData scatter_from_fits(std::span<const TrendFit> fits) {
  ScatterData d;
  d.title = "Intercepts and slopes";
  d.x_label = "Intercept";
  d.y_label = "Slope";
  for (const auto& f : fits) {
    d.xs.push_back(f.b0);
    d.ys.push_back(f.b1);
  }
  return d;
}

}  // namespace fieldtrend
