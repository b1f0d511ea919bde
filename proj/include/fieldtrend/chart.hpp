#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fieldtrend/domain.hpp"
#include "fieldtrend/regression.hpp"
#include "fieldtrend/stats.hpp"

namespace fieldtrend {

enum class ChartKind { Spaghetti, Histogram, Box, CiDot, Scatter };

const char* to_string(ChartKind kind) noexcept;
// Accepts the CLI names: spaghetti, hist, box, ci, scatter.
std::optional<ChartKind> parse_chart_kind(std::string_view text) noexcept;

struct LineSeries {
  std::string label;
  std::string group;  // selects the colour; the aggregate series uses kTotalFieldId
  int first_year = 0;
  std::vector<double> values;
};

struct SpaghettiData {
  std::string title;
  std::vector<LineSeries> series;
};

struct HistogramData {
  std::string title;
  Histogram histogram;
};

struct BoxGroup {
  std::string label;
  std::vector<double> values;
};

struct BoxData {
  std::string title;
  std::vector<BoxGroup> groups;
};

struct CiDotData {
  std::string title;
  RankedFits ranked;
};

struct ScatterData {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> xs;
  std::vector<double> ys;
  bool fit_line = true;
};

using ChartData = std::variant<SpaghettiData, HistogramData, BoxData, CiDotData, ScatterData>;

struct ChartOptions {
  int width = 800;
  int height = 500;
};

struct ChartDocument {
  ChartKind kind = ChartKind::Spaghetti;
  int width = 0;
  int height = 0;
  std::string svg;
};

// Deterministic SVG 1.1 using rect, line, polyline, circle and text only.
// Throws KindMismatch when data does not match kind and EmptyData when
// there is nothing to draw.
ChartDocument render_chart(ChartKind kind, const ChartData& data, const ChartOptions& options = {});

SpaghettiData spaghetti_from_corpus(const Corpus& corpus, bool include_total);
SpaghettiData spaghetti_from_terms(const CtCorpus& ct_corpus, const Drilldown& drilldown);
BoxData box_from_corpus(const Corpus& corpus);
ScatterData scatter_from_fits(std::span<const TrendFit> fits);

std::string xml_escape(std::string_view text);

}  // namespace fieldtrend
