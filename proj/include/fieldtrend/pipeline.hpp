#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldtrend/chart.hpp"
#include "fieldtrend/domain.hpp"
#include "fieldtrend/regression.hpp"

namespace fieldtrend {

struct DrilldownRequest {
  std::string field_id;
  int year = 0;
  std::size_t top_k = 10;
};

struct ReportConfig {
  FitOptions fit;
  // Empty: every chart the data supports. Explicit kinds must be renderable.
  std::vector<ChartKind> charts;
  std::optional<std::size_t> bins;
  std::optional<DrilldownRequest> drilldown;  // requires a CtCorpus
  ChartOptions chart_options;
};

struct ReportArtifact {
  std::string name;
  std::size_t bytes = 0;
  std::string sha256;  // lowercase hex
};

struct ReportManifest {
  std::vector<ReportArtifact> artifacts;  // sorted by name, manifest.json excluded
};

std::string sha256_hex(std::string_view data);

// Full-precision fit records (coefficients, residuals, SEs, CI) as a JSON array.
std::string fits_to_json(std::span<const TrendFit> fits);

// Writes summary.*, diffs.*, fits.*, rank.* (txt, csv, json), key figures and
// drill-down tables when computable, one SVG per chart, and manifest.json.
// Files are staged in a sibling directory and moved into out_dir only after
// everything rendered; on failure nothing is left behind.
ReportManifest pipeline_report(const Corpus& corpus, const CtCorpus* ct_corpus, const ReportConfig& config,
                               const std::filesystem::path& out_dir);

}  // namespace fieldtrend
