#include "fieldtrend/pipeline.hpp"

#include <map>

#include <openssl/evp.h>
#include <fmt/format.h>

#include "json.hpp"

#include "fieldtrend/error.hpp"
#include "fieldtrend/io.hpp"
#include "fieldtrend/stats.hpp"
#include "fieldtrend/table.hpp"

namespace fieldtrend {

namespace fs = std::filesystem;

namespace {

using Files = std::map<std::string, std::string>;  // name -> content

void add_table(Files& files, const std::string& stem, const TableDoc& table) {
  files[stem + ".txt"] = render_text(table);
  files[stem + ".csv"] = render_csv(table);
  files[stem + ".json"] = render_json(table);
}


}  // namespace

std::string fits_to_json(std::span<const TrendFit> fits) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : fits) {
    nlohmann::ordered_json j;
    j["series_id"] = f.series_id;
    j["group"] = f.group;
    j["first_year"] = f.first_year;
    j["baseline_year"] = f.baseline_year;
    j["n"] = f.n;
    j["b0"] = f.b0;
    j["b1"] = f.b1;
    j["residuals"] = f.residuals;
    j["sigma2"] = f.sigma2;
    j["df"] = f.df;
    j["hc_variant"] = f.hc_variant ? to_string(*f.hc_variant) : nullptr;
    j["se_b0"] = f.se_b0;
    j["se_b1"] = f.se_b1;
    if (f.ci_b1) j["ci_b1"] = {{"level", f.ci_b1->level}, {"lower", f.ci_b1->lower}, {"upper", f.ci_b1->upper}};
    else j["ci_b1"] = nullptr;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + '\n';
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "sha256 failed");
  }
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

ReportManifest pipeline_report(const Corpus& corpus, const CtCorpus* ct_corpus, const ReportConfig& config,
                               const fs::path& out_dir) {
  Files files;

  const auto per_year = per_year_summary(corpus);
  add_table(files, "summary", render_summary_table(per_year));
  const auto diffs = diff_key_figures(corpus);
  add_table(files, "diffs", render_diff_table(diffs));

  const auto fits = fit_all(corpus, config.fit);
  add_table(files, "fits", render_fits(fits));
  files["fits.json"] = fits_to_json(fits);
  const RankedFits ranked = rank_by_slope(fits);
  add_table(files, "rank", render_ranked(ranked));

  try {
    add_table(files, "keyfigures", render_fit_table(fit_key_figures(fits)));
  } catch (const Error& e) {
    // Single-field or constant panels have no key figures; that is not a failure.
    if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::TooFewValues) throw;
  }

  if (config.drilldown) {
    if (!ct_corpus) throw Error(ErrorKind::InvalidSpec, "drill-down requested without controlled-term data");
    const auto& req = *config.drilldown;
    const Drilldown d = drilldown(*ct_corpus, req.field_id, req.year, req.top_k, config.fit);
    add_table(files, "drilldown", render_ct_table(d));
    if (!d.fits.empty()) add_table(files, "drilldown_rank", render_ranked(d.ranked));
  }

  const bool explicit_charts = !config.charts.empty();
  std::vector<ChartKind> charts = config.charts;
  if (!explicit_charts) {
    charts = {ChartKind::Spaghetti, ChartKind::Histogram, ChartKind::CiDot, ChartKind::Scatter};
    if (corpus.size() >= 4) charts.push_back(ChartKind::Box);
  }
  for (ChartKind kind : charts) {
    ChartData data;
    switch (kind) {
      case ChartKind::Spaghetti: data = spaghetti_from_corpus(corpus, true); break;
      case ChartKind::Histogram: {
        std::vector<double> all;
        for (const auto& f : corpus.fields()) {
          for (Count d : year_over_year(f).diffs) all.push_back(static_cast<double>(d));
        }
        data = HistogramData{"Annual changes in the number of publications", histogram(all, config.bins)};
        break;
      }
      case ChartKind::Box: data = box_from_corpus(corpus); break;
      case ChartKind::CiDot: data = CiDotData{"Rate of change ranked from low to high", ranked}; break;
      case ChartKind::Scatter: data = scatter_from_fits(fits); break;
    }
    files[std::string(to_string(kind)) + ".svg"] = render_chart(kind, data, config.chart_options).svg;
  }

  ReportManifest manifest;
  nlohmann::ordered_json jm;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [name, content] : files) {
    ReportArtifact a{name, content.size(), sha256_hex(content)};
    arr.push_back({{"name", a.name}, {"bytes", a.bytes}, {"sha256", a.sha256}});
    manifest.artifacts.push_back(std::move(a));
  }
  jm["artifacts"] = std::move(arr);
  files["manifest.json"] = jm.dump(2) + '\n';

  // Stage, then publish.
  std::error_code ec;
  if (fs::exists(out_dir) && !fs::is_directory(out_dir)) {
    throw Error(ErrorKind::Io, out_dir.string() + " exists and is not a directory");
  }
  fs::path target = out_dir;
  if (target.filename().empty()) target = target.parent_path();
  const fs::path staging = target.parent_path() / (target.filename().string() + ".partial");
  fs::remove_all(staging, ec);
  try {
    fs::create_directories(staging);
    for (const auto& [name, content] : files) write_text(staging / name, content);
    if (!fs::exists(target)) {
      fs::rename(staging, target);
    } else {
      for (const auto& [name, content] : files) fs::rename(staging / name, target / name);
      fs::remove_all(staging);
    }
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw Error(ErrorKind::Io, e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  return manifest;
}

}  // namespace fieldtrend
