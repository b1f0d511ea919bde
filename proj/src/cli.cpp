#include "fieldtrend/cli.hpp"

#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "fieldtrend/chart.hpp"
#include "fieldtrend/error.hpp"
#include "fieldtrend/io.hpp"
#include "fieldtrend/pipeline.hpp"
#include "fieldtrend/regression.hpp"
#include "fieldtrend/stats.hpp"
#include "fieldtrend/synthetic.hpp"
#include "fieldtrend/table.hpp"

namespace fieldtrend {

namespace {

const CLI::Validator kOpenUnitInterval(
    [](const std::string& text) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(text);
      } catch (...) {
        return "not a number: " + text;
      }
      if (!(v > 0.0 && v < 1.0)) return "must lie strictly between 0 and 1";
      return {};
    },
    "in (0,1)");

struct FitFlags {
  std::optional<int> baseline_year;
  std::string hc = "hc1";
  double level = 0.95;

  FitOptions options() const { return {baseline_year, *parse_hc_variant(hc), level}; }

  void attach(CLI::App* cmd) {
    cmd->add_option("--baseline-year", baseline_year, "Year mapped to T = 0 (default: first year)");
    cmd->add_option("--hc", hc, "Robust variance variant")->check(CLI::IsMember({"hc0", "hc1"}));
    cmd->add_option("--level", level, "Confidence level")->check(kOpenUnitInterval);
  }
};

TableFormat parse_format(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  return TableFormat::Text;
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
}

void emit(std::ostream& out, const std::vector<TableDoc>& tables, TableFormat format) {
  if (format == TableFormat::Json && tables.size() > 1) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : tables) arr.push_back(nlohmann::ordered_json::parse(render_json(t)));
    out << arr.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out << '\n';
    out << render(tables[i], format);
  }
}

Corpus read_corpus(const std::string& path) {
  std::istringstream in(read_text(path));
  return load_counts(in);
}

CtCorpus read_ct(const std::string& path, const Corpus& parent) {
  std::istringstream in(read_text(path));
  return load_ct(in, parent);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Publication-count trend analysis for research fields", "fieldtrend"};
  app.require_subcommand(1);

  std::string input, format = "text";

  // describe
  auto* describe = app.add_subcommand("describe", "Per-year key figures of the counts");
  describe->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  add_format(describe, format);

  // diffs
  std::string diff_field;
  auto* diffs = app.add_subcommand("diffs", "Key figures of year-over-year differences");
  diffs->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  diffs->add_option("--field", diff_field, "Also list one field's counts and differences");
  add_format(diffs, format);

  // fit
  FitFlags fit_flags;
  std::string fit_output;
  std::optional<double> multiplier;
  auto* fit = app.add_subcommand("fit", "Per-field linear trends with robust standard errors");
  fit->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  fit_flags.attach(fit);
  fit->add_option("--output", fit_output, "Write the fit records as JSON");
  fit->add_option("--multiplier", multiplier, "Projected change = slope x multiplier (default: span in years)")
      ->check(CLI::PositiveNumber);
  add_format(fit, format);

  // rank
  auto* rank = app.add_subcommand("rank", "Fields ranked by slope with confidence intervals");
  rank->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  fit_flags.attach(rank);
  add_format(rank, format);

  // drilldown
  std::string ct_path, field_id;
  int year = 0;
  std::size_t top_k = 10;
  auto* drill = app.add_subcommand("drilldown", "Controlled-term frequencies and trends within one field");
  drill->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  drill->add_option("--ct", ct_path, "Controlled-term CSV")->required();
  drill->add_option("--field", field_id, "Field id")->required();
  drill->add_option("--year", year, "Focus year")->required();
  drill->add_option("--top", top_k, "Number of terms")->check(CLI::PositiveNumber);
  fit_flags.attach(drill);
  add_format(drill, format);

  // plot
  std::string kind_name, plot_out;
  std::optional<int> plot_year;
  std::optional<std::size_t> bins;
  bool no_total = false;
  ChartOptions chart_options;
  auto* plot = app.add_subcommand("plot", "Render one chart as SVG");
  plot->add_option("--kind", kind_name, "Chart kind")
      ->required()
      ->check(CLI::IsMember({"spaghetti", "hist", "box", "ci", "scatter"}));
  plot->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  plot->add_option("--out", plot_out, "SVG output path")->required();
  plot->add_option("--ct", ct_path, "Controlled-term CSV (spaghetti/ci of the top terms)");
  plot->add_option("--field", field_id, "Field id for --ct");
  plot->add_option("--year", plot_year, "Focus year for --ct, or the year of differences for hist");
  plot->add_option("--top", top_k, "Number of terms for --ct")->check(CLI::PositiveNumber);
  plot->add_option("--bins", bins, "Histogram bins (default: Sturges)")->check(CLI::PositiveNumber);
  plot->add_flag("--no-total", no_total, "Leave the aggregate series out of the spaghetti chart");
  plot->add_option("--width", chart_options.width, "Width in pixels")->check(CLI::Range(200, 10000));
  plot->add_option("--height", chart_options.height, "Height in pixels")->check(CLI::Range(200, 10000));
  fit_flags.attach(plot);

  // simulate
  SyntheticSpec spec;
  std::vector<double> intercepts{spec.intercept_range.first, spec.intercept_range.second};
  std::vector<double> slopes{spec.slope_range.first, spec.slope_range.second};
  std::string sim_out;
  std::size_t coverage_trials = 0;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic panel with linear ground truth");
  simulate->add_option("--fields", spec.n_fields, "Number of fields")->check(CLI::PositiveNumber);
  simulate->add_option("--years", spec.n_years, "Number of years")->check(CLI::Range(3, 1000));
  simulate->add_option("--first-year", spec.first_year, "First year")->check(CLI::Range(1000, 9999));
  simulate->add_option("--intercepts", intercepts, "Intercept range a,b")->delimiter(',')->expected(2);
  simulate->add_option("--slopes", slopes, "Slope range c,d")->delimiter(',')->expected(2);
  simulate->add_option("--noise", spec.noise_sd, "Gaussian noise sd")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", spec.seed, "Seed");
  simulate->add_flag("--integral", spec.integral_coefficients, "Round drawn coefficients to integers");
  simulate->add_option("--out", sim_out, "Counts CSV output path (default: stdout)");
  simulate->add_option("--coverage-trials", coverage_trials, "Run a CI coverage experiment with this many trials")
      ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
  fit_flags.attach(simulate);

  // sample-titles
  std::string titles_path, ct_name;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample-titles", "Seeded random sample of titles");
  sample->add_option("--titles", titles_path, "Titles CSV ('-' for stdin)")->required();
  sample->add_option("--field", field_id, "Field id")->required();
  sample->add_option("--ct", ct_name, "Controlled term")->required();
  sample->add_option("--year", year, "Year")->required();
  sample->add_option("--k", k, "Sample size")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Seed");
  add_format(sample, format);

  // report
  std::string out_dir;
  std::vector<std::string> chart_names;
  auto* report = app.add_subcommand("report", "Write all tables, charts and a hash manifest to a directory");
  report->add_option("--input", input, "Counts CSV ('-' for stdin)")->required();
  report->add_option("--out-dir", out_dir, "Output directory")->required();
  report->add_option("--ct", ct_path, "Controlled-term CSV");
  report->add_option("--field", field_id, "Field id for the drill-down");
  report->add_option("--year", plot_year, "Focus year for the drill-down");
  report->add_option("--top", top_k, "Number of terms")->check(CLI::PositiveNumber);
  report->add_option("--charts", chart_names, "Charts to render (default: all applicable)")
      ->delimiter(',')
      ->check(CLI::IsMember({"spaghetti", "hist", "box", "ci", "scatter"}));
  report->add_option("--bins", bins, "Histogram bins (default: Sturges)")->check(CLI::PositiveNumber);
  fit_flags.attach(report);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const TableFormat fmt_choice = parse_format(format);
  try {
    if (describe->parsed()) {
      const Corpus corpus = read_corpus(input);
      emit(out, {render_summary_table(per_year_summary(corpus))}, fmt_choice);
    } else if (diffs->parsed()) {
      const Corpus corpus = read_corpus(input);
      std::vector<TableDoc> tables{render_diff_table(diff_key_figures(corpus))};
      if (!diff_field.empty()) tables.push_back(render_field_diffs(corpus.at(diff_field)));
      emit(out, tables, fmt_choice);
    } else if (fit->parsed()) {
      const Corpus corpus = read_corpus(input);
      const auto fits = fit_all(corpus, fit_flags.options());
      std::vector<TableDoc> tables{render_fits(fits)};

      TableDoc projection;
      projection.title = "Projected change over the range";
      projection.columns = {"Series", "Slope", "Multiplier", "Projected change"};
      for (const auto& f : fits) {
        const double m = multiplier.value_or(static_cast<double>(f.last_year() - f.first_year));
        projection.add_row({f.series_id, Real{f.b1, 2}, Real{m, 2}, Real{projected_change(f, m), 2}});
      }
      tables.push_back(std::move(projection));

      try {
        const FitKeyFigures kf = fit_key_figures(fits);
        TableDoc t = render_fit_table(kf);
        const double m = multiplier.value_or(static_cast<double>(corpus.last_year() - corpus.first_year()));
        t.notes.push_back(fmt::format("Mean slope x {} = {}", format_grouped(m, 2),
                                      format_grouped(projected_change(kf.slopes.mean, m), 2)));
        tables.push_back(std::move(t));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::TooFewValues) throw;
        err << "note: key figures not available (" << e.detail() << ")\n";
      }
      if (!fit_output.empty()) write_text(fit_output, fits_to_json(fits));
      emit(out, tables, fmt_choice);
    } else if (rank->parsed()) {
      const Corpus corpus = read_corpus(input);
      emit(out, {render_ranked(rank_by_slope(fit_all(corpus, fit_flags.options())))}, fmt_choice);
    } else if (drill->parsed()) {
      const Corpus corpus = read_corpus(input);
      const CtCorpus ct = read_ct(ct_path, corpus);
      const Drilldown d = drilldown(ct, field_id, year, top_k, fit_flags.options());
      std::vector<TableDoc> tables{render_ct_table(d)};
      if (!d.fits.empty()) {
        TableDoc r = render_ranked(d.ranked);
        r.title = fmt::format("Rate of change of the top terms, {}-{}", d.fit_range->first, d.fit_range->second);
        tables.push_back(std::move(r));
      } else {
        err << "note: controlled-term data spans fewer than 3 shared years; trends skipped\n";
      }
      emit(out, tables, fmt_choice);
    } else if (plot->parsed()) {
      const ChartKind kind = *parse_chart_kind(kind_name);
      const Corpus corpus = read_corpus(input);
      ChartData data;
      if (!ct_path.empty()) {
        if (field_id.empty() || !plot_year) {
          err << "error: --ct needs --field and --year\n";
          return kExitUsage;
        }
        const CtCorpus ct = read_ct(ct_path, corpus);
        const Drilldown d = drilldown(ct, field_id, *plot_year, top_k, fit_flags.options());
        if (kind == ChartKind::Spaghetti) {
          data = spaghetti_from_terms(ct, d);
        } else if (kind == ChartKind::CiDot) {
          if (d.fits.empty()) throw Error(ErrorKind::TooFewYears, "controlled-term data spans fewer than 3 shared years");
          data = CiDotData{"Rate of change of the top controlled terms", d.ranked};
        } else {
          err << "error: --ct supports only spaghetti and ci charts\n";
          return kExitUsage;
        }
      } else {
        switch (kind) {
          case ChartKind::Spaghetti: data = spaghetti_from_corpus(corpus, !no_total); break;
          case ChartKind::Histogram: {
            std::vector<double> values;
            for (const auto& f : corpus.fields()) {
              const DiffSeries ds = year_over_year(f);
              for (std::size_t i = 0; i < ds.diffs.size(); ++i) {
                if (!plot_year || ds.years[i] == *plot_year) values.push_back(static_cast<double>(ds.diffs[i]));
              }
            }
            if (values.empty()) throw Error(ErrorKind::YearOutOfRange, "no differences for the requested year");
            std::string title = "Annual changes in the number of publications";
            if (plot_year) title += fmt::format(" ({})", *plot_year);
            data = HistogramData{title, histogram(values, bins)};
            break;
          }
          case ChartKind::Box: data = box_from_corpus(corpus); break;
          case ChartKind::CiDot:
            data = CiDotData{"Rate of change ranked from low to high", rank_by_slope(fit_all(corpus, fit_flags.options()))};
            break;
          case ChartKind::Scatter: {
            const auto fits = fit_all(corpus, fit_flags.options());
            data = scatter_from_fits(fits);
            break;
          }
        }
      }
      write_text(plot_out, render_chart(kind, data, chart_options).svg);
    } else if (simulate->parsed()) {
      spec.intercept_range = {intercepts[0], intercepts[1]};
      spec.slope_range = {slopes[0], slopes[1]};
      const SyntheticPanel panel = generate(spec);
      const std::string csv = write_counts(panel.corpus);
      if (sim_out.empty() || sim_out == "-") out << csv;
      else write_text(sim_out, csv);
      if (panel.truth.any_clamped()) err << "note: some generated counts were clamped at 0\n";
      if (coverage_trials > 0) {
        const CoverageResult r = coverage_experiment(spec, coverage_trials, fit_flags.level, *parse_hc_variant(fit_flags.hc));
        err << fmt::format("coverage at level {:g} ({}): {:.4f} ({}/{})\n", r.level, fit_flags.hc, r.fraction(),
                           r.covered, r.total);
      }
    } else if (sample->parsed()) {
      std::istringstream in(read_text(titles_path));
      const auto rows = load_titles(in);
      const auto picked = sample_titles(rows, {field_id, ct_name, year}, k, seed);
      emit(out,
           {render_titles(picked, fmt::format("Titles of {} randomly selected publications from {} in {} / {}", k, year,
                                              field_id, ct_name))},
           fmt_choice);
    } else if (report->parsed()) {
      const Corpus corpus = read_corpus(input);
      ReportConfig cfg;
      cfg.fit = fit_flags.options();
      cfg.bins = bins;
      for (const auto& name : chart_names) cfg.charts.push_back(*parse_chart_kind(name));
      std::optional<CtCorpus> ct;
      if (!ct_path.empty()) {
        if (field_id.empty() || !plot_year) {
          err << "error: --ct needs --field and --year\n";
          return kExitUsage;
        }
        ct = read_ct(ct_path, corpus);
        cfg.drilldown = DrilldownRequest{field_id, *plot_year, top_k};
      }
      const ReportManifest m = pipeline_report(corpus, ct ? &*ct : nullptr, cfg, out_dir);
      for (const auto& a : m.artifacts) out << a.sha256 << "  " << a.name << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? kExitNumerical : kExitData;
  }
  return kExitOk;
}

}  // namespace fieldtrend
