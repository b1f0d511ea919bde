#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fieldtrend/chart.hpp"
#include "fieldtrend/error.hpp"
#include "fieldtrend/io.hpp"
#include "fieldtrend/pipeline.hpp"
#include "fieldtrend/regression.hpp"
#include "fieldtrend/stats.hpp"
#include "fieldtrend/synthetic.hpp"
#include "fieldtrend/table.hpp"
#include "fieldtrend/tdist.hpp"

namespace py = pybind11;
using namespace fieldtrend;

namespace {

FitOptions fit_options(std::optional<int> baseline_year, const std::string& hc, double level) {
  const auto variant = parse_hc_variant(hc);
  if (!variant) throw Error(ErrorKind::InvalidSpec, "hc must be 'hc0' or 'hc1', got '" + hc + "'");
  return {baseline_year, *variant, level};
}

Corpus corpus_from_text(const std::string& text) {
  std::istringstream in(text);
  return load_counts(in);
}

CtCorpus ct_from_text(const std::string& text, const Corpus& parent) {
  std::istringstream in(text);
  return load_ct(in, parent);
}

std::vector<TitleRecord> titles_from_text(const std::string& text) {
  std::istringstream in(text);
  return load_titles(in);
}

TableFormat table_format(const std::string& name) {
  if (name == "text") return TableFormat::Text;
  if (name == "csv") return TableFormat::Csv;
  if (name == "json") return TableFormat::Json;
  throw Error(ErrorKind::InvalidSpec, "format must be text, csv or json");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Publication-count trend analysis: OLS growth fits with robust standard errors";

  static py::exception<Error> error_type(m, "FieldtrendError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = to_string(e.kind());
      exc.attr("line") = e.line() ? py::cast(*e.line()) : py::none();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<FieldSeries>(m, "FieldSeries")
      .def(py::init<std::string, std::string, std::string, int, std::vector<Count>>(), py::arg("field_id"),
           py::arg("name"), py::arg("broad_section"), py::arg("first_year"), py::arg("counts"))
      .def_property_readonly("field_id", &FieldSeries::id)
      .def_property_readonly("name", &FieldSeries::name)
      .def_property_readonly("broad_section", &FieldSeries::broad_section)
      .def_property_readonly("first_year", &FieldSeries::first_year)
      .def_property_readonly("last_year", &FieldSeries::last_year)
      .def_property_readonly("years", &FieldSeries::years)
      .def_property_readonly("counts", [](const FieldSeries& s) { return std::vector<Count>(s.counts().begin(), s.counts().end()); })
      .def("count_at", &FieldSeries::count_at)
      .def("__repr__", [](const FieldSeries& s) {
        return "<FieldSeries " + s.id() + " " + std::to_string(s.first_year()) + "-" + std::to_string(s.last_year()) + ">";
      });

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("fields", &Corpus::fields)
      .def_property_readonly("first_year", &Corpus::first_year)
      .def_property_readonly("last_year", &Corpus::last_year)
      .def_property_readonly("years", &Corpus::years)
      .def("__len__", &Corpus::size)
      .def("__getitem__", &Corpus::at, py::return_value_policy::copy)
      .def("__eq__", [](const Corpus& a, const Corpus& b) { return a == b; });

  py::class_<CtCorpus>(m, "CtCorpus")
      .def_property_readonly("parent", &CtCorpus::parent)
      .def("__len__", [](const CtCorpus& c) { return c.terms().size(); });

  py::class_<TitleRecord>(m, "TitleRecord")
      .def(py::init<std::string, int, std::string, std::string>(), py::arg("field_id"), py::arg("year"),
           py::arg("ct_name"), py::arg("title"))
      .def_readonly("field_id", &TitleRecord::field_id)
      .def_readonly("year", &TitleRecord::year)
      .def_readonly("ct_name", &TitleRecord::ct_name)
      .def_readonly("title", &TitleRecord::title)
      .def("__eq__", [](const TitleRecord& a, const TitleRecord& b) { return a == b; });

  py::class_<SummaryStats>(m, "SummaryStats")
      .def_readonly("n", &SummaryStats::n)
      .def_readonly("mean", &SummaryStats::mean)
      .def_readonly("median", &SummaryStats::median)
      .def_readonly("sd", &SummaryStats::sd)
      .def_readonly("min", &SummaryStats::min)
      .def_readonly("max", &SummaryStats::max);

  py::class_<YearStats>(m, "YearStats").def_readonly("year", &YearStats::year).def_readonly("stats", &YearStats::stats);

  py::class_<TukeyBox>(m, "TukeyBox")
      .def_readonly("q1", &TukeyBox::q1)
      .def_readonly("median", &TukeyBox::median)
      .def_readonly("q3", &TukeyBox::q3)
      .def_readonly("iqr", &TukeyBox::iqr)
      .def_readonly("lower_fence", &TukeyBox::lower_fence)
      .def_readonly("upper_fence", &TukeyBox::upper_fence)
      .def_readonly("lower_adjacent", &TukeyBox::lower_adjacent)
      .def_readonly("upper_adjacent", &TukeyBox::upper_adjacent)
      .def_readonly("outliers", &TukeyBox::outliers);

  py::class_<ConfidenceInterval>(m, "ConfidenceInterval")
      .def_readonly("level", &ConfidenceInterval::level)
      .def_readonly("lower", &ConfidenceInterval::lower)
      .def_readonly("upper", &ConfidenceInterval::upper)
      .def("contains", &ConfidenceInterval::contains);

  py::class_<TrendFit>(m, "TrendFit")
      .def_readonly("series_id", &TrendFit::series_id)
      .def_readonly("group", &TrendFit::group)
      .def_readonly("first_year", &TrendFit::first_year)
      .def_readonly("baseline_year", &TrendFit::baseline_year)
      .def_readonly("n", &TrendFit::n)
      .def_readonly("b0", &TrendFit::b0)
      .def_readonly("b1", &TrendFit::b1)
      .def_readonly("residuals", &TrendFit::residuals)
      .def_readonly("sigma2", &TrendFit::sigma2)
      .def_readonly("df", &TrendFit::df)
      .def_readonly("se_b0", &TrendFit::se_b0)
      .def_readonly("se_b1", &TrendFit::se_b1)
      .def_readonly("ci_b1", &TrendFit::ci_b1)
      .def_property_readonly("hc_variant",
                             [](const TrendFit& f) -> std::optional<std::string> {
                               if (!f.hc_variant) return std::nullopt;
                               return to_string(*f.hc_variant);
                             })
      .def("__repr__", [](const TrendFit& f) {
        return "<TrendFit " + f.series_id + " b0=" + std::to_string(f.b0) + " b1=" + std::to_string(f.b1) + ">";
      });

  py::class_<FitKeyFigures>(m, "FitKeyFigures")
      .def_readonly("intercepts", &FitKeyFigures::intercepts)
      .def_readonly("slopes", &FitKeyFigures::slopes)
      .def_readonly("intercept_slope_r", &FitKeyFigures::intercept_slope_r);

  py::class_<CtFrequency>(m, "CtFrequency")
      .def_readonly("ct_name", &CtFrequency::ct_name)
      .def_readonly("count", &CtFrequency::count)
      .def_readonly("percent", &CtFrequency::percent);

  py::class_<Drilldown>(m, "Drilldown")
      .def_readonly("field_id", &Drilldown::field_id)
      .def_readonly("focus_year", &Drilldown::focus_year)
      .def_readonly("parent_total", &Drilldown::parent_total)
      .def_readonly("top", &Drilldown::top)
      .def_readonly("fit_range", &Drilldown::fit_range)
      .def_readonly("fits", &Drilldown::fits)
      .def_property_readonly("ranked", [](const Drilldown& d) { return d.ranked.fits; });

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("n_fields", &SyntheticSpec::n_fields)
      .def_readwrite("first_year", &SyntheticSpec::first_year)
      .def_readwrite("n_years", &SyntheticSpec::n_years)
      .def_readwrite("intercept_range", &SyntheticSpec::intercept_range)
      .def_readwrite("slope_range", &SyntheticSpec::slope_range)
      .def_readwrite("noise_sd", &SyntheticSpec::noise_sd)
      .def_readwrite("seed", &SyntheticSpec::seed)
      .def_readwrite("integral_coefficients", &SyntheticSpec::integral_coefficients);

  py::class_<FieldTruth>(m, "FieldTruth")
      .def_readonly("field_id", &FieldTruth::field_id)
      .def_readonly("b0", &FieldTruth::b0)
      .def_readonly("b1", &FieldTruth::b1)
      .def_readonly("clamped", &FieldTruth::clamped);

  py::class_<CoverageResult>(m, "CoverageResult")
      .def_readonly("level", &CoverageResult::level)
      .def_readonly("covered", &CoverageResult::covered)
      .def_readonly("total", &CoverageResult::total)
      .def_property_readonly("fraction", &CoverageResult::fraction);

  py::class_<ReportArtifact>(m, "ReportArtifact")
      .def_readonly("name", &ReportArtifact::name)
      .def_readonly("bytes", &ReportArtifact::bytes)
      .def_readonly("sha256", &ReportArtifact::sha256);

  // ingestion
  m.def("build_corpus", &build_corpus, py::arg("series"));
  m.def("slice_years", &slice_years, py::arg("corpus"), py::arg("first"), py::arg("last"));
  m.def("load_counts", &corpus_from_text, py::arg("text"), "Parse a counts CSV given as text");
  m.def("load_counts_file", [](const std::filesystem::path& p) { return corpus_from_text(read_text(p)); },
        py::arg("path"));
  m.def("write_counts", &write_counts, py::arg("corpus"));
  m.def("load_ct", &ct_from_text, py::arg("text"), py::arg("parent"));
  m.def("load_titles", &titles_from_text, py::arg("text"));
  m.def(
      "sample_titles",
      [](const std::vector<TitleRecord>& rows, const std::string& field_id, const std::string& ct_name, int year,
         std::size_t k, std::uint64_t seed) { return sample_titles(rows, {field_id, ct_name, year}, k, seed); },
      py::arg("rows"), py::arg("field_id"), py::arg("ct_name"), py::arg("year"), py::arg("k"), py::arg("seed"));

  // statistics
  m.def("summarize", [](const std::vector<double>& v) { return summarize(v); }, py::arg("values"));
  m.def("tukey_box", [](const std::vector<double>& v) { return tukey_box(v); }, py::arg("values"));
  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
        py::arg("xs"), py::arg("ys"));
  m.def("year_over_year", [](const FieldSeries& s) { return year_over_year(s).diffs; }, py::arg("series"));
  m.def("per_year_summary", &per_year_summary, py::arg("corpus"));
  m.def("diff_key_figures", &diff_key_figures, py::arg("corpus"));
  m.def("aggregate_total", &aggregate_total, py::arg("corpus"));
  m.def("t_cdf", &t_cdf, py::arg("t"), py::arg("df"));
  m.def("t_quantile", &t_quantile, py::arg("p"), py::arg("df"));

  // regression
  m.def(
      "ols_fit",
      [](const std::vector<double>& counts, int first_year, std::optional<int> baseline_year, const std::string& id) {
        return ols_fit(id, first_year, counts, baseline_year);
      },
      py::arg("counts"), py::arg("first_year") = 0, py::arg("baseline_year") = py::none(), py::arg("series_id") = "");
  m.def(
      "fit_series",
      [](const FieldSeries& s, std::optional<int> baseline, const std::string& hc, double level) {
        return fit_series(s, fit_options(baseline, hc, level));
      },
      py::arg("series"), py::arg("baseline_year") = py::none(), py::arg("hc") = "hc1", py::arg("level") = 0.95);
  m.def(
      "fit_all",
      [](const Corpus& c, std::optional<int> baseline, const std::string& hc, double level) {
        py::gil_scoped_release release;
        return fit_all(c, fit_options(baseline, hc, level));
      },
      py::arg("corpus"), py::arg("baseline_year") = py::none(), py::arg("hc") = "hc1", py::arg("level") = 0.95);
  m.def(
      "robust_variance",
      [](const TrendFit& f, const std::string& hc) {
        const auto v = robust_variance(f, fit_options(std::nullopt, hc, 0.95).variant);
        return py::make_tuple(v.var_b0, v.var_b1, v.cov_b0b1);
      },
      py::arg("fit"), py::arg("hc") = "hc1");
  m.def("fit_key_figures", [](const std::vector<TrendFit>& fits) { return fit_key_figures(fits); }, py::arg("fits"));
  m.def("rank_by_slope", [](std::vector<TrendFit> fits) { return rank_by_slope(std::move(fits)).fits; },
        py::arg("fits"));
  m.def("projected_change", py::overload_cast<const TrendFit&, std::optional<double>>(&projected_change),
        py::arg("fit"), py::arg("multiplier") = py::none());
  m.def("percent_of", &percent_of, py::arg("part"), py::arg("total"));
  m.def(
      "drilldown",
      [](const CtCorpus& ct, const std::string& field, int year, std::size_t top_k, const std::string& hc, double level) {
        return drilldown(ct, field, year, top_k, fit_options(std::nullopt, hc, level));
      },
      py::arg("ct_corpus"), py::arg("field_id"), py::arg("year"), py::arg("top_k") = 10, py::arg("hc") = "hc1",
      py::arg("level") = 0.95);

  // synthetic panels
  m.def(
      "generate",
      [](const SyntheticSpec& spec) {
        auto panel = generate(spec);
        return py::make_tuple(std::move(panel.corpus), std::move(panel.truth.fields));
      },
      py::arg("spec"), "Returns (corpus, ground truth per field)");
  m.def(
      "coverage_experiment",
      [](const SyntheticSpec& spec, std::size_t trials, std::vector<double> levels, const std::string& hc) {
        const auto variant = fit_options(std::nullopt, hc, 0.95).variant;
        py::gil_scoped_release release;
        return coverage_experiment(spec, trials, levels, variant);
      },
      py::arg("spec"), py::arg("trials"), py::arg("levels"), py::arg("hc") = "hc1");

  // rendering
  m.def(
      "summary_table",
      [](const Corpus& c, const std::string& format) { return render(render_summary_table(per_year_summary(c)), table_format(format)); },
      py::arg("corpus"), py::arg("format") = "text");
  m.def(
      "ranked_table",
      [](const std::vector<TrendFit>& fits, const std::string& format) {
        return render(render_ranked(rank_by_slope(fits)), table_format(format));
      },
      py::arg("fits"), py::arg("format") = "text");
  m.def(
      "spaghetti_svg",
      [](const Corpus& c, bool include_total, int width, int height) {
        return render_chart(ChartKind::Spaghetti, spaghetti_from_corpus(c, include_total), {width, height}).svg;
      },
      py::arg("corpus"), py::arg("include_total") = true, py::arg("width") = 800, py::arg("height") = 500);
  m.def(
      "ci_svg",
      [](const std::vector<TrendFit>& fits, const std::string& title, int width, int height) {
        return render_chart(ChartKind::CiDot, CiDotData{title, rank_by_slope(fits)}, {width, height}).svg;
      },
      py::arg("fits"), py::arg("title") = "", py::arg("width") = 800, py::arg("height") = 500);
  m.def(
      "pipeline_report",
      [](const Corpus& c, const std::filesystem::path& out_dir, std::optional<int> baseline, const std::string& hc,
         double level) {
        ReportConfig config;
        config.fit = fit_options(baseline, hc, level);
        return pipeline_report(c, nullptr, config, out_dir).artifacts;
      },
      py::arg("corpus"), py::arg("out_dir"), py::arg("baseline_year") = py::none(), py::arg("hc") = "hc1",
      py::arg("level") = 0.95);
  m.def("sha256_hex", [](const std::string& data) { return sha256_hex(data); }, py::arg("data"));
}
