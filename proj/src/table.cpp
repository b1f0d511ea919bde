#include "fieldtrend/table.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include "json.hpp"

#include "fieldtrend/error.hpp"
#include "fieldtrend/io.hpp"

namespace fieldtrend {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string group_digits(std::string digits) {
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i && (n - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

bool is_numeric(const TableCell& cell) {
  return !std::holds_alternative<std::monostate>(cell) && !std::holds_alternative<std::string>(cell);
}

std::string text_cell(const TableCell& cell) {
  return std::visit(Overloaded{
                        [](std::monostate) { return std::string(); },
                        [](const std::string& s) { return s; },
                        [](std::int64_t v) { return format_grouped(v); },
                        [](const Real& r) { return format_grouped(r.value, r.decimals); },
                        [](Year y) { return std::to_string(y.value); },
                    },
                    cell);
}

std::string plain_cell(const TableCell& cell) {
  return std::visit(Overloaded{
                        [](std::monostate) { return std::string(); },
                        [](const std::string& s) { return s; },
                        [](std::int64_t v) { return std::to_string(v); },
                        [](const Real& r) {
                          // Avoid "-0.00".
                          std::string s = fmt::format("{:.{}f}", r.value, r.decimals);
                          if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
                          return s;
                        },
                        [](Year y) { return std::to_string(y.value); },
                    },
                    cell);
}

Real real(double v) { return Real{v, 2}; }

TableCell opt_real(const std::optional<double>& v) {
  if (v) return real(*v);
  return std::monostate{};
}

std::int64_t as_int(double v) { return static_cast<std::int64_t>(std::llround(v)); }

void rtrim(std::string& s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
}

TableDoc stats_table(std::span<const YearStats> rows, std::string title) {
  TableDoc t;
  t.title = std::move(title);
  t.columns = {"Year", "N", "Mean", "Median", "SD", "Min", "Max"};
  for (const auto& r : rows) {
    t.add_row({Year{r.year}, static_cast<std::int64_t>(r.stats.n), real(r.stats.mean), real(r.stats.median),
               opt_real(r.stats.sd), as_int(r.stats.min), as_int(r.stats.max)});
  }
  return t;
}

}  // namespace

void TableDoc::add_row(std::vector<TableCell> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorKind::InvalidSpec, "table '" + title + "': row has " + std::to_string(row.size()) +
                                            " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_grouped(std::int64_t value) {
  const bool negative = value < 0;
  std::string digits = std::to_string(value);
  if (negative) digits.erase(0, 1);
  return (negative ? "-" : "") + group_digits(std::move(digits));
}

std::string format_grouped(double value, int decimals) {
  std::string s = plain_cell(Real{value, decimals});
  const bool negative = s.starts_with('-');
  if (negative) s.erase(0, 1);
  const auto dot = s.find('.');
  std::string int_part = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot);
  return (negative ? "-" : "") + group_digits(std::move(int_part)) + frac;
}

std::string render_text(const TableDoc& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(table.columns.size());
  for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
  for (const auto& row : table.rows) {
    auto& out = cells.emplace_back();
    for (std::size_t c = 0; c < row.size(); ++c) {
      out.push_back(text_cell(row[c]));
      width[c] = std::max(width[c], out.back().size());
    }
  }
  std::vector<bool> right(table.columns.size(), false);
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (is_numeric(row[c])) right[c] = true;
    }
  }

  auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += "  ";
      const std::size_t pad = width[c] - row[c].size();
      if (right[c]) s += std::string(pad, ' ') + row[c];
      else s += row[c] + std::string(pad, ' ');
    }
    rtrim(s);
    return s + '\n';
  };

  std::string out;
  if (!table.title.empty()) out += table.title + "\n\n";
  out += line(table.columns);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  out += line(rule);
  for (const auto& row : cells) out += line(row);
  if (!table.notes.empty()) {
    out += '\n';
    for (const auto& n : table.notes) out += n + '\n';
  }
  return out;
}

std::string render_csv(const TableDoc& table) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_escape(row[c]);
    }
    out += '\n';
  };
  emit(table.columns);
  for (const auto& row : table.rows) {
    std::vector<std::string> plain;
    for (const auto& cell : row) plain.push_back(plain_cell(cell));
    emit(plain);
  }
  return out;
}

std::string render_json(const TableDoc& table) {
  nlohmann::ordered_json doc;
  doc["title"] = table.title;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      std::visit(Overloaded{
                     [&](std::monostate) { jrow.push_back(nullptr); },
                     [&](const std::string& s) { jrow.push_back(s); },
                     [&](std::int64_t v) { jrow.push_back(v); },
                     [&](const Real& r) { jrow.push_back(r.value); },
                     [&](Year y) { jrow.push_back(y.value); },
                 },
                 cell);
    }
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  doc["notes"] = table.notes;
  return doc.dump(2) + '\n';
}

std::string render(const TableDoc& table, TableFormat format) {
  switch (format) {
    case TableFormat::Text: return render_text(table);
    case TableFormat::Csv: return render_csv(table);
    case TableFormat::Json: return render_json(table);
  }
  return {};
}

TableDoc render_summary_table(std::span<const YearStats> rows, std::string title) {
  return stats_table(rows, std::move(title));
}

TableDoc render_diff_table(std::span<const YearStats> rows) {
  return stats_table(rows, "Key figures for the differences to the previous year");
}

TableDoc render_field_diffs(const FieldSeries& series) {
  TableDoc t;
  t.title = "Number of publications of " + series.id() + (series.name().empty() ? "" : " (" + series.name() + ")");
  t.columns = {"Year", "Publications", "Difference to previous year"};
  const auto counts = series.counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    TableCell diff = std::monostate{};
    if (k) diff = counts[k] - counts[k - 1];
    t.add_row({Year{series.first_year() + static_cast<int>(k)}, counts[k], diff});
  }
  return t;
}

TableDoc render_fit_table(const FitKeyFigures& k) {
  TableDoc t;
  t.title = "Key figures for the intercepts and slopes";
  t.columns = {"Variable", "N", "Mean", "SD", "Min", "Max"};
  t.add_row({std::string("Intercept"), static_cast<std::int64_t>(k.intercepts.n), real(k.intercepts.mean),
             opt_real(k.intercepts.sd), real(k.intercepts.min), real(k.intercepts.max)});
  t.add_row({std::string("Slope"), static_cast<std::int64_t>(k.slopes.n), real(k.slopes.mean), opt_real(k.slopes.sd),
             real(k.slopes.min), real(k.slopes.max)});
  t.notes.push_back(fmt::format("Intercept-slope correlation r = {:.2f}", k.intercept_slope_r));
  return t;
}

TableDoc render_fits(std::span<const TrendFit> fits) {
  TableDoc t;
  t.title = "Linear trend per series";
  t.columns = {"Series", "Baseline", "N", "Intercept", "Slope", "SE intercept", "SE slope", "df", "CI lower", "CI upper"};
  for (const auto& f : fits) {
    TableCell lo = std::monostate{}, hi = std::monostate{};
    if (f.ci_b1) {
      lo = real(f.ci_b1->lower);
      hi = real(f.ci_b1->upper);
    }
    t.add_row({f.series_id, Year{f.baseline_year}, static_cast<std::int64_t>(f.n), real(f.b0), real(f.b1),
               real(f.se_b0), real(f.se_b1), std::int64_t{f.df}, lo, hi});
  }
  if (!fits.empty() && fits.front().hc_variant) {
    t.notes.push_back(fmt::format("Robust standard errors ({})", to_string(*fits.front().hc_variant)));
  }
  if (!fits.empty() && fits.front().ci_b1) {
    t.notes.push_back(fmt::format("{:g}% confidence intervals for the slope", fits.front().ci_b1->level * 100.0));
  }
  return t;
}

TableDoc render_ranked(const RankedFits& ranked) {
  TableDoc t;
  t.title = "Rate of change ranked from low to high";
  t.columns = {"Rank", "Series", "Group", "Slope", "SE slope", "CI lower", "CI upper"};
  std::int64_t rank = 0;
  for (const auto& f : ranked.fits) {
    TableCell lo = std::monostate{}, hi = std::monostate{};
    if (f.ci_b1) {
      lo = real(f.ci_b1->lower);
      hi = real(f.ci_b1->upper);
    }
    t.add_row({++rank, f.series_id, f.group, real(f.b1), real(f.se_b1), lo, hi});
  }
  return t;
}

TableDoc render_ct_table(const Drilldown& d) {
  TableDoc t;
  t.title = fmt::format("The {} most frequent controlled terms of {} for publications from {}", d.top.size(),
                        d.field_name.empty() ? d.field_id : d.field_name, d.focus_year);
  t.columns = {"Controlled term", "Number of publications", "In percent"};
  for (const auto& row : d.top) t.add_row({row.ct_name, row.count, real(row.percent)});
  t.add_row({std::string("Total"), d.parent_total, real(100.0)});
  return t;
}

TableDoc render_titles(std::span<const TitleRecord> rows, std::string title) {
  TableDoc t;
  t.title = std::move(title);
  t.columns = {"No.", "Title"};
  std::int64_t k = 0;
  for (const auto& r : rows) t.add_row({++k, r.title});
  return t;
}

}  // namespace fieldtrend
