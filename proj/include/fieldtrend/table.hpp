#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fieldtrend/domain.hpp"
#include "fieldtrend/regression.hpp"
#include "fieldtrend/stats.hpp"

namespace fieldtrend {

struct Real {
  double value = 0.0;
  int decimals = 2;
};

// Integer printed without thousands separators (years).
struct Year {
  std::int64_t value = 0;
};

// Empty cells render as blank (text, CSV) and null (JSON).
using TableCell = std::variant<std::monostate, std::string, std::int64_t, Real, Year>;

struct TableDoc {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<TableCell>> rows;
  std::vector<std::string> notes;

  void add_row(std::vector<TableCell> row);  // throws InvalidSpec if not rectangular
};

enum class TableFormat { Text, Csv, Json };

// Aligned text with thousands separators; for people, not for parsing.
std::string render_text(const TableDoc& table);
// Fixed decimals, no separators. Notes are not part of the CSV target.
std::string render_csv(const TableDoc& table);
// Numbers at full precision.
std::string render_json(const TableDoc& table);
std::string render(const TableDoc& table, TableFormat format);

// 1234567.891 -> "1,234,567.89"
std::string format_grouped(double value, int decimals);
std::string format_grouped(std::int64_t value);

TableDoc render_summary_table(std::span<const YearStats> rows,
                              std::string title = "Key figures for the number of publications by year");
TableDoc render_diff_table(std::span<const YearStats> rows);
TableDoc render_field_diffs(const FieldSeries& series);
TableDoc render_fit_table(const FitKeyFigures& key_figures);
TableDoc render_fits(std::span<const TrendFit> fits);
TableDoc render_ranked(const RankedFits& ranked);
TableDoc render_ct_table(const Drilldown& drilldown);
TableDoc render_titles(std::span<const TitleRecord> rows, std::string title);

}  // namespace fieldtrend
