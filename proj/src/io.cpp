#include "fieldtrend/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "fieldtrend/error.hpp"
#include "fieldtrend/rng.hpp"

namespace fieldtrend {

namespace {

std::string join_header(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

// Returns the data records after checking the header line.
std::vector<CsvRecord> records_with_header(std::istream& in, std::string_view header, std::size_t n_cells) {
  std::vector<CsvRecord> records = parse_csv(in);
  if (records.empty()) throw Error(ErrorKind::ParseError, "missing header, expected '" + std::string(header) + "'", 1);
  if (join_header(records.front().cells) != header) {
    throw Error(ErrorKind::ParseError, "bad header, expected '" + std::string(header) + "'", records.front().line);
  }
  records.erase(records.begin());
  for (const auto& r : records) {
    if (r.cells.size() != n_cells) {
      throw Error(ErrorKind::ParseError,
                  "expected " + std::to_string(n_cells) + " cells, found " + std::to_string(r.cells.size()), r.line);
    }
  }
  return records;
}

int parse_year(std::string_view text, std::size_t line) {
  const bool ok = text.size() == 4 && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!ok) throw Error(ErrorKind::ParseError, "year must be a 4-digit integer, got '" + std::string(text) + "'", line);
  return std::stoi(std::string(text));
}

Count parse_count(std::string_view text, std::size_t line) {
  const bool negative = !text.empty() && text.front() == '-';
  std::string_view digits = negative ? text.substr(1) : text;
  const bool ok = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!ok) throw Error(ErrorKind::ParseError, "count must be a base-10 integer, got '" + std::string(text) + "'", line);
  if (negative) throw Error(ErrorKind::NegativeCount, "negative count " + std::string(text), line);
  Count value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw Error(ErrorKind::ParseError, "count out of range: " + std::string(text), line);
  }
  return value;
}

void require_nonempty(const std::string& cell, const char* what, std::size_t line) {
  if (cell.empty()) throw Error(ErrorKind::ParseError, std::string("empty ") + what, line);
}

struct Cell {
  Count count;
  std::size_t line;
};

// Checks that the collected years are contiguous; returns the counts.
std::vector<Count> contiguous_counts(const std::map<int, Cell>& cells, const std::string& who) {
  std::vector<Count> counts;
  int prev = cells.begin()->first - 1;
  for (const auto& [year, cell] : cells) {
    if (year != prev + 1) {
      throw Error(ErrorKind::MismatchedYearRange,
                  who + ": missing year " + std::to_string(prev + 1), cell.line);
    }
    counts.push_back(cell.count);
    prev = year;
  }
  return counts;
}

void append_row(std::string& out, std::initializer_list<std::string_view> cells) {
  bool first = true;
  for (std::string_view c : cells) {
    if (!first) out += ',';
    out += csv_escape(c);
    first = false;
  }
  out += '\n';
}

}  // namespace

std::vector<CsvRecord> parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    CsvRecord rec;
    rec.line = line;
    std::string cell;
    bool quoted = false;
    bool cell_was_quoted = false;
    bool done = false;
    while (!done) {
      if (i >= text.size()) {
        if (quoted) throw Error(ErrorKind::ParseError, "unterminated quoted cell", rec.line);
        rec.cells.push_back(std::move(cell));
        done = true;
        break;
      }
      const char c = text[i++];
      if (quoted) {
        if (c == '"') {
          if (i < text.size() && text[i] == '"') {
            cell += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          cell += c;
        }
        continue;
      }
      switch (c) {
        case ',':
          rec.cells.push_back(std::move(cell));
          cell.clear();
          cell_was_quoted = false;
          break;
        case '"':
          if (!cell.empty() || cell_was_quoted) {
            throw Error(ErrorKind::ParseError, "quote inside unquoted cell", line);
          }
          quoted = true;
          cell_was_quoted = true;
          break;
        case '\r':
          if (i < text.size() && text[i] == '\n') break;
          cell += c;
          break;
        case '\n':
          ++line;
          rec.cells.push_back(std::move(cell));
          done = true;
          break;
        default:
          if (cell_was_quoted) throw Error(ErrorKind::ParseError, "text after closing quote", line);
          cell += c;
      }
    }
    // Skip blank lines.
    if (rec.cells.size() == 1 && rec.cells.front().empty()) continue;
    records.push_back(std::move(rec));
  }
  return records;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Corpus load_counts(std::istream& in) {
  struct Pending {
    std::string name;
    std::string section;
    std::size_t first_line;
    std::map<int, Cell> cells;
  };
  const auto records = records_with_header(in, kCountsHeader, 5);
  if (records.empty()) throw Error(ErrorKind::EmptyInput, "no data rows", 1);

  std::map<std::string, Pending> fields;
  std::vector<std::string> order;  // first appearance
  for (const auto& r : records) {
    const std::string& id = r.cells[0];
    require_nonempty(id, "field_id", r.line);
    const int year = parse_year(r.cells[3], r.line);
    const Count count = parse_count(r.cells[4], r.line);

    auto [it, inserted] = fields.try_emplace(id, Pending{r.cells[1], r.cells[2], r.line, {}});
    if (inserted) order.push_back(id);
    Pending& p = it->second;
    if (p.name != r.cells[1] || p.section != r.cells[2]) {
      throw Error(ErrorKind::ParseError, "field " + id + ": name or broad_section differs from line " +
                                             std::to_string(p.first_line), r.line);
    }
    if (!p.cells.try_emplace(year, Cell{count, r.line}).second) {
      throw Error(ErrorKind::DuplicateCell, "duplicate row for (" + id + ", " + std::to_string(year) + ")", r.line);
    }
  }

  std::vector<FieldSeries> series;
  for (const auto& id : order) {
    const Pending& p = fields.at(id);
    std::vector<Count> counts = contiguous_counts(p.cells, "field " + id);
    const int first = p.cells.begin()->first;
    if (!series.empty()) {
      const FieldSeries& ref = series.front();
      const int last = first + static_cast<int>(counts.size()) - 1;
      if (first != ref.first_year() || last != ref.last_year()) {
        throw Error(ErrorKind::MismatchedYearRange,
                    "field " + id + " spans " + std::to_string(first) + "-" + std::to_string(last) + ", field " +
                        ref.id() + " spans " + std::to_string(ref.first_year()) + "-" + std::to_string(ref.last_year()),
                    p.first_line);
      }
    }
    series.emplace_back(id, p.name, p.section, first, std::move(counts));
  }
  try {
    return build_corpus(std::move(series));
  } catch (const Error& e) {
    throw Error(e.kind(), e.detail(), records.front().line);
  }
}

std::string write_counts(const Corpus& corpus) {
  std::string out(kCountsHeader);
  out += '\n';
  for (const auto& f : corpus.fields()) {
    for (int y = f.first_year(); y <= f.last_year(); ++y) {
      append_row(out, {f.id(), f.name(), f.broad_section(), std::to_string(y), std::to_string(f.count_at(y))});
    }
  }
  return out;
}

CtCorpus load_ct(std::istream& in, const Corpus& parent) {
  const auto records = records_with_header(in, kCtHeader, 4);
  std::map<std::pair<std::string, std::string>, std::map<int, Cell>> terms;
  for (const auto& r : records) {
    const std::string& field_id = r.cells[0];
    const std::string& ct = r.cells[1];
    require_nonempty(field_id, "field_id", r.line);
    require_nonempty(ct, "ct_name", r.line);
    const int year = parse_year(r.cells[2], r.line);
    const Count count = parse_count(r.cells[3], r.line);

    const FieldSeries* field = parent.find(field_id);
    if (!field) throw Error(ErrorKind::UnknownParentField, "unknown field '" + field_id + "'", r.line);
    if (!field->covers(year)) {
      throw Error(ErrorKind::YearOutOfRange, "year " + std::to_string(year) + " outside the range of field " + field_id,
                  r.line);
    }
    if (count > field->count_at(year)) {
      throw Error(ErrorKind::CountExceedsParentTotal,
                  "'" + ct + "' has " + std::to_string(count) + " publications in " + std::to_string(year) +
                      " but field " + field_id + " has " + std::to_string(field->count_at(year)),
                  r.line);
    }
    if (!terms[{field_id, ct}].try_emplace(year, Cell{count, r.line}).second) {
      throw Error(ErrorKind::DuplicateCell,
                  "duplicate row for (" + field_id + ", " + ct + ", " + std::to_string(year) + ")", r.line);
    }
  }
  std::vector<CtSeries> series;
  for (const auto& [key, cells] : terms) {
    std::vector<Count> counts = contiguous_counts(cells, "term " + key.second);
    series.emplace_back(key.first, key.second, cells.begin()->first, std::move(counts));
  }
  return build_ct_corpus(std::move(series), parent);
}

std::string write_ct(const CtCorpus& ct_corpus) {
  std::string out(kCtHeader);
  out += '\n';
  for (const auto& t : ct_corpus.terms()) {
    for (int y = t.first_year(); y <= t.last_year(); ++y) {
      append_row(out, {t.parent_field_id(), t.ct_name(), std::to_string(y), std::to_string(t.count_at(y))});
    }
  }
  return out;
}

std::vector<TitleRecord> load_titles(std::istream& in) {
  const auto records = records_with_header(in, kTitlesHeader, 4);
  std::vector<TitleRecord> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    require_nonempty(r.cells[0], "field_id", r.line);
    require_nonempty(r.cells[3], "title", r.line);
    rows.push_back({r.cells[0], parse_year(r.cells[1], r.line), r.cells[2], r.cells[3]});
  }
  return rows;
}

std::string write_titles(const std::vector<TitleRecord>& rows) {
  std::string out(kTitlesHeader);
  out += '\n';
  for (const auto& r : rows) append_row(out, {r.field_id, std::to_string(r.year), r.ct_name, r.title});
  return out;
}

std::vector<TitleRecord> sample_titles(const std::vector<TitleRecord>& rows, const TitleFilter& filter,
                                       std::size_t k, std::uint64_t seed) {
  if (k == 0) throw Error(ErrorKind::InvalidSpec, "k must be >= 1");
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.field_id == filter.field_id && r.ct_name == filter.ct_name && r.year == filter.year) pool.push_back(i);
  }
  if (pool.size() < k) {
    throw Error(ErrorKind::NotEnoughRecords,
                "requested " + std::to_string(k) + " titles but only " + std::to_string(pool.size()) + " match");
  }
  std::sort(pool.begin(), pool.end(), [&rows](std::size_t a, std::size_t b) {
    const auto& x = rows[a];
    const auto& y = rows[b];
    return std::tie(x.field_id, x.year, x.ct_name, x.title, a) < std::tie(y.field_id, y.year, y.ct_name, y.title, b);
  });

  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());

  std::vector<TitleRecord> out;
  for (std::size_t i : pool) out.push_back(rows[i]);
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  if (path == "-") {
    return std::string((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace fieldtrend
