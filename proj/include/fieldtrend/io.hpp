#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "fieldtrend/domain.hpp"

namespace fieldtrend {

inline constexpr std::string_view kCountsHeader = "field_id,field_name,broad_section,year,count";
inline constexpr std::string_view kCtHeader = "field_id,ct_name,year,count";
inline constexpr std::string_view kTitlesHeader = "field_id,year,ct_name,title";

// One parsed CSV record and the 1-based line on which it starts.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

// Comma-separated, double-quote escaping, LF or CRLF line ends. Quoted
// cells may span lines.
std::vector<CsvRecord> parse_csv(std::istream& in);

// Quotes a cell only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view cell);

Corpus load_counts(std::istream& in);
std::string write_counts(const Corpus& corpus);

CtCorpus load_ct(std::istream& in, const Corpus& parent);
std::string write_ct(const CtCorpus& ct_corpus);

std::vector<TitleRecord> load_titles(std::istream& in);
std::string write_titles(const std::vector<TitleRecord>& rows);

struct TitleFilter {
  std::string field_id;
  std::string ct_name;
  int year = 0;
};

// Uniform sample of k records without replacement. Matching records are put
// in canonical order (field_id, year, ct_name, title, input index) and a
// partial Fisher-Yates shuffle driven by SplitMix64(seed) picks k of them.
// The result is returned in input order.
std::vector<TitleRecord> sample_titles(const std::vector<TitleRecord>& rows, const TitleFilter& filter,
                                       std::size_t k, std::uint64_t seed);

// Whole-file helpers; "-" reads standard input.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace fieldtrend
