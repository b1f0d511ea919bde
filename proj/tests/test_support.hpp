#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fieldtrend/domain.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(FIELDTREND_FIXTURES) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline fieldtrend::FieldSeries series(std::string id, int first_year, std::vector<fieldtrend::Count> counts,
                                      std::string section = "BIO") {
  return fieldtrend::FieldSeries(id, "Field " + id, std::move(section), first_year, std::move(counts));
}

// Random balanced panel; ids are shuffled so input order is not canonical.
inline fieldtrend::Corpus random_corpus(std::mt19937_64& rng, std::size_t n_fields, int first_year, int n_years,
                                        fieldtrend::Count max_count = 200000) {
  std::uniform_int_distribution<fieldtrend::Count> count(0, max_count);
  const char* sections[] = {"BIO", "ORG", "MAC", "APP", "PIA"};
  std::vector<fieldtrend::FieldSeries> out;
  for (std::size_t f = 0; f < n_fields; ++f) {
    std::vector<fieldtrend::Count> c;
    for (int k = 0; k < n_years; ++k) c.push_back(count(rng));
    out.emplace_back("R" + std::to_string(rng() % 1000000) + "_" + std::to_string(f), "Random field, \"" + std::to_string(f) + "\"",
                     sections[f % 5], first_year, std::move(c));
  }
  return fieldtrend::build_corpus(std::move(out));
}

}  // namespace testing_support
