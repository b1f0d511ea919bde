#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fieldtrend/domain.hpp"
#include "fieldtrend/regression.hpp"

namespace fieldtrend {

struct SyntheticSpec {
  std::size_t n_fields = 80;
  int first_year = 2014;
  int n_years = 7;
  std::pair<double, double> intercept_range{500.0, 110000.0};
  std::pair<double, double> slope_range{-1700.0, 5300.0};
  double noise_sd = 1500.0;
  std::uint64_t seed = 42;
  // Round the drawn intercept and slope to integers so noise-free panels are
  // exact integer lines.
  bool integral_coefficients = false;

  void validate() const;  // throws InvalidSpec
};

struct FieldTruth {
  std::string field_id;
  double b0 = 0.0;  // at T = 0, i.e. the first year
  double b1 = 0.0;
  bool clamped = false;  // some count was raised to 0
};

struct GroundTruth {
  std::vector<FieldTruth> fields;  // canonical field order

  bool any_clamped() const noexcept;
};

struct SyntheticPanel {
  Corpus corpus;
  GroundTruth truth;
};

// Ids are "F" + index zero-padded to the width of n_fields, so the
// generation order equals the canonical order.
std::string synthetic_field_id(std::size_t index, std::size_t n_fields);

SyntheticPanel generate(const SyntheticSpec& spec);

struct CoverageResult {
  double level = 0.0;
  std::size_t covered = 0;
  std::size_t total = 0;

  double fraction() const noexcept { return total ? static_cast<double>(covered) / static_cast<double>(total) : 0.0; }
};

// Trial t regenerates the panel with seed spec.seed + t, fits every field
// and checks whether the CI holds the true slope.
CoverageResult coverage_experiment(const SyntheticSpec& spec, std::size_t trials, double level,
                                   HcVariant variant = HcVariant::HC1);

// Same trials evaluated at several levels at once.
std::vector<CoverageResult> coverage_experiment(const SyntheticSpec& spec, std::size_t trials,
                                                std::span<const double> levels,
                                                HcVariant variant = HcVariant::HC1);

}  // namespace fieldtrend
