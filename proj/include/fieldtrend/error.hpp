#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fieldtrend {

enum class ErrorKind {
  EmptyInput,
  MismatchedYearRange,
  DuplicateFieldId,
  RangeOutOfBounds,
  InvalidSeries,
  TooFewValues,
  TooFewYears,
  LengthMismatch,
  ZeroVariance,
  DegenerateDesign,
  InvalidProbability,
  InvalidDf,
  UnknownField,
  YearOutOfRange,
  ParseError,
  DuplicateCell,
  NegativeCount,
  UnknownParentField,
  CountExceedsParentTotal,
  NotEnoughRecords,
  InvalidSpec,
  EmptyData,
  KindMismatch,
  NonConvergence,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure in the library is reported through this type. Ingestion
// errors carry the 1-based line number of the offending row.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  // what() without the kind/line prefix.
  const std::string& detail() const noexcept { return detail_; }

  // True for failures of numerical routines rather than of the input data.
  bool is_numerical() const noexcept { return kind_ == ErrorKind::NonConvergence; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::optional<std::size_t> line_;
};

}  // namespace fieldtrend
