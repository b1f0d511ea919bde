#include "fieldtrend/error.hpp"

namespace fieldtrend {

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out = to_string(kind);
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MismatchedYearRange: return "MismatchedYearRange";
    case ErrorKind::DuplicateFieldId: return "DuplicateFieldId";
    case ErrorKind::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorKind::InvalidSeries: return "InvalidSeries";
    case ErrorKind::TooFewValues: return "TooFewValues";
    case ErrorKind::TooFewYears: return "TooFewYears";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::DegenerateDesign: return "DegenerateDesign";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::InvalidDf: return "InvalidDf";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::YearOutOfRange: return "YearOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateCell: return "DuplicateCell";
    case ErrorKind::NegativeCount: return "NegativeCount";
    case ErrorKind::UnknownParentField: return "UnknownParentField";
    case ErrorKind::CountExceedsParentTotal: return "CountExceedsParentTotal";
    case ErrorKind::NotEnoughRecords: return "NotEnoughRecords";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(kind, message, line)), kind_(kind), detail_(message), line_(line) {}

}  // namespace fieldtrend
