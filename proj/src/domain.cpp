#include "fieldtrend/domain.hpp"

#include <algorithm>
#include <tuple>
#include <utility>

#include "fieldtrend/error.hpp"

namespace fieldtrend {

namespace {

void check_counts(const std::string& who, const std::vector<Count>& counts) {
  if (counts.empty()) throw Error(ErrorKind::InvalidSeries, who + ": no years");
  for (Count c : counts) {
    if (c < 0) throw Error(ErrorKind::NegativeCount, who + ": negative count");
  }
}

std::string range_text(int first, int last) {
  return std::to_string(first) + "-" + std::to_string(last);
}

}  // namespace

FieldSeries::FieldSeries(std::string id, std::string name, std::string broad_section,
                         int first_year, std::vector<Count> counts)
    : id_(std::move(id)),
      name_(std::move(name)),
      broad_section_(std::move(broad_section)),
      first_year_(first_year),
      counts_(std::move(counts)) {
  if (id_.empty()) throw Error(ErrorKind::InvalidSeries, "empty field_id");
  check_counts("field " + id_, counts_);
}

FieldSeries FieldSeries::from_columns(std::string id, std::string name,
                                      std::string broad_section,
                                      std::span<const int> years,
                                      std::span<const Count> counts) {
  if (years.size() != counts.size()) {
    throw Error(ErrorKind::LengthMismatch, "field " + id + ": years and counts differ in length");
  }
  if (years.empty()) throw Error(ErrorKind::InvalidSeries, "field " + id + ": no years");
  for (std::size_t k = 1; k < years.size(); ++k) {
    if (years[k] != years[k - 1] + 1) {
      throw Error(ErrorKind::InvalidSeries,
                  "field " + id + ": years not contiguous at " + std::to_string(years[k]));
    }
  }
  return FieldSeries(std::move(id), std::move(name), std::move(broad_section), years.front(),
                     std::vector<Count>(counts.begin(), counts.end()));
}

std::vector<int> FieldSeries::years() const {
  std::vector<int> out(counts_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = first_year_ + static_cast<int>(k);
  return out;
}

std::vector<double> FieldSeries::values() const {
  return std::vector<double>(counts_.begin(), counts_.end());
}

Count FieldSeries::count_at(int year) const {
  if (!covers(year)) {
    throw Error(ErrorKind::YearOutOfRange, "field " + id_ + " has no year " + std::to_string(year));
  }
  return counts_[static_cast<std::size_t>(year - first_year_)];
}

std::vector<int> Corpus::years() const {
  std::vector<int> out;
  for (int y = first_year_; y <= last_year_; ++y) out.push_back(y);
  return out;
}

const FieldSeries* Corpus::find(std::string_view id) const noexcept {
  auto it = std::lower_bound(fields_.begin(), fields_.end(), id,
                             [](const FieldSeries& f, std::string_view key) { return f.id() < key; });
  if (it == fields_.end() || it->id() != id) return nullptr;
  return &*it;
}

const FieldSeries& Corpus::at(std::string_view id) const {
  if (const FieldSeries* f = find(id)) return *f;
  throw Error(ErrorKind::UnknownField, "unknown field '" + std::string(id) + "'");
}

Corpus build_corpus(std::vector<FieldSeries> series) {
  if (series.empty()) throw Error(ErrorKind::EmptyInput, "corpus needs at least one field");
  const int first = series.front().first_year();
  const int last = series.front().last_year();
  for (const auto& s : series) {
    if (s.first_year() != first || s.last_year() != last) {
      throw Error(ErrorKind::MismatchedYearRange,
                  "field " + s.id() + " spans " + range_text(s.first_year(), s.last_year()) +
                      ", expected " + range_text(first, last));
    }
  }
  if (last - first + 1 < 2) throw Error(ErrorKind::TooFewYears, "corpus needs at least two years");

  std::sort(series.begin(), series.end(),
            [](const FieldSeries& a, const FieldSeries& b) { return a.id() < b.id(); });
  auto dup = std::adjacent_find(series.begin(), series.end(),
                                [](const FieldSeries& a, const FieldSeries& b) { return a.id() == b.id(); });
  if (dup != series.end()) throw Error(ErrorKind::DuplicateFieldId, "duplicate field_id '" + dup->id() + "'");

  Corpus c;
  c.fields_ = std::move(series);
  c.first_year_ = first;
  c.last_year_ = last;
  return c;
}

Corpus slice_years(const Corpus& corpus, int first, int last) {
  if (first > last || first < corpus.first_year() || last > corpus.last_year()) {
    throw Error(ErrorKind::RangeOutOfBounds,
                "slice " + range_text(first, last) + " outside " +
                    range_text(corpus.first_year(), corpus.last_year()));
  }
  std::vector<FieldSeries> out;
  out.reserve(corpus.size());
  for (const auto& f : corpus.fields()) {
    auto counts = f.counts().subspan(static_cast<std::size_t>(first - f.first_year()),
                                     static_cast<std::size_t>(last - first + 1));
    out.emplace_back(f.id(), f.name(), f.broad_section(), first,
                     std::vector<Count>(counts.begin(), counts.end()));
  }
  return build_corpus(std::move(out));
}

CtSeries::CtSeries(std::string parent_field_id, std::string ct_name, int first_year,
                   std::vector<Count> counts)
    : parent_(std::move(parent_field_id)),
      name_(std::move(ct_name)),
      first_year_(first_year),
      counts_(std::move(counts)) {
  if (parent_.empty()) throw Error(ErrorKind::InvalidSeries, "empty parent field_id");
  if (name_.empty()) throw Error(ErrorKind::InvalidSeries, "empty ct_name in field " + parent_);
  check_counts("term " + name_, counts_);
}

std::vector<double> CtSeries::values() const {
  return std::vector<double>(counts_.begin(), counts_.end());
}

Count CtSeries::count_at(int year) const {
  if (!covers(year)) {
    throw Error(ErrorKind::YearOutOfRange, "term " + name_ + " has no year " + std::to_string(year));
  }
  return counts_[static_cast<std::size_t>(year - first_year_)];
}

std::vector<const CtSeries*> CtCorpus::terms_of(std::string_view field_id) const {
  std::vector<const CtSeries*> out;
  for (const auto& t : terms_) {
    if (t.parent_field_id() == field_id) out.push_back(&t);
  }
  return out;
}

CtCorpus build_ct_corpus(std::vector<CtSeries> terms, Corpus parent) {
  for (const auto& t : terms) {
    const FieldSeries* field = parent.find(t.parent_field_id());
    if (!field) {
      throw Error(ErrorKind::UnknownParentField,
                  "term '" + t.ct_name() + "' references unknown field '" + t.parent_field_id() + "'");
    }
    if (t.first_year() < parent.first_year() || t.last_year() > parent.last_year()) {
      throw Error(ErrorKind::RangeOutOfBounds,
                  "term '" + t.ct_name() + "' spans " + range_text(t.first_year(), t.last_year()) +
                      " outside the parent range");
    }
    for (int y = t.first_year(); y <= t.last_year(); ++y) {
      if (t.count_at(y) > field->count_at(y)) {
        throw Error(ErrorKind::CountExceedsParentTotal,
                    "term '" + t.ct_name() + "' in " + std::to_string(y) + ": " +
                        std::to_string(t.count_at(y)) + " > field total " +
                        std::to_string(field->count_at(y)));
      }
    }
  }
  std::sort(terms.begin(), terms.end(), [](const CtSeries& a, const CtSeries& b) {
    return std::tie(a.parent_field_id(), a.ct_name()) < std::tie(b.parent_field_id(), b.ct_name());
  });
  for (std::size_t k = 1; k < terms.size(); ++k) {
    if (terms[k].parent_field_id() == terms[k - 1].parent_field_id() &&
        terms[k].ct_name() == terms[k - 1].ct_name()) {
      throw Error(ErrorKind::DuplicateFieldId,
                  "duplicate term '" + terms[k].ct_name() + "' in field " + terms[k].parent_field_id());
    }
  }
  CtCorpus c(std::move(parent));
  c.terms_ = std::move(terms);
  return c;
}

}  // namespace fieldtrend
