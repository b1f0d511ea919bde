#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fieldtrend {

using Count = std::int64_t;

// Annual publication counts of one field over a contiguous range of years.
// Years are implicit: counts[k] belongs to first_year + k.
class FieldSeries {
 public:
  FieldSeries(std::string id, std::string name, std::string broad_section,
              int first_year, std::vector<Count> counts);

  // Validating constructor for explicit (year, count) columns; years must be
  // strictly ascending with step 1.
  static FieldSeries from_columns(std::string id, std::string name,
                                  std::string broad_section,
                                  std::span<const int> years,
                                  std::span<const Count> counts);

  const std::string& id() const noexcept { return id_; }
  const std::string& name() const noexcept { return name_; }
  const std::string& broad_section() const noexcept { return broad_section_; }
  int first_year() const noexcept { return first_year_; }
  int last_year() const noexcept { return first_year_ + static_cast<int>(counts_.size()) - 1; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::span<const Count> counts() const noexcept { return counts_; }
  std::vector<int> years() const;
  std::vector<double> values() const;
  bool covers(int year) const noexcept { return year >= first_year_ && year <= last_year(); }
  Count count_at(int year) const;

  bool operator==(const FieldSeries&) const = default;

 private:
  std::string id_;
  std::string name_;
  std::string broad_section_;
  int first_year_;
  std::vector<Count> counts_;
};

// Balanced panel: every field spans the same years. Fields are kept in
// ascending id order, which is the canonical order for all output.
class Corpus {
 public:
  const std::vector<FieldSeries>& fields() const noexcept { return fields_; }
  std::size_t size() const noexcept { return fields_.size(); }
  int first_year() const noexcept { return first_year_; }
  int last_year() const noexcept { return last_year_; }
  int n_years() const noexcept { return last_year_ - first_year_ + 1; }
  std::vector<int> years() const;

  const FieldSeries* find(std::string_view id) const noexcept;
  const FieldSeries& at(std::string_view id) const;  // throws UnknownField

  bool operator==(const Corpus&) const = default;

 private:
  friend Corpus build_corpus(std::vector<FieldSeries> series);
  Corpus() = default;

  std::vector<FieldSeries> fields_;
  int first_year_ = 0;
  int last_year_ = 0;
};

Corpus build_corpus(std::vector<FieldSeries> series);
Corpus slice_years(const Corpus& corpus, int first, int last);

// Counts for one controlled term inside a parent field.
class CtSeries {
 public:
  CtSeries(std::string parent_field_id, std::string ct_name, int first_year,
           std::vector<Count> counts);

  const std::string& parent_field_id() const noexcept { return parent_; }
  const std::string& ct_name() const noexcept { return name_; }
  int first_year() const noexcept { return first_year_; }
  int last_year() const noexcept { return first_year_ + static_cast<int>(counts_.size()) - 1; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::span<const Count> counts() const noexcept { return counts_; }
  std::vector<double> values() const;
  bool covers(int year) const noexcept { return year >= first_year_ && year <= last_year(); }
  Count count_at(int year) const;

  bool operator==(const CtSeries&) const = default;

 private:
  std::string parent_;
  std::string name_;
  int first_year_;
  std::vector<Count> counts_;
};

class CtCorpus {
 public:
  // Terms sorted by (parent_field_id, ct_name).
  const std::vector<CtSeries>& terms() const noexcept { return terms_; }
  const Corpus& parent() const noexcept { return parent_; }
  std::vector<const CtSeries*> terms_of(std::string_view field_id) const;

  bool operator==(const CtCorpus&) const = default;

 private:
  friend CtCorpus build_ct_corpus(std::vector<CtSeries> terms, Corpus parent);
  explicit CtCorpus(Corpus parent) : parent_(std::move(parent)) {}

  std::vector<CtSeries> terms_;
  Corpus parent_;
};

CtCorpus build_ct_corpus(std::vector<CtSeries> terms, Corpus parent);

struct TitleRecord {
  std::string field_id;
  int year = 0;
  std::string ct_name;
  std::string title;

  bool operator==(const TitleRecord&) const = default;
};

}  // namespace fieldtrend
