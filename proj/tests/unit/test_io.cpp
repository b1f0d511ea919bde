#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fieldtrend/error.hpp"
#include "fieldtrend/io.hpp"
#include "fieldtrend/regression.hpp"
#include "fieldtrend/synthetic.hpp"
#include "../test_support.hpp"

using namespace fieldtrend;

namespace {

const std::string kHeader = "field_id,field_name,broad_section,year,count\n";

Corpus load(const std::string& text) {
  std::istringstream in(text);
  return load_counts(in);
}

std::pair<ErrorKind, std::optional<std::size_t>> failure(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.kind(), e.line()};
  }
  FAIL("no error thrown");
  return {ErrorKind::Io, std::nullopt};
}

std::string s63_rows() {
  std::string s = kHeader;
  for (int y = 2014; y <= 2020; ++y) s += "S63,Synthetic,BIO," + std::to_string(y) + "," + std::to_string(100 + y - 2014) + "\n";
  return s;
}

std::vector<TitleRecord> synthetic_titles(std::size_t n) {
  std::vector<TitleRecord> rows;
  for (std::size_t i = 0; i < n; ++i)
    rows.push_back({"CA73", 2020, "Photoluminescence", "Title number " + std::to_string(i)});
  return rows;
}

}  // namespace

TEST_CASE("load_counts: basic panels") {
  const Corpus c = load(s63_rows());
  CHECK(c.size() == 1);
  CHECK(c.first_year() == 2014);
  CHECK(c.last_year() == 2020);
  CHECK(c.at("S63").count_at(2016) == 102);

  const Corpus ph = load(testing_support::slurp(testing_support::fixture("pharmacology.csv")));
  const auto& f = ph.at("CA01");
  CHECK(f.name() == "Pharmacology");
  CHECK(std::vector<Count>(f.counts().begin(), f.counts().end()) ==
        std::vector<Count>{106329, 108973, 102513, 98490, 95686, 96452, 110376});
}

TEST_CASE("load_counts: rows in any order, CRLF, BOM, quoted names") {
  const std::string text = "\xEF\xBB\xBF" + kHeader +
                           "B,\"Name, with comma\",ORG,2001,5\r\n"
                           "A,\"He said \"\"hi\"\"\",BIO,2001,7\r\n"
                           "B,\"Name, with comma\",ORG,2000,4\r\n"
                           "\n"
                           "A,\"He said \"\"hi\"\"\",BIO,2000,6\r\n";
  const Corpus c = load(text);
  CHECK(c.fields()[0].id() == "A");
  CHECK(c.fields()[0].name() == "He said \"hi\"");
  CHECK(c.fields()[1].name() == "Name, with comma");
  CHECK(c.at("B").count_at(2000) == 4);
}

TEST_CASE("load_counts: errors carry line numbers") {
  SUBCASE("duplicate cell") {
    std::string text = s63_rows() + "S63,Synthetic,BIO,2015,5\n";
    const auto [kind, line] = failure([&] { load(text); });
    CHECK(kind == ErrorKind::DuplicateCell);
    CHECK(line == 9);
  }
  SUBCASE("negative count") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,2014,1\nA,a,BIO,2015,-3\n"); });
    CHECK(kind == ErrorKind::NegativeCount);
    CHECK(line == 3);
  }
  SUBCASE("bad count") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,2014,1\nA,a,BIO,2015,1\nA,a,BIO,2016,1.5\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 4);
  }
  SUBCASE("thousands separator is not a number") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,2014,\"1,000\"\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 2);
  }
  SUBCASE("bad year") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,14,1\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 2);
  }
  SUBCASE("wrong header") {
    const auto [kind, line] = failure([&] { load("id,name,section,year,count\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 1);
  }
  SUBCASE("wrong cell count") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,2014\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 2);
  }
  SUBCASE("unterminated quote") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,\"a,BIO,2014,1\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 2);
  }
  SUBCASE("gap in years") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,2014,1\nA,a,BIO,2016,1\n"); });
    CHECK(kind == ErrorKind::MismatchedYearRange);
    CHECK(line.has_value());
  }
  SUBCASE("unbalanced panel") {
    const auto [kind, line] =
        failure([&] { load(kHeader + "A,a,BIO,2014,1\nA,a,BIO,2015,1\nB,b,BIO,2015,1\nB,b,BIO,2016,1\n"); });
    CHECK(kind == ErrorKind::MismatchedYearRange);
    CHECK(line == 4);
  }
  SUBCASE("inconsistent name") {
    const auto [kind, line] = failure([&] { load(kHeader + "A,a,BIO,2014,1\nA,other,BIO,2015,1\n"); });
    CHECK(kind == ErrorKind::ParseError);
    CHECK(line == 3);
  }
  SUBCASE("no rows") {
    CHECK(failure([&] { load(kHeader); }).first == ErrorKind::EmptyInput);
  }
}

TEST_CASE("write_counts: canonical and round-trips") {
  const Corpus c = load(s63_rows());
  const std::string text = write_counts(c);
  CHECK(text == s63_rows());
  CHECK(write_counts(c) == text);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Corpus r = testing_support::random_corpus(rng, 1 + rng() % 20, 1990 + static_cast<int>(rng() % 20), 2 + rng() % 10);
    const std::string w = write_counts(r);
    CHECK(load(w) == r);
    CHECK(write_counts(load(w)) == w);
    CHECK(w.find('\r') == std::string::npos);
    CHECK(w.find(" \n") == std::string::npos);
  }
}

TEST_CASE("load_ct: fixtures and validation") {
  const Corpus parent = load(testing_support::slurp(testing_support::fixture("sections_2020.csv")));
  std::istringstream in(testing_support::slurp(testing_support::fixture("ct_2020.csv")));
  const CtCorpus ct = load_ct(in, parent);
  CHECK(ct.terms().size() == 20);
  CHECK(ct.terms_of("CA73").size() == 10);

  auto load_one = [&](const std::string& body) {
    std::istringstream s("field_id,ct_name,year,count\n" + body);
    return load_ct(s, parent);
  };
  CHECK(load_one("CA73,Everything,2020,91580\n").terms().size() == 1);
  auto over = failure([&] { load_one("CA73,Photoluminescence,2020,5439\nCA73,Everything,2020,91581\n"); });
  CHECK(over.first == ErrorKind::CountExceedsParentTotal);
  CHECK(over.second == 3);
  auto unknown = failure([&] { load_one("CA99,X,2020,1\n"); });
  CHECK(unknown.first == ErrorKind::UnknownParentField);
  CHECK(unknown.second == 2);
  CHECK(failure([&] { load_one("CA73,X,2030,1\n"); }).first == ErrorKind::YearOutOfRange);
  CHECK(failure([&] { load_one("CA73,X,2020,1\nCA73,X,2020,2\n"); }).first == ErrorKind::DuplicateCell);
  CHECK(failure([&] { load_one("CA73,X,2020,x\n"); }).first == ErrorKind::ParseError);

  const std::string w = write_ct(ct);
  std::istringstream again(w);
  CHECK(load_ct(again, parent) == ct);
  CHECK(write_ct(load_one(w.substr(w.find('\n') + 1))) == w);
}

TEST_CASE("titles: load, write, round-trip") {
  std::istringstream in(testing_support::slurp(testing_support::fixture("titles_2020.csv")));
  const auto rows = load_titles(in);
  CHECK(rows.size() == 20);
  const std::string w = write_titles(rows);
  std::istringstream again(w);
  CHECK(load_titles(again) == rows);

  const std::vector<TitleRecord> tricky = {{"A", 2020, "CT, with comma", "A \"quoted\" title\nspanning lines"},
                                           {"A", 2020, "CT", "Ünïcödé – title"}};
  std::istringstream t(write_titles(tricky));
  CHECK(load_titles(t) == tricky);

  std::istringstream empty_title("field_id,year,ct_name,title\nA,2020,CT,\n");
  CHECK(failure([&] { load_titles(empty_title); }).second == 2);
}

TEST_CASE("csv_escape") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("sample_titles: basics") {
  std::istringstream in(testing_support::slurp(testing_support::fixture("titles_2020.csv")));
  const auto rows = load_titles(in);
  const TitleFilter filter{"CA73", "Photoluminescence", 2020};
  const auto all = sample_titles(rows, filter, 10, 1);
  CHECK(all.size() == 10);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == rows[i]);

  const auto a = sample_titles(rows, filter, 4, 99);
  CHECK(a == sample_titles(rows, filter, 4, 99));
  CHECK(a.size() == 4);
  CHECK(std::is_sorted(a.begin(), a.end(), [&](const auto& x, const auto& y) {
    return std::find(rows.begin(), rows.end(), x) < std::find(rows.begin(), rows.end(), y);
  }));

  CHECK(failure([&] { sample_titles(rows, filter, 11, 1); }).first == ErrorKind::NotEnoughRecords);
  CHECK(failure([&] { sample_titles(rows, {"CA73", "Lasers", 2020}, 1, 1); }).first == ErrorKind::NotEnoughRecords);
  CHECK(failure([&] { sample_titles(rows, filter, 0, 1); }).first == ErrorKind::InvalidSpec);
}

TEST_CASE("sample_titles is independent of input order") {
  auto rows = synthetic_titles(200);
  rows.push_back({"CA52", 2020, "Photoluminescence", "other field"});
  const TitleFilter filter{"CA73", "Photoluminescence", 2020};
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = sample_titles(rows, filter, 15, seed);
    const auto b = sample_titles(shuffled, filter, 15, seed);
    std::set<std::string> sa, sb;
    for (const auto& r : a) sa.insert(r.title);
    for (const auto& r : b) sb.insert(r.title);
    CHECK(sa == sb);
    CHECK(sa.size() == 15);
  }
}

namespace {

std::vector<std::size_t> selection_counts(std::size_t records, std::size_t k, std::uint64_t trials) {
  const auto rows = synthetic_titles(records);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) index[rows[i].title] = i;
  std::vector<std::size_t> hits(records, 0);
  for (std::uint64_t seed = 0; seed < trials; ++seed)
    for (const auto& r : sample_titles(rows, {"CA73", "Photoluminescence", 2020}, k, seed)) ++hits[index.at(r.title)];
  return hits;
}

}  // namespace

// Each record's hit count is Binomial(10000, 0.01) with sd 9.95, so the
// 0.003 band is about 3 sd wide and a handful of the 1000 records are
// expected to land outside it even for an exact uniform sampler.
TEST_CASE("sample_titles: every record selected with frequency 0.01 +- 0.003" * doctest::should_fail()) {
  const auto hits = selection_counts(1000, 10, 10000);
  std::size_t outside = 0;
  for (std::size_t h : hits)
    if (std::fabs(static_cast<double>(h) / 10000.0 - 0.01) > 0.003) ++outside;
  CHECK(outside == 0);
}

TEST_CASE("sample_titles: selection frequencies are consistent with uniform sampling") {
  const auto hits = selection_counts(1000, 10, 10000);
  std::size_t total = 0, outside = 0;
  double chi2 = 0;
  for (std::size_t h : hits) {
    total += h;
    const double d = static_cast<double>(h) - 100.0;
    chi2 += d * d / 100.0;
    if (std::fabs(d) > 30.0) ++outside;
    // 5 sd: about 6e-4 chance that any of the 1000 records gets here
    CHECK(std::fabs(d) <= 5 * 9.95);
  }
  CHECK(total == 100000);
  // expected number outside 3 sd is about 2.6
  CHECK(outside <= 10);
  // 999 degrees of freedom, sd of the statistic about 45
  CHECK(chi2 > 990 - 5 * 45);
  CHECK(chi2 < 990 + 5 * 45);
}
