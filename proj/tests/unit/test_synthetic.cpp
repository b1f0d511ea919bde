#include <cmath>
#include <vector>

#include "doctest.h"
#include "fieldtrend/error.hpp"
#include "fieldtrend/io.hpp"
#include "fieldtrend/regression.hpp"
#include "fieldtrend/rng.hpp"
#include "fieldtrend/synthetic.hpp"

using namespace fieldtrend;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("SplitMix64 reference stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("SplitMix64 draws") {
  SplitMix64 rng(123);
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK_FALSE((u < 0 || u >= 1));
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1) < 0.02);

  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.uniform_below(7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("generate: exact line") {
  SyntheticSpec spec;
  spec.n_fields = 1;
  spec.n_years = 5;
  spec.intercept_range = {100, 100};
  spec.slope_range = {5, 5};
  spec.noise_sd = 0;
  const auto panel = generate(spec);
  const auto& f = panel.corpus.fields().at(0);
  CHECK(std::vector<Count>(f.counts().begin(), f.counts().end()) == std::vector<Count>{100, 105, 110, 115, 120});
  CHECK(panel.truth.fields[0].b0 == 100);
  CHECK(panel.truth.fields[0].b1 == 5);
  CHECK(f.first_year() == 2014);
}

TEST_CASE("generate: determinism and seeds") {
  SyntheticSpec spec;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.corpus == b.corpus);
  CHECK(write_counts(a.corpus) == write_counts(b.corpus));
  REQUIRE(a.truth.fields.size() == 80);
  for (std::size_t i = 0; i < 80; ++i) {
    CHECK(a.truth.fields[i].b0 == b.truth.fields[i].b0);
    CHECK(a.truth.fields[i].b1 == b.truth.fields[i].b1);
  }
  spec.seed = 43;
  CHECK_FALSE(generate(spec).corpus == a.corpus);
  CHECK(a.corpus.fields().front().id() == "F01");
  CHECK(a.corpus.fields().back().id() == "F80");
  CHECK(synthetic_field_id(4, 1000) == "F0005");
}

TEST_CASE("generate: ranges and clamping") {
  SyntheticSpec spec;
  spec.intercept_range = {0, 50};
  spec.slope_range = {-100, -50};
  spec.noise_sd = 10;
  const auto panel = generate(spec);
  CHECK(panel.truth.any_clamped());
  for (const auto& f : panel.corpus.fields())
    for (Count c : f.counts()) CHECK(c >= 0);
  for (const auto& t : panel.truth.fields) {
    CHECK(t.b0 >= 0);
    CHECK(t.b0 <= 50);
    CHECK(t.b1 >= -100);
    CHECK(t.b1 <= -50);
  }
}

TEST_CASE("generate: invalid specs") {
  auto bad = [](auto mutate) {
    SyntheticSpec s;
    mutate(s);
    return kind_of([&] { generate(s); });
  };
  CHECK(bad([](SyntheticSpec& s) { s.n_fields = 0; }) == ErrorKind::InvalidSpec);
  CHECK(bad([](SyntheticSpec& s) { s.n_years = 2; }) == ErrorKind::InvalidSpec);
  CHECK(bad([](SyntheticSpec& s) { s.intercept_range = {5, 1}; }) == ErrorKind::InvalidSpec);
  CHECK(bad([](SyntheticSpec& s) { s.slope_range = {5, 1}; }) == ErrorKind::InvalidSpec);
  CHECK(bad([](SyntheticSpec& s) { s.noise_sd = -1; }) == ErrorKind::InvalidSpec);
}

TEST_CASE("fit_all recovers slopes on a realistic panel") {
  const SyntheticSpec spec;  // 80 x 7, noise 1500
  const auto panel = generate(spec);
  const auto fits = fit_all(panel.corpus, {});
  double sq = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const double d = fits[i].b1 - panel.truth.fields[i].b1;
    sq += d * d;
  }
  const double rmse = std::sqrt(sq / static_cast<double>(fits.size()));
  // sd(b1) = sigma / sqrt(sum (T - Tbar)^2), and the sum is 28 for seven years
  const double se = spec.noise_sd / std::sqrt(28.0);
  CHECK(rmse < 3 * se);
}

TEST_CASE("noise-free panel with rounding error stays within half a count") {
  SyntheticSpec spec;
  spec.noise_sd = 0;
  spec.intercept_range = {20000, 110000};
  const auto panel = generate(spec);
  REQUIRE_FALSE(panel.truth.any_clamped());
  const auto fits = fit_all(panel.corpus, {});
  for (std::size_t i = 0; i < fits.size(); ++i) CHECK(std::fabs(fits[i].b1 - panel.truth.fields[i].b1) <= 0.5);
}

TEST_CASE("coverage_experiment") {
  SyntheticSpec spec;
  const double levels[] = {0.5, 0.8, 0.95};
  const auto r = coverage_experiment(spec, 1000, levels);
  REQUIRE(r.size() == 3);
  CHECK(r[0].total == 80000);
  CHECK(r[0].fraction() >= 0.42);
  CHECK(r[0].fraction() <= 0.58);
  CHECK(r[2].fraction() >= 0.90);
  CHECK(r[2].fraction() <= 0.985);
  CHECK(r[0].covered <= r[1].covered);
  CHECK(r[1].covered <= r[2].covered);

  const auto single = coverage_experiment(spec, 1000, 0.95);
  CHECK(single.covered == r[2].covered);

  auto zero = spec;
  zero.noise_sd = 0;
  CHECK(kind_of([&] { coverage_experiment(zero, 1000, 0.95); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { coverage_experiment(spec, 99, 0.95); }) == ErrorKind::InvalidSpec);
}
