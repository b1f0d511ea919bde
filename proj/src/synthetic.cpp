#include "fieldtrend/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fieldtrend/error.hpp"
#include "fieldtrend/rng.hpp"
#include "fieldtrend/tdist.hpp"

namespace fieldtrend {

namespace {

constexpr const char* kSections[] = {"BIO", "ORG", "MAC", "APP", "PIA"};

double draw(SplitMix64& rng, std::pair<double, double> range) {
  if (range.first == range.second) return range.first;
  return range.first + (range.second - range.first) * rng.uniform01();
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_fields < 1) throw Error(ErrorKind::InvalidSpec, "n_fields must be >= 1");
  if (n_years < 3) throw Error(ErrorKind::InvalidSpec, "n_years must be >= 3");
  if (!(intercept_range.first <= intercept_range.second)) throw Error(ErrorKind::InvalidSpec, "intercept range is not ordered");
  if (!(slope_range.first <= slope_range.second)) throw Error(ErrorKind::InvalidSpec, "slope range is not ordered");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw Error(ErrorKind::InvalidSpec, "noise_sd must be finite and >= 0");
}

bool GroundTruth::any_clamped() const noexcept {
  return std::any_of(fields.begin(), fields.end(), [](const FieldTruth& f) { return f.clamped; });
}

std::string synthetic_field_id(std::size_t index, std::size_t n_fields) {
  const std::size_t width = std::to_string(n_fields).size();
  std::string digits = std::to_string(index + 1);
  return "F" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

SyntheticPanel generate(const SyntheticSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  std::vector<FieldSeries> series;
  GroundTruth truth;
  for (std::size_t f = 0; f < spec.n_fields; ++f) {
    FieldTruth t;
    t.field_id = synthetic_field_id(f, spec.n_fields);
    t.b0 = draw(rng, spec.intercept_range);
    t.b1 = draw(rng, spec.slope_range);
    if (spec.integral_coefficients) {
      t.b0 = std::round(t.b0);
      t.b1 = std::round(t.b1);
    }
    std::vector<Count> counts;
    for (int k = 0; k < spec.n_years; ++k) {
      const double noise = spec.noise_sd > 0.0 ? spec.noise_sd * rng.normal() : 0.0;
      Count c = std::llround(t.b0 + t.b1 * k + noise);
      if (c < 0) {
        c = 0;
        t.clamped = true;
      }
      counts.push_back(c);
    }
    series.emplace_back(t.field_id, "Synthetic field " + t.field_id.substr(1),
                        kSections[f % std::size(kSections)], spec.first_year, std::move(counts));
    truth.fields.push_back(std::move(t));
  }
  return {build_corpus(std::move(series)), std::move(truth)};
}

std::vector<CoverageResult> coverage_experiment(const SyntheticSpec& spec, std::size_t trials,
                                                std::span<const double> levels, HcVariant variant) {
  spec.validate();
  if (!(spec.noise_sd > 0.0)) throw Error(ErrorKind::InvalidSpec, "coverage needs noise_sd > 0");
  if (trials < 100) throw Error(ErrorKind::InvalidSpec, "coverage needs at least 100 trials");
  if (levels.empty()) throw Error(ErrorKind::InvalidSpec, "no confidence levels given");

  std::vector<double> crit;
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidSpec, "level must lie in (0, 1)");
    crit.push_back(t_quantile(1.0 - (1.0 - level) / 2.0, spec.n_years - 2));
  }

  // Each worker owns a contiguous block of trials; integer tallies make the
  // sum independent of scheduling.
  const std::size_t n_workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  std::vector<std::vector<std::size_t>> tallies(n_workers, std::vector<std::size_t>(levels.size(), 0));
  std::vector<std::exception_ptr> failures(n_workers);
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t trial = w; trial < trials; trial += n_workers) {
            SyntheticSpec s = spec;
            s.seed = spec.seed + trial;
            const SyntheticPanel panel = generate(s);
            for (std::size_t f = 0; f < panel.corpus.size(); ++f) {
              const TrendFit fit = with_robust_se(ols_fit(panel.corpus.fields()[f]), variant);
              const double truth = panel.truth.fields[f].b1;
              for (std::size_t l = 0; l < crit.size(); ++l) {
                if (std::fabs(fit.b1 - truth) <= crit[l] * fit.se_b1) ++tallies[w][l];
              }
            }
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : failures) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<CoverageResult> out;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    CoverageResult r;
    r.level = levels[l];
    r.total = trials * spec.n_fields;
    for (const auto& t : tallies) r.covered += t[l];
    out.push_back(r);
  }
  return out;
}

CoverageResult coverage_experiment(const SyntheticSpec& spec, std::size_t trials, double level,
                                   HcVariant variant) {
  const double levels[] = {level};
  return coverage_experiment(spec, trials, levels, variant).front();
}

}  // namespace fieldtrend
