#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fairsched/engine.hpp"

namespace fairsched {

class undefined_statistic : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

template <typename T>
class Grid {
public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T init = T{})
      : rows_(rows), cols_(cols), v_(rows * cols, init) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  T& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> v_;
};

// Means are exact; standard deviations are the square root of an exact variance.
// Standard deviations are absent when fewer than two trials ran.
struct TrialSummary {
  std::size_t trials = 0;
  Grid<Rational> mean_alloc;                 // frameworks x servers
  std::optional<Grid<double>> sd_alloc;
  Grid<Rational> mean_unused;                // servers x resources
  std::optional<Grid<double>> sd_unused;
  Rational mean_total_tasks;
  std::optional<double> sd_total_tasks;

  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

// Bessel-corrected variance, exact.
inline Rational sample_variance(std::span<const Rational> values) {
  if (values.size() < 2) throw undefined_statistic("sample variance needs at least two values");
  Rational sum{0};
  for (const auto& v : values) sum += v;
  const Rational mean = sum / Rational(static_cast<std::int64_t>(values.size()));
  Rational ss{0};
  for (const auto& v : values) ss += (v - mean) * (v - mean);
  return ss / Rational(static_cast<std::int64_t>(values.size() - 1));
}

inline double sample_stddev(std::span<const Rational> values) {
  return static_cast<double>(std::sqrt(sample_variance(values).to_long_double()));
}

inline double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) throw undefined_statistic("sample stddev needs at least two values");
  long double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<long double>(values.size());
  long double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(values.size() - 1)));
}

// mean -/+ 2 sd / sqrt(T).
inline std::pair<double, double> confidence_interval(double mean, double sd, std::size_t trials) {
  if (trials == 0) throw config_error("confidence interval needs at least one trial");
  if (sd < 0) throw config_error("negative standard deviation");
  const double half = 2.0 * sd / std::sqrt(static_cast<double>(trials));
  return {mean - half, mean + half};
}

// Runs `trials` independent fills; trial t is seeded with derive_seed(base_seed, t).
// Work is split across `threads`, but results are folded in trial order, so the summary
// does not depend on the thread count.
inline std::vector<FillResult> run_fills(const Scenario& scenario, SchedulerConfig config,
                                         std::size_t trials, std::uint64_t base_seed,
                                         unsigned threads = 1) {
  if (trials == 0) throw config_error("trial count must be at least 1");
  config.validate();
  std::vector<FillResult> results(trials);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < trials; t += stride) {
      SchedulerConfig c = config;
      c.seed = derive_seed(base_seed, t);
      results[t] = progressive_fill(scenario, c);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k, threads);
  }
  return results;
}

inline TrialSummary summarize(const std::vector<FillResult>& results) {
  if (results.empty()) throw config_error("no trials to summarize");
  const auto T = results.size();
  const auto N = results.front().alloc.frameworks();
  const auto I = results.front().alloc.servers();
  const auto R = results.front().unused.empty() ? 0 : results.front().unused.front().size();

  TrialSummary s;
  s.trials = T;
  s.mean_alloc = Grid<Rational>(N, I);
  s.mean_unused = Grid<Rational>(I, R);
  const Rational count(static_cast<std::int64_t>(T));

  std::vector<Rational> column(T);
  auto mean_of = [&] {
    Rational sum{0};
    for (const auto& v : column) sum += v;
    return sum / count;
  };

  if (T >= 2) {
    s.sd_alloc = Grid<double>(N, I);
    s.sd_unused = Grid<double>(I, R);
  }
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t i = 0; i < I; ++i) {
      for (std::size_t t = 0; t < T; ++t) column[t] = Rational(results[t].alloc(n, i));
      s.mean_alloc(n, i) = mean_of();
      if (T >= 2) (*s.sd_alloc)(n, i) = sample_stddev(std::span<const Rational>(column));
    }
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t t = 0; t < T; ++t) column[t] = results[t].unused[i][r];
      s.mean_unused(i, r) = mean_of();
      if (T >= 2) (*s.sd_unused)(i, r) = sample_stddev(std::span<const Rational>(column));
    }
  for (std::size_t t = 0; t < T; ++t) column[t] = Rational(results[t].total_tasks());
  s.mean_total_tasks = mean_of();
  if (T >= 2) s.sd_total_tasks = sample_stddev(std::span<const Rational>(column));
  return s;
}

inline TrialSummary run_trials(const Scenario& scenario, const SchedulerConfig& config,
                               std::size_t trials, std::uint64_t base_seed,
                               unsigned threads = 1) {
  return summarize(run_fills(scenario, config, trials, base_seed, threads));
}

inline std::string format_fixed(double v, int decimals = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  auto s = os.str();
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string format_full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// role,row,col,mean,sd,ci_lo,ci_hi with 1-based indices. Means are exact rationals;
// sd and CI columns are empty when undefined.
inline void write_summary_csv(std::ostream& os, const TrialSummary& s) {
  os << "role,row,col,mean,sd,ci_lo,ci_hi\n";
  auto emit = [&](const char* role, const Grid<Rational>& mean,
                  const std::optional<Grid<double>>& sd) {
    for (std::size_t a = 0; a < mean.rows(); ++a)
      for (std::size_t b = 0; b < mean.cols(); ++b) {
        os << role << ',' << a + 1 << ',' << b + 1 << ',' << mean(a, b).to_string() << ',';
        if (sd) {
          auto [lo, hi] = confidence_interval(mean(a, b).to_double(), (*sd)(a, b), s.trials);
          os << format_full((*sd)(a, b)) << ',' << format_full(lo) << ',' << format_full(hi);
        } else {
          os << ",,";
        }
        os << '\n';
      }
  };
  emit("alloc", s.mean_alloc, s.sd_alloc);
  emit("unused", s.mean_unused, s.sd_unused);
}

}  // namespace fairsched
