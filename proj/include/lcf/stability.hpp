#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lcf {

struct StabilityConfig {
  double true_ctr = 0.5;
  std::vector<std::size_t> sample_sizes;
  std::size_t trials = 300000;
  std::uint64_t seed = 42;
};

struct StabilityRow {
  std::size_t sample_size = 0;
  double simulated_mae = 0.0;
  double exact_mae = 0.0;
  std::size_t trials = 0;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  /// CSV: sample_size,simulated_mae,exact_mae,trials.
  std::string to_csv() const;
};

/// Mean absolute deviation of a Bernoulli(p) variable: 2p(1-p).
/// Maximal (0.5) at p = 0.5. Throws for p outside [0,1].
double binary_mad(double p);

/// E|X/s - ctr| for X ~ Binomial(s, ctr): the closed-form stability of a
/// sample CTR at sample size s. Terms are evaluated in log space so large s
/// cannot overflow the binomial coefficients.
double exact_ctr_mae(std::size_t sample_size, double ctr);

/// Monte-Carlo estimate of the same quantity: per size, draws `trials`
/// batches of Bernoulli clicks with a per-size, per-trial sub-seeded
/// generator and averages |sample CTR - true CTR|. Each row carries the
/// matching exact value. Results are byte-identical for any worker count.
StabilityReport simulate_ctr_mae(const StabilityConfig& cfg, unsigned n_workers = 1);

}  // namespace lcf
