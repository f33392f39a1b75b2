#pragma once

#include <span>
#include <vector>

namespace swarmix {

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // population
};

MeanVariance mean_and_variance(std::span<const double> values);

// Mean after summing in descending order. Every per-peer similarity mean uses
// this so that equal multisets give bit-identical means and dominated
// multisets give means that are never larger.
double descending_mean(std::span<const double> values);

// Two-sided 95% Student-t critical value for `df` degrees of freedom.
double t_critical_95(unsigned df);

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
  double low() const noexcept { return mean - half_width; }
  double high() const noexcept { return mean + half_width; }
};

// Mean +/- t * s / sqrt(n) with sample standard deviation s. n >= 2.
ConfidenceInterval confidence_interval_95(std::span<const double> samples);

}  // namespace swarmix
