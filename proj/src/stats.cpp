#include "swarmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace swarmix {

MeanVariance mean_and_variance(std::span<const double> values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, sq / static_cast<double>(values.size())};
}

double descending_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  return sum / static_cast<double>(sorted.size());
}

double t_critical_95(unsigned df) {
  if (df == 0) throw std::invalid_argument("t_critical_95 needs df >= 1");
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

ConfidenceInterval confidence_interval_95(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("confidence interval needs >= 2 samples");
  if (std::all_of(samples.begin(), samples.end(), [&](double v) { return v == samples[0]; }))
    return {samples[0], 0.0};
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : samples) sq += (v - mean) * (v - mean);
  const double s = std::sqrt(sq / (n - 1.0));
  return {mean, t_critical_95(static_cast<unsigned>(samples.size() - 1)) * s / std::sqrt(n)};
}

}  // namespace swarmix
