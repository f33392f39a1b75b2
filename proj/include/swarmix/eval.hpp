#pragma once

// All-but-1 evaluation: split, simulate, score against the centralized
// recommender, repeat over seeded trials and aggregate with 95% Student-t
// confidence intervals.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swarmix/metrics.hpp"
#include "swarmix/rating_matrix.hpp"
#include "swarmix/recommender.hpp"
#include "swarmix/sim.hpp"
#include "swarmix/stats.hpp"

namespace swarmix {

struct HiddenRating {
  ItemId item;
  std::uint8_t rating = 0;

  bool operator==(const HiddenRating&) const = default;
};

struct SplitSpec {
  RatingMatrix training;
  std::vector<HiddenRating> hidden;  // one per user
  std::uint64_t seed = 0;

  std::vector<ItemId> hidden_items() const;
};

// Moves one uniformly drawn rating per user to the hidden set. Throws
// UserTooSparse for users with fewer than two ratings.
SplitSpec all_but_1_split(const RatingMatrix& ratings, std::uint64_t seed);

struct BaselineMetrics {
  double avg_similarity = 0.0;  // mean over peers of top-k unweighted similarity
  double hit_rate = 0.0;

  bool operator==(const BaselineMetrics&) const = default;
};

struct TrialResult {
  unsigned trial = 0;
  std::uint64_t seed = 0;               // trial seed; split and simulation seeds derive from it
  std::vector<CycleMetrics> series;     // cycles + 1 entries
  BaselineMetrics centralized;          // constant across cycles

  bool operator==(const TrialResult&) const = default;
};

// Everything a caller may want to inspect for one trial before snapshots are
// discarded.
struct TrialContext {
  const SplitSpec& split;
  const std::vector<CycleSnapshot>& snapshots;
  const CentralizedBaseline& baseline;
  const TrialResult& result;
};

using TrialObserver = std::function<void(const TrialContext&)>;

std::uint64_t trial_seed(std::uint64_t master_seed, unsigned trial);

TrialResult run_trial(const RatingMatrix& data, const SimConfig& config, unsigned trial,
                      const TrialObserver& observer = {}, const CycleHook& on_cycle = {});

struct ExperimentResult {
  SimConfig config;
  std::vector<TrialResult> trials;
  std::vector<CycleMetrics> mean;
  std::vector<CycleMetrics> ci_half_width;  // NaN with a single trial
  ConfidenceInterval centralized_similarity;
  ConfidenceInterval centralized_hit_rate;
};

// Trial seeds derive from config.seed and the trial index. Throws
// InvalidConfig for trials == 0.
ExperimentResult run_experiment(const RatingMatrix& data, const SimConfig& config, unsigned trials,
                                const TrialObserver& observer = {}, const CycleHook& on_cycle = {});

// Mean and 95% CI over trials, per cycle and metric. Sorts trials by index.
void summarize(ExperimentResult& result);

struct ChurnRow {
  double pct = 0.0;
  ConfidenceInterval failures;   // hit-rate over all original peers
  ConfidenceInterval voluntary;  // hit-rate over peers that stayed
};

// One experiment per percentage with a disturbance at base.churn.at_cycle,
// reporting final-cycle hit-rates under both accountings. Failures and
// leavings are mechanically identical, so both rates come from one run.
std::vector<ChurnRow> churn_sweep(const RatingMatrix& data, const SimConfig& base,
                                  std::span<const double> percentages, unsigned trials,
                                  const TrialObserver& observer = {});

// Centralized recommender only, per trial.
std::vector<BaselineMetrics> run_baseline(const RatingMatrix& data, const SimConfig& config,
                                          unsigned trials);

}  // namespace swarmix
