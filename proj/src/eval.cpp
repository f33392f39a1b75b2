#include "swarmix/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmix/errors.hpp"
#include "swarmix/random.hpp"

namespace swarmix {

std::vector<ItemId> SplitSpec::hidden_items() const {
  std::vector<ItemId> out;
  out.reserve(hidden.size());
  for (const HiddenRating& h : hidden) out.push_back(h.item);
  return out;
}

SplitSpec all_but_1_split(const RatingMatrix& ratings, std::uint64_t seed) {
  Rng rng(seed);
  SplitSpec split;
  split.seed = seed;
  std::vector<ProfileSnapshot> rows;
  rows.reserve(ratings.user_count());
  for (std::uint32_t u = 0; u < ratings.user_count(); ++u) {
    const RatingProfile& p = ratings.row(PeerId{u});
    if (p.size() < 2)
      throw UserTooSparse("user " + std::to_string(u) + " has fewer than 2 ratings");
    const std::size_t pick = rng.uniform_index(p.size());
    std::vector<Rating> kept;
    kept.reserve(p.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i == pick)
        split.hidden.push_back({p.ratings()[i].item, p.ratings()[i].value});
      else
        kept.push_back(p.ratings()[i]);
    }
    rows.push_back(std::make_shared<const RatingProfile>(std::move(kept)));
  }
  split.training = RatingMatrix(std::move(rows), ratings.item_count());
  split.training.user_labels = ratings.user_labels;
  split.training.item_labels = ratings.item_labels;
  return split;
}

std::uint64_t trial_seed(std::uint64_t master_seed, unsigned trial) {
  return derive_seed(master_seed, trial);
}

namespace {

BaselineMetrics score_baseline(const CentralizedBaseline& baseline, std::span<const ItemId> hidden) {
  BaselineMetrics m;
  std::vector<double> per_peer;
  per_peer.reserve(hidden.size());
  std::size_t hits = 0;
  for (std::uint32_t v = 0; v < hidden.size(); ++v) {
    if (!baseline.top_similarities[v].empty()) per_peer.push_back(baseline.mean_similarity(PeerId{v}));
    if (contains(baseline.recommendations[v], hidden[v])) ++hits;
  }
  m.avg_similarity = mean_and_variance(per_peer).mean;
  m.hit_rate = hidden.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(hidden.size());
  return m;
}

}  // namespace

TrialResult run_trial(const RatingMatrix& data, const SimConfig& config, unsigned trial,
                      const TrialObserver& observer, const CycleHook& on_cycle) {
  config.validate();
  TrialResult result;
  result.trial = trial;
  result.seed = trial_seed(config.seed, trial);

  const SplitSpec split = all_but_1_split(data, derive_seed(result.seed, 0));
  const auto hidden = split.hidden_items();
  auto similarity = std::make_shared<const kernels::SimilarityMatrix>(
      kernels::similarity_matrix(split.training));
  const CentralizedBaseline baseline =
      centralized_baseline(split.training, *similarity, config.protocol.cache_size, config.top_n,
                           config.protocol.significance_threshold);
  result.centralized = score_baseline(baseline, hidden);

  SimConfig sim_config = config;
  sim_config.seed = derive_seed(result.seed, 1);
  const auto snapshots = run_simulation(sim_config, split.training, similarity, on_cycle);

  MetricsCalculator metrics;
  result.series.reserve(snapshots.size());
  for (const CycleSnapshot& s : snapshots) result.series.push_back(metrics(s, hidden));

  if (observer) observer(TrialContext{split, snapshots, baseline, result});
  return result;
}

void summarize(ExperimentResult& result) {
  // Fold in trial-index order whatever order the trials arrived in.
  std::stable_sort(result.trials.begin(), result.trials.end(),
                   [](const TrialResult& a, const TrialResult& b) { return a.trial < b.trial; });
  const auto& trials = result.trials;
  result.mean.clear();
  result.ci_half_width.clear();
  if (trials.empty()) return;
  const std::size_t cycles = trials.front().series.size();
  std::vector<double> samples(trials.size());
  for (std::size_t c = 0; c < cycles; ++c) {
    CycleMetrics mean, half;
    for (auto [name, field] : metric_fields) {
      for (std::size_t t = 0; t < trials.size(); ++t) samples[t] = trials[t].series[c].*field;
      if (samples.size() >= 2) {
        auto ci = confidence_interval_95(samples);
        mean.*field = ci.mean;
        half.*field = ci.half_width;
      } else {
        mean.*field = samples[0];
        half.*field = std::numeric_limits<double>::quiet_NaN();
      }
    }
    result.mean.push_back(mean);
    result.ci_half_width.push_back(half);
  }

  auto interval = [&](double BaselineMetrics::*field) {
    std::vector<double> xs;
    for (const auto& t : trials) xs.push_back(t.centralized.*field);
    if (xs.size() >= 2) return confidence_interval_95(xs);
    return ConfidenceInterval{xs[0], std::numeric_limits<double>::quiet_NaN()};
  };
  result.centralized_similarity = interval(&BaselineMetrics::avg_similarity);
  result.centralized_hit_rate = interval(&BaselineMetrics::hit_rate);
}

ExperimentResult run_experiment(const RatingMatrix& data, const SimConfig& config, unsigned trials,
                                const TrialObserver& observer, const CycleHook& on_cycle) {
  if (trials == 0) throw InvalidConfig("trials", "must be >= 1");
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.trials.reserve(trials);
  for (unsigned t = 0; t < trials; ++t) result.trials.push_back(run_trial(data, config, t, observer, on_cycle));
  summarize(result);
  return result;
}

std::vector<ChurnRow> churn_sweep(const RatingMatrix& data, const SimConfig& base,
                                  std::span<const double> percentages, unsigned trials,
                                  const TrialObserver& observer) {
  for (double pct : percentages)
    if (!(pct >= 0.0 && pct <= 100.0)) throw InvalidConfig("churn_pcts", "must lie in [0, 100]");
  std::vector<ChurnRow> rows;
  for (double pct : percentages) {
    SimConfig config = base;
    config.churn.mode = pct > 0.0 ? ChurnMode::leavings : ChurnMode::none;
    config.churn.pct = pct;
    ExperimentResult r = run_experiment(data, config, trials, observer);
    ChurnRow row;
    row.pct = pct;
    std::vector<double> failures, voluntary;
    for (const auto& t : r.trials) {
      failures.push_back(t.series.back().hit_rate);
      voluntary.push_back(t.series.back().hit_rate_voluntary);
    }
    if (trials >= 2) {
      row.failures = confidence_interval_95(failures);
      row.voluntary = confidence_interval_95(voluntary);
    } else {
      row.failures = {failures[0], std::numeric_limits<double>::quiet_NaN()};
      row.voluntary = {voluntary[0], std::numeric_limits<double>::quiet_NaN()};
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<BaselineMetrics> run_baseline(const RatingMatrix& data, const SimConfig& config,
                                          unsigned trials) {
  if (trials == 0) throw InvalidConfig("trials", "must be >= 1");
  config.validate();
  std::vector<BaselineMetrics> out;
  for (unsigned t = 0; t < trials; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, t);
    const SplitSpec split = all_but_1_split(data, derive_seed(seed, 0));
    const auto similarity = kernels::similarity_matrix(split.training);
    const auto baseline =
        centralized_baseline(split.training, similarity, config.protocol.cache_size, config.top_n,
                             config.protocol.significance_threshold);
    out.push_back(score_baseline(baseline, split.hidden_items()));
  }
  return out;
}

}  // namespace swarmix
