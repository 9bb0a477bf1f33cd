//
// Copyright 2026 The Shuffle DP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "shuffle_dp/harness/compare.h"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "shuffle_dp/accountant.h"
#include "shuffle_dp/estimation.h"
#include "shuffle_dp/harness/ingest.h"

namespace shuffle_dp::harness {
namespace {

constexpr char kIndividualNote[] =
    "individual: absolute |estimate - count| per symbol; "
    "individual_normalized divides by n (which convention published "
    "individual-utility figures use is not stated)";

// Profiles shared by all trials; compute happens outside the lock.
class ProfileCache {
 public:
  explicit ProfileCache(LossFormula formula) : formula_(formula) {}

  absl::StatusOr<std::shared_ptr<const PrivacyLossProfile>> Get(
      const ShuffleInstance& instance) {
    Key key(instance.n(), instance.k(), instance.epsilon0(),
            instance.count_x0());
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    absl::StatusOr<PrivacyLossProfile> profile =
        PrivacyLossProfile::Compute(instance, formula_);
    if (!profile.ok()) return profile.status();
    auto shared =
        std::make_shared<const PrivacyLossProfile>(*std::move(profile));
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(shared)).first->second;
  }

 private:
  using Key = std::tuple<int64_t, int, double, int64_t>;
  LossFormula formula_;
  std::mutex mu_;
  std::map<Key, std::shared_ptr<const PrivacyLossProfile>> cache_;
};

struct TrialOutput {
  std::vector<UtilityReport> reports;
  std::vector<TrialDelta> deltas;
  std::vector<std::string> notes;
  std::vector<std::string> labels;
  std::string binning;
  int64_t dropped = 0;
};

std::map<std::string, double> PerSymbol(const std::vector<std::string>& labels,
                                        std::span<const double> values) {
  std::map<std::string, double> out;
  for (size_t i = 0; i < labels.size(); ++i) out[labels[i]] = values[i];
  return out;
}

absl::Status FillUtility(std::span<const double> estimated_counts,
                         const Histogram& truth,
                         const std::vector<std::string>& labels,
                         UtilityReport& report) {
  absl::StatusOr<double> tv = CommunityUtility(estimated_counts, truth);
  if (!tv.ok()) return tv.status();
  report.tv_distance = *tv;
  std::vector<double> absolute(truth.k());
  std::vector<double> normalized(truth.k());
  for (int x = 0; x < truth.k(); ++x) {
    absl::StatusOr<double> u = IndividualUtility(estimated_counts, truth, x);
    if (!u.ok()) return u.status();
    absolute[x] = *u;
    normalized[x] = *u / static_cast<double>(truth.total());
  }
  report.individual = PerSymbol(labels, absolute);
  report.individual_normalized = PerSymbol(labels, normalized);
  return absl::OkStatus();
}

absl::StatusOr<TrialDelta> ComputeDelta(const ExperimentConfig& config,
                                        const Histogram& truth,
                                        double epsilon, ProfileCache& cache) {
  std::vector<int64_t> counts;
  if (config.delta_mode == DeltaMode::kPrimaryAdp) {
    counts.push_back(config.count_x0.has_value()
                         ? *config.count_x0
                         : std::max<int64_t>(truth.count(config.x0) - 1, 0));
  } else {
    counts = CandidateCountsFromHistogram(
        truth, config.all_counts ? CandidateCounts::kAllCounts
                                 : CandidateCounts::kPresentSymbols);
  }
  TrialDelta best;
  best.epsilon = epsilon;
  double best_log = -INFINITY;
  for (int64_t count : counts) {
    absl::StatusOr<ShuffleInstance> instance = ShuffleInstance::Create(
        truth.total(), truth.k(), config.epsilon0, count);
    if (!instance.ok()) return instance.status();
    absl::StatusOr<std::shared_ptr<const PrivacyLossProfile>> profile =
        cache.Get(*instance);
    if (!profile.ok()) return profile.status();
    absl::StatusOr<DeltaResult> result = (*profile)->Delta(epsilon);
    if (!result.ok()) return result.status();
    if (best.count_x0 < 0 || result->log_delta > best_log) {
      best_log = result->log_delta;
      best.delta = result->delta;
      best.count_x0 = count;
    }
  }
  best.delta_used = best.delta;
  return best;
}

absl::StatusOr<TrialOutput> RunTrial(const ExperimentConfig& config,
                                     std::span<const MechanismModel> models,
                                     int trial, ProfileCache& cache) {
  TrialOutput out;
  Rng data_rng = MakeStream(config.seed, trial, 0);
  absl::StatusOr<IngestResult> ingest = LoadDataset(config, data_rng);
  if (!ingest.ok()) return ingest.status();
  out.labels = ingest->alphabet.symbols();
  out.binning = ingest->binning;
  out.dropped = ingest->dropped;
  const Histogram truth = Histogram::FromDataset(ingest->dataset);
  if (config.x0 >= truth.k()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "x0 = ", config.x0, " outside the alphabet of size ", truth.k()));
  }
  const auto wants = [&](MechanismModel m) {
    return std::find(models.begin(), models.end(), m) != models.end();
  };
  const bool any_shuffle =
      wants(MechanismModel::kShuffleInv) || wants(MechanismModel::kShuffleRaw);
  const double shuffle_eps0 =
      config.shuffle_epsilon0_override.value_or(config.epsilon0);

  std::optional<Histogram> noisy;
  if (any_shuffle) {
    Rng shuffle_rng = MakeStream(config.seed, trial, 1);
    absl::StatusOr<Histogram> h =
        ShuffleHistogram(ingest->dataset, shuffle_eps0, shuffle_rng);
    if (!h.ok()) return h.status();
    noisy = *std::move(h);
  }

  for (size_t e = 0; e < config.epsilons.size(); ++e) {
    const double epsilon = config.epsilons[e];
    absl::StatusOr<TrialDelta> delta =
        ComputeDelta(config, truth, epsilon, cache);
    if (!delta.ok()) return delta.status();
    delta->trial = trial;

    UtilityReport base;
    base.epsilon = epsilon;
    base.delta = delta->delta;
    base.n = truth.total();
    base.k = truth.k();
    base.seed = config.seed;
    base.trial = trial;

    for (MechanismModel model : models) {
      UtilityReport report = base;
      report.model = model;
      if (model == MechanismModel::kGaussian) {
        double sigma = 0.0;
        if (config.sigma_override.has_value()) {
          sigma = *config.sigma_override;
        } else {
          if (delta->delta == 0.0) {
            if (config.zero_delta == ZeroDeltaPolicy::kReject) {
              return absl::FailedPreconditionError(absl::StrFormat(
                  "tight delta is exactly 0 at epsilon=%g (trial %d); the "
                  "Gaussian mechanism needs delta > 0 (use "
                  "zero_delta=min-positive to substitute DBL_MIN)",
                  epsilon, trial));
            }
            delta->delta_used = DBL_MIN;
            out.notes.push_back(absl::StrFormat(
                "trial %d epsilon=%g: delta 0 replaced by DBL_MIN for the "
                "Gaussian calibration",
                trial, epsilon));
          }
          absl::StatusOr<GaussianCalibration> calibration = CalibrateGaussian(
              epsilon, delta->delta_used, config.l2_sensitivity);
          if (!calibration.ok()) return calibration.status();
          sigma = calibration->sigma;
        }
        report.delta = delta->delta_used;
        report.sigma = sigma;
        Rng noise_rng = MakeStream(config.seed, trial, 2 + e);
        GaussianCalibration used{epsilon, delta->delta_used,
                                 config.l2_sensitivity, sigma};
        NoisyHistogram released = GaussianHistogram(truth, used, noise_rng);
        if (absl::Status st =
                FillUtility(released.values, truth, out.labels, report);
            !st.ok()) {
          return st;
        }
      } else {
        report.epsilon0 = shuffle_eps0;
        const double n = static_cast<double>(truth.total());
        std::vector<double> counts;
        if (model == MechanismModel::kShuffleRaw) {
          counts = noisy->AsDoubles();
        } else {
          absl::StatusOr<DistributionEstimate> estimate =
              Denoise(*noisy, shuffle_eps0, /*project=*/true);
          if (!estimate.ok()) return estimate.status();
          for (double p : estimate->values) counts.push_back(p * n);
          absl::StatusOr<double> projected =
              CommunityUtility(*estimate->projected, truth);
          if (!projected.ok()) return projected.status();
          report.tv_distance_projected = *projected;
        }
        if (absl::Status st = FillUtility(counts, truth, out.labels, report);
            !st.ok()) {
          return st;
        }
      }
      out.reports.push_back(std::move(report));
    }
    out.deltas.push_back(*delta);
  }
  return out;
}

}  // namespace

Rng MakeStream(uint64_t seed, uint64_t trial, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(trial), static_cast<uint32_t>(trial >> 32),
                    static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32)};
  return Rng(seq);
}

absl::StatusOr<ExperimentResult> RunExperiment(
    const ExperimentConfig& config, std::span<const MechanismModel> models) {
  if (absl::Status st = config.Validate(); !st.ok()) return st;
  if (models.empty()) {
    return absl::InvalidArgumentError("no models requested");
  }
  ProfileCache cache(config.loss_formula);
  std::vector<std::optional<absl::StatusOr<TrialOutput>>> outputs(
      config.trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < config.trials; t = next++) {
      outputs[t] = RunTrial(config, models, t, cache);
    }
  };
  const int threads = std::min(config.threads, config.trials);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ExperimentResult result;
  result.config = config;
  result.notes.push_back(kIndividualNote);
  for (int t = 0; t < config.trials; ++t) {
    absl::StatusOr<TrialOutput>& out = *outputs[t];
    if (!out.ok()) return out.status();
    if (t == 0) {
      result.labels = out->labels;
      result.binning = out->binning;
      result.dropped = out->dropped;
    }
    for (UtilityReport& r : out->reports) {
      result.reports.push_back(std::move(r));
    }
    for (const TrialDelta& d : out->deltas) result.deltas.push_back(d);
    for (std::string& note : out->notes) {
      result.notes.push_back(std::move(note));
    }
  }
  for (double epsilon : config.epsilons) {
    for (MechanismModel model : models) {
      std::vector<double> tvs;
      for (const UtilityReport& r : result.reports) {
        if (r.epsilon == epsilon && r.model == model) {
          tvs.push_back(r.tv_distance);
        }
      }
      absl::StatusOr<BoxStats> stats = ComputeBoxStats(std::move(tvs));
      if (!stats.ok()) return stats.status();
      result.summaries.push_back(ModelSummary{epsilon, model, *stats});
    }
  }
  return result;
}

absl::StatusOr<ExperimentResult> RunCompare(const ExperimentConfig& config) {
  static constexpr MechanismModel kAll[] = {MechanismModel::kShuffleInv,
                                            MechanismModel::kShuffleRaw,
                                            MechanismModel::kGaussian};
  return RunExperiment(config, kAll);
}

}  // namespace shuffle_dp::harness
