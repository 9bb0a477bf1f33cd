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

#include "shuffle_dp/accountant.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace shuffle_dp {
namespace {

// Tolerance on the total mass of a privacy loss distribution.
constexpr double kPldMassTolerance = 1e-9;

absl::Status ValidateEpsilon(double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  return absl::OkStatus();
}

absl::Status ValidateOutput(const ShuffleInstance& instance, int64_t s) {
  if (s < 0 || s > instance.n()) {
    return absl::OutOfRangeError(
        absl::StrCat("output count s=", s, " outside [0, ", instance.n(), "]"));
  }
  return absl::OkStatus();
}

// The four r-sums needed at one output s, each in log form:
//   denominator  D_s = sum_r b_r C(m, s-r)
//   primary      sum_r b_r C(m, s-r) tau_r
//   exact_rest   sum_r b_r C(m-1, s-r)                (D_s - A_s)
//   legacy_rest  sum_r b_r C(m, s-r) (1 - ((s-r)/m)^2)
// with b_r = C(count_x0, r) kappa1^r.
struct OutputSums {
  double log_denominator;
  double log_primary;
  double log_exact_rest;
  double log_legacy_rest;
};

}  // namespace

absl::StatusOr<ShuffleInstance> ShuffleInstance::Create(int64_t n, int k,
                                                        double epsilon0,
                                                        int64_t count_x0) {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (k < 2) {
    return absl::InvalidArgumentError(absl::StrCat("k must be >= 2, got ", k));
  }
  if (!(epsilon0 > 0) || !std::isfinite(epsilon0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon0 must be finite and > 0, got ", epsilon0));
  }
  if (count_x0 < 0 || count_x0 > n - 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "count_x0 must lie in [0, n-1] = [0, ", n - 1, "], got ", count_x0));
  }
  return ShuffleInstance(n, k, epsilon0, count_x0);
}

absl::StatusOr<KappaConstants> ComputeKappaConstants(
    const ShuffleInstance& instance) {
  const double eps0 = instance.epsilon0();
  const double k = instance.k();
  const double log_k_minus_1 = std::log(k - 1.0);
  const double log_e_k2 = LogExpPlus(eps0, k - 2.0);
  const double log_e_k1 = LogExpPlus(eps0, k - 1.0);

  KappaConstants kappa;
  kappa.log_kappa1 = eps0 + log_e_k2 - log_k_minus_1;
  kappa.log_kappa2 = log_k_minus_1 - log_e_k2;
  kappa.kappa1 = std::exp(kappa.log_kappa1);
  kappa.kappa2 = std::exp(kappa.log_kappa2);
  kappa.log_exp_eps0_plus_k_minus_2 = log_e_k2;
  kappa.log_kappa3_at_zero =
      static_cast<double>(instance.count_x0()) * log_k_minus_1 +
      static_cast<double>(instance.remainder()) * log_e_k2 -
      static_cast<double>(instance.n()) * log_e_k1;
  return kappa;
}

ShuffleOutputModel::ShuffleOutputModel(const ShuffleInstance& instance)
    : instance_(instance),
      kappa_(*ComputeKappaConstants(instance)),
      log_factorial_(instance.n()) {
  // e^eps0 - kappa2 > 0 because kappa2 < 1 < e^eps0.
  log_tau_slope_ = instance_.epsilon0() +
                   std::log1p(-std::exp(kappa_.log_kappa2 -
                                        instance_.epsilon0()));
}

namespace {

OutputSums ComputeOutputSums(const ShuffleInstance& instance,
                             const KappaConstants& kappa,
                             const LogFactorialTable& log_factorial,
                             double log_tau_slope, int64_t s) {
  const int64_t count = instance.count_x0();
  const int64_t m = instance.remainder();
  const double log_m = std::log(static_cast<double>(m));
  const double log_tau_base = kappa.log_kappa2 + log_m;
  const int64_t r_lo = std::max<int64_t>(0, s - m);
  const int64_t r_hi = std::min(s, count);

  LogSumAccumulator denominator, primary, exact_rest, legacy_rest;
  for (int64_t r = r_lo; r <= r_hi; ++r) {
    const int64_t j = s - r;  // reports of x0 from the remainder group
    const double base = log_factorial.LogChoose(count, r) +
                        static_cast<double>(r) * kappa.log_kappa1;
    const double d_term = base + log_factorial.LogChoose(m, j);
    denominator.Add(d_term);
    const double log_tau =
        j == 0 ? log_tau_base
               : LogAddExp(log_tau_base,
                           log_tau_slope + std::log(static_cast<double>(j)));
    primary.Add(d_term + log_tau);
    exact_rest.Add(base + log_factorial.LogChoose(m - 1, j));
    if (j < m) {
      const double ratio = static_cast<double>(j) / static_cast<double>(m);
      legacy_rest.Add(d_term + std::log1p(-ratio * ratio));
    }
  }
  return {denominator.Result(), primary.Result(), exact_rest.Result(),
          legacy_rest.Result()};
}

// v_s = ln(e^eps0 - (e^eps0 - kappa2) * rest / D_s), written around eps0 so
// that rest == 0 gives exactly eps0.
double LossFromRest(double eps0, const KappaConstants& kappa,
                    double log_rest, double log_denominator) {
  const double shrink = -std::expm1(kappa.log_kappa2 - eps0);
  return eps0 + std::log1p(-shrink * std::exp(log_rest - log_denominator));
}

}  // namespace

double ShuffleOutputModel::LogProbGivenPrimary(int64_t s) const {
  const OutputSums sums = ComputeOutputSums(instance_, kappa_, log_factorial_,
                                            log_tau_slope_, s);
  return kappa_.Kappa3Log(s) -
         std::log(static_cast<double>(instance_.remainder())) +
         sums.log_primary;
}

double ShuffleOutputModel::LogProbGivenSecondary(int64_t s) const {
  const OutputSums sums = ComputeOutputSums(instance_, kappa_, log_factorial_,
                                            log_tau_slope_, s);
  return kappa_.Kappa3Log(s) + sums.log_denominator;
}

double ShuffleOutputModel::PrivacyLoss(int64_t s, LossFormula formula) const {
  const OutputSums sums = ComputeOutputSums(instance_, kappa_, log_factorial_,
                                            log_tau_slope_, s);
  const double log_rest = formula == LossFormula::kExact
                              ? sums.log_exact_rest
                              : sums.log_legacy_rest;
  return LossFromRest(instance_.epsilon0(), kappa_, log_rest,
                      sums.log_denominator);
}

absl::StatusOr<double> LogProbOutputGivenPrimary(
    const ShuffleInstance& instance, int64_t s) {
  if (absl::Status st = ValidateOutput(instance, s); !st.ok()) return st;
  return ShuffleOutputModel(instance).LogProbGivenPrimary(s);
}

absl::StatusOr<double> LogProbOutputGivenSecondary(
    const ShuffleInstance& instance, int64_t s) {
  if (absl::Status st = ValidateOutput(instance, s); !st.ok()) return st;
  return ShuffleOutputModel(instance).LogProbGivenSecondary(s);
}

absl::StatusOr<double> PrivacyLossValue(const ShuffleInstance& instance,
                                        int64_t s, LossFormula formula) {
  if (absl::Status st = ValidateOutput(instance, s); !st.ok()) return st;
  return ShuffleOutputModel(instance).PrivacyLoss(s, formula);
}

absl::StatusOr<PrivacyLossProfile> PrivacyLossProfile::Compute(
    const ShuffleInstance& instance, LossFormula formula) {
  const KappaConstants kappa = *ComputeKappaConstants(instance);
  const LogFactorialTable log_factorial(instance.n());
  const double eps0 = instance.epsilon0();
  const double log_tau_slope =
      eps0 + std::log1p(-std::exp(kappa.log_kappa2 - eps0));
  const double log_m = std::log(static_cast<double>(instance.remainder()));

  PrivacyLossProfile profile(instance, formula);
  const size_t outputs = static_cast<size_t>(instance.n()) + 1;
  profile.losses_.resize(outputs);
  profile.log_primary_.resize(outputs);
  profile.log_secondary_.resize(outputs);
  for (int64_t s = 0; s <= instance.n(); ++s) {
    const OutputSums sums =
        ComputeOutputSums(instance, kappa, log_factorial, log_tau_slope, s);
    const double log_kappa3 = kappa.Kappa3Log(s);
    profile.log_primary_[s] = log_kappa3 - log_m + sums.log_primary;
    profile.log_secondary_[s] = log_kappa3 + sums.log_denominator;
    profile.losses_[s] = LossFromRest(
        eps0, kappa,
        formula == LossFormula::kExact ? sums.log_exact_rest
                                       : sums.log_legacy_rest,
        sums.log_denominator);
  }
  return profile;
}

absl::StatusOr<DeltaResult> PrivacyLossProfile::Delta(
    double epsilon, bool keep_contributions) const {
  if (absl::Status st = ValidateEpsilon(epsilon); !st.ok()) return st;
  DeltaResult result;
  result.epsilon = epsilon;
  result.count_x0 = instance_.count_x0();
  if (keep_contributions) result.contributions.emplace();

  LogSumAccumulator total;
  for (size_t s = 0; s < losses_.size(); ++s) {
    const double loss = losses_[s];
    if (!(loss > epsilon)) continue;
    const double log_term =
        std::log(-std::expm1(epsilon - loss)) + log_primary_[s];
    total.Add(log_term);
    if (keep_contributions) {
      result.contributions->push_back(
          {static_cast<int64_t>(s), loss, std::exp(log_term)});
    }
  }
  result.log_delta = total.Result();
  result.delta = std::exp(result.log_delta);
  return result;
}

absl::StatusOr<DeltaResult> TightDeltaAdp(const ShuffleInstance& instance,
                                          double epsilon,
                                          const DeltaOptions& options) {
  if (absl::Status st = ValidateEpsilon(epsilon); !st.ok()) return st;
  absl::StatusOr<PrivacyLossProfile> profile =
      PrivacyLossProfile::Compute(instance, options.formula);
  if (!profile.ok()) return profile.status();
  return profile->Delta(epsilon, options.keep_contributions);
}

absl::StatusOr<DeltaResult> TightDeltaDp(int64_t n, int k, double epsilon0,
                                         double epsilon,
                                         std::span<const int64_t> counts,
                                         const DeltaOptions& options) {
  if (counts.empty()) {
    return absl::InvalidArgumentError("candidate count list is empty");
  }
  if (absl::Status st = ValidateEpsilon(epsilon); !st.ok()) return st;
  std::vector<int64_t> distinct(counts.begin(), counts.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());

  std::optional<DeltaResult> best;
  for (int64_t count : distinct) {
    absl::StatusOr<ShuffleInstance> instance =
        ShuffleInstance::Create(n, k, epsilon0, count);
    if (!instance.ok()) return instance.status();
    absl::StatusOr<DeltaResult> result =
        TightDeltaAdp(*instance, epsilon, options);
    if (!result.ok()) return result.status();
    if (!best.has_value() || result->log_delta > best->log_delta) {
      best = *std::move(result);
    }
  }
  return *std::move(best);
}

std::vector<int64_t> CandidateCountsFromHistogram(const Histogram& histogram,
                                                  CandidateCounts mode) {
  std::vector<int64_t> counts;
  if (mode == CandidateCounts::kAllCounts) {
    for (int64_t c = 0; c < histogram.total(); ++c) counts.push_back(c);
    return counts;
  }
  for (int64_t c : histogram.counts()) {
    if (c >= 1) counts.push_back(c - 1);
  }
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  return counts;
}

absl::StatusOr<DeltaResult> TightDeltaDpForHistogram(
    const Histogram& histogram, double epsilon0, double epsilon,
    CandidateCounts mode, const DeltaOptions& options) {
  const std::vector<int64_t> counts =
      CandidateCountsFromHistogram(histogram, mode);
  return TightDeltaDp(histogram.total(), histogram.k(), epsilon0, epsilon,
                      counts, options);
}

absl::StatusOr<PrivacyLossDistribution> PrivacyLossDistribution::Create(
    std::vector<PrivacyLossAtom> atoms, double mass_at_infinity) {
  if (!(mass_at_infinity >= 0 && mass_at_infinity <= 1)) {
    return absl::InvalidArgumentError("mass at infinity must lie in [0, 1]");
  }
  double total = mass_at_infinity;
  for (const PrivacyLossAtom& atom : atoms) {
    if (!std::isfinite(atom.loss)) {
      return absl::InvalidArgumentError("atom loss values must be finite");
    }
    if (!(atom.mass >= 0 && atom.mass <= 1)) {
      return absl::InvalidArgumentError("atom mass must lie in [0, 1]");
    }
    total += atom.mass;
  }
  if (std::abs(total - 1.0) > kPldMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("privacy loss distribution mass sums to ", total,
                     ", expected 1"));
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const PrivacyLossAtom& a, const PrivacyLossAtom& b) {
              return a.loss < b.loss;
            });
  for (size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].loss == atoms[i - 1].loss) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate privacy loss value ", atoms[i].loss));
    }
  }
  return PrivacyLossDistribution(std::move(atoms), mass_at_infinity);
}

absl::StatusOr<PrivacyLossDistribution> BuildShufflePrivacyLossDistribution(
    const ShuffleInstance& instance) {
  absl::StatusOr<PrivacyLossProfile> profile =
      PrivacyLossProfile::Compute(instance, LossFormula::kExact);
  if (!profile.ok()) return profile.status();
  std::vector<PrivacyLossAtom> atoms;
  atoms.reserve(profile->losses().size());
  for (size_t s = 0; s < profile->losses().size(); ++s) {
    const double log_primary = profile->log_prob_primary()[s];
    atoms.push_back({log_primary - profile->log_prob_secondary()[s],
                     std::exp(log_primary)});
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const PrivacyLossAtom& a, const PrivacyLossAtom& b) {
              return a.loss < b.loss;
            });
  std::vector<PrivacyLossAtom> merged;
  for (const PrivacyLossAtom& atom : atoms) {
    if (!merged.empty() && merged.back().loss == atom.loss) {
      merged.back().mass += atom.mass;
    } else {
      merged.push_back(atom);
    }
  }
  return PrivacyLossDistribution::Create(std::move(merged), 0.0);
}

absl::StatusOr<double> TightDeltaFromPld(const PrivacyLossDistribution& pld,
                                         double epsilon) {
  if (absl::Status st = ValidateEpsilon(epsilon); !st.ok()) return st;
  double delta = pld.mass_at_infinity();
  for (const PrivacyLossAtom& atom : pld.atoms()) {
    if (atom.loss > epsilon) {
      delta += -std::expm1(epsilon - atom.loss) * atom.mass;
    }
  }
  return delta;
}

}  // namespace shuffle_dp
