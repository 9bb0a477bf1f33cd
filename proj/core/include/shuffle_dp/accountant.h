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

// Tight (epsilon, delta) accounting for the histogram query of the shuffle
// model with a k-ary randomized response (k-RR) local randomizer.
//
// Setting: n users, alphabet of size k, each user applies epsilon0-LDP k-RR and
// the shuffler publishes only per-symbol counts. A distinguished user u holds
// either the primary input x0 or a secondary input x1 != x0; among the other
// n-1 users, count_x0 hold x0. The observable is s, the published count of x0.
//
// Everything is evaluated in the log domain. With m = n - count_x0,
//   kappa1 = e^eps0 (e^eps0 + k - 2) / (k - 1)
//   kappa2 = (k - 1) / (e^eps0 + k - 2)
//   kappa3(s) = (k-1)^count_x0 (e^eps0 + k - 2)^(m - s) / (e^eps0 + k - 1)^n
//   P[s | x0] = kappa3(s)/m * sum_r C(count_x0, r) C(m, s-r) kappa1^r tau_r,
//               tau_r = kappa2 m + (e^eps0 - kappa2)(s - r)
//   P[s | x1] = kappa3(s) * sum_r C(count_x0, r) C(m, s-r) kappa1^r
// and the tight delta at epsilon is
//   delta(eps) = sum_s 1{v_s > eps} (1 - e^(eps - v_s)) P[s | x0].

#ifndef SHUFFLE_DP_ACCOUNTANT_H_
#define SHUFFLE_DP_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/histogram.h"
#include "shuffle_dp/log_math.h"

namespace shuffle_dp {

// (n, k, epsilon0, count_x0) with n >= 1, k >= 2, 0 < epsilon0 < inf and
// 0 <= count_x0 <= n - 1.
class ShuffleInstance {
 public:
  static absl::StatusOr<ShuffleInstance> Create(int64_t n, int k,
                                                double epsilon0,
                                                int64_t count_x0);

  int64_t n() const { return n_; }
  int k() const { return k_; }
  double epsilon0() const { return epsilon0_; }
  int64_t count_x0() const { return count_x0_; }
  // n - count_x0: the distinguished user plus the users not holding x0.
  int64_t remainder() const { return n_ - count_x0_; }

 private:
  ShuffleInstance(int64_t n, int k, double epsilon0, int64_t count_x0)
      : n_(n), k_(k), epsilon0_(epsilon0), count_x0_(count_x0) {}

  int64_t n_;
  int k_;
  double epsilon0_;
  int64_t count_x0_;
};

struct KappaConstants {
  double kappa1;
  double kappa2;
  double log_kappa1;
  double log_kappa2;
  // ln kappa3 at s = 0, and ln(e^eps0 + k - 2) (the per-s decrement).
  double log_kappa3_at_zero;
  double log_exp_eps0_plus_k_minus_2;

  double Kappa3Log(int64_t s) const {
    return log_kappa3_at_zero -
           static_cast<double>(s) * log_exp_eps0_plus_k_minus_2;
  }
};

absl::StatusOr<KappaConstants> ComputeKappaConstants(
    const ShuffleInstance& instance);

// Which closed form to use for the privacy loss v_s.
enum class LossFormula {
  // v_s = ln(kappa2 + (e^eps0 - kappa2) A_s / D_s) with
  //   A_s = sum_r C(count_x0, r) C(m-1, s-1-r) kappa1^r,
  //   D_s = sum_r C(count_x0, r) C(m, s-r) kappa1^r,
  // which equals ln P[s | x0] - ln P[s | x1].
  kExact,
  // Same expression with A_s replaced by
  //   (1/m) sum_r (s-r) C(count_x0, r) C(m-1, s-1-r) kappa1^r.
  // This is not the log-ratio of the output probabilities; it is kept because
  // historical reference tables of tight delta were produced with it.
  kLegacy,
};

// Closed-form evaluator for one instance. Holds the log-factorial table, so
// reuse it when evaluating many s.
class ShuffleOutputModel {
 public:
  explicit ShuffleOutputModel(const ShuffleInstance& instance);

  const ShuffleInstance& instance() const { return instance_; }
  const KappaConstants& kappa() const { return kappa_; }

  // Callers guarantee 0 <= s <= n.
  double LogProbGivenPrimary(int64_t s) const;
  double LogProbGivenSecondary(int64_t s) const;
  double PrivacyLoss(int64_t s, LossFormula formula) const;

 private:
  ShuffleInstance instance_;
  KappaConstants kappa_;
  LogFactorialTable log_factorial_;
  double log_tau_slope_;  // ln(e^eps0 - kappa2)
};

absl::StatusOr<double> LogProbOutputGivenPrimary(
    const ShuffleInstance& instance, int64_t s);
absl::StatusOr<double> LogProbOutputGivenSecondary(
    const ShuffleInstance& instance, int64_t s);
absl::StatusOr<double> PrivacyLossValue(
    const ShuffleInstance& instance, int64_t s,
    LossFormula formula = LossFormula::kExact);

struct LossContribution {
  int64_t s;
  double loss;
  double contribution;
};

struct DeltaResult {
  double epsilon = 0.0;
  double delta = 0.0;
  // ln(delta); -inf when delta == 0. Keeps precision below double range.
  double log_delta = kNegativeInfinity;
  // The count_x0 that attains delta (the only one for ADP).
  int64_t count_x0 = -1;
  // Terms with v_s > epsilon, in increasing s.
  std::optional<std::vector<LossContribution>> contributions;
};

struct DeltaOptions {
  LossFormula formula = LossFormula::kExact;
  bool keep_contributions = false;
};

// Per-s losses and log-probabilities of one instance. Computing this is
// O(n^2); evaluating Delta afterwards is O(n), so sweeps over epsilon should
// build the profile once.
class PrivacyLossProfile {
 public:
  static absl::StatusOr<PrivacyLossProfile> Compute(
      const ShuffleInstance& instance,
      LossFormula formula = LossFormula::kExact);

  const ShuffleInstance& instance() const { return instance_; }
  LossFormula formula() const { return formula_; }
  std::span<const double> losses() const { return losses_; }
  std::span<const double> log_prob_primary() const { return log_primary_; }
  std::span<const double> log_prob_secondary() const {
    return log_secondary_;
  }

  absl::StatusOr<DeltaResult> Delta(double epsilon,
                                    bool keep_contributions = false) const;

 private:
  PrivacyLossProfile(const ShuffleInstance& instance, LossFormula formula)
      : instance_(instance), formula_(formula) {}

  ShuffleInstance instance_;
  LossFormula formula_;
  std::vector<double> losses_;
  std::vector<double> log_primary_;
  std::vector<double> log_secondary_;
};

// Tight ADP delta for (x0, x1) at epsilon > 0.
absl::StatusOr<DeltaResult> TightDeltaAdp(const ShuffleInstance& instance,
                                          double epsilon,
                                          const DeltaOptions& options = {});

// Tight DP delta: the maximum ADP delta over the supplied candidate counts.
// v_s depends on x0 only through count_x0, so maximizing over the alphabet
// reduces to maximizing over the distinct counts.
absl::StatusOr<DeltaResult> TightDeltaDp(int64_t n, int k, double epsilon0,
                                         double epsilon,
                                         std::span<const int64_t> counts,
                                         const DeltaOptions& options = {});

enum class CandidateCounts {
  // count - 1 for every symbol present in the histogram.
  kPresentSymbols,
  // 0, 1, ..., n - 1.
  kAllCounts,
};

// Candidate count_x0 values derived from a dataset histogram: a user holding
// symbol x sees count(x) - 1 other holders of x.
std::vector<int64_t> CandidateCountsFromHistogram(const Histogram& histogram,
                                                  CandidateCounts mode);

absl::StatusOr<DeltaResult> TightDeltaDpForHistogram(
    const Histogram& histogram, double epsilon0, double epsilon,
    CandidateCounts mode = CandidateCounts::kPresentSymbols,
    const DeltaOptions& options = {});

struct PrivacyLossAtom {
  double loss;
  double mass;
};

// Discrete privacy loss distribution: finite atoms with distinct losses plus a
// mass at +infinity, summing to 1 within 1e-9.
class PrivacyLossDistribution {
 public:
  static absl::StatusOr<PrivacyLossDistribution> Create(
      std::vector<PrivacyLossAtom> atoms, double mass_at_infinity);

  std::span<const PrivacyLossAtom> atoms() const { return atoms_; }
  double mass_at_infinity() const { return mass_at_infinity_; }

 private:
  PrivacyLossDistribution(std::vector<PrivacyLossAtom> atoms,
                          double mass_at_infinity)
      : atoms_(std::move(atoms)), mass_at_infinity_(mass_at_infinity) {}

  std::vector<PrivacyLossAtom> atoms_;
  double mass_at_infinity_;
};

// PLD of the shuffle output for x0 over x1, built from the two output
// probability routes (not from the closed-form loss). Atoms with identical
// loss are merged.
absl::StatusOr<PrivacyLossDistribution> BuildShufflePrivacyLossDistribution(
    const ShuffleInstance& instance);

// delta(eps) = w(inf) + sum_{u > eps} (1 - e^(eps - u)) w(u).
absl::StatusOr<double> TightDeltaFromPld(const PrivacyLossDistribution& pld,
                                         double epsilon);

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_ACCOUNTANT_H_
