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

#include "shuffle_dp/harness/verify.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "json.hpp"
#include "shuffle_dp/oracles.h"
#include "src/harness/json_util.h"

namespace shuffle_dp::harness {
namespace {

constexpr double kDistributionTolerance = 1e-10;
constexpr double kLossTolerance = 1e-10;
constexpr double kNormalizationTolerance = 1e-9;
constexpr double kDeltaTolerance = 1e-9;

std::string Describe(const ShuffleInstance& inst) {
  return absl::StrFormat("n=%d k=%d epsilon0=%g count_x0=%d", inst.n(),
                         inst.k(), inst.epsilon0(), inst.count_x0());
}

class Family {
 public:
  Family(std::string name, double tolerance) {
    report_.name = std::move(name);
    report_.tolerance = tolerance;
  }

  // Records one check; errors that are NaN count as failures.
  void Record(double error, const std::string& where) {
    ++report_.checks;
    const bool bad = !(error <= report_.tolerance);
    if (bad) ++report_.failures;
    if (bad && std::isnan(error)) error = INFINITY;
    if (error >= report_.max_error) {
      report_.max_error = error;
      report_.worst = where;
    }
  }

  FamilyReport Finish() {
    if (report_.checks == 0) report_.worst.clear();
    return report_;
  }

 private:
  FamilyReport report_;
};

double RelativeError(double actual, double expected) {
  if (actual == expected) return 0.0;
  return std::abs(actual - expected) / std::abs(expected);
}

int64_t ResolveCount(CountRule rule, int64_t n) {
  switch (rule) {
    case CountRule::kZero:
      return 0;
    case CountRule::kHalf:
      return std::min<int64_t>(n / 2, n - 1);
    case CountRule::kLast:
      return n - 1;
  }
  return 0;
}

std::vector<double> Range(double lo, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    // Rounded to one decimal so 0.1 * 3 prints as 0.3.
    out.push_back(std::round((lo + step * i) * 10.0) / 10.0);
  }
  return out;
}

}  // namespace

VerifyGrid DefaultVerifyGrid() {
  VerifyGrid grid;
  for (int64_t n = 1; n <= 30; ++n) grid.ns.push_back(n);
  grid.ks = {2, 3, 4, 5};
  grid.epsilon0s = {0.5, 1.0, 2.0};
  grid.counts = {CountRule::kZero, CountRule::kHalf, CountRule::kLast};
  grid.epsilons = {0.1, 0.5, 1.0};
  grid.monotone_epsilons = Range(0.1, 0.1, 30);
  return grid;
}

VerifyGrid FullVerifyGrid() {
  VerifyGrid grid = DefaultVerifyGrid();
  grid.large_cases.push_back(LargeCase{10000, 15, 4.0, 8000});
  return grid;
}

bool VerifyReport::passed() const {
  return std::all_of(families.begin(), families.end(),
                     [](const FamilyReport& f) { return f.passed(); });
}

VerifyReport RunVerify(const VerifyGrid& grid) {
  Family convolution("convolution", kDistributionTolerance);
  Family two_route("two_route", kLossTolerance);
  Family normalization("normalization", kNormalizationTolerance);
  Family exhaustive("exhaustive_delta", kDeltaTolerance);
  Family pld("pld_delta", kDeltaTolerance);
  Family monotone("monotone_delta", 0.0);
  const double sign = grid.perturb ? -1.0 : 1.0;

  VerifyReport report;
  std::vector<int64_t> seen;
  for (int64_t n : grid.ns) {
    for (int k : grid.ks) {
      for (double eps0 : grid.epsilon0s) {
        seen.clear();
        for (CountRule rule : grid.counts) {
          const int64_t count = ResolveCount(rule, n);
          // floor(n/2) and n-1 coincide for small n.
          if (std::find(seen.begin(), seen.end(), count) != seen.end()) {
            continue;
          }
          seen.push_back(count);
          absl::StatusOr<ShuffleInstance> inst =
              ShuffleInstance::Create(n, k, eps0, count);
          if (!inst.ok()) continue;
          ++report.instances;
          const std::string where = Describe(*inst);

          absl::StatusOr<ExactDistribution> oracle_primary =
              ConvolutionDistribution(*inst, !grid.perturb,
                                      OraclePrecision::kExtended);
          absl::StatusOr<ExactDistribution> oracle_secondary =
              ConvolutionDistribution(*inst, false,
                                      OraclePrecision::kExtended);
          double sum_primary = 0.0;
          double sum_secondary = 0.0;
          for (int64_t s = 0; s <= n; ++s) {
            const std::string at = absl::StrFormat("%s s=%d", where, s);
            absl::StatusOr<double> lp = LogProbOutputGivenPrimary(*inst, s);
            absl::StatusOr<double> ls = LogProbOutputGivenSecondary(*inst, s);
            absl::StatusOr<double> v =
                PrivacyLossValue(*inst, s, LossFormula::kExact);
            if (!lp.ok() || !ls.ok() || !v.ok() || !oracle_primary.ok() ||
                !oracle_secondary.ok()) {
              convolution.Record(NAN, at);
              continue;
            }
            convolution.Record(
                RelativeError(std::exp(*lp), oracle_primary->probs[s]), at);
            convolution.Record(
                RelativeError(std::exp(*ls), oracle_secondary->probs[s]), at);
            two_route.Record(std::abs(sign * *v - (*lp - *ls)), at);
            sum_primary += std::exp(*lp);
            sum_secondary += std::exp(*ls);
          }
          normalization.Record(std::abs(sum_primary - 1.0), where);
          normalization.Record(std::abs(sum_secondary - 1.0), where);

          absl::StatusOr<PrivacyLossProfile> profile =
              PrivacyLossProfile::Compute(*inst);
          absl::StatusOr<PrivacyLossDistribution> dist =
              BuildShufflePrivacyLossDistribution(*inst);
          for (double eps : grid.epsilons) {
            const std::string at = absl::StrFormat("%s epsilon=%g", where, eps);
            absl::StatusOr<DeltaResult> tight = TightDeltaAdp(*inst, eps);
            absl::StatusOr<double> brute = ExhaustiveTightDelta(*inst, eps);
            if (!tight.ok() || !brute.ok()) {
              exhaustive.Record(NAN, at);
            } else {
              exhaustive.Record(std::abs(tight->delta - *brute), at);
            }
            if (!tight.ok() || !dist.ok()) {
              pld.Record(NAN, at);
              continue;
            }
            absl::StatusOr<double> generic = TightDeltaFromPld(*dist, eps);
            pld.Record(generic.ok() ? std::abs(tight->delta - *generic) : NAN,
                       at);
          }
          if (!profile.ok()) {
            monotone.Record(NAN, where);
            continue;
          }
          double previous = INFINITY;
          for (double eps : grid.monotone_epsilons) {
            absl::StatusOr<DeltaResult> d = profile->Delta(eps);
            if (!d.ok()) {
              monotone.Record(NAN, where);
              break;
            }
            // Error is the amount by which delta increased.
            monotone.Record(std::max(0.0, d->delta - previous),
                            absl::StrFormat("%s epsilon=%g", where, eps));
            previous = d->delta;
          }
        }
      }
    }
  }

  for (const LargeCase& c : grid.large_cases) {
    absl::StatusOr<ShuffleInstance> inst =
        ShuffleInstance::Create(c.n, c.k, c.epsilon0, c.count_x0);
    if (!inst.ok()) continue;
    ++report.instances;
    absl::StatusOr<PrivacyLossProfile> profile =
        PrivacyLossProfile::Compute(*inst);
    const std::string where = Describe(*inst);
    if (!profile.ok()) {
      normalization.Record(NAN, where);
      continue;
    }
    normalization.Record(
        std::abs(std::exp(LogSumExp(profile->log_prob_primary())) - 1.0),
        where);
    normalization.Record(
        std::abs(std::exp(LogSumExp(profile->log_prob_secondary())) - 1.0),
        where);
  }

  report.families = {convolution.Finish(), two_route.Finish(),
                     normalization.Finish(), exhaustive.Finish(),
                     pld.Finish(), monotone.Finish()};
  return report;
}

void WriteVerifyJson(std::ostream& out, const VerifyReport& report) {
  nlohmann::ordered_json j;
  j["passed"] = report.passed();
  j["instances"] = report.instances;
  nlohmann::ordered_json families = nlohmann::ordered_json::array();
  for (const FamilyReport& f : report.families) {
    nlohmann::ordered_json fj;
    fj["family"] = f.name;
    fj["passed"] = f.passed();
    fj["checks"] = f.checks;
    fj["failures"] = f.failures;
    fj["max_error"] = internal::NumberOrString(f.max_error);
    fj["tolerance"] = f.tolerance;
    fj["worst"] = f.worst;
    families.push_back(std::move(fj));
  }
  j["families"] = std::move(families);
  out << j.dump(2) << '\n';
}

}  // namespace shuffle_dp::harness
