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

// shuffle_dp: tight delta accounting and shuffle-vs-Gaussian experiments.
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
// 3 verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "shuffle_dp/accountant.h"
#include "shuffle_dp/harness/compare.h"
#include "shuffle_dp/harness/config.h"
#include "shuffle_dp/harness/csv.h"
#include "shuffle_dp/harness/ingest.h"
#include "shuffle_dp/harness/report.h"
#include "shuffle_dp/harness/sweep.h"
#include "shuffle_dp/harness/verify.h"
#include "shuffle_dp/histogram.h"

namespace {

using shuffle_dp::harness::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kPermissionDenied:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

int Fail(const absl::Status& status) {
  std::cerr << "shuffle_dp: " << status << "\n";
  return ExitCodeFor(status);
}

// Flags shared by simulate and compare. Unset flags leave the config file
// (or built-in default) value in place.
struct ExperimentFlags {
  std::string config_path;
  std::optional<int64_t> n;
  std::optional<int> k;
  std::optional<double> epsilon0;
  std::vector<double> epsilons;
  std::optional<int64_t> count_x0;
  std::optional<int> x0;
  std::optional<int> trials;
  std::optional<uint64_t> seed;
  std::optional<std::string> source;
  std::optional<std::string> path;
  std::vector<double> box;  // min_lat max_lat min_lon max_lon
  std::optional<int> rows;
  std::optional<int> cols;
  std::optional<std::string> delta_mode;
  bool all_counts = false;
  std::optional<std::string> formula;
  std::optional<double> l2;
  std::optional<std::string> zero_delta;
  std::optional<double> sigma_override;
  std::optional<double> shuffle_epsilon0_override;
  std::optional<int> threads;
  std::optional<std::string> timestamp;
  std::optional<std::string> reports;
  std::optional<std::string> summary;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config");
    app->add_option("--n", n, "Number of users (0: all CSV records)");
    app->add_option("--k", k, "Alphabet size (synthetic source)");
    app->add_option("--epsilon0", epsilon0, "Local k-RR epsilon0");
    app->add_option("--epsilon", epsilons, "Target epsilon (repeatable)");
    app->add_option("--count-x0", count_x0,
                    "Other holders of x0 (adp delta mode)");
    app->add_option("--x0", x0, "Primary symbol index (adp delta mode)");
    app->add_option("--trials", trials, "Number of trials");
    app->add_option("--seed", seed, "Master RNG seed");
    app->add_option("--source", source, "synthetic|categorical|location");
    app->add_option("--path", path, "Input CSV path");
    app->add_option("--box", box, "min_lat max_lat min_lon max_lon")
        ->expected(4);
    app->add_option("--rows", rows, "Grid rows (location source)");
    app->add_option("--cols", cols, "Grid columns (location source)");
    app->add_option("--delta-mode", delta_mode, "adp|community");
    app->add_flag("--all-counts", all_counts,
                  "Community delta over every count 0..n-1");
    app->add_option("--formula", formula, "exact|legacy");
    app->add_option("--l2-sensitivity", l2, "Histogram L2 sensitivity");
    app->add_option("--zero-delta", zero_delta, "reject|min-positive");
    app->add_option("--sigma-override", sigma_override,
                    "Fixed Gaussian sigma (skips calibration)");
    app->add_option("--shuffle-epsilon0-override", shuffle_epsilon0_override,
                    "epsilon0 used by the simulated randomizer (inf allowed)");
    app->add_option("--threads", threads, "Worker threads");
    app->add_option("--timestamp", timestamp, "Copied into every report");
    app->add_option("--reports", reports, "JSON-lines report path");
    app->add_option("--summary", summary, "Summary CSV path");
  }

  absl::StatusOr<ExperimentConfig> Resolve() const {
    ExperimentConfig config;
    if (!config_path.empty()) {
      absl::StatusOr<ExperimentConfig> loaded =
          shuffle_dp::harness::LoadExperimentConfig(config_path);
      if (!loaded.ok()) return loaded.status();
      config = *std::move(loaded);
    }
    if (n) config.n = *n;
    if (k) config.k = *k;
    if (epsilon0) config.epsilon0 = *epsilon0;
    if (!epsilons.empty()) config.epsilons = epsilons;
    if (count_x0) config.count_x0 = *count_x0;
    if (x0) config.x0 = *x0;
    if (trials) config.trials = *trials;
    if (seed) config.seed = *seed;
    if (source) {
      absl::StatusOr<shuffle_dp::harness::DatasetKind> kind =
          shuffle_dp::harness::ParseDatasetKind(*source);
      if (!kind.ok()) return kind.status();
      config.source.kind = *kind;
    }
    if (path) config.source.path = *path;
    if (box.size() == 4) {
      config.source.grid.min_lat = box[0];
      config.source.grid.max_lat = box[1];
      config.source.grid.min_lon = box[2];
      config.source.grid.max_lon = box[3];
    }
    if (rows) config.source.grid.rows = *rows;
    if (cols) config.source.grid.cols = *cols;
    if (delta_mode) {
      auto mode = shuffle_dp::harness::ParseDeltaMode(*delta_mode);
      if (!mode.ok()) return mode.status();
      config.delta_mode = *mode;
    }
    if (all_counts) config.all_counts = true;
    if (formula) {
      auto f = shuffle_dp::harness::ParseLossFormula(*formula);
      if (!f.ok()) return f.status();
      config.loss_formula = *f;
    }
    if (l2) config.l2_sensitivity = *l2;
    if (zero_delta) {
      auto policy = shuffle_dp::harness::ParseZeroDeltaPolicy(*zero_delta);
      if (!policy.ok()) return policy.status();
      config.zero_delta = *policy;
    }
    if (sigma_override) config.sigma_override = *sigma_override;
    if (shuffle_epsilon0_override) {
      config.shuffle_epsilon0_override = *shuffle_epsilon0_override;
    }
    if (threads) config.threads = *threads;
    if (timestamp) config.timestamp = *timestamp;
    if (reports) config.reports_path = *reports;
    if (summary) config.summary_path = *summary;
    if (absl::Status st = config.Validate(); !st.ok()) return st;
    return config;
  }
};

// Opens `path` for writing, or returns stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!ToStdout()) file_.open(path);
  }
  bool ok() const { return ToStdout() || file_.is_open(); }
  std::ostream& stream() { return ToStdout() ? std::cout : file_; }
  bool ToStdout() const { return path_.empty() || path_ == "-"; }
  absl::Status OpenError() const {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path_, "'"));
  }

 private:
  std::string path_;
  std::ofstream file_;
};

int RunDelta(int64_t n, int k, double epsilon0,
             std::optional<int64_t> count_x0, bool dp,
             const std::vector<double>& epsilons, const std::string& formula,
             const std::string& out_path) {
  absl::StatusOr<shuffle_dp::LossFormula> f =
      shuffle_dp::harness::ParseLossFormula(formula);
  if (!f.ok()) return Fail(f.status());
  if (epsilons.empty()) {
    return Fail(absl::InvalidArgumentError("at least one --epsilon needed"));
  }
  std::vector<int64_t> counts;
  if (dp) {
    for (int64_t c = 0; c < n; ++c) counts.push_back(c);
  } else if (count_x0) {
    counts.push_back(*count_x0);
  } else {
    return Fail(
        absl::InvalidArgumentError("--count-x0 is required without --dp"));
  }
  Output out(out_path);
  if (!out.ok()) return Fail(out.OpenError());
  std::vector<std::string> header = {"n",        "k",       "epsilon0",
                                     "count_x0", "epsilon", "delta"};
  shuffle_dp::harness::WriteCsvRow(out.stream(), header);
  for (double epsilon : epsilons) {
    absl::StatusOr<shuffle_dp::DeltaResult> r = shuffle_dp::TightDeltaDp(
        n, k, epsilon0, epsilon, counts, {.formula = *f});
    if (!r.ok()) return Fail(r.status());
    std::vector<std::string> row = {
        absl::StrCat(n),
        absl::StrCat(k),
        shuffle_dp::harness::FormatDelta(epsilon0),
        absl::StrCat(r->count_x0),
        shuffle_dp::harness::FormatDelta(epsilon),
        shuffle_dp::harness::FormatDelta(r->delta)};
    shuffle_dp::harness::WriteCsvRow(out.stream(), row);
  }
  return kExitOk;
}

int WriteExperiment(const shuffle_dp::harness::ExperimentResult& result) {
  const ExperimentConfig& config = result.config;
  {
    Output out(config.reports_path);
    if (!out.ok()) return Fail(out.OpenError());
    shuffle_dp::harness::WriteReportsJsonLines(out.stream(), result);
  }
  if (!config.summary_path.empty()) {
    Output out(config.summary_path);
    if (!out.ok()) return Fail(out.OpenError());
    shuffle_dp::harness::WriteSummaryCsv(out.stream(), result);
    if (!out.ToStdout()) {
      std::vector<std::string> notes = result.notes;
      notes.insert(notes.begin(), result.binning);
      absl::Status st = shuffle_dp::harness::WriteSidecar(config.summary_path,
                                                          config, notes);
      if (!st.ok()) return Fail(st);
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tight privacy accounting for the shuffle model with k-RR"};
  app.require_subcommand(1);

  // delta
  CLI::App* delta = app.add_subcommand("delta", "Tight delta at one point");
  int64_t delta_n = 100;
  int delta_k = 10;
  double delta_eps0 = 2.0;
  std::optional<int64_t> delta_count;
  bool delta_dp = false;
  std::vector<double> delta_eps;
  std::string delta_formula = "exact";
  std::string delta_out;
  delta->add_option("--n", delta_n, "Number of users")->capture_default_str();
  delta->add_option("--k", delta_k, "Alphabet size")->capture_default_str();
  delta->add_option("--epsilon0", delta_eps0, "Local epsilon0")
      ->capture_default_str();
  delta->add_option("--count-x0", delta_count, "Other holders of x0");
  delta->add_flag("--dp", delta_dp, "Maximize over every count 0..n-1");
  delta->add_option("--epsilon", delta_eps, "Target epsilon (repeatable)")
      ->required();
  delta->add_option("--formula", delta_formula, "exact|legacy")
      ->capture_default_str();
  delta->add_option("--out", delta_out, "Output CSV (default stdout)");

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Tight delta over a grid");
  std::string sweep_preset;
  std::vector<double> sweep_eps0 = {2.0};
  std::vector<int64_t> sweep_n = {100};
  std::vector<int> sweep_k = {10};
  std::vector<double> sweep_eps = {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::optional<int64_t> sweep_count;
  std::optional<double> sweep_fraction;
  std::string sweep_formula = "exact";
  std::string sweep_format = "csv";
  std::string sweep_out;
  sweep->add_option("--preset", sweep_preset,
                    "'reference' for the three-block reference table");
  sweep->add_option("--epsilon0", sweep_eps0, "epsilon0 values");
  sweep->add_option("--n", sweep_n, "n values");
  sweep->add_option("--k", sweep_k, "k values");
  sweep->add_option("--epsilon", sweep_eps, "epsilon values");
  auto* count_opt = sweep->add_option("--count-x0", sweep_count,
                                      "Fixed primary count");
  sweep->add_option("--count-fraction", sweep_fraction,
                    "Primary count as a fraction of n")
      ->excludes(count_opt);
  sweep->add_option("--formula", sweep_formula, "exact|legacy")
      ->capture_default_str();
  sweep->add_option("--format", sweep_format, "csv|jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output path (default stdout)");

  // simulate / compare
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one pipeline on a dataset");
  ExperimentFlags simulate_flags;
  simulate_flags.Register(simulate);
  std::string simulate_model = "shuffle_inv";
  simulate
      ->add_option("--model", simulate_model,
                   "shuffle_inv|shuffle_raw|gaussian")
      ->check(CLI::IsMember({"shuffle_inv", "shuffle_raw", "gaussian"}))
      ->capture_default_str();

  CLI::App* compare =
      app.add_subcommand("compare", "Paired shuffle vs Gaussian experiment");
  ExperimentFlags compare_flags;
  compare_flags.Register(compare);

  // ingest
  CLI::App* ingest = app.add_subcommand("ingest", "Dataset to histogram");
  ExperimentFlags ingest_flags;
  ingest_flags.Register(ingest);
  std::string ingest_out;
  ingest->add_option("--out", ingest_out, "Histogram CSV (default stdout)");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Run the oracle suite");
  bool verify_full = false;
  bool verify_perturb = false;
  bool verify_empty = false;
  std::optional<int64_t> verify_max_n;
  std::string verify_out;
  verify->add_flag("--full", verify_full,
                   "Add the large normalization case (n = 10^4)");
  verify->add_flag("--perturb", verify_perturb,
                   "Self-test: inject a sign error, which must fail");
  verify->add_flag("--empty", verify_empty, "Run an empty grid");
  verify->add_option("--max-n", verify_max_n, "Largest n in the grid");
  verify->add_option("--out", verify_out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*delta) {
    return RunDelta(delta_n, delta_k, delta_eps0, delta_count, delta_dp,
                    delta_eps, delta_formula, delta_out);
  }

  if (*sweep) {
    absl::StatusOr<shuffle_dp::LossFormula> formula =
        shuffle_dp::harness::ParseLossFormula(sweep_formula);
    if (!formula.ok()) return Fail(formula.status());
    std::vector<shuffle_dp::harness::SweepGrid> grids;
    if (sweep_preset == "reference") {
      grids = shuffle_dp::harness::ReferenceTablePreset();
    } else if (!sweep_preset.empty()) {
      return Fail(absl::InvalidArgumentError(
          absl::StrCat("unknown preset '", sweep_preset, "'")));
    } else {
      if (!sweep_count && !sweep_fraction) sweep_fraction = 0.8;
      grids.push_back({"grid", sweep_eps0, sweep_n, sweep_k, sweep_eps,
                       sweep_count, sweep_fraction});
    }
    absl::StatusOr<std::vector<shuffle_dp::harness::SweepRow>> rows =
        shuffle_dp::harness::RunSweep(grids, *formula);
    if (!rows.ok()) return Fail(rows.status());
    Output out(sweep_out);
    if (!out.ok()) return Fail(out.OpenError());
    if (sweep_format == "csv") {
      shuffle_dp::harness::WriteSweepCsv(out.stream(), *rows);
    } else {
      shuffle_dp::harness::WriteSweepJsonLines(out.stream(), *rows);
    }
    return kExitOk;
  }

  if (*simulate || *compare) {
    ExperimentFlags& flags = *simulate ? simulate_flags : compare_flags;
    if (*simulate && !flags.trials && flags.config_path.empty()) {
      flags.trials = 1;
    }
    absl::StatusOr<ExperimentConfig> config = flags.Resolve();
    if (!config.ok()) return Fail(config.status());
    absl::StatusOr<shuffle_dp::harness::ExperimentResult> result;
    if (*compare) {
      result = shuffle_dp::harness::RunCompare(*config);
    } else {
      shuffle_dp::MechanismModel model =
          simulate_model == "gaussian" ? shuffle_dp::MechanismModel::kGaussian
          : simulate_model == "shuffle_raw"
              ? shuffle_dp::MechanismModel::kShuffleRaw
              : shuffle_dp::MechanismModel::kShuffleInv;
      result = shuffle_dp::harness::RunExperiment(*config, {&model, 1});
    }
    if (!result.ok()) return Fail(result.status());
    return WriteExperiment(*result);
  }

  if (*ingest) {
    absl::StatusOr<ExperimentConfig> config = ingest_flags.Resolve();
    if (!config.ok()) return Fail(config.status());
    shuffle_dp::Rng rng = shuffle_dp::harness::MakeStream(config->seed, 0, 0);
    absl::StatusOr<shuffle_dp::harness::IngestResult> data =
        shuffle_dp::harness::LoadDataset(*config, rng);
    if (!data.ok()) return Fail(data.status());
    if (data->dropped > 0) {
      std::cerr << data->dropped
                << " points outside the bounding box dropped\n";
    }
    Output out(ingest_out);
    if (!out.ok()) return Fail(out.OpenError());
    const shuffle_dp::Histogram histogram =
        shuffle_dp::Histogram::FromDataset(data->dataset);
    const std::vector<std::string> header = {"symbol", "count"};
    shuffle_dp::harness::WriteCsvRow(out.stream(), header);
    for (int x = 0; x < histogram.k(); ++x) {
      const std::vector<std::string> row = {data->alphabet.label(x),
                                            absl::StrCat(histogram.count(x))};
      shuffle_dp::harness::WriteCsvRow(out.stream(), row);
    }
    if (!out.ToStdout()) {
      std::vector<std::string> notes = {data->binning};
      if (data->dropped > 0) {
        notes.push_back(absl::StrCat(data->dropped, " points dropped"));
      }
      absl::Status st =
          shuffle_dp::harness::WriteSidecar(ingest_out, *config, notes);
      if (!st.ok()) return Fail(st);
    }
    return kExitOk;
  }

  if (*verify) {
    shuffle_dp::harness::VerifyGrid grid =
        verify_full ? shuffle_dp::harness::FullVerifyGrid()
                    : shuffle_dp::harness::DefaultVerifyGrid();
    if (verify_empty) grid = shuffle_dp::harness::VerifyGrid{};
    if (verify_max_n) {
      std::erase_if(grid.ns, [&](int64_t n) { return n > *verify_max_n; });
    }
    grid.perturb = verify_perturb;
    shuffle_dp::harness::VerifyReport report =
        shuffle_dp::harness::RunVerify(grid);
    Output out(verify_out);
    if (!out.ok()) return Fail(out.OpenError());
    shuffle_dp::harness::WriteVerifyJson(out.stream(), report);
    return report.passed() ? kExitOk : kExitVerification;
  }
  return kExitUsage;
}
