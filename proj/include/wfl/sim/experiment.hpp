// Copyright 2026 The wfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wfl/design/objective.hpp"
#include "wfl/learning/problem.hpp"
#include "wfl/sim/config.hpp"

namespace wfl {

/// Everything that depends on the data but not on the replica seed.
struct ExperimentSetup {
  std::shared_ptr<const FederatedProblem> problem;
  Vec w_star;
  double f_star = 0.0;
  double accuracy_star = 0.0;
  double radius = 0.0;    // of the feasible ball
  double diameter = 0.0;  // 2 radius
  double smoothness = 0.0;
  double eta = 0.0;
  double kappa = 0.0;  // the value used by designs and bounds
  double kappa_measured = 0.0;
  double g_max = 0.0;
  double g_max_probed = 0.0;  // 0 when no probe sweep ran
};

std::shared_ptr<const FederatedProblem> build_problem(const ExperimentConfig& cfg);

/// Loads data, solves for w*, measures kappa, resolves eta and G_max and runs
/// the G_max audit (kGmaxAuditFailed) when enabled.
ExperimentSetup prepare_experiment(const ExperimentConfig& cfg);

/// One placement of devices with its design.
struct Scenario {
  Scheme scheme = Scheme::kIdeal;
  DesignSource source = DesignSource::kNone;
  DesignInputs inputs;
  OtaDesign ota;
  DigitalDesign digital;
  std::vector<double> p;
  double zeta = 0.0;
  double design_objective = 0.0;
  Vec w_tilde;
  double bias_distance = 0.0;

  std::size_t size() const { return p.size(); }
};

LinkBudget link_for(const ExperimentConfig& cfg, const ExperimentSetup& setup);

/// Devices placed with the (seed, placement) stream.
std::vector<DeviceProfile> place_for_seed(const ExperimentConfig& cfg, std::uint64_t seed);

Scenario build_scenario(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                        std::vector<DeviceProfile> profiles);
Scenario build_scenario(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                        std::uint64_t seed);

/// Aggregated gradient of one round. Streams are keyed by (seed, device,
/// round), so a round can be replayed in isolation.
struct RoundOutcome {
  Vec g_hat;
  Vec g_target;  // sum p_m g_m over the gradients actually computed
  double latency = 0.0;
  std::vector<int> chi;
  std::vector<double> tx_energy;  // OTA
};

RoundOutcome run_round(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                       const Scenario& sc, const Vec& w, std::uint64_t seed,
                       std::uint64_t round);

struct MetricsRow {
  std::uint64_t seed = 0;
  std::size_t round = 0;
  double training_time_s = 0.0;
  double suboptimality_gap = 0.0;
  double normalized_accuracy = 0.0;
  double bias_distance = 0.0;
  double bound_total = 0.0;
};

/// T rounds of w <- P(w - eta g_hat) from w = 0; one row per round.
std::vector<MetricsRow> run_seed(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                                 const Scenario& sc, std::uint64_t seed);

inline constexpr const char* kMetricsHeader =
    "seed,round,training_time_s,suboptimality_gap,normalized_accuracy,bias_distance,bound_total";

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

/// Seeds run in parallel; rows are written in seed order. Errors carry the
/// seed and round that raised them.
void run_experiment(const ExperimentConfig& cfg, std::ostream& csv);
void run_experiment(const ExperimentConfig& cfg, const ExperimentSetup& setup, std::ostream& csv);

/// One-line summary of the resolved constants.
void describe_setup(std::ostream& out, const ExperimentSetup& setup);

struct VerifyCheck {
  std::string name;
  double estimate = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // positive when the check passes
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

/// Monte-Carlo estimates over `replicas` independent rounds or trajectories:
/// the mean and variance of g_hat at w = 0 and w = w*, the mean round
/// latency, and E||w_t - w*||^2 at each checkpoint, each against its
/// closed-form value or bound.
VerifyReport verify_bounds(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                           const Scenario& sc, std::uint64_t seed, std::size_t replicas);

/// Uses the first seed and cfg.verify_replicas.
VerifyReport verify_bounds(const ExperimentConfig& cfg);

void write_verify_csv(std::ostream& out, const VerifyReport& report);

}  // namespace wfl
