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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfl/design/objective.hpp"
#include "wfl/schemes/ota.hpp"
#include "wfl/sim/data.hpp"
#include "wfl/wireless/env.hpp"

namespace wfl {

enum class Scheme { kOta, kDigital, kIdeal };

enum class DesignSource {
  kOptimized,
  kMinNoiseVariance,   // OTA
  kZeroBias,           // OTA
  kZeroBiasOptimized,  // digital
  kZeroBiasMinQuant,   // digital
  kFile,
  kNone,  // ideal scheme
};

enum class GmaxPolicy {
  kAbsolute,       // g_max as given
  kKappaMultiple,  // g_max times the measured kappa
  kMeasured,       // g_max times the largest probed sample gradient
};

enum class DataSource {
  kIdx,
  kSynthetic,  // Gaussian class clusters, softmax loss
  kQuadratic,  // one center per device, mu/2 ||w - c_m||^2
};

std::string_view to_string(Scheme s);
std::string_view to_string(DesignSource s);

struct ExperimentConfig {
  // [experiment]
  Scheme scheme = Scheme::kOta;
  DesignSource design = DesignSource::kOptimized;
  std::string design_file;
  std::size_t devices = 10;
  std::size_t rounds = 200;
  std::vector<std::uint64_t> seeds;  // defaults to 1..20
  std::string output = "-";

  // [learning]
  double mu = 0.01;
  std::optional<double> eta;  // unset: 2 / (mu + L)
  std::size_t batch_size = 0;  // 0: the whole local set
  double sigma = 0.0;          // per-device mini-batch deviation bound
  std::optional<double> kappa;  // unset: measured at w*
  GmaxPolicy g_max_policy = GmaxPolicy::kAbsolute;
  double g_max = 20.0;
  bool g_max_audit = true;
  std::size_t g_max_audit_probes = 10000;
  std::optional<double> centralized_tol;  // unset: 1e-9 G_max

  // [radio]
  RadioConfig radio;

  // [digital]
  double t_max_s = 0.25;
  int r_max_bits = 16;
  double r_min_rate_bps_per_hz = kMinRate;

  // [sca]
  ScaOptions sca;

  // [data]
  DataSource data = DataSource::kSynthetic;
  std::string images;
  std::string labels;
  std::size_t per_class = 100;
  std::uint64_t data_seed = 0;
  SyntheticSpec synthetic;
  double quadratic_spread = 1.0;

  // [verify]
  std::size_t verify_replicas = 1000;
  std::vector<std::size_t> verify_checkpoints{1, 10, 100};

  // [hooks]
  bool ota_noise = true;
  OtaMode ota_mode = OtaMode::kChannel;

  /// Throws kInvalidConfig, e.g. for a design variant the scheme lacks.
  void validate() const;
};

/// INI text: `[section]` headers and `key = value` lines. Overrides are
/// `section.key=value` and are applied after the file. Unknown sections or
/// keys and malformed values throw kInvalidConfig.
ExperimentConfig parse_config(std::istream& in,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

/// "1,4,7" or "1-20" or a mix such as "1-3,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace wfl
