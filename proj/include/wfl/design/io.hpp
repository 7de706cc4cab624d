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

#include <iosfwd>
#include <string>
#include <vector>

#include "wfl/schemes/digital.hpp"
#include "wfl/schemes/ota.hpp"

namespace wfl {

/// On-disk design: the free parameters of one scheme plus the per-device
/// lambda they were optimized for. Derived quantities (p, alpha, beta, rates)
/// are written for readers but recomputed on load.
struct DesignFile {
  std::string scheme;  // "ota" | "digital"
  std::string source;  // variant name
  double objective = 0.0;
  std::vector<double> lambda;
  // ota
  std::vector<double> gamma;
  // digital
  std::vector<double> rho;
  std::vector<double> nu;
  std::vector<int> bits;
};

DesignFile to_design_file(const OtaDesign& d, const std::vector<DeviceProfile>& profiles,
                          const std::string& source, double objective);
DesignFile to_design_file(const DigitalDesign& d,
                          const std::vector<DeviceProfile>& profiles,
                          const std::string& source, double objective);

/// JSON text; doubles are written with round-trip precision.
std::string write_design_json(const DesignFile& f, const std::vector<DeviceProfile>& profiles,
                              const LinkBudget& link);
/// Throws kInvalidConfig on malformed input.
DesignFile read_design_json(std::istream& in);

/// Rebuilds the design for `profiles`; throws kInvalidConfig if the file was
/// made for other devices (lambda mismatch) or for the other scheme.
OtaDesign ota_from_file(const DesignFile& f, const std::vector<DeviceProfile>& profiles,
                        const LinkBudget& link);
DigitalDesign digital_from_file(const DesignFile& f,
                                const std::vector<DeviceProfile>& profiles,
                                const LinkBudget& link);

}  // namespace wfl
