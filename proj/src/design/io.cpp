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

#include "wfl/design/io.hpp"

#include <cmath>
#include <istream>

#include <json.hpp>

namespace wfl {

namespace {

using nlohmann::json;

void check_devices(const DesignFile& f, const std::vector<DeviceProfile>& profiles,
                   const std::string& scheme) {
  if (f.scheme != scheme)
    throw Error(ErrorCode::kInvalidConfig,
                "design file holds a " + f.scheme + " design, expected " + scheme);
  if (f.lambda.size() != profiles.size())
    throw Error(ErrorCode::kInvalidConfig, "design file device count does not match");
  for (std::size_t m = 0; m < profiles.size(); ++m)
    if (std::abs(f.lambda[m] - profiles[m].lambda) > 1e-12 * profiles[m].lambda)
      throw Error(ErrorCode::kInvalidConfig,
                  "design file was made for a different lambda at device " +
                      std::to_string(m));
}

std::vector<double> lambdas(const std::vector<DeviceProfile>& profiles) {
  std::vector<double> l;
  for (const auto& p : profiles) l.push_back(p.lambda);
  return l;
}

}  // namespace

DesignFile to_design_file(const OtaDesign& d, const std::vector<DeviceProfile>& profiles,
                          const std::string& source, double objective) {
  DesignFile f;
  f.scheme = "ota";
  f.source = source;
  f.objective = objective;
  f.lambda = lambdas(profiles);
  f.gamma = d.gamma;
  return f;
}

DesignFile to_design_file(const DigitalDesign& d,
                          const std::vector<DeviceProfile>& profiles,
                          const std::string& source, double objective) {
  DesignFile f;
  f.scheme = "digital";
  f.source = source;
  f.objective = objective;
  f.lambda = lambdas(profiles);
  f.rho = d.rho;
  f.nu = d.nu;
  f.bits = d.bits;
  return f;
}

std::string write_design_json(const DesignFile& f, const std::vector<DeviceProfile>& profiles,
                              const LinkBudget& link) {
  json j;
  j["scheme"] = f.scheme;
  j["source"] = f.source;
  j["objective"] = f.objective;
  j["lambda"] = f.lambda;
  if (f.scheme == "ota") {
    const OtaDesign d = ota_from_file(f, profiles, link);
    j["gamma"] = d.gamma;
    j["alpha_m"] = d.alpha_m;
    j["alpha"] = d.alpha;
    j["p"] = d.p;
  } else {
    const DigitalDesign d = digital_from_file(f, profiles, link);
    j["rho"] = d.rho;
    j["nu"] = d.nu;
    j["bits"] = d.bits;
    j["beta"] = d.beta;
    j["p"] = d.p;
    j["rate_bps_per_hz"] = d.rate;
    j["payload_bits"] = d.payload;
    j["expected_round_latency_s"] = expected_round_latency(d, link);
  }
  return j.dump(2) + "\n";
}

DesignFile read_design_json(std::istream& in) {
  try {
    const json j = json::parse(in);
    DesignFile f;
    f.scheme = j.at("scheme").get<std::string>();
    f.source = j.value("source", std::string("file"));
    f.objective = j.value("objective", 0.0);
    f.lambda = j.at("lambda").get<std::vector<double>>();
    if (f.scheme == "ota") {
      f.gamma = j.at("gamma").get<std::vector<double>>();
    } else if (f.scheme == "digital") {
      f.rho = j.at("rho").get<std::vector<double>>();
      f.nu = j.at("nu").get<std::vector<double>>();
      f.bits = j.at("bits").get<std::vector<int>>();
    } else {
      throw Error(ErrorCode::kInvalidConfig, "unknown scheme '" + f.scheme + "'");
    }
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("design file: ") + e.what());
  }
}

OtaDesign ota_from_file(const DesignFile& f, const std::vector<DeviceProfile>& profiles,
                        const LinkBudget& link) {
  check_devices(f, profiles, "ota");
  return make_ota_design(f.gamma, profiles, link);
}

DigitalDesign digital_from_file(const DesignFile& f,
                                const std::vector<DeviceProfile>& profiles,
                                const LinkBudget& link) {
  check_devices(f, profiles, "digital");
  return make_digital_design(f.rho, f.nu, f.bits, profiles, link);
}

}  // namespace wfl
