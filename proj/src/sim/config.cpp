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

#include "wfl/sim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wfl {

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

Error bad(const std::string& key, const std::string& what) {
  return Error(ErrorCode::kInvalidConfig, key + ": " + what);
}

// Value parsers report through invalid_argument; apply() adds the key.
std::invalid_argument malformed(const std::string& what) { return std::invalid_argument(what); }

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw malformed("expected a finite number, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw malformed("expected a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw malformed("expected true or false, got '" + v + "'");
}

template <typename E>
E to_enum(const std::string& v, const std::map<std::string, E>& names) {
  const auto it = names.find(v);
  if (it != names.end()) return it->second;
  std::string options;
  for (const auto& [name, _] : names) options += (options.empty() ? "" : ", ") + name;
  throw malformed("'" + v + "' is not one of " + options);
}

std::vector<std::uint64_t> parse_list(const std::string& text);

const std::map<std::string, Scheme> kSchemes{
    {"ota", Scheme::kOta}, {"digital", Scheme::kDigital}, {"ideal", Scheme::kIdeal}};

const std::map<std::string, DesignSource> kDesigns{
    {"optimized", DesignSource::kOptimized},
    {"min-noise-variance", DesignSource::kMinNoiseVariance},
    {"zero-bias", DesignSource::kZeroBias},
    {"zero-bias-optimized", DesignSource::kZeroBiasOptimized},
    {"zero-bias-min-quant", DesignSource::kZeroBiasMinQuant},
    {"file", DesignSource::kFile},
    {"none", DesignSource::kNone},
};

std::map<std::string, Setter> make_setters() {
  std::map<std::string, Setter> s;
  auto num = [](double ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& v) { c.*field = to_double(v); };
  };
  auto count = [](std::size_t ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& v) {
      c.*field = static_cast<std::size_t>(to_u64(v));
    };
  };
  auto radio = [](double RadioConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& v) { c.radio.*field = to_double(v); };
  };

  s["experiment.scheme"] = [](ExperimentConfig& c, const std::string& v) {
    c.scheme = to_enum(v, kSchemes);
  };
  s["experiment.design"] = [](ExperimentConfig& c, const std::string& v) {
    c.design = to_enum(v, kDesigns);
  };
  s["experiment.design_file"] = [](ExperimentConfig& c, const std::string& v) { c.design_file = v; };
  s["experiment.devices"] = count(&ExperimentConfig::devices);
  s["experiment.rounds"] = count(&ExperimentConfig::rounds);
  s["experiment.seeds"] = [](ExperimentConfig& c, const std::string& v) { c.seeds = parse_list(v); };
  s["experiment.output"] = [](ExperimentConfig& c, const std::string& v) { c.output = v; };

  s["learning.mu"] = num(&ExperimentConfig::mu);
  s["learning.eta"] = [](ExperimentConfig& c, const std::string& v) {
    if (v == "auto")
      c.eta.reset();
    else
      c.eta = to_double(v);
  };
  s["learning.batch_size"] = count(&ExperimentConfig::batch_size);
  s["learning.sigma"] = num(&ExperimentConfig::sigma);
  s["learning.kappa"] = [](ExperimentConfig& c, const std::string& v) {
    if (v == "measured")
      c.kappa.reset();
    else
      c.kappa = to_double(v);
  };
  s["learning.g_max_policy"] = [](ExperimentConfig& c, const std::string& v) {
    c.g_max_policy = to_enum(v,
                             std::map<std::string, GmaxPolicy>{
                                 {"absolute", GmaxPolicy::kAbsolute},
                                 {"kappa_multiple", GmaxPolicy::kKappaMultiple},
                                 {"measured", GmaxPolicy::kMeasured}});
  };
  s["learning.g_max"] = num(&ExperimentConfig::g_max);
  s["learning.g_max_audit"] = [](ExperimentConfig& c, const std::string& v) {
    c.g_max_audit = to_bool(v);
  };
  s["learning.g_max_audit_probes"] = count(&ExperimentConfig::g_max_audit_probes);
  s["learning.centralized_tol"] = [](ExperimentConfig& c, const std::string& v) {
    c.centralized_tol = to_double(v);
  };

  s["radio.bandwidth_hz"] = radio(&RadioConfig::bandwidth_hz);
  s["radio.noise_psd_dbm_per_hz"] = radio(&RadioConfig::noise_psd_dbm_per_hz);
  s["radio.tx_power_dbm"] = radio(&RadioConfig::tx_power_dbm);
  s["radio.carrier_freq_hz"] = radio(&RadioConfig::carrier_freq_hz);
  s["radio.pathloss_exponent"] = radio(&RadioConfig::pathloss_exponent);
  s["radio.pathloss_ref_db"] = radio(&RadioConfig::pathloss_ref_db);
  s["radio.cell_radius_m"] = radio(&RadioConfig::cell_radius_m);
  s["radio.energy_per_sample_j"] = [](ExperimentConfig& c, const std::string& v) {
    if (v == "auto")
      c.radio.energy_per_sample_j.reset();
    else
      c.radio.energy_per_sample_j = to_double(v);
  };

  s["digital.t_max_s"] = num(&ExperimentConfig::t_max_s);
  s["digital.r_max_bits"] = [](ExperimentConfig& c, const std::string& v) {
    c.r_max_bits = static_cast<int>(to_u64(v));
  };
  s["digital.r_min_rate_bps_per_hz"] = num(&ExperimentConfig::r_min_rate_bps_per_hz);

  s["sca.max_iterations"] = [](ExperimentConfig& c, const std::string& v) {
    c.sca.max_iterations = static_cast<int>(to_u64(v));
  };
  s["sca.rel_tol"] = [](ExperimentConfig& c, const std::string& v) {
    c.sca.rel_tol = to_double(v);
  };
  s["sca.patience"] = [](ExperimentConfig& c, const std::string& v) {
    c.sca.patience = static_cast<int>(to_u64(v));
  };

  s["data.source"] = [](ExperimentConfig& c, const std::string& v) {
    c.data = to_enum(v,
                     std::map<std::string, DataSource>{{"idx", DataSource::kIdx},
                                                       {"synthetic", DataSource::kSynthetic},
                                                       {"quadratic", DataSource::kQuadratic}});
  };
  s["data.images"] = [](ExperimentConfig& c, const std::string& v) { c.images = v; };
  s["data.labels"] = [](ExperimentConfig& c, const std::string& v) { c.labels = v; };
  s["data.per_class"] = count(&ExperimentConfig::per_class);
  s["data.seed"] = [](ExperimentConfig& c, const std::string& v) { c.data_seed = to_u64(v); };
  s["data.synthetic_dim"] = [](ExperimentConfig& c, const std::string& v) {
    c.synthetic.dim = static_cast<std::size_t>(to_u64(v));
  };
  s["data.synthetic_separation"] = [](ExperimentConfig& c, const std::string& v) {
    c.synthetic.separation = to_double(v);
  };
  s["data.synthetic_spread"] = [](ExperimentConfig& c, const std::string& v) {
    c.synthetic.spread = to_double(v);
  };
  s["data.quadratic_spread"] = num(&ExperimentConfig::quadratic_spread);

  s["verify.replicas"] = count(&ExperimentConfig::verify_replicas);
  s["verify.checkpoints"] = [](ExperimentConfig& c, const std::string& v) {
    c.verify_checkpoints.clear();
    for (std::uint64_t t : parse_list(v)) c.verify_checkpoints.push_back(static_cast<std::size_t>(t));
  };

  s["hooks.ota_noise"] = [](ExperimentConfig& c, const std::string& v) {
    c.ota_noise = to_bool(v);
  };
  s["hooks.ota_mode"] = [](ExperimentConfig& c, const std::string& v) {
    c.ota_mode = to_enum(v,
                         std::map<std::string, OtaMode>{{"channel", OtaMode::kChannel},
                                                        {"expected", OtaMode::kExpected}});
  };
  return s;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s = make_setters();
  return s;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value,
           bool& design_set) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw bad(key, "unknown key");
  try {
    it->second(c, trim(value));
  } catch (const std::invalid_argument& e) {
    throw bad(key, e.what());
  }
  if (key == "experiment.design") design_set = true;
}

}  // namespace

std::string_view to_string(Scheme s) {
  for (const auto& [name, v] : kSchemes)
    if (v == s) return name;
  return "?";
}

std::string_view to_string(DesignSource s) {
  for (const auto& [name, v] : kDesigns)
    if (v == s) return name;
  return "?";
}

namespace {

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw malformed("empty entry in '" + text + "'");
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_u64(item));
      continue;
    }
    const std::uint64_t lo = to_u64(trim(item.substr(0, dash)));
    const std::uint64_t hi = to_u64(trim(item.substr(dash + 1)));
    if (hi < lo) throw malformed("descending range '" + item + "'");
    if (hi - lo >= 1'000'000) throw malformed("range too long '" + item + "'");
    for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw malformed("no entries");
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  try {
    return parse_list(text);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& what) { throw bad(key, what); };
  const bool ota_variant =
      design == DesignSource::kMinNoiseVariance || design == DesignSource::kZeroBias;
  const bool digital_variant =
      design == DesignSource::kZeroBiasOptimized || design == DesignSource::kZeroBiasMinQuant;
  switch (scheme) {
    case Scheme::kOta:
      if (digital_variant || design == DesignSource::kNone)
        fail("experiment.design", std::string(to_string(design)) + " is not an OTA design");
      break;
    case Scheme::kDigital:
      if (ota_variant || design == DesignSource::kNone)
        fail("experiment.design", std::string(to_string(design)) + " is not a digital design");
      break;
    case Scheme::kIdeal:
      if (design != DesignSource::kNone) fail("experiment.design", "the ideal scheme takes no design");
      break;
  }
  if (design == DesignSource::kFile && design_file.empty())
    fail("experiment.design_file", "required when design = file");
  if (devices == 0) fail("experiment.devices", "must be positive");
  if (rounds == 0) fail("experiment.rounds", "must be positive");
  if (seeds.empty()) fail("experiment.seeds", "must not be empty");
  if (!(mu > 0.0)) fail("learning.mu", "must be positive");
  if (eta && !(*eta > 0.0)) fail("learning.eta", "must be positive");
  if (!(sigma >= 0.0)) fail("learning.sigma", "must be non-negative");
  if (kappa && !(*kappa >= 0.0)) fail("learning.kappa", "must be non-negative");
  if (!(g_max > 0.0)) fail("learning.g_max", "must be positive");
  if (g_max_policy == GmaxPolicy::kMeasured && g_max < 1.0)
    fail("learning.g_max", "the measured policy needs a margin factor >= 1");
  if (centralized_tol && !(*centralized_tol > 0.0))
    fail("learning.centralized_tol", "must be positive");
  if (!(t_max_s > 0.0)) fail("digital.t_max_s", "must be positive");
  if (r_max_bits < 1 || r_max_bits > kMaxQuantBits)
    fail("digital.r_max_bits", "must be in [1, " + std::to_string(kMaxQuantBits) + "]");
  if (!(r_min_rate_bps_per_hz > 0.0)) fail("digital.r_min_rate_bps_per_hz", "must be positive");
  if (sca.max_iterations < 1) fail("sca.max_iterations", "must be positive");
  if (!(sca.rel_tol >= 0.0)) fail("sca.rel_tol", "must be non-negative");
  if (sca.patience < 1) fail("sca.patience", "must be positive");
  if (data == DataSource::kIdx && (images.empty() || labels.empty()))
    fail("data.images", "idx source needs data.images and data.labels");
  if (per_class == 0) fail("data.per_class", "must be positive");
  if (synthetic.dim == 0) fail("data.synthetic_dim", "must be positive");
  if (verify_replicas < 1000) fail("verify.replicas", "needs at least 1000 replicas");
  if (verify_checkpoints.empty()) fail("verify.checkpoints", "must not be empty");
  for (std::size_t t : verify_checkpoints)
    if (t == 0) fail("verify.checkpoints", "rounds start at 1");
  try {
    radio.validate();
  } catch (const Error& e) {
    fail("radio", e.what());
  }
}

ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  ExperimentConfig c;
  bool design_set = false;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw bad(section, "keys must live inside a [section]");
    for (const auto& [key, value] : body) apply(c, section + "." + key, value.data(), design_set);
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw bad(o, "override must look like section.key=value");
    apply(c, trim(o.substr(0, eq)), o.substr(eq + 1), design_set);
  }
  if (!design_set && c.scheme == Scheme::kIdeal) c.design = DesignSource::kNone;
  if (c.seeds.empty()) c.seeds = parse_list("1-20");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot open config file " + path);
  return parse_config(f, overrides);
}

}  // namespace wfl
