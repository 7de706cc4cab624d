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

#include "wfl/sim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>

#include "wfl/design/digital_opt.hpp"
#include "wfl/design/io.hpp"
#include "wfl/design/ota_opt.hpp"
#include "wfl/schemes/digital.hpp"
#include "wfl/schemes/link.hpp"
#include "wfl/schemes/ota.hpp"

namespace wfl {

namespace {

Error with_context(const Error& e, const std::string& where) {
  return Error(e.code(), where + ": " + e.what());
}

std::vector<double> uniform(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::shared_ptr<const FederatedProblem> quadratic_problem(const ExperimentConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.devices);
  const auto d = static_cast<Eigen::Index>(cfg.synthetic.dim);
  Dataset::Features f(n, d);
  for (Eigen::Index m = 0; m < n; ++m) {
    CounterRng rng(StreamKey{cfg.data_seed, static_cast<std::uint64_t>(m), 0, Purpose::kData});
    for (Eigen::Index j = 0; j < d; ++j) f(m, j) = cfg.quadratic_spread * rng.normal();
  }
  auto data = std::make_shared<const Dataset>(
      Dataset(std::move(f), std::vector<int>(cfg.devices, 0), 1));
  Partition part(cfg.devices);
  for (std::size_t m = 0; m < cfg.devices; ++m) part[m] = {m};
  return std::make_shared<const FederatedProblem>(
      LossModel::center_quadratic(cfg.mu, cfg.synthetic.dim), data, std::move(part));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::uint64_t replica_seed(std::uint64_t seed, std::size_t r) {
  return StreamKey{seed, static_cast<std::uint64_t>(r), 0, Purpose::kProbe}.hash();
}

}  // namespace

std::shared_ptr<const FederatedProblem> build_problem(const ExperimentConfig& cfg) {
  if (cfg.data == DataSource::kQuadratic) return quadratic_problem(cfg);
  Dataset full = [&] {
    if (cfg.data == DataSource::kIdx) return load_idx(cfg.images, cfg.labels);
    SyntheticSpec spec = cfg.synthetic;
    spec.classes = static_cast<int>(cfg.devices);
    spec.per_class = cfg.per_class;
    return make_synthetic(spec, cfg.data_seed);
  }();
  auto [data, part] = build_class_partition(full, cfg.per_class, cfg.devices, cfg.data_seed);
  auto shared = std::make_shared<const Dataset>(std::move(data));
  return std::make_shared<const FederatedProblem>(
      LossModel::softmax(cfg.mu, shared->num_classes(), shared->dim()), shared, std::move(part));
}

ExperimentSetup prepare_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentSetup s;
  s.problem = build_problem(cfg);
  const FederatedProblem& prob = *s.problem;
  s.smoothness = estimate_smoothness(prob);
  const double eta_max = 2.0 / (cfg.mu + s.smoothness);
  s.eta = cfg.eta.value_or(eta_max);
  if (s.eta > eta_max * (1.0 + 1e-12))
    throw Error(ErrorCode::kInvalidConfig,
                "learning.eta: " + format_double(s.eta) + " exceeds 2/(mu+L) = " +
                    format_double(eta_max));
  s.radius = compute_w_radius(prob);
  s.diameter = 2.0 * s.radius;

  // Oracle tolerance: relative to G_max when it is known up front, otherwise
  // to the largest local gradient at the origin.
  const double scale =
      cfg.g_max_policy == GmaxPolicy::kAbsolute ? cfg.g_max : cfg.mu * s.radius;
  CentralizedOptions opt;
  opt.tol = cfg.centralized_tol.value_or(1e-9 * scale);
  opt.smoothness = s.smoothness;
  s.w_star = solve_centralized(prob, uniform(prob.num_devices()), opt);
  s.f_star = prob.global_objective(s.w_star);
  s.accuracy_star = prob.accuracy(s.w_star);
  s.kappa_measured = compute_kappa(prob, s.w_star);
  s.kappa = cfg.kappa.value_or(s.kappa_measured);

  CounterRng probe(StreamKey{cfg.data_seed, 0, 0, Purpose::kProbe});
  switch (cfg.g_max_policy) {
    case GmaxPolicy::kAbsolute:
      s.g_max = cfg.g_max;
      break;
    case GmaxPolicy::kKappaMultiple:
      s.g_max = cfg.g_max * s.kappa;
      if (!(s.g_max > 0.0))
        throw Error(ErrorCode::kInvalidConfig, "learning.g_max: kappa multiple is zero");
      break;
    case GmaxPolicy::kMeasured:
      s.g_max_probed = probe_max_sample_gradient(prob, s.radius, cfg.g_max_audit_probes, probe);
      s.g_max = cfg.g_max * s.g_max_probed;
      break;
  }
  if (cfg.g_max_audit) {
    CounterRng audit(StreamKey{cfg.data_seed, 1, 0, Purpose::kProbe});
    audit_gmax(prob, s.radius, s.g_max, cfg.g_max_audit_probes, audit);
  }
  return s;
}

LinkBudget link_for(const ExperimentConfig& cfg, const ExperimentSetup& setup) {
  LinkBudget link;
  link.g_max = setup.g_max;
  link.dim = setup.problem->param_dim();
  link.energy_per_sample = cfg.radio.energy_per_sample();
  link.noise_psd = cfg.radio.noise_psd_w();
  link.bandwidth_hz = cfg.radio.bandwidth_hz;
  return link;
}

std::vector<DeviceProfile> place_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  CounterRng rng(StreamKey{seed, 0, 0, Purpose::kPlacement});
  std::vector<DeviceProfile> profiles = place_devices(cfg.devices, cfg.radio, rng);
  for (auto& p : profiles) p.sigma = cfg.sigma;
  return profiles;
}

Scenario build_scenario(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                        std::vector<DeviceProfile> profiles) {
  Scenario sc;
  sc.scheme = cfg.scheme;
  sc.source = cfg.design;
  DesignInputs& in = sc.inputs;
  in.profiles = std::move(profiles);
  in.link = link_for(cfg, setup);
  in.eta = setup.eta;
  in.mu = cfg.mu;
  in.kappa = setup.kappa;
  in.t_max = cfg.t_max_s;
  in.r_max = cfg.r_max_bits;
  in.r_min_rate = cfg.r_min_rate_bps_per_hz;
  in.validate();
  if (in.size() != setup.problem->num_devices())
    throw Error(ErrorCode::kInvalidConfig, "device count differs from the data partition");

  auto design_file = [&] {
    std::ifstream f(cfg.design_file);
    if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot open design file " + cfg.design_file);
    return read_design_json(f);
  };
  const std::vector<double> sigmas = in.sigmas();
  switch (cfg.scheme) {
    case Scheme::kOta:
      switch (cfg.design) {
        case DesignSource::kOptimized: sc.ota = ota_optimized(in, cfg.sca).design; break;
        case DesignSource::kMinNoiseVariance: sc.ota = ota_min_noise_variance(in); break;
        case DesignSource::kZeroBias: sc.ota = ota_zero_bias(in); break;
        case DesignSource::kFile: sc.ota = ota_from_file(design_file(), in.profiles, in.link); break;
        default: throw Error(ErrorCode::kInvalidConfig, "design variant not available for OTA");
      }
      sc.p = sc.ota.p;
      sc.zeta = ota_variance_bound(sc.ota, sigmas, in.link);
      sc.design_objective = ota_objective(sc.ota, in);
      break;
    case Scheme::kDigital:
      switch (cfg.design) {
        case DesignSource::kOptimized: sc.digital = digital_optimized(in, cfg.sca).design; break;
        case DesignSource::kZeroBiasOptimized:
          sc.digital = digital_zero_bias_optimized(in, cfg.sca).design;
          break;
        case DesignSource::kZeroBiasMinQuant:
          sc.digital = digital_zero_bias_min_quant(in, cfg.sca).design;
          break;
        case DesignSource::kFile:
          sc.digital = digital_from_file(design_file(), in.profiles, in.link);
          break;
        default: throw Error(ErrorCode::kInvalidConfig, "design variant not available for digital");
      }
      sc.p = sc.digital.p;
      sc.zeta = digital_variance_bound(sc.digital, sigmas, in.link);
      sc.design_objective = digital_objective(sc.digital, in);
      break;
    case Scheme::kIdeal: {
      sc.p = uniform(in.size());
      for (std::size_t m = 0; m < in.size(); ++m) sc.zeta += sc.p[m] * sc.p[m] * sigmas[m] * sigmas[m];
      sc.design_objective = in.eta / in.mu * sc.zeta;
      break;
    }
  }

  CentralizedOptions opt;
  opt.tol = cfg.centralized_tol.value_or(1e-9 * setup.g_max);
  opt.smoothness = setup.smoothness;
  opt.warm_start = setup.w_star;
  sc.w_tilde = solve_centralized(*setup.problem, sc.p, opt);
  sc.bias_distance = (sc.w_tilde - setup.w_star).norm();
  return sc;
}

Scenario build_scenario(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                        std::uint64_t seed) {
  try {
    return build_scenario(cfg, setup, place_for_seed(cfg, seed));
  } catch (const Error& e) {
    throw with_context(e, "seed " + std::to_string(seed) + " design");
  }
}

RoundOutcome run_round(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                       const Scenario& sc, const Vec& w, std::uint64_t seed,
                       std::uint64_t round) {
  const FederatedProblem& prob = *setup.problem;
  const std::size_t n = sc.size();
  std::vector<Vec> grads(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (cfg.batch_size == 0) {
      grads[m] = prob.full_local_grad(m, w);
    } else {
      CounterRng rng(StreamKey{seed, m, round, Purpose::kBatch});
      const auto batch = sample_batch(prob, m, cfg.batch_size, rng);
      grads[m] = prob.local_grad(m, w, batch);
    }
  }
  RoundOutcome out;
  const LinkBudget& link = sc.inputs.link;
  switch (sc.scheme) {
    case Scheme::kOta: {
      const ChannelDraw h = draw_round_channels(sc.inputs.profiles, seed, round);
      CounterRng noise(StreamKey{seed, 0, round, Purpose::kNoise});
      OtaOptions opt;
      opt.mode = cfg.ota_mode;
      opt.noise = cfg.ota_noise;
      OtaRoundTranscript tr = ota_round(sc.ota, grads, h, link, noise, opt);
      out.g_hat = std::move(tr.g_hat);
      out.g_target = std::move(tr.g_tilde);
      out.latency = tr.latency;
      out.chi = std::move(tr.chi);
      out.tx_energy = std::move(tr.tx_energy);
      break;
    }
    case Scheme::kDigital: {
      const ChannelDraw h = draw_round_channels(sc.inputs.profiles, seed, round);
      DigitalRoundTranscript tr = digital_round(sc.digital, grads, h, link, seed, round);
      out.g_hat = std::move(tr.g_hat);
      out.g_target = std::move(tr.g_tilde);
      out.latency = tr.latency;
      out.chi = std::move(tr.chi);
      break;
    }
    case Scheme::kIdeal: {
      IdealRoundTranscript tr = ideal_round(grads, link);
      out.g_target = tr.g_hat;
      out.g_hat = std::move(tr.g_hat);
      out.latency = tr.latency;
      out.chi.assign(n, 1);
      break;
    }
  }
  return out;
}

std::vector<MetricsRow> run_seed(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                                 const Scenario& sc, std::uint64_t seed) {
  const FederatedProblem& prob = *setup.problem;
  std::vector<MetricsRow> rows;
  rows.reserve(cfg.rounds);
  Vec w = Vec::Zero(static_cast<Eigen::Index>(prob.param_dim()));
  double clock = 0.0;
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    try {
      const RoundOutcome r = run_round(cfg, setup, sc, w, seed, t);
      w = project_to_ball(w - setup.eta * r.g_hat, setup.radius);
      clock += r.latency;
    } catch (const Error& e) {
      throw with_context(e, "seed " + std::to_string(seed) + " round " + std::to_string(t));
    }
    MetricsRow row;
    row.seed = seed;
    row.round = t;
    row.training_time_s = clock;
    row.suboptimality_gap = prob.global_objective(w) - setup.f_star;
    row.normalized_accuracy =
        setup.accuracy_star > 0.0 ? prob.accuracy(w) / setup.accuracy_star : 0.0;
    row.bias_distance = sc.bias_distance;
    row.bound_total = optimality_error_bound(sc.p, sc.zeta, t, setup.diameter, setup.eta,
                                     sc.inputs.mu, sc.inputs.kappa)
                          .total;
    rows.push_back(row);
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  for (const MetricsRow& r : rows) {
    out << r.seed << ',' << r.round << ',' << format_double(r.training_time_s) << ','
        << format_double(r.suboptimality_gap) << ',' << format_double(r.normalized_accuracy)
        << ',' << format_double(r.bias_distance) << ',' << format_double(r.bound_total) << '\n';
  }
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& csv) {
  run_experiment(cfg, prepare_experiment(cfg), csv);
}

void run_experiment(const ExperimentConfig& cfg, const ExperimentSetup& setup, std::ostream& csv) {
  const auto n = static_cast<std::ptrdiff_t>(cfg.seeds.size());
  std::vector<std::vector<MetricsRow>> rows(cfg.seeds.size());
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const Scenario sc = build_scenario(cfg, setup, cfg.seeds[k]);
      rows[k] = run_seed(cfg, setup, sc, cfg.seeds[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  csv << kMetricsHeader << '\n';
  for (const auto& r : rows) write_metrics_csv(csv, r);
}

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

VerifyReport verify_bounds(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                           const Scenario& sc, std::uint64_t seed, std::size_t replicas) {
  if (replicas < 1000)
    throw Error(ErrorCode::kInvalidArgument, "verification needs at least 1000 replicas");
  const FederatedProblem& prob = *setup.problem;
  const auto m_rep = static_cast<std::ptrdiff_t>(replicas);
  const double rm = static_cast<double>(replicas);
  VerifyReport report;

  // Per-round statistics at two probe points.
  const std::pair<const char*, Vec> probes[] = {
      {"w0", Vec::Zero(static_cast<Eigen::Index>(prob.param_dim()))}, {"wstar", setup.w_star}};
  for (const auto& [tag, w] : probes) {
    const Vec target = prob.weighted_gradient(w, sc.p);
    std::vector<Vec> g(replicas);
    std::vector<double> lat(replicas);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < m_rep; ++r) {
      const auto k = static_cast<std::size_t>(r);
      RoundOutcome o = run_round(cfg, setup, sc, w, replica_seed(seed, k), 1);
      g[k] = std::move(o.g_hat);
      lat[k] = o.latency;
    }
    Vec mean = Vec::Zero(target.size());
    for (const Vec& x : g) mean += x;
    mean /= rm;
    double var = 0.0, spread = 0.0;
    for (const Vec& x : g) {
      var += (x - target).squaredNorm();
      spread += (x - mean).squaredNorm();
    }
    var /= rm;
    spread /= rm - 1.0;
    // Unbiasedness w.r.t. the participation-weighted gradient.
    const double err = (mean - target).norm();
    const double tol = 4.0 * std::sqrt(spread / rm) + 1e-12 * std::max(1.0, target.norm());
    report.checks.push_back({std::string("mean_") + tag, err, tol, tol - err, err <= tol});
    report.checks.push_back({std::string("variance_") + tag, var, sc.zeta, sc.zeta - var,
                             var <= sc.zeta});
    if (std::string(tag) == "w0") {
      const double expected = sc.scheme == Scheme::kDigital
                                  ? expected_round_latency(sc.digital, sc.inputs.link)
                                  : static_cast<double>(sc.inputs.link.dim) /
                                        sc.inputs.link.bandwidth_hz;
      const double lm = mean_of(lat);
      double ls = 0.0;
      for (double x : lat) ls += (x - lm) * (x - lm);
      const double ltol = 4.0 * std::sqrt(ls / (rm - 1.0) / rm) + 1e-12 * expected;
      const double lerr = std::abs(lm - expected);
      report.checks.push_back({"latency_mean", lm, expected, ltol - lerr, lerr <= ltol});
    }
  }

  // Trajectories: E||w_t - w*||^2 against the optimality-error bound.
  std::vector<std::size_t> marks = cfg.verify_checkpoints;
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  const std::size_t horizon = marks.back();
  std::vector<std::vector<double>> err(replicas, std::vector<double>(marks.size()));
  std::vector<std::exception_ptr> fails(replicas);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t r = 0; r < m_rep; ++r) {
    const auto k = static_cast<std::size_t>(r);
    try {
      const std::uint64_t s = replica_seed(seed, k + replicas);
      Vec w = Vec::Zero(static_cast<Eigen::Index>(prob.param_dim()));
      std::size_t next = 0;
      for (std::size_t t = 1; t <= horizon; ++t) {
        const RoundOutcome o = run_round(cfg, setup, sc, w, s, t);
        w = project_to_ball(w - setup.eta * o.g_hat, setup.radius);
        if (t == marks[next]) err[k][next++] = (w - setup.w_star).squaredNorm();
      }
    } catch (...) {
      fails[k] = std::current_exception();
    }
  }
  for (const auto& e : fails)
    if (e) std::rethrow_exception(e);
  for (std::size_t j = 0; j < marks.size(); ++j) {
    double mean = 0.0;
    for (std::size_t k = 0; k < replicas; ++k) mean += err[k][j];
    mean /= rm;
    const double bound = optimality_error_bound(sc.p, sc.zeta, marks[j], setup.diameter, setup.eta,
                                        sc.inputs.mu, sc.inputs.kappa)
                             .total;
    report.checks.push_back(
        {"distance_t" + std::to_string(marks[j]), mean, bound, bound - mean, mean <= bound});
  }
  return report;
}

VerifyReport verify_bounds(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = prepare_experiment(cfg);
  const std::uint64_t seed = cfg.seeds.front();
  const Scenario sc = build_scenario(cfg, setup, seed);
  return verify_bounds(cfg, setup, sc, seed, cfg.verify_replicas);
}

void describe_setup(std::ostream& out, const ExperimentSetup& s) {
  out << "eta " << format_double(s.eta) << ", L " << format_double(s.smoothness) << ", radius "
      << format_double(s.radius) << ", kappa " << format_double(s.kappa) << " (measured "
      << format_double(s.kappa_measured) << "), G_max " << format_double(s.g_max)
      << ", F(w*) " << format_double(s.f_star) << ", accuracy(w*) "
      << format_double(s.accuracy_star) << '\n';
}

void write_verify_csv(std::ostream& out, const VerifyReport& report) {
  out << "check,estimate,bound,margin,pass\n";
  for (const VerifyCheck& c : report.checks)
    out << c.name << ',' << format_double(c.estimate) << ',' << format_double(c.bound) << ','
        << format_double(c.margin) << ',' << (c.pass ? "pass" : "fail") << '\n';
}

}  // namespace wfl
