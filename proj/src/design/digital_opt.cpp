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

#include "wfl/design/digital_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wfl {

namespace {

constexpr double kFloor = 1e-9;
constexpr double kInset = 1e-3;
constexpr double kBitsInset = 1e-4;
constexpr double kRoundEps = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

Error at_iteration(const Error& e, int k) {
  return Error(e.code(), "SCA iteration " + std::to_string(k) + ": " + e.what());
}

// ln(2^(r+1) - 1) and its first two derivatives.
double levels_log(double r) { return std::log(std::exp2(r + 1.0) - 1.0); }
double levels_log_d1(double r) {
  const double e = std::exp2(r + 1.0);
  return std::log(2.0) * e / (e - 1.0);
}
double levels_log_d2(double r) {
  const double e = std::exp2(r + 1.0);
  const double l2 = std::log(2.0);
  return -l2 * l2 * e / ((e - 1.0) * (e - 1.0));
}

// Continuous iterate: beta_m = p_m nu_m, effective bits r'_m + 1.
struct Point {
  std::vector<double> p, nu, r;

  double beta(std::size_t m) const { return p[m] * nu[m]; }
};

double rate_of(double beta, double lambda, const LinkBudget& link) {
  return std::log2(1.0 - link.energy_per_sample * lambda * std::log(beta) /
                             link.noise_psd);
}

double payload_of(double r_prime, const LinkBudget& link) {
  const auto d = static_cast<double>(link.dim);
  return 64.0 + d + d * r_prime;
}

double monitored(const Point& x, const DesignInputs& in,
                 const DigitalScaConfig& cfg) {
  std::vector<double> beta(x.p.size());
  for (std::size_t m = 0; m < beta.size(); ++m) beta[m] = x.beta(m);
  if (cfg.objective == DigitalScaConfig::Objective::kQuantization)
    return quantization_objective(x.p, beta, x.r);
  return digital_objective_relaxed(x.p, beta, x.r, in);
}

// Variables per device: q = p / p_bar, x_nu = nu / nu_bar, r', x_R = R / R_bar,
// y_z = ln(z / z_bar), y_w = ln(omega / omega_bar), x_t = t / T_max.
// The epigraph variables live in log space: with p near its floor their
// weights are tiny and a linear parametrization stalls Newton.
struct Layout {
  int n;
  int p(int m) const { return 7 * m; }
  int nu(int m) const { return 7 * m + 1; }
  int r(int m) const { return 7 * m + 2; }
  int rate(int m) const { return 7 * m + 3; }
  int z(int m) const { return 7 * m + 4; }
  int w(int m) const { return 7 * m + 5; }
  int t(int m) const { return 7 * m + 6; }
  int size() const { return 7 * n; }
};

struct Subproblem {
  ConvexProgram program;
  Vec x0;
  std::vector<double> z_bar, omega_bar;
};

Subproblem build(const DesignInputs& in, const Point& bar,
                 const DigitalScaConfig& cfg) {
  const int n = static_cast<int>(in.size());
  const Layout lay{n};
  const double g2 = in.link.g_max * in.link.g_max;
  const auto dim = static_cast<double>(in.link.dim);
  const double w_var = in.eta / in.mu;
  const double w_bias = n * in.kappa * in.kappa / (in.mu * in.mu);
  const double inv_n = 1.0 / n;
  const bool quant = cfg.objective == DigitalScaConfig::Objective::kQuantization;
  const double scale = 1.0 / monitored(bar, in, cfg);

  Subproblem sp;
  auto& prog = sp.program;
  prog.num_vars = lay.size();
  prog.lower = Vec::Constant(lay.size(), -kInf);
  prog.upper = Vec::Constant(lay.size(), kInf);
  sp.x0.resize(lay.size());
  sp.z_bar.resize(n);
  sp.omega_bar.resize(n);

  std::vector<int> t_vars;
  std::vector<std::pair<int, double>> eq_rows;
  for (int m = 0; m < n; ++m) {
    const double pb = bar.p[m], nb = bar.nu[m], rb = bar.r[m];
    const double bb = pb * nb;
    const double lam = in.profiles[m].lambda;
    const double k = lam * in.link.energy_per_sample / in.link.noise_psd;
    const double rate_b = rate_of(bb, lam, in.link);
    const double pow_rb = std::exp2(rate_b);
    const double lb = payload_of(rb, in.link);
    const double fb = levels_log(rb);
    const double cd = std::log(bb * lb / (in.link.bandwidth_hz * in.t_max * rate_b));
    const double sigma2 = in.profiles[m].sigma * in.profiles[m].sigma;
    const double zb = pb / nb;
    const double wb = pb / (nb * std::exp(2 * fb));
    sp.z_bar[m] = zb;
    sp.omega_bar[m] = wb;

    if (quant) {
      prog.objective.push_back({{lay.w(m)}, [=](const Vec& x, Vec* g, Mat* h) {
                                  const double v = scale * wb * std::exp(x(0));
                                  if (g) *g = Vec::Constant(1, v);
                                  if (h) *h = Mat::Constant(1, 1, v);
                                  return v;
                                }});
    } else {
      prog.objective.push_back(
          {{lay.p(m), lay.z(m), lay.w(m)}, [=](const Vec& x, Vec* g, Mat* h) {
             const double p = pb * x(0);
             const double ez = w_var * g2 * zb * std::exp(x(1));
             const double ew = w_var * g2 * dim * wb * std::exp(x(2));
             const double v = ez + ew +
                              w_var * (p * p * sigma2 - g2 * pb * (2 * p - pb)) +
                              w_bias * (p - inv_n) * (p - inv_n);
             if (g)
               *g = scale * Vec{{pb * (w_var * (2 * p * sigma2 - 2 * g2 * pb) +
                                       2 * w_bias * (p - inv_n)),
                                 ez, ew}};
             if (h) {
               h->setZero(3, 3);
               (*h)(0, 0) = scale * pb * pb * (2 * w_var * sigma2 + 2 * w_bias);
               (*h)(1, 1) = scale * ez;
               (*h)(2, 2) = scale * ew;
             }
             return scale * v;
           }});
    }

    // z >= p / nu; z has no role in the quantization objective and is pinned.
    if (quant) {
      eq_rows.emplace_back(lay.z(m), 0.0);
    } else {
      prog.inequalities.push_back(
          {{lay.p(m), lay.nu(m), lay.z(m)}, [=](const Vec& x, Vec* g, Mat* h) {
             if (x(1) <= 0) return kInf;
             if (g) *g = Vec{{1.0, -1 / x(1), -1.0}};
             if (h) {
               h->setZero(3, 3);
               (*h)(1, 1) = 1 / (x(1) * x(1));
             }
             return x(0) - 1 - std::log(x(1)) - x(2);
           }});
    }

    // omega >= p / (nu (2^(r'+1) - 1)^2)
    prog.inequalities.push_back(
        {{lay.p(m), lay.nu(m), lay.r(m), lay.w(m)}, [=](const Vec& x, Vec* g, Mat* h) {
           if (x(1) <= 0 || x(2) <= -1) return kInf;
           if (g) *g = Vec{{1.0, -1 / x(1), -2 * levels_log_d1(x(2)), -1.0}};
           if (h) {
             h->setZero(4, 4);
             (*h)(1, 1) = 1 / (x(1) * x(1));
             (*h)(2, 2) = -2 * levels_log_d2(x(2));
           }
           return x(0) - 1 - std::log(x(1)) - 2 * levels_log(x(2)) + 2 * fb - x(3);
         }});

    // t >= beta L / (B R), logs of beta and L linearized from above
    prog.inequalities.push_back(
        {{lay.p(m), lay.nu(m), lay.r(m), lay.rate(m), lay.t(m)},
         [=](const Vec& x, Vec* g, Mat* h) {
           if (x(3) <= 0 || x(4) <= 0) return kInf;
           if (g) *g = Vec{{1.0, 1.0, dim / lb, -1 / x(3), -1 / x(4)}};
           if (h) {
             h->setZero(5, 5);
             (*h)(3, 3) = 1 / (x(3) * x(3));
             (*h)(4, 4) = 1 / (x(4) * x(4));
           }
           return cd + (x(1) - 1) + dim * (x(2) - rb) / lb + (x(0) - 1) -
                  std::log(x(4)) - std::log(x(3));
         }});

    // 2^R <= 1 - k (ln nu_bar + nu/nu_bar + ln p_bar + p/p_bar - 2), over 2^R_bar
    prog.inequalities.push_back(
        {{lay.p(m), lay.nu(m), lay.rate(m)}, [=](const Vec& x, Vec* g, Mat* h) {
           const double e = std::exp2(rate_b * x(2)) / pow_rb;
           if (!std::isfinite(e)) return kInf;
           const double c = std::log(2.0) * rate_b;
           if (g) *g = Vec{{k / pow_rb, k / pow_rb, c * e}};
           if (h) {
             h->setZero(3, 3);
             (*h)(2, 2) = c * c * e;
           }
           return e + (k * (std::log(bb) + x(1) + x(0) - 2) - 1) / pow_rb;
         }});

    // nu <= (2 p_bar - p) / p_bar^2
    prog.inequalities.push_back({{lay.p(m), lay.nu(m)}, [=](const Vec& x, Vec* g, Mat* h) {
                                   if (g) *g = Vec{{1.0, bb}};
                                   if (h) *h = Mat::Zero(2, 2);
                                   return bb * x(1) + x(0) - 2;
                                 }});
    t_vars.push_back(lay.t(m));

    prog.lower(lay.nu(m)) = kFloor / nb;
    prog.lower(lay.rate(m)) = in.r_min_rate / rate_b;
    if (cfg.freeze_p) {
      eq_rows.emplace_back(lay.p(m), inv_n / pb);
    } else {
      prog.lower(lay.p(m)) = kFloor / pb;
    }
    if (cfg.freeze_bits) {
      eq_rows.emplace_back(lay.r(m), rb);
    } else {
      prog.lower(lay.r(m)) = 0.0;
      prog.upper(lay.r(m)) = in.r_max - 1.0;
    }

    // Start strictly inside: nu pulled down, bits pulled off their bounds,
    // and the auxiliaries given matching headroom.
    const double xn = 1.0 - kInset;
    double r0 = rb;
    if (!cfg.freeze_bits)
      r0 = std::clamp(rb, kBitsInset, std::max(kBitsInset, in.r_max - 1.0 - kBitsInset));
    sp.x0(lay.p(m)) = cfg.freeze_p ? inv_n / pb : 1.0;
    sp.x0(lay.nu(m)) = xn;
    sp.x0(lay.r(m)) = r0;
    sp.x0(lay.rate(m)) = 1.0;
    sp.x0(lay.z(m)) = quant ? 0.0 : -std::log(xn) + kInset;
    sp.x0(lay.w(m)) = -std::log(xn) - 2 * levels_log(r0) + 2 * fb + kInset;
    sp.x0(lay.t(m)) = std::exp(cd + (xn - 1) + dim * (r0 - rb) / lb + kInset / 8);
  }
  prog.inequalities.push_back({t_vars, [n](const Vec& x, Vec* g, Mat* h) {
                                 if (g) *g = Vec::Ones(n);
                                 if (h) *h = Mat::Zero(n, n);
                                 return x.sum() - 1.0;
                               }});

  const int rows = static_cast<int>(eq_rows.size()) + (cfg.freeze_p ? 0 : 1);
  prog.eq_matrix = Mat::Zero(rows, lay.size());
  prog.eq_rhs = Vec::Zero(rows);
  int row = 0;
  for (const auto& [var, value] : eq_rows) {
    prog.eq_matrix(row, var) = 1.0;
    prog.eq_rhs(row++) = value;
  }
  if (!cfg.freeze_p) {
    for (int m = 0; m < n; ++m) prog.eq_matrix(row, lay.p(m)) = bar.p[m];
    prog.eq_rhs(row) = 1.0;
  }
  return sp;
}

void check_init(const DesignInputs& in, const DigitalDesign& d) {
  if (d.size() != in.size())
    throw Error(ErrorCode::kBadInit, "initial design has the wrong device count");
  double psum = 0.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (!(d.beta[m] > 0.0 && d.beta[m] < 1.0))
      throw Error(ErrorCode::kBadInit, "initial beta outside (0, 1)");
    if (!(d.p[m] > 0.0))
      throw Error(ErrorCode::kBadInit, "initial participation must be positive");
    if (d.bits[m] < 1 || d.bits[m] > in.r_max)
      throw Error(ErrorCode::kBadInit, "initial bit width outside [1, r_max]");
    if (!(d.rate[m] >= in.r_min_rate))
      throw Error(ErrorCode::kBadInit, "initial rate below the minimum");
    psum += d.p[m];
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw Error(ErrorCode::kBadInit, "initial participation is not on the simplex");
  if (!(expected_round_latency(d, in.link) <= in.t_max))
    throw Error(ErrorCode::kBadInit, "initial design violates the latency budget");
}

Point point_of(const DigitalDesign& d) {
  Point x;
  x.p = d.p;
  x.nu = d.nu;
  for (int b : d.bits) x.r.push_back(b - 1.0);
  return x;
}

// Continuous SCA loop; returns the last accepted iterate.
Point sca_loop(const DesignInputs& in, Point x, const ScaOptions& options,
               const DigitalScaConfig& cfg, ScaState& state) {
  const int n = static_cast<int>(in.size());
  const Layout lay{n};
  double current = monitored(x, in, cfg);
  state.objective_history.push_back(current);
  state.stop_reason = "iteration limit";
  int small_steps = 0;
  for (int k = 0; k < options.max_iterations; ++k) {
    state.p_bar = x.p;
    state.nu_bar = x.nu;
    state.r_prime_bar = x.r;
    Subproblem sp = build(in, x, cfg);
    SolverReport rep;
    try {
      rep = solve(sp.program, sp.x0, options.solver);
    } catch (const Error& e) {
      throw at_iteration(e, k);
    }
    state.last_solve = rep;
    state.iterations = k + 1;

    Point next;
    double psum = 0.0;
    for (int m = 0; m < n; ++m) {
      next.p.push_back(cfg.freeze_p ? 1.0 / n : rep.x(lay.p(m)) * x.p[m]);
      next.nu.push_back(rep.x(lay.nu(m)) * x.nu[m]);
      next.r.push_back(cfg.freeze_bits ? x.r[m] : rep.x(lay.r(m)));
      psum += next.p.back();
    }
    state.z.assign(n, 0.0);
    state.omega.assign(n, 0.0);
    state.t_aux.assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
      next.p[m] /= psum;
      state.z[m] = std::exp(rep.x(lay.z(m))) * sp.z_bar[m];
      state.omega[m] = std::exp(rep.x(lay.w(m))) * sp.omega_bar[m];
      state.t_aux[m] = rep.x(lay.t(m)) * in.t_max;
    }
    bool valid = true;
    for (int m = 0; m < n; ++m) valid = valid && next.beta(m) > 0.0 && next.beta(m) < 1.0;
    const double obj = valid ? monitored(next, in, cfg) : kInf;
    const double prev = current;
    if (!(obj <= prev)) {
      state.stop_reason = "no descent";
      break;
    }
    x = std::move(next);
    current = obj;
    state.objective_history.push_back(obj);
    small_steps = (prev - obj) <= options.rel_tol * std::abs(prev) ? small_steps + 1 : 0;
    if (small_steps >= options.patience) {
      state.stop_reason = "converged";
      break;
    }
  }
  return x;
}

DigitalDesign realize(const Point& x, std::vector<int> bits, const DesignInputs& in) {
  std::vector<double> beta(x.p.size());
  for (std::size_t m = 0; m < beta.size(); ++m) beta[m] = x.beta(m);
  return make_digital_design_from_beta(beta, x.nu, std::move(bits), in.profiles, in.link);
}

}  // namespace

DigitalDesign repair_latency(DigitalDesign design, const DesignInputs& in) {
  while (!(expected_round_latency(design, in.link) <= in.t_max)) {
    const auto it = std::max_element(design.bits.begin(), design.bits.end());
    if (*it <= 1)
      throw Error(ErrorCode::kRoundingInfeasible,
                  "latency budget violated with every device at one bit");
    --*it;
    design.payload[static_cast<std::size_t>(it - design.bits.begin())] =
        payload_bits(in.link.dim, *it);
  }
  return design;
}

DigitalDesign fill_latency_slack(DigitalDesign design, const DesignInputs& in) {
  double latency = expected_round_latency(design, in.link);
  double value = digital_objective(design, in);
  for (;;) {
    std::size_t pick = design.bits.size();
    double best_ratio = 0.0, best_latency = 0.0, best_value = 0.0;
    for (std::size_t m = 0; m < design.bits.size(); ++m) {
      if (design.bits[m] >= in.r_max) continue;
      DigitalDesign trial = design;
      ++trial.bits[m];
      trial.payload[m] = payload_bits(in.link.dim, trial.bits[m]);
      const double lat = expected_round_latency(trial, in.link);
      if (!(lat <= in.t_max)) continue;
      const double v = digital_objective(trial, in);
      const double ratio = (value - v) / std::max(lat - latency, kFloor * in.t_max);
      if (v < value && ratio > best_ratio) {
        pick = m;
        best_ratio = ratio;
        best_latency = lat;
        best_value = v;
      }
    }
    if (pick == design.bits.size()) return design;
    ++design.bits[pick];
    design.payload[pick] = payload_bits(in.link.dim, design.bits[pick]);
    latency = best_latency;
    value = best_value;
  }
}

DigitalDesign digital_default_init(const DesignInputs& in) {
  in.validate();
  const std::size_t n = in.size();
  int bits = std::min(8, in.r_max);
  double beta = 0.8;
  while (beta > 1e-12) {
    const DigitalDesign d = make_digital_design_from_beta(
        std::vector<double>(n, beta), std::vector<double>(n, static_cast<double>(n) * beta),
        std::vector<int>(n, bits), in.profiles, in.link);
    const bool rate_ok =
        *std::min_element(d.rate.begin(), d.rate.end()) >= in.r_min_rate;
    if (rate_ok && expected_round_latency(d, in.link) <= in.t_max) return d;
    if (bits > 1 && rate_ok)
      --bits;
    else
      beta *= 0.5;
  }
  throw Error(ErrorCode::kBadInit, "no feasible initial digital design");
}

DigitalScaResult digital_sca(const DesignInputs& in, const DigitalDesign& init,
                             const ScaOptions& options, const DigitalScaConfig& config) {
  in.validate();
  check_init(in, init);
  DigitalScaResult res;
  res.state.scheme = ScaState::Scheme::kDigital;
  Point x = point_of(init);
  if (config.freeze_p) x.p.assign(in.size(), 1.0 / static_cast<double>(in.size()));
  x = sca_loop(in, x, options, config, res.state);

  std::vector<int> bits(in.size());
  for (std::size_t m = 0; m < bits.size(); ++m)
    bits[m] = std::clamp(static_cast<int>(std::floor(x.r[m] + kRoundEps)) + 1, 1, in.r_max);
  DigitalDesign rounded = repair_latency(realize(x, bits, in), in);

  // Fixed-bit pass on the rounded design; its history is kept separately.
  DigitalScaConfig fixed = config;
  fixed.freeze_bits = true;
  ScaState polish;
  const Point y = sca_loop(in, point_of(rounded), options, fixed, polish);
  res.design = fill_latency_slack(realize(y, rounded.bits, in), in);
  res.objective = digital_objective(res.design, in);
  return res;
}

DigitalScaResult digital_zero_bias_optimized(const DesignInputs& in,
                                             const ScaOptions& options) {
  DigitalScaConfig cfg;
  cfg.freeze_p = true;
  return digital_sca(in, digital_default_init(in), options, cfg);
}

DigitalScaResult digital_zero_bias_min_quant(const DesignInputs& in,
                                             const ScaOptions& options) {
  DigitalScaConfig cfg;
  cfg.freeze_p = true;
  cfg.objective = DigitalScaConfig::Objective::kQuantization;
  return digital_sca(in, digital_default_init(in), options, cfg);
}

DigitalScaResult digital_optimized(const DesignInputs& in, const ScaOptions& options) {
  std::vector<DigitalScaResult> candidates;
  candidates.push_back(digital_sca(in, digital_default_init(in), options));
  for (DigitalScaResult v :
       {digital_zero_bias_optimized(in, options), digital_zero_bias_min_quant(in, options)}) {
    candidates.push_back(digital_sca(in, v.design, options));
    candidates.push_back(std::move(v));
  }
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const auto& a, const auto& b) { return a.objective < b.objective; });
  return std::move(*best);
}

}  // namespace wfl
