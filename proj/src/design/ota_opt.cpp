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

#include "wfl/design/ota_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wfl {

namespace {

constexpr double kFloor = 1e-9;
constexpr double kInset = 1e-3;

Error at_iteration(const Error& e, int k) {
  return Error(e.code(), "SCA iteration " + std::to_string(k) + ": " + e.what());
}

// Variables: u = gamma / gamma_max (N), q = p / p_bar (N), y_z = ln(z / z_bar) (N),
// a = alpha / alpha_scale (1).
struct OtaLayout {
  int n;
  int u(int m) const { return m; }
  int p(int m) const { return n + m; }
  int z(int m) const { return 2 * n + m; }
  int a() const { return 3 * n; }
  int size() const { return 3 * n + 1; }
};

struct OtaSubproblem {
  ConvexProgram program;
  Vec x0;
  std::vector<double> z_bar;
  double alpha_scale = 0.0;
};

OtaSubproblem build(const DesignInputs& in, const OtaDesign& bar) {
  const int n = static_cast<int>(in.size());
  const OtaLayout lay{n};
  const double g2 = in.link.g_max * in.link.g_max;
  const auto dim = static_cast<double>(in.link.dim);
  const double w_var = in.eta / in.mu;
  const double w_bias = n * in.kappa * in.kappa / (in.mu * in.mu);

  OtaSubproblem sp;
  std::vector<double> gmax(n), amax(n);
  for (int m = 0; m < n; ++m) {
    gmax[m] = ota_gamma_max(in.profiles[m].lambda, in.link);
    amax[m] = ota_alpha_max(in.profiles[m].lambda, in.link);
    sp.alpha_scale += amax[m];
  }
  const double as = sp.alpha_scale;
  const double a_bar = bar.alpha / as;
  const double scale = 1.0 / ota_objective(bar, in);

  auto& prog = sp.program;
  prog.num_vars = lay.size();
  sp.z_bar.resize(n);
  sp.x0.resize(lay.size());
  for (int m = 0; m < n; ++m) {
    const double pb = std::max(bar.p[m], kFloor);
    const double ub = std::clamp(bar.gamma[m] / gmax[m], kFloor, 1.0);
    sp.z_bar[m] = pb * bar.gamma[m] / bar.alpha;
    const double zb = std::max(sp.z_bar[m], 1e-300);
    // Strictly inside: u pulled off its cap, z up and alpha down by kInset.
    sp.x0(lay.u(m)) = std::max(ub * (1.0 - kInset * kInset), kFloor * 2);
    sp.x0(lay.p(m)) = bar.p[m] / pb;
    sp.x0(lay.z(m)) = -std::log(1.0 - 2 * kInset);
    const double sigma2 = in.profiles[m].sigma * in.profiles[m].sigma;
    const double inv_n = 1.0 / n;

    // eta/mu (G^2 z + p^2 sigma^2 - G^2 pb (2p - pb)) + w_bias (p - 1/N)^2
    prog.objective.push_back(
        {{lay.p(m), lay.z(m)}, [=](const Vec& x, Vec* g, Mat* h) {
           const double p = pb * x(0);
           const double ez = w_var * g2 * zb * std::exp(x(1));
           const double v = ez + w_var * (p * p * sigma2 - g2 * pb * (2 * p - pb)) +
                            w_bias * (p - inv_n) * (p - inv_n);
           if (g) *g = Vec{{scale * pb * (w_var * (2 * p * sigma2 - 2 * g2 * pb) +
                                          2 * w_bias * (p - inv_n)),
                            scale * ez}};
           if (h) {
             h->setZero(2, 2);
             (*h)(0, 0) = scale * pb * pb * (2 * w_var * sigma2 + 2 * w_bias);
             (*h)(1, 1) = scale * ez;
           }
           return scale * v;
         }});

    // u/ub + q - 2 - y_z - ln(a/a_bar) <= 0
    prog.inequalities.push_back(
        {{lay.u(m), lay.p(m), lay.z(m), lay.a()}, [=](const Vec& x, Vec* g, Mat* h) {
           if (x(3) <= 0) return std::numeric_limits<double>::infinity();
           if (g) *g = Vec{{1 / ub, 1.0, -1.0, -1 / x(3)}};
           if (h) {
             h->setZero(4, 4);
             (*h)(3, 3) = 1 / (x(3) * x(3));
           }
           return x(0) / ub + x(1) - 2 - x(2) - std::log(x(3) / a_bar);
         }});

    // ln(alpha_bar pb / gamma_max) + a/a_bar + q - 2 - ln u + u^2/2 <= 0
    const double c0 = std::log(bar.alpha * pb / gmax[m]);
    prog.inequalities.push_back(
        {{lay.u(m), lay.p(m), lay.a()}, [=](const Vec& x, Vec* g, Mat* h) {
           if (x(0) <= 0) return std::numeric_limits<double>::infinity();
           if (g) *g = Vec{{-1 / x(0) + x(0), 1.0, 1 / a_bar}};
           if (h) {
             h->setZero(3, 3);
             (*h)(0, 0) = 1 / (x(0) * x(0)) + 1;
           }
           return c0 + x(2) / a_bar + x(1) - 2 - std::log(x(0)) + 0.5 * x(0) * x(0);
         }});

    // p / alpha_max <= (2 alpha_bar - alpha) / alpha_bar^2, divided by 1/alpha_bar
    const double cp = pb * a_bar * as / amax[m];
    prog.inequalities.push_back(
        {{lay.p(m), lay.a()}, [=](const Vec& x, Vec* g, Mat* h) {
           if (g) *g = Vec{{cp, 1 / a_bar}};
           if (h) *h = Mat::Zero(2, 2);
           return cp * x(0) + x(1) / a_bar - 2;
         }});
  }
  const double noise = w_var * dim * in.link.noise_psd / (as * as);
  prog.objective.push_back({{lay.a()}, [=](const Vec& x, Vec* g, Mat* h) {
                              const double a = x(0);
                              if (a <= 0) return std::numeric_limits<double>::infinity();
                              if (g) *g = Vec::Constant(1, -2 * scale * noise / (a * a * a));
                              if (h) *h = Mat::Constant(1, 1, 6 * scale * noise / (a * a * a * a));
                              return scale * noise / (a * a);
                            }});
  sp.x0(lay.a()) = a_bar * (1.0 - kInset);

  prog.lower = Vec::Constant(lay.size(), -std::numeric_limits<double>::infinity());
  prog.upper = Vec::Constant(lay.size(), std::numeric_limits<double>::infinity());
  for (int m = 0; m < n; ++m) {
    prog.lower(lay.u(m)) = kFloor;
    prog.upper(lay.u(m)) = 1.0;
    prog.lower(lay.p(m)) = kFloor / std::max(bar.p[m], kFloor);
  }
  prog.lower(lay.a()) = kFloor;
  prog.eq_matrix = Mat::Zero(1, lay.size());
  for (int m = 0; m < n; ++m) prog.eq_matrix(0, lay.p(m)) = std::max(bar.p[m], kFloor);
  prog.eq_rhs = Vec::Ones(1);
  return sp;
}

void check_init(const DesignInputs& in, const OtaDesign& init) {
  if (init.size() != in.size() || !(init.alpha > 0.0))
    throw Error(ErrorCode::kBadInit, "initial OTA design is degenerate");
  for (std::size_t m = 0; m < in.size(); ++m) {
    const double gm = ota_gamma_max(in.profiles[m].lambda, in.link);
    if (!(init.gamma[m] > 0.0) || init.gamma[m] > gm * (1 + 1e-12))
      throw Error(ErrorCode::kBadInit,
                  "initial pre-scaler of device " + std::to_string(m) +
                      " outside (0, gamma_max]");
  }
}

}  // namespace

OtaDesign ota_min_noise_variance(const DesignInputs& in) {
  in.validate();
  std::vector<double> gamma;
  for (const auto& p : in.profiles) gamma.push_back(ota_gamma_max(p.lambda, in.link));
  return make_ota_design(std::move(gamma), in.profiles, in.link);
}

double ota_gamma_for_alpha(double target, double lambda, const LinkBudget& link,
                           double rel_tol) {
  const double hi0 = ota_gamma_max(lambda, link);
  if (target >= ota_alpha_m(hi0, lambda, link)) return hi0;
  if (target <= 0.0) return 0.0;
  double lo = 0.0, hi = hi0;
  for (int it = 0; it < 400 && hi - lo > rel_tol * hi0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ota_alpha_m(mid, lambda, link) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

OtaDesign ota_zero_bias(const DesignInputs& in, double bisect_tol) {
  in.validate();
  if (!(bisect_tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "bisection tolerance must be positive");
  double target = std::numeric_limits<double>::infinity();
  for (const auto& p : in.profiles)
    target = std::min(target, ota_alpha_max(p.lambda, in.link));
  std::vector<double> gamma;
  for (const auto& p : in.profiles) {
    if (ota_alpha_max(p.lambda, in.link) == target)
      gamma.push_back(ota_gamma_max(p.lambda, in.link));
    else
      gamma.push_back(ota_gamma_for_alpha(target, p.lambda, in.link, bisect_tol));
  }
  return make_ota_design(std::move(gamma), in.profiles, in.link);
}

OtaScaResult ota_sca(const DesignInputs& in, const OtaDesign& init,
                     const ScaOptions& options) {
  in.validate();
  check_init(in, init);
  const int n = static_cast<int>(in.size());
  const OtaLayout lay{n};

  OtaScaResult res;
  res.design = init;
  res.objective = ota_objective(init, in);
  res.state.scheme = ScaState::Scheme::kOta;
  res.state.objective_history.push_back(res.objective);
  res.state.stop_reason = "iteration limit";
  int small_steps = 0;

  for (int k = 0; k < options.max_iterations; ++k) {
    const OtaDesign& bar = res.design;
    res.state.p_bar = bar.p;
    res.state.gamma_bar = bar.gamma;
    res.state.alpha_bar = bar.alpha;
    OtaSubproblem sp = build(in, bar);
    SolverReport rep;
    try {
      rep = solve(sp.program, sp.x0, options.solver);
    } catch (const Error& e) {
      throw at_iteration(e, k);
    }
    res.state.last_solve = rep;
    res.state.iterations = k + 1;

    const double alpha = rep.x(lay.a()) * sp.alpha_scale;
    std::vector<double> p(n), gamma(n);
    double gap = 0.0;
    for (int m = 0; m < n; ++m) p[m] = rep.x(lay.p(m)) * std::max(bar.p[m], kFloor);
    const double psum = std::accumulate(p.begin(), p.end(), 0.0);
    res.state.z.resize(n);
    for (int m = 0; m < n; ++m) {
      p[m] /= psum;  // removes rounding drift in the equality
      const double lam = in.profiles[m].lambda;
      const double gsol = rep.x(lay.u(m)) * ota_gamma_max(lam, in.link);
      const double target = alpha * p[m];
      gap = std::max(gap, (ota_alpha_m(gsol, lam, in.link) - target) /
                              ota_alpha_max(lam, in.link));
      gamma[m] = std::min(gsol, ota_gamma_for_alpha(target, lam, in.link));
      res.state.z[m] = std::exp(rep.x(lay.z(m))) * sp.z_bar[m];
    }
    res.state.relaxation_gap = gap;
    OtaDesign next;
    try {
      next = make_ota_design(gamma, in.profiles, in.link);
    } catch (const Error& e) {
      throw at_iteration(e, k);
    }
    const double obj = ota_objective(next, in);
    const double prev = res.objective;
    if (!(obj <= prev)) {
      res.state.stop_reason = "no descent";
      break;
    }
    res.design = std::move(next);
    res.objective = obj;
    res.state.objective_history.push_back(obj);
    small_steps = (prev - obj) <= options.rel_tol * std::abs(prev) ? small_steps + 1 : 0;
    if (small_steps >= options.patience) {
      res.state.stop_reason = "converged";
      break;
    }
  }
  return res;
}

OtaScaResult ota_optimized(const DesignInputs& in, const ScaOptions& options) {
  const OtaDesign zb = ota_zero_bias(in);
  const OtaDesign nv = ota_min_noise_variance(in);
  OtaScaResult best = ota_sca(in, zb, options);
  OtaScaResult other = ota_sca(in, nv, options);
  if (other.objective < best.objective) best = std::move(other);
  return best;
}

}  // namespace wfl
