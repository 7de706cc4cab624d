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

#include "wfl/solver/convex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec gather(const Vec& x, const std::vector<int>& support) {
  Vec xs(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) xs(static_cast<Eigen::Index>(k)) = x(support[k]);
  return xs;
}

// Adds scale * term value and derivatives at x; returns the raw value.
double add_term(const ConvexTerm& term, const Vec& x, Vec* grad, Mat* hess,
                Vec* local_grad = nullptr) {
  const Vec xs = gather(x, term.support);
  Vec g;
  Mat h;
  const double v = term.eval(xs, grad ? &g : nullptr, hess ? &h : nullptr);
  if (!std::isfinite(v)) return kInf;
  const auto k = term.support.size();
  if (grad)
    for (std::size_t i = 0; i < k; ++i) (*grad)(term.support[i]) += g(static_cast<Eigen::Index>(i));
  if (hess)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        (*hess)(term.support[i], term.support[j]) +=
            h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  if (local_grad) *local_grad = std::move(g);
  return v;
}

bool has(const Vec& v) { return v.size() > 0; }

// Barrier objective t f(x) - sum log(-g_i(x)) - sum log(bound slacks).
double barrier(const ConvexProgram& p, const Vec& x, double t, Vec* grad,
               Mat* hess) {
  const auto n = static_cast<Eigen::Index>(p.num_vars);
  if (grad) grad->setZero(n);
  if (hess) hess->setZero(n, n);
  double value = 0.0;
  Vec fg = Vec::Zero(n);
  Mat fh = Mat::Zero(n, n);
  for (const auto& term : p.objective) {
    const double v = add_term(term, x, grad ? &fg : nullptr, hess ? &fh : nullptr);
    if (!std::isfinite(v)) return kInf;
    value += t * v;
  }
  if (grad) *grad += t * fg;
  if (hess) *hess += t * fh;
  for (const auto& term : p.inequalities) {
    Vec lg;
    Mat lh;
    const Vec xs = gather(x, term.support);
    const double g = term.eval(xs, grad ? &lg : nullptr, hess ? &lh : nullptr);
    if (!(g < 0.0)) return kInf;
    value -= std::log(-g);
    const auto k = term.support.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (grad) (*grad)(term.support[i]) += lg(ii) / -g;
      if (hess)
        for (std::size_t j = 0; j < k; ++j) {
          const auto jj = static_cast<Eigen::Index>(j);
          (*hess)(term.support[i], term.support[j]) +=
              lh(ii, jj) / -g + lg(ii) * lg(jj) / (g * g);
        }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (has(p.lower) && std::isfinite(p.lower(j))) {
      const double s = x(j) - p.lower(j);
      if (!(s > 0.0)) return kInf;
      value -= std::log(s);
      if (grad) (*grad)(j) -= 1.0 / s;
      if (hess) (*hess)(j, j) += 1.0 / (s * s);
    }
    if (has(p.upper) && std::isfinite(p.upper(j))) {
      const double s = p.upper(j) - x(j);
      if (!(s > 0.0)) return kInf;
      value -= std::log(s);
      if (grad) (*grad)(j) += 1.0 / s;
      if (hess) (*hess)(j, j) += 1.0 / (s * s);
    }
  }
  return value;
}

int barrier_count(const ConvexProgram& p) {
  int m = static_cast<int>(p.inequalities.size());
  for (Eigen::Index j = 0; j < p.num_vars; ++j) {
    if (has(p.lower) && std::isfinite(p.lower(j))) ++m;
    if (has(p.upper) && std::isfinite(p.upper(j))) ++m;
  }
  return m;
}

// Orthonormal basis of the null space of the equality matrix.
Mat nullspace(const ConvexProgram& p) {
  const auto n = static_cast<Eigen::Index>(p.num_vars);
  if (p.eq_matrix.rows() == 0) return Mat::Identity(n, n);
  Eigen::ColPivHouseholderQR<Mat> qr(p.eq_matrix.transpose());
  const Eigen::Index rank = qr.rank();
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - rank);
}

// Largest step keeping native bounds a fraction away from the boundary.
double max_step(const ConvexProgram& p, const Vec& x, const Vec& dx, double frac) {
  double s = 1.0;
  for (Eigen::Index j = 0; j < dx.size(); ++j) {
    if (dx(j) < 0.0 && has(p.lower) && std::isfinite(p.lower(j)))
      s = std::min(s, frac * (x(j) - p.lower(j)) / -dx(j));
    if (dx(j) > 0.0 && has(p.upper) && std::isfinite(p.upper(j)))
      s = std::min(s, frac * (p.upper(j) - x(j)) / dx(j));
  }
  return s;
}

Vec solve_reduced(const Mat& h, const Vec& g) {
  Eigen::LLT<Mat> llt(h);
  if (llt.info() == Eigen::Success) return llt.solve(g);
  const double base = 1.0 + h.diagonal().cwiseAbs().maxCoeff();
  for (double reg = 1e-10; reg < 1e6; reg *= 10.0) {
    Mat hr = h;
    hr.diagonal().array() += reg * base;
    Eigen::LDLT<Mat> ldlt(hr);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) return ldlt.solve(g);
  }
  throw Error(ErrorCode::kNumericalFailure, "Newton system is not factorizable");
}

using StopFn = std::function<bool(const Vec&)>;

// Damped Newton on the barrier at fixed t, restricted to x + range(Z).
// Returns true if `stop` fired.
bool center(const ConvexProgram& p, Vec& x, double t, const Mat& z,
            const SolverOptions& opt, int& newton_iters, const StopFn& stop) {
  constexpr double kPureNewton = 0.1;  // decrement below which full steps are taken
  constexpr double kDone = 1e-14;
  Vec grad;
  Mat hess;
  double best_dec = kInf;
  int stagnant = 0;
  for (int it = 0; it < opt.max_newton; ++it) {
    const double phi = barrier(p, x, t, &grad, &hess);
    if (!std::isfinite(phi))
      throw Error(ErrorCode::kDomainViolation, "iterate left the barrier domain");
    const Vec gz = z.transpose() * grad;
    const Mat hz = z.transpose() * hess * z;
    const Vec dx = z * solve_reduced(hz, -gz);
    const double dec = -grad.dot(dx);  // Newton decrement squared
    if (dec / 2.0 <= kDone) return false;
    // Rounding floor: the decrement stopped shrinking while already tiny.
    stagnant = dec >= 0.5 * best_dec ? stagnant + 1 : 0;
    if (stagnant >= 3 && dec / 2.0 <= 1e-6) return false;
    best_dec = std::min(best_dec, dec);

    double s = max_step(p, x, dx, opt.boundary_fraction);
    Vec trial = x + s * dx;
    double phi_trial = barrier(p, trial, t, nullptr, nullptr);
    // Close to the center the Armijo test is below the resolution of phi,
    // so full steps are taken as long as phi does not visibly increase.
    const bool pure = dec < kPureNewton && std::isfinite(phi_trial) &&
                      phi_trial <= phi + 1e-12 * std::abs(phi);
    if (!pure) {
      while (s >= 1e-14) {
        if (std::isfinite(phi_trial) && phi_trial <= phi - opt.armijo * s * dec) break;
        s *= opt.shrink;
        trial = x + s * dx;
        phi_trial = barrier(p, trial, t, nullptr, nullptr);
      }
      if (s < 1e-14) {
        if (dec / 2.0 <= 1e-8) return false;
        throw Error(ErrorCode::kNumericalFailure,
                    "line search stalled with Newton decrement " + std::to_string(dec));
      }
    }
    x = std::move(trial);
    ++newton_iters;
    if (stop && stop(x)) return true;
  }
  throw Error(ErrorCode::kNumericalFailure, "Newton iteration cap reached");
}

struct BarrierRun {
  int outer = 0;
  double t = 0.0;  // barrier weight of the last centering
  bool stopped = false;
  std::vector<double> history;
};

BarrierRun run_barrier(const ConvexProgram& p, Vec& x, const SolverOptions& opt,
                       int& newton_iters, const StopFn& stop) {
  const Mat z = nullspace(p);
  const int m = barrier_count(p);
  BarrierRun run;
  double t = opt.t0;
  for (run.outer = 1; run.outer <= opt.max_outer; ++run.outer) {
    run.t = t;
    if (center(p, x, t, z, opt, newton_iters, stop)) {
      run.stopped = true;
      return run;
    }
    run.history.push_back(objective_value(p, x));
    if (m == 0 || m / t <= opt.duality_gap_tol) return run;
    t *= opt.t_factor;
  }
  run.outer = opt.max_outer;
  return run;
}

double ineq_value(const ConvexTerm& term, const Vec& x, Vec* local_grad) {
  const Vec xs = gather(x, term.support);
  return term.eval(xs, local_grad, nullptr);
}

bool strictly_feasible(const ConvexProgram& p, const Vec& x, double eq_tol) {
  for (const auto& term : p.inequalities)
    if (!(ineq_value(term, x, nullptr) < 0.0)) return false;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (has(p.lower) && !(x(j) > p.lower(j))) return false;
    if (has(p.upper) && !(x(j) < p.upper(j))) return false;
  }
  if (p.eq_matrix.rows() > 0 &&
      (p.eq_matrix * x - p.eq_rhs).lpNorm<Eigen::Infinity>() > eq_tol)
    return false;
  return true;
}

// Slack problem: minimize s subject to g_i(x) <= s and relaxed bounds.
Vec phase1(const ConvexProgram& p, Vec x, const SolverOptions& opt,
           int& newton_iters) {
  const int n = p.num_vars;
  if (p.eq_matrix.rows() > 0) {
    const Vec r = p.eq_rhs - p.eq_matrix * x;
    x += p.eq_matrix.completeOrthogonalDecomposition().solve(r);
  }
  ConvexProgram q;
  q.num_vars = n + 1;
  q.objective.push_back({{n}, [](const Vec& xs, Vec* g, Mat* h) {
                           if (g) *g = Vec::Ones(1);
                           if (h) *h = Mat::Zero(1, 1);
                           return xs(0);
                         }});
  double worst = -kInf;
  for (const auto& term : p.inequalities) {
    ConvexTerm r;
    r.support = term.support;
    r.support.push_back(n);
    const auto k = static_cast<Eigen::Index>(term.support.size());
    r.eval = [&term, k](const Vec& xs, Vec* g, Mat* h) {
      Vec lg;
      Mat lh;
      const double v = term.eval(xs.head(k), g ? &lg : nullptr, h ? &lh : nullptr);
      if (g) {
        g->resize(k + 1);
        g->head(k) = lg;
        (*g)(k) = -1.0;
      }
      if (h) {
        h->setZero(k + 1, k + 1);
        h->topLeftCorner(k, k) = lh;
      }
      return v - xs(k);
    };
    const double v = ineq_value(term, x, nullptr);
    if (!std::isfinite(v))
      throw Error(ErrorCode::kDomainViolation, "start point outside a constraint domain");
    worst = std::max(worst, v);
    q.inequalities.push_back(std::move(r));
  }
  for (int j = 0; j < n; ++j) {
    for (int side = 0; side < 2; ++side) {
      const Vec& bound = side == 0 ? p.lower : p.upper;
      if (!has(bound) || !std::isfinite(bound(j))) continue;
      const double sign = side == 0 ? -1.0 : 1.0;  // sign*(x - bound) <= s
      const double b = bound(j);
      worst = std::max(worst, sign * (x(j) - b));
      q.inequalities.push_back({{j, n}, [sign, b](const Vec& xs, Vec* g, Mat* h) {
                                  if (g) *g = Vec{{sign, -1.0}};
                                  if (h) *h = Mat::Zero(2, 2);
                                  return sign * (xs(0) - b) - xs(1);
                                }});
    }
  }
  if (p.eq_matrix.rows() > 0) {
    q.eq_matrix = Mat::Zero(p.eq_matrix.rows(), n + 1);
    q.eq_matrix.leftCols(n) = p.eq_matrix;
    q.eq_rhs = p.eq_rhs;
  }
  q.lower = Vec::Constant(n + 1, -kInf);
  const double s0 = std::max(worst, 0.0) + 1.0;
  q.lower(n) = -s0;  // keeps the slack problem bounded below
  Vec y(n + 1);
  y << x, s0;
  SolverOptions o = opt;
  const auto feasible = [n](const Vec& v) { return v(n) < 0.0; };
  const BarrierRun run = run_barrier(q, y, o, newton_iters, feasible);
  if (!run.stopped)
    throw Error(ErrorCode::kInfeasible,
                "phase I ended with slack " + std::to_string(y(n)));
  return y.head(n);
}

}  // namespace

double KktReport::worst() const {
  return std::max({stationarity, complementarity, primal});
}

double objective_value(const ConvexProgram& p, const Vec& x) {
  double v = 0.0;
  for (const auto& term : p.objective) {
    const double f = term.eval(gather(x, term.support), nullptr, nullptr);
    if (!std::isfinite(f)) return kInf;
    v += f;
  }
  return v;
}

double primal_residual(const ConvexProgram& p, const Vec& x) {
  double r = 0.0;
  for (const auto& term : p.inequalities) {
    const double g = ineq_value(term, x, nullptr);
    r = std::max(r, std::isfinite(g) ? g : kInf);
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (has(p.lower)) r = std::max(r, p.lower(j) - x(j));
    if (has(p.upper)) r = std::max(r, x(j) - p.upper(j));
  }
  if (p.eq_matrix.rows() > 0)
    r = std::max(r, (p.eq_matrix * x - p.eq_rhs).lpNorm<Eigen::Infinity>());
  return r;
}

namespace {

// Gradients and values of every inequality, then of every finite bound.
void constraint_rows(const ConvexProgram& p, const Vec& x, std::vector<Vec>& cgrad,
                     std::vector<double>& cval) {
  const auto n = static_cast<Eigen::Index>(p.num_vars);
  for (const auto& term : p.inequalities) {
    Vec lg;
    const double g = ineq_value(term, x, &lg);
    Vec full = Vec::Zero(n);
    for (std::size_t k = 0; k < term.support.size(); ++k)
      full(term.support[k]) += lg(static_cast<Eigen::Index>(k));
    cgrad.push_back(std::move(full));
    cval.push_back(g);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (has(p.lower) && std::isfinite(p.lower(j))) {
      cgrad.push_back(-Vec::Unit(n, j));
      cval.push_back(p.lower(j) - x(j));
    }
    if (has(p.upper) && std::isfinite(p.upper(j))) {
      cgrad.push_back(Vec::Unit(n, j));
      cval.push_back(x(j) - p.upper(j));
    }
  }
}

// KKT certificate at the barrier solution. Constraints with clear slack keep
// their barrier multipliers 1 / (t (-g_i)); the near-active ones and the
// equalities get multipliers fitted by nonnegative least squares on the
// stationarity equations. Deriving every multiplier from the slack would tie
// the residual to how precisely a slack near 1/t can be represented.
KktReport barrier_kkt(const ConvexProgram& p, const Vec& x, double t) {
  const auto n = static_cast<Eigen::Index>(p.num_vars);
  Vec fixed = Vec::Zero(n);
  for (const auto& term : p.objective) add_term(term, x, &fixed, nullptr);
  std::vector<Vec> cgrad;
  std::vector<double> cval;
  constraint_rows(p, x, cgrad, cval);
  const double near = std::max(1e-8, std::sqrt(1.0 / t));
  std::vector<std::size_t> active;
  std::vector<double> lambda(cgrad.size(), 0.0);
  for (std::size_t i = 0; i < cgrad.size(); ++i) {
    if (-cval[i] <= near * std::max(1.0, cgrad[i].norm())) {
      active.push_back(i);
    } else {
      lambda[i] = 1.0 / (t * -cval[i]);
      fixed += lambda[i] * cgrad[i];
    }
  }
  const auto na = static_cast<Eigen::Index>(active.size());
  const Eigen::Index pe = p.eq_matrix.rows();
  Mat m(n, na + 2 * pe);
  for (Eigen::Index k = 0; k < na; ++k) m.col(k) = cgrad[active[static_cast<std::size_t>(k)]];
  if (pe > 0) {
    m.middleCols(na, pe) = p.eq_matrix.transpose();
    m.rightCols(pe) = -p.eq_matrix.transpose();
  }
  const Vec y = nnls(m, -fixed);
  for (Eigen::Index k = 0; k < na; ++k) lambda[active[static_cast<std::size_t>(k)]] = y(k);

  KktReport rep;
  rep.ineq_multipliers = lambda;
  for (std::size_t i = 0; i < cgrad.size(); ++i)
    rep.complementarity = std::max(rep.complementarity, std::abs(lambda[i] * cval[i]));
  if (pe > 0) rep.eq_multipliers = y.segment(na, pe) - y.segment(na + pe, pe);
  rep.stationarity = (fixed + m * y).norm();
  rep.primal = primal_residual(p, x);
  return rep;
}

}  // namespace

SolverReport solve(const ConvexProgram& program, const Vec& x0,
                   const SolverOptions& options) {
  if (x0.size() != program.num_vars)
    throw Error(ErrorCode::kInvalidArgument, "start point has the wrong size");
  SolverReport rep;
  Vec x = x0;
  if (!std::isfinite(objective_value(program, x)))
    throw Error(ErrorCode::kDomainViolation, "objective undefined at the start point");
  if (!strictly_feasible(program, x, 1e-10)) {
    x = phase1(program, x, options, rep.newton_total_iters);
    rep.used_phase1 = true;
  }
  const BarrierRun run = run_barrier(program, x, options, rep.newton_total_iters, {});
  rep.barrier_outer_iters = run.outer;
  rep.objective_history = run.history;
  rep.x = x;
  rep.objective = objective_value(program, x);
  rep.max_primal_residual = primal_residual(program, x);
  if (rep.max_primal_residual > options.feas_tol)
    throw Error(ErrorCode::kNumericalFailure,
                "primal residual " + std::to_string(rep.max_primal_residual));
  const KktReport kkt = barrier_kkt(program, x, run.t);
  rep.kkt_stationarity_residual = kkt.stationarity;
  rep.kkt_complementarity_residual = kkt.complementarity;
  return rep;
}

KktReport check_kkt(const ConvexProgram& p, const Vec& x) {
  const auto n = static_cast<Eigen::Index>(p.num_vars);
  Vec fgrad = Vec::Zero(n);
  for (const auto& term : p.objective) add_term(term, x, &fgrad, nullptr);
  std::vector<Vec> cgrad;
  std::vector<double> cval;
  constraint_rows(p, x, cgrad, cval);
  const auto mi = static_cast<Eigen::Index>(cgrad.size());
  const Eigen::Index pe = p.eq_matrix.rows();
  // Columns: inequality multipliers, then +nu and -nu for equalities.
  Mat m = Mat::Zero(n + mi, mi + 2 * pe);
  for (Eigen::Index i = 0; i < mi; ++i) {
    m.block(0, i, n, 1) = cgrad[static_cast<std::size_t>(i)];
    m(n + i, i) = cval[static_cast<std::size_t>(i)];
  }
  if (pe > 0) {
    m.block(0, mi, n, pe) = p.eq_matrix.transpose();
    m.block(0, mi + pe, n, pe) = -p.eq_matrix.transpose();
  }
  Vec rhs = Vec::Zero(n + mi);
  rhs.head(n) = -fgrad;
  const Vec y = nnls(m, rhs);

  KktReport rep;
  Vec station = fgrad;
  for (Eigen::Index i = 0; i < mi; ++i) {
    station += y(i) * cgrad[static_cast<std::size_t>(i)];
    rep.ineq_multipliers.push_back(y(i));
    rep.complementarity =
        std::max(rep.complementarity, std::abs(y(i) * cval[static_cast<std::size_t>(i)]));
  }
  if (pe > 0) {
    rep.eq_multipliers = y.segment(mi, pe) - y.segment(mi + pe, pe);
    station += p.eq_matrix.transpose() * rep.eq_multipliers;
  }
  rep.stationarity = station.norm();
  rep.primal = primal_residual(p, x);
  return rep;
}

double derivative_check(const ConvexProgram& p, const Vec& x, double step) {
  double worst = 0.0;
  auto check = [&](const ConvexTerm& term) {
    const Vec xs = gather(x, term.support);
    Vec g;
    term.eval(xs, &g, nullptr);
    for (Eigen::Index k = 0; k < xs.size(); ++k) {
      const double h = step * std::max(1.0, std::abs(xs(k)));
      Vec a = xs, b = xs;
      a(k) += h;
      b(k) -= h;
      const double fd =
          (term.eval(a, nullptr, nullptr) - term.eval(b, nullptr, nullptr)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k))));
    }
  };
  for (const auto& t : p.objective) check(t);
  for (const auto& t : p.inequalities) check(t);
  return worst;
}

Vec nnls(const Mat& m, const Vec& b, int max_iter) {
  const Eigen::Index n = m.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);
  Vec x = Vec::Zero(n);
  if (n == 0 || m.rows() == 0) return x;
  // Unit columns; zero columns stay out of the passive set.
  Vec scale = m.colwise().norm().transpose();
  Mat a = m;
  for (Eigen::Index j = 0; j < n; ++j)
    if (scale(j) > 0.0) a.col(j) /= scale(j);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-15 * std::max(b.norm(), 1e-300) * static_cast<double>(n + 1);

  auto solve_passive = [&](Vec& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z = Vec::Zero(n);
    if (idx.empty()) return;
    Mat sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Vec zs = sub.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(static_cast<Eigen::Index>(k));
  };

  for (int it = 0; it < max_iter; ++it) {
    const Vec w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && scale(j) > 0.0 && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    Vec z;
    for (int inner = 0; inner <= n; ++inner) {
      solve_passive(z);
      bool ok = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) ok = false;
      if (ok) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-300) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
    }
    x = z.cwiseMax(0.0);
  }
  for (Eigen::Index j = 0; j < n; ++j) x(j) = scale(j) > 0.0 ? x(j) / scale(j) : 0.0;
  return x;
}

}  // namespace wfl
