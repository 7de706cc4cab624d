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

#include <functional>
#include <limits>
#include <vector>

#include "wfl/common.hpp"

namespace wfl {

/// A smooth convex function of the variables listed in `support`. `eval`
/// receives those variables in order, returns the value (+inf outside the
/// domain) and, when the pointers are non-null, fills the gradient and
/// Hessian with respect to them.
struct ConvexTerm {
  std::vector<int> support;
  std::function<double(const Vec& xs, Vec* grad, Mat* hess)> eval;
};

/// minimize sum(objective) s.t. inequalities <= 0, A x = b, lower <= x <= upper.
struct ConvexProgram {
  int num_vars = 0;
  std::vector<ConvexTerm> objective;
  std::vector<ConvexTerm> inequalities;
  Mat eq_matrix;  // p x n, may have zero rows
  Vec eq_rhs;
  Vec lower;  // -inf where absent; empty means unbounded
  Vec upper;  // +inf where absent; empty means unbounded
};

struct SolverOptions {
  double duality_gap_tol = 1e-8;
  double feas_tol = 1e-9;
  double kkt_tol = 1e-6;
  int max_outer = 60;
  int max_newton = 200;
  double t0 = 1.0;
  double t_factor = 10.0;
  double armijo = 1e-4;
  double shrink = 0.5;
  double boundary_fraction = 0.99;
};

struct KktReport {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double primal = 0.0;
  std::vector<double> ineq_multipliers;  // one per inequality, then bounds
  Vec eq_multipliers;

  double worst() const;
};

struct SolverReport {
  Vec x;
  double objective = 0.0;
  double max_primal_residual = 0.0;
  double kkt_stationarity_residual = 0.0;
  double kkt_complementarity_residual = 0.0;
  int barrier_outer_iters = 0;
  int newton_total_iters = 0;
  bool used_phase1 = false;
  std::vector<double> objective_history;  // true objective after each centering
};

/// Log-barrier interior point. A start that is not strictly feasible goes
/// through a phase-I slack problem first. Throws kInfeasible,
/// kNumericalFailure or kDomainViolation.
SolverReport solve(const ConvexProgram& program, const Vec& x0,
                   const SolverOptions& options = {});

/// Non-negative least-squares multipliers for all inequality and bound
/// constraints plus free equality multipliers, minimizing the stationarity
/// and complementarity residuals jointly.
KktReport check_kkt(const ConvexProgram& program, const Vec& x);

/// Value of the summed objective; +inf outside the domain.
double objective_value(const ConvexProgram& program, const Vec& x);

/// Largest violation over inequalities, bounds and equalities.
double primal_residual(const ConvexProgram& program, const Vec& x);

/// Largest relative mismatch between analytic and central-difference
/// gradients of every term at x.
double derivative_check(const ConvexProgram& program, const Vec& x,
                        double step = 1e-6);

/// min ||M y - v|| subject to y >= 0 (Lawson-Hanson active set).
Vec nnls(const Mat& m, const Vec& v, int max_iter = 0);

}  // namespace wfl
