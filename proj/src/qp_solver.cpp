// Copyright 2026 The polycbf Authors
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

#include "polycbf/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polycbf
{

namespace
{

constexpr double kFeasibilityTol = 1e-9;
constexpr double kZeroRowNorm = 1e-14;
constexpr double kDetTol = 1e-12;

struct NormalizedConstraint
{
  Vec2 a = Vec2::Zero();
  double b = 0.0;
  double scale = 0.0;  // original |a|; zero for an empty row
};

std::vector<NormalizedConstraint> normalize(const std::vector<LinearConstraint> & constraints)
{
  std::vector<NormalizedConstraint> out;
  out.reserve(constraints.size());
  for (const auto & c : constraints) {
    const double n = c.a.norm();
    if (n < kZeroRowNorm) {
      out.push_back({Vec2::Zero(), c.b, 0.0});
    } else {
      out.push_back({c.a / n, c.b / n, n});
    }
  }
  return out;
}

bool feasible(const std::vector<NormalizedConstraint> & cs, const Vec2 & u)
{
  for (const auto & c : cs) {
    if (c.a.dot(u) - c.b < -kFeasibilityTol) {
      return false;
    }
  }
  return true;
}

double weighted(const Vec2 & w, const Vec2 & d) { return d.dot(w.cwiseProduct(d)); }

}  // namespace

QpProblem make_qp(
  const ControlAction & nominal, const FilterParams & filter,
  const std::vector<CbfConstraintRow> & rows)
{
  QpProblem qp;
  qp.nominal = nominal;
  qp.weights = filter.weights;
  qp.lower = filter.u_min;
  qp.upper = filter.u_max;
  qp.rows.reserve(rows.size());
  for (const auto & r : rows) {
    qp.rows.push_back({r.a, r.b});
  }
  return qp;
}

std::vector<LinearConstraint> stacked_constraints(const QpProblem & problem)
{
  std::vector<LinearConstraint> cs = problem.rows;
  cs.push_back({Vec2(1.0, 0.0), problem.lower.accel});
  cs.push_back({Vec2(-1.0, 0.0), -problem.upper.accel});
  cs.push_back({Vec2(0.0, 1.0), problem.lower.steer_rate});
  cs.push_back({Vec2(0.0, -1.0), -problem.upper.steer_rate});
  return cs;
}

double qp_objective(const QpProblem & problem, const ControlAction & u)
{
  return weighted(problem.weights, u.as_vector() - problem.nominal.as_vector());
}

double kkt_residual(
  const QpProblem & problem, const ControlAction & u, const std::vector<double> & multipliers)
{
  const auto cs = stacked_constraints(problem);
  if (multipliers.size() != cs.size()) {
    throw std::invalid_argument("multiplier count does not match constraint count");
  }
  const Vec2 uv = u.as_vector();
  Vec2 stationarity = 2.0 * problem.weights.cwiseProduct(uv - problem.nominal.as_vector());
  double residual = 0.0;
  for (std::size_t m = 0; m < cs.size(); ++m) {
    stationarity -= multipliers[m] * cs[m].a;
    const double n = std::max(cs[m].a.norm(), kZeroRowNorm);
    const double slack = (cs[m].a.dot(uv) - cs[m].b) / n;
    residual = std::max(residual, std::max(0.0, -slack));
    residual = std::max(residual, std::max(0.0, -multipliers[m] * n));
    residual = std::max(residual, std::abs(multipliers[m] * n * slack));
  }
  return std::max(residual, stationarity.lpNorm<Eigen::Infinity>());
}

QpSolution solve_qp(const QpProblem & problem)
{
  const auto raw = stacked_constraints(problem);
  const auto cs = normalize(raw);
  const int m_total = static_cast<int>(cs.size());
  const Vec2 & w = problem.weights;
  const Vec2 w_inv = w.cwiseInverse();
  const Vec2 u_nom = problem.nominal.as_vector();

  QpSolution sol;
  sol.status = QpStatus::kInfeasible;
  sol.multipliers.assign(m_total, 0.0);

  // An empty row reads 0 >= b and does not depend on u.
  for (const auto & c : cs) {
    if (c.scale == 0.0 && c.b > kFeasibilityTol) {
      sol.u = ControlAction{problem.lower.accel, 0.0};
      sol.objective = std::numeric_limits<double>::infinity();
      sol.kkt_residual = std::numeric_limits<double>::infinity();
      return sol;
    }
  }

  double best_obj = std::numeric_limits<double>::infinity();
  Vec2 best_u = u_nom;
  std::vector<int> best_set;
  std::vector<double> best_mu;

  auto consider = [&](const Vec2 & u, std::vector<int> set, std::vector<double> mu) {
    if (!u.allFinite() || !feasible(cs, u)) {
      return;
    }
    const double obj = weighted(w, u - u_nom);
    // Strict improvement keeps the earliest (smallest, lexicographic) active set on ties.
    if (!std::isfinite(best_obj) || obj < best_obj - 1e-12 * std::max(1.0, best_obj)) {
      best_obj = obj;
      best_u = u;
      best_set = std::move(set);
      best_mu = std::move(mu);
    }
  };

  // No early exit for a feasible nominal: every candidate is enumerated, and
  // strict improvement keeps u_nom exactly when it is already optimal.
  consider(u_nom, {}, {});

  for (int m = 0; m < m_total; ++m) {
    const auto & c = cs[m];
    if (c.scale == 0.0) {
      continue;
    }
    const double gap = c.b - c.a.dot(u_nom);
    if (gap <= 0.0) {
      continue;  // multiplier would be negative
    }
    const double denom = c.a.dot(w_inv.cwiseProduct(c.a));
    const Vec2 u = u_nom + (gap / denom) * w_inv.cwiseProduct(c.a);
    consider(u, {m}, {2.0 * gap / denom});
  }

  for (int m = 0; m < m_total; ++m) {
    if (cs[m].scale == 0.0) {
      continue;
    }
    for (int n = m + 1; n < m_total; ++n) {
      if (cs[n].scale == 0.0) {
        continue;
      }
      const Vec2 & a1 = cs[m].a;
      const Vec2 & a2 = cs[n].a;
      const double det = cross2(a1, a2);
      if (std::abs(det) < kDetTol) {
        continue;
      }
      // Rows a1^T, a2^T: solve for the vertex.
      const Vec2 u(
        (cs[m].b * a2.y() - cs[n].b * a1.y()) / det, (a1.x() * cs[n].b - a2.x() * cs[m].b) / det);
      // Columns a1, a2: solve 2 W (u - u_nom) = mu1 a1 + mu2 a2.
      const Vec2 g = 2.0 * w.cwiseProduct(u - u_nom);
      const double mu1 = cross2(g, a2) / det;
      const double mu2 = cross2(a1, g) / det;
      const double tol = 1e-9 * std::max(1.0, g.lpNorm<Eigen::Infinity>());
      if (mu1 < -tol || mu2 < -tol) {
        continue;
      }
      consider(u, {m, n}, {std::max(mu1, 0.0), std::max(mu2, 0.0)});
    }
  }

  if (!std::isfinite(best_obj)) {
    sol.u = problem.nominal;
    sol.objective = std::numeric_limits<double>::infinity();
    sol.kkt_residual = std::numeric_limits<double>::infinity();
    return sol;
  }

  sol.status = QpStatus::kOptimal;
  sol.u = ControlAction::from_vector(best_u);
  sol.objective = best_obj;
  sol.active_set = best_set;
  for (std::size_t k = 0; k < best_set.size(); ++k) {
    // Convert back to the caller's (unnormalized) row scaling.
    sol.multipliers[best_set[k]] = best_mu[k] / cs[best_set[k]].scale;
  }
  sol.kkt_residual = kkt_residual(problem, sol.u, sol.multipliers);
  return sol;
}

QpSolution oracle_solve(const QpProblem & problem, double resolution)
{
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("oracle resolution must be positive");
  }
  constexpr int kCells = 200;
  const auto cs = normalize(stacked_constraints(problem));

  const Vec2 box_lo = problem.lower.as_vector();
  const Vec2 box_hi = problem.upper.as_vector();
  Vec2 lo = box_lo;
  Vec2 hi = box_hi;
  Vec2 half = 0.5 * (box_hi - box_lo);

  QpSolution sol;
  sol.status = QpStatus::kInfeasible;
  sol.u = problem.nominal;
  sol.objective = std::numeric_limits<double>::infinity();
  sol.kkt_residual = std::numeric_limits<double>::quiet_NaN();

  while (true) {
    const Vec2 cell = (hi - lo) / kCells;
    double best = sol.objective;
    Vec2 best_u = sol.u.as_vector();
    for (int i = 0; i <= kCells; ++i) {
      for (int j = 0; j <= kCells; ++j) {
        const Vec2 u(lo.x() + i * cell.x(), lo.y() + j * cell.y());
        if (!feasible(cs, u)) {
          continue;
        }
        const double obj = qp_objective(problem, ControlAction::from_vector(u));
        if (obj < best) {
          best = obj;
          best_u = u;
        }
      }
    }
    if (!std::isfinite(best)) {
      return sol;  // no feasible point on the full-box grid
    }
    sol.objective = best;
    sol.u = ControlAction::from_vector(best_u);
    sol.status = QpStatus::kOptimal;
    if (cell.maxCoeff() <= resolution) {
      break;
    }
    // Halve the window around the incumbent; a slow shrink lets the search
    // follow thin feasible regions.
    half *= 0.5;
    lo = (best_u - half).cwiseMax(box_lo);
    hi = (best_u + half).cwiseMin(box_hi);
  }
  return sol;
}

}  // namespace polycbf
