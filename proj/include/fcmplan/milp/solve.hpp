// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <queue>
#include <span>
#include <vector>

#include "fcmplan/error.hpp"
#include "fcmplan/milp/model.hpp"
#include "fcmplan/milp/simplex.hpp"

namespace fcmplan::milp {

struct MipOptions {
  double time_limit_s = 300.0;
};

struct MipSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  bool timed_out = false;  // true: best incumbent returned, optimality unproven
  std::vector<double> x;
  double objective = 0.0;
  std::int64_t nodes = 0;
  double solve_seconds = 0.0;
};

namespace detail {

// Nodes differ from the root only by branching bounds; the chain back to
// the root stores one (var, lb, ub) tightening per level.
struct BoundDelta {
  std::shared_ptr<const BoundDelta> parent;
  int var;
  double lb, ub;
};

struct BnbNode {
  double bound;  // parent LP objective; -inf at root
  std::int64_t id;
  std::shared_ptr<const BoundDelta> deltas;
};

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;                                // FIFO among ties
  }
};

inline std::vector<int> integral_vars(const Model& model) {
  std::vector<int> out;
  for (int j = 0; j < model.n_vars(); ++j) {
    if (model.var(j).is_integral()) out.push_back(j);
  }
  return out;
}

}  // namespace detail

// Exact best-first branch and bound. Branching variable: most fractional
// (ties to the lowest index). A node survives pruning while its bound is
// below incumbent + 1e-9, so alternative optima are enumerated rather
// than cut off by floating-point noise; incumbents are re-polished
// through fix_and_solve, the same terminal path enumerate_oracle uses,
// which is what makes solver-vs-oracle objective comparisons exact.
inline MipSolution solve_mip(const Model& model, const MipOptions& options = {}) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  model.validate();

  MipSolution out;
  const std::vector<int> int_vars = detail::integral_vars(model);

  std::vector<double> root_lb(static_cast<std::size_t>(model.n_vars()));
  std::vector<double> root_ub(static_cast<std::size_t>(model.n_vars()));
  for (int j = 0; j < model.n_vars(); ++j) {
    root_lb[static_cast<std::size_t>(j)] = model.var(j).lb;
    root_ub[static_cast<std::size_t>(j)] = model.var(j).ub;
  }

  // Integer variables whose rounded range is empty make the model
  // trivially infeasible before any LP runs.
  for (int j : int_vars) {
    const double lo = std::ceil(root_lb[static_cast<std::size_t>(j)] - kIntTol);
    const double hi = std::floor(root_ub[static_cast<std::size_t>(j)] + kIntTol);
    if (lo > hi) {
      out.status = SolveStatus::kInfeasible;
      out.solve_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      return out;
    }
  }

  std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>, detail::NodeOrder> open;
  std::int64_t next_id = 0;
  open.push({-kInfinity, next_id++, nullptr});

  bool have_incumbent = false;
  double best_obj = kInfinity;
  std::vector<double> best_x;

  std::vector<double> lb = root_lb, ub = root_ub;
  std::vector<std::int64_t> assignment(int_vars.size(), 0);

  while (!open.empty()) {
    if (std::chrono::duration<double>(clock::now() - t0).count() > options.time_limit_s) {
      out.timed_out = true;
      break;
    }
    const detail::BnbNode node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= best_obj + 1e-9) continue;

    lb = root_lb;
    ub = root_ub;
    for (const detail::BoundDelta* d = node.deltas.get(); d != nullptr; d = d->parent.get()) {
      lb[static_cast<std::size_t>(d->var)] = std::max(lb[static_cast<std::size_t>(d->var)], d->lb);
      ub[static_cast<std::size_t>(d->var)] = std::min(ub[static_cast<std::size_t>(d->var)], d->ub);
    }

    ++out.nodes;
    const LpSolution relax = solve_lp(model, lb, ub);
    if (relax.status == SolveStatus::kInfeasible) continue;
    if (relax.status == SolveStatus::kUnbounded) {
      out.status = SolveStatus::kUnbounded;
      out.solve_seconds = std::chrono::duration<double>(clock::now() - t0).count();
      return out;
    }
    if (have_incumbent && relax.objective >= best_obj + 1e-9) continue;

    // Most-fractional branching variable.
    int branch_var = -1;
    double branch_score = kIntTol;
    for (int j : int_vars) {
      const double v = relax.x[static_cast<std::size_t>(j)];
      const double frac = v - std::floor(v);
      const double score = std::min(frac, 1.0 - frac);
      if (score > branch_score) {
        branch_score = score;
        branch_var = j;
      }
    }

    if (branch_var == -1) {
      // Integral relaxation: snap and re-polish through the shared path.
      for (std::size_t k = 0; k < int_vars.size(); ++k) {
        assignment[k] = static_cast<std::int64_t>(std::llround(relax.x[static_cast<std::size_t>(int_vars[k])]));
      }
      LpSolution polished = int_vars.empty() ? relax : fix_and_solve(model, int_vars, assignment);
      if (polished.status != SolveStatus::kOptimal) continue;  // tolerance artifact; drop
      if (!have_incumbent || polished.objective < best_obj) {
        have_incumbent = true;
        best_obj = polished.objective;
        best_x = std::move(polished.x);
      }
      continue;
    }

    const double v = relax.x[static_cast<std::size_t>(branch_var)];
    const double fl = std::floor(v);
    auto down = std::make_shared<detail::BoundDelta>(
        detail::BoundDelta{node.deltas, branch_var, -kInfinity, fl});
    auto up_delta = std::make_shared<detail::BoundDelta>(
        detail::BoundDelta{node.deltas, branch_var, fl + 1.0, kInfinity});
    open.push({relax.objective, next_id++, down});
    open.push({relax.objective, next_id++, up_delta});
  }

  out.solve_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  if (have_incumbent) {
    out.status = SolveStatus::kOptimal;
    out.objective = best_obj;
    out.x = std::move(best_x);
  } else {
    out.status = SolveStatus::kInfeasible;
  }
  return out;
}

// Brute-force oracle: every integer assignment within bounds, continuous
// remainder solved by LP through the same fix_and_solve used by
// solve_mip incumbents. Exact optimum for models whose integer box fits
// the cap; the independent reference implementation for test suites.
inline MipSolution enumerate_oracle(const Model& model, std::int64_t cap = 1'000'000) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  model.validate();

  MipSolution out;
  const std::vector<int> int_vars = detail::integral_vars(model);

  std::vector<std::int64_t> lo(int_vars.size()), hi(int_vars.size());
  long double product = 1.0L;
  for (std::size_t k = 0; k < int_vars.size(); ++k) {
    const auto& v = model.var(int_vars[k]);
    if (!std::isfinite(v.lb) || !std::isfinite(v.ub)) {
      throw Error(ErrorCode::kCapExceeded, "enumerate_oracle requires finite integer bounds");
    }
    lo[k] = static_cast<std::int64_t>(std::ceil(v.lb - kIntTol));
    hi[k] = static_cast<std::int64_t>(std::floor(v.ub + kIntTol));
    if (lo[k] > hi[k]) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    product *= static_cast<long double>(hi[k] - lo[k] + 1);
    if (product > static_cast<long double>(cap)) {
      throw Error(ErrorCode::kCapExceeded, "integer assignment space exceeds cap");
    }
  }

  // Constraints touching only integer variables are screened in plain
  // arithmetic before any LP runs; with small integral data this rejects
  // nearly all of the assignment space cheaply.
  struct IntOnlyCon {
    std::vector<std::pair<std::size_t, double>> terms;  // (position in int_vars, coef)
    Sense sense;
    double rhs;
  };
  std::vector<IntOnlyCon> screen;
  {
    std::vector<int> pos(static_cast<std::size_t>(model.n_vars()), -1);
    for (std::size_t k = 0; k < int_vars.size(); ++k) pos[static_cast<std::size_t>(int_vars[k])] = static_cast<int>(k);
    for (int i = 0; i < model.n_cons(); ++i) {
      const auto& c = model.con(i);
      bool int_only = true;
      for (const auto& t : c.terms) int_only = int_only && pos[static_cast<std::size_t>(t.var)] >= 0;
      if (!int_only || c.terms.empty()) continue;
      IntOnlyCon ic{{}, c.sense, c.rhs};
      for (const auto& t : c.terms) ic.terms.emplace_back(static_cast<std::size_t>(pos[static_cast<std::size_t>(t.var)]), t.coef);
      screen.push_back(std::move(ic));
    }
  }

  bool have_best = false;
  double best_obj = kInfinity;
  std::vector<double> best_x;

  std::vector<std::int64_t> values = lo;
  for (;;) {
    ++out.nodes;
    bool pass = true;
    for (const auto& c : screen) {
      double lhs = 0.0;
      for (const auto& [k, coef] : c.terms) lhs += coef * static_cast<double>(values[k]);
      const double slack = 1e-9 * std::max(1.0, std::abs(c.rhs));
      if (c.sense == Sense::kLe && lhs > c.rhs + slack) pass = false;
      if (c.sense == Sense::kGe && lhs < c.rhs - slack) pass = false;
      if (c.sense == Sense::kEq && std::abs(lhs - c.rhs) > slack) pass = false;
      if (!pass) break;
    }
    if (pass) {
      const LpSolution sol = fix_and_solve(model, int_vars, values);
      if (sol.status == SolveStatus::kOptimal && (!have_best || sol.objective < best_obj)) {
        have_best = true;
        best_obj = sol.objective;
        best_x = sol.x;
      }
    }
    // Odometer increment, lexicographic from the last position.
    std::size_t k = int_vars.size();
    while (k > 0) {
      --k;
      if (values[k] < hi[k]) {
        ++values[k];
        for (std::size_t j = k + 1; j < values.size(); ++j) values[j] = lo[j];
        break;
      }
      if (k == 0) {
        k = int_vars.size() + 1;  // exhausted
        break;
      }
    }
    if (int_vars.empty() || k > int_vars.size()) break;
  }

  out.solve_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  if (have_best) {
    out.status = SolveStatus::kOptimal;
    out.objective = best_obj;
    out.x = std::move(best_x);
  } else {
    out.status = SolveStatus::kInfeasible;
  }
  return out;
}

}  // namespace fcmplan::milp
