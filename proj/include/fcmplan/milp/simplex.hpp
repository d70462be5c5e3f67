// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fcmplan/error.hpp"
#include "fcmplan/milp/model.hpp"

namespace fcmplan::milp {

struct LpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;   // structural values, present when kOptimal
  double objective = 0.0;  // original-space objective incl. constant
  int iterations = 0;
};

namespace detail {

constexpr double kDualTol = 1e-9;    // reduced-cost threshold on equilibrated costs
constexpr double kPivotTol = 1e-9;   // smallest acceptable pivot magnitude
constexpr double kDegenStep = 1e-12; // step length below this counts as degenerate
constexpr int kIterCap = 50'000;     // beyond this the solve is declared stuck
constexpr int kBlandTrigger = 40;    // degenerate pivots before Bland's rule kicks in

// Power-of-two factor s with v*s in [1,2). Exact in binary floating
// point, so equilibration never perturbs the model data.
inline double pow2_scale(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  int e = 0;
  std::frexp(v, &e);  // v = f * 2^e, f in [0.5, 1)
  return std::ldexp(1.0, 1 - e);
}

// Primal simplex on the bounded-variable dense tableau, two phases with
// artificial columns. Bland's rule is engaged as the anti-cycling rule
// after a run of degenerate steps and released once progress resumes.
class Simplex {
 public:
  Simplex(const Model& model, std::span<const double> lb, std::span<const double> ub)
      : model_(model) {
    build(lb, ub);
  }

  LpSolution solve() {
    LpSolution out;
    if (need_phase1_) {
      load_phase1_costs();
      if (!iterate()) throw Error(ErrorCode::kNumerics, "phase-1 ratio test found no blocker");
      if (phase1_value() > 1e-6) {
        out.status = SolveStatus::kInfeasible;
        out.iterations = iters_;
        return out;
      }
      drive_out_artificials();
      for (int a : art_cols_) lo_[a] = up_[a] = 0.0;  // pin
    }
    load_phase2_costs();
    if (!iterate()) {
      out.status = SolveStatus::kUnbounded;
      out.iterations = iters_;
      return out;
    }
    out.status = SolveStatus::kOptimal;
    out.iterations = iters_;
    out.x.assign(static_cast<std::size_t>(nstruct_), 0.0);
    for (int j = 0; j < nstruct_; ++j) out.x[static_cast<std::size_t>(j)] = col_value(j) * colscale_[static_cast<std::size_t>(j)];
    out.objective = model_.objective_value(out.x);
    return out;
  }

 private:
  enum State : signed char { kBasicState = 0, kAtLower, kAtUpper, kFreeZero };

  double& at(int i, int j) { return tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(j)]; }
  double at(int i, int j) const { return tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_) + static_cast<std::size_t>(j)]; }

  double bound_value(int j) const {
    switch (state_[static_cast<std::size_t>(j)]) {
      case kAtLower: return lo_[static_cast<std::size_t>(j)];
      case kAtUpper: return up_[static_cast<std::size_t>(j)];
      default: return 0.0;  // free nonbasic rests at zero
    }
  }

  double col_value(int j) const {
    if (state_[static_cast<std::size_t>(j)] == kBasicState) {
      for (int i = 0; i < m_; ++i)
        if (basic_[static_cast<std::size_t>(i)] == j) return xb_[static_cast<std::size_t>(i)];
    }
    return bound_value(j);
  }

  void build(std::span<const double> lb_in, std::span<const double> ub_in) {
    m_ = model_.n_cons();
    nstruct_ = model_.n_vars();
    const int nslack = m_;

    // Row equilibration factors over structural coefficients.
    std::vector<double> rowscale(static_cast<std::size_t>(m_), 1.0);
    for (int i = 0; i < m_; ++i) {
      double mx = 0.0;
      for (const auto& t : model_.con(i).terms) mx = std::max(mx, std::abs(t.coef));
      rowscale[static_cast<std::size_t>(i)] = pow2_scale(mx);
    }
    // Column equilibration over row-scaled coefficients.
    colscale_.assign(static_cast<std::size_t>(nstruct_), 1.0);
    {
      std::vector<double> colmax(static_cast<std::size_t>(nstruct_), 0.0);
      for (int i = 0; i < m_; ++i) {
        for (const auto& t : model_.con(i).terms) {
          colmax[static_cast<std::size_t>(t.var)] =
              std::max(colmax[static_cast<std::size_t>(t.var)],
                       std::abs(t.coef) * rowscale[static_cast<std::size_t>(i)]);
        }
      }
      for (int j = 0; j < nstruct_; ++j) colscale_[static_cast<std::size_t>(j)] = pow2_scale(colmax[static_cast<std::size_t>(j)]);
    }

    // Scaled bounds; x_orig = colscale * x_scaled.
    lo_.assign(static_cast<std::size_t>(nstruct_ + nslack), 0.0);
    up_.assign(static_cast<std::size_t>(nstruct_ + nslack), 0.0);
    for (int j = 0; j < nstruct_; ++j) {
      const double s = colscale_[static_cast<std::size_t>(j)];
      lo_[static_cast<std::size_t>(j)] = lb_in[static_cast<std::size_t>(j)] / s;
      up_[static_cast<std::size_t>(j)] = ub_in[static_cast<std::size_t>(j)] / s;
    }
    for (int i = 0; i < m_; ++i) {
      const int sj = nstruct_ + i;
      switch (model_.con(i).sense) {
        case Sense::kLe: lo_[static_cast<std::size_t>(sj)] = 0.0; up_[static_cast<std::size_t>(sj)] = kInfinity; break;
        case Sense::kGe: lo_[static_cast<std::size_t>(sj)] = -kInfinity; up_[static_cast<std::size_t>(sj)] = 0.0; break;
        case Sense::kEq: lo_[static_cast<std::size_t>(sj)] = 0.0; up_[static_cast<std::size_t>(sj)] = 0.0; break;
      }
    }

    // Initial point: structural nonbasic at a finite bound (lower wins),
    // slacks basic. Rows whose slack value falls outside the slack range
    // get an artificial column carrying the residual.
    state_.assign(static_cast<std::size_t>(nstruct_ + nslack), kAtLower);
    for (int j = 0; j < nstruct_ + nslack; ++j) {
      if (std::isfinite(lo_[static_cast<std::size_t>(j)])) state_[static_cast<std::size_t>(j)] = kAtLower;
      else if (std::isfinite(up_[static_cast<std::size_t>(j)])) state_[static_cast<std::size_t>(j)] = kAtUpper;
      else state_[static_cast<std::size_t>(j)] = kFreeZero;
    }

    std::vector<double> slack_val(static_cast<std::size_t>(m_), 0.0);
    int n_art = 0;
    std::vector<int> art_row;
    for (int i = 0; i < m_; ++i) {
      const auto& con = model_.con(i);
      const double rs = rowscale[static_cast<std::size_t>(i)];
      double lhs = 0.0;
      for (const auto& t : con.terms) {
        const int j = t.var;
        lhs += t.coef * rs * colscale_[static_cast<std::size_t>(j)] * bound_value(j);
      }
      const double resid = con.rhs * rs - lhs;  // wanted slack value
      const int sj = nstruct_ + i;
      if (resid >= lo_[static_cast<std::size_t>(sj)] - 1e-11 && resid <= up_[static_cast<std::size_t>(sj)] + 1e-11) {
        slack_val[static_cast<std::size_t>(i)] = resid;
      } else {
        slack_val[static_cast<std::size_t>(i)] =
            resid < lo_[static_cast<std::size_t>(sj)] ? lo_[static_cast<std::size_t>(sj)] : up_[static_cast<std::size_t>(sj)];
        art_row.push_back(i);
        ++n_art;
      }
    }

    ncols_ = nstruct_ + nslack + n_art;
    tab_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(ncols_), 0.0);
    lo_.resize(static_cast<std::size_t>(ncols_), 0.0);
    up_.resize(static_cast<std::size_t>(ncols_), kInfinity);
    state_.resize(static_cast<std::size_t>(ncols_), kAtLower);
    basic_.assign(static_cast<std::size_t>(m_), -1);
    xb_.assign(static_cast<std::size_t>(m_), 0.0);

    for (int i = 0; i < m_; ++i) {
      const auto& con = model_.con(i);
      const double rs = rowscale[static_cast<std::size_t>(i)];
      for (const auto& t : con.terms) {
        at(i, t.var) += t.coef * rs * colscale_[static_cast<std::size_t>(t.var)];
      }
      at(i, nstruct_ + i) = 1.0;
      basic_[static_cast<std::size_t>(i)] = nstruct_ + i;
      state_[static_cast<std::size_t>(nstruct_ + i)] = kBasicState;
    }

    rhs_scaled_.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) rhs_scaled_[static_cast<std::size_t>(i)] = model_.con(i).rhs * rowscale[static_cast<std::size_t>(i)];

    // Install artificials as the basis for infeasible rows; the slack
    // moves nonbasic to the bound it was clamped at. A negative residual
    // flips the whole row so the artificial keeps coefficient +1.
    int a = 0;
    for (int r : art_row) {
      const int sj = nstruct_ + r;
      const int aj = nstruct_ + nslack + a;
      ++a;
      double lhs = 0.0;
      for (int j = 0; j < nstruct_ + nslack; ++j) {
        if (at(r, j) != 0.0 && j != sj) lhs += at(r, j) * bound_value(j);
      }
      state_[static_cast<std::size_t>(sj)] =
          slack_val[static_cast<std::size_t>(r)] == lo_[static_cast<std::size_t>(sj)] ? kAtLower : kAtUpper;
      lhs += at(r, sj) * bound_value(sj);
      double resid = rhs_scaled_[static_cast<std::size_t>(r)] - lhs;
      if (resid < 0.0) {
        for (int j = 0; j < ncols_; ++j) at(r, j) = -at(r, j);
        rhs_scaled_[static_cast<std::size_t>(r)] = -rhs_scaled_[static_cast<std::size_t>(r)];
        resid = -resid;
      }
      at(r, aj) = 1.0;
      lo_[static_cast<std::size_t>(aj)] = 0.0;
      up_[static_cast<std::size_t>(aj)] = kInfinity;
      basic_[static_cast<std::size_t>(r)] = aj;
      state_[static_cast<std::size_t>(aj)] = kBasicState;
      xb_[static_cast<std::size_t>(r)] = resid;
      art_cols_.push_back(aj);
    }
    for (int i = 0; i < m_; ++i) {
      if (basic_[static_cast<std::size_t>(i)] == nstruct_ + i) xb_[static_cast<std::size_t>(i)] = slack_val[static_cast<std::size_t>(i)];
    }
    need_phase1_ = n_art > 0;
  }

  void load_phase1_costs() {
    cost_.assign(static_cast<std::size_t>(ncols_), 0.0);
    for (int a : art_cols_) cost_[static_cast<std::size_t>(a)] = 1.0;
    rebuild_reduced_costs();
  }

  void load_phase2_costs() {
    cost_.assign(static_cast<std::size_t>(ncols_), 0.0);
    double cmax = 0.0;
    for (const auto& t : model_.objective_terms()) cmax = std::max(cmax, std::abs(t.coef) * colscale_[static_cast<std::size_t>(t.var)]);
    const double cs = pow2_scale(cmax);
    for (const auto& t : model_.objective_terms()) {
      cost_[static_cast<std::size_t>(t.var)] += t.coef * colscale_[static_cast<std::size_t>(t.var)] * cs;
    }
    rebuild_reduced_costs();
  }

  void rebuild_reduced_costs() {
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      for (int j = 0; j < ncols_; ++j) d_[static_cast<std::size_t>(j)] -= cb * at(i, j);
    }
  }

  double phase1_value() const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int b = basic_[static_cast<std::size_t>(i)];
      if (cost_[static_cast<std::size_t>(b)] != 0.0) v += xb_[static_cast<std::size_t>(i)];
    }
    return v;
  }

  // One simplex phase. Returns false when the problem is unbounded in
  // the current costs; throws kNumerics past the iteration cap.
  bool iterate() {
    for (;;) {
      if (++iters_ > kIterCap) {
        throw Error(ErrorCode::kNumerics, "simplex iteration cap exceeded (degenerate stall)");
      }
      int enter = -1, dir = 0;
      double best = kDualTol;
      for (int j = 0; j < ncols_; ++j) {
        const auto st = state_[static_cast<std::size_t>(j)];
        if (st == kBasicState) continue;
        if (lo_[static_cast<std::size_t>(j)] == up_[static_cast<std::size_t>(j)] && st != kFreeZero) continue;
        const double dj = d_[static_cast<std::size_t>(j)];
        int cand_dir = 0;
        if (st == kAtLower && dj < -kDualTol) cand_dir = +1;
        else if (st == kAtUpper && dj > kDualTol) cand_dir = -1;
        else if (st == kFreeZero && dj < -kDualTol) cand_dir = +1;
        else if (st == kFreeZero && dj > kDualTol) cand_dir = -1;
        if (cand_dir == 0) continue;
        if (bland_) { enter = j; dir = cand_dir; break; }
        if (std::abs(dj) > best) { best = std::abs(dj); enter = j; dir = cand_dir; }
      }
      if (enter == -1) return true;  // optimal for current costs

      // Ratio test: step t >= 0 moving col `enter` by dir.
      double t_best = kInfinity;
      int leave_row = -1;
      int leave_to_lower = 0;
      double best_piv = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double coef = at(i, enter);
        const double delta = dir * coef;
        if (std::abs(coef) <= kPivotTol) continue;
        const int b = basic_[static_cast<std::size_t>(i)];
        double t = kInfinity;
        int to_lower = 0;
        if (delta > 0.0) {  // basic decreases toward its lower bound
          if (!std::isfinite(lo_[static_cast<std::size_t>(b)])) continue;
          t = (xb_[static_cast<std::size_t>(i)] - lo_[static_cast<std::size_t>(b)]) / delta;
          to_lower = 1;
        } else {  // basic increases toward its upper bound
          if (!std::isfinite(up_[static_cast<std::size_t>(b)])) continue;
          t = (xb_[static_cast<std::size_t>(i)] - up_[static_cast<std::size_t>(b)]) / delta;
          to_lower = 0;
        }
        if (t < 0.0) t = 0.0;  // bound drift from accumulated roundoff
        bool better = false;
        if (t < t_best - 1e-9) {
          better = true;
        } else if (t <= t_best + 1e-9) {
          if (bland_) {
            better = leave_row == -1 || b < basic_[static_cast<std::size_t>(leave_row)];
          } else {
            better = std::abs(coef) > best_piv;
          }
        }
        if (better) {
          t_best = std::max(t, 0.0);
          leave_row = i;
          leave_to_lower = to_lower;
          best_piv = std::abs(coef);
        }
      }
      const double own_span = up_[static_cast<std::size_t>(enter)] - lo_[static_cast<std::size_t>(enter)];
      const bool own_cap = state_[static_cast<std::size_t>(enter)] != kFreeZero && std::isfinite(own_span) && own_span < t_best;

      if (own_cap) {
        // Bound flip, basis unchanged.
        for (int i = 0; i < m_; ++i) {
          xb_[static_cast<std::size_t>(i)] -= dir * own_span * at(i, enter);
        }
        state_[static_cast<std::size_t>(enter)] =
            state_[static_cast<std::size_t>(enter)] == kAtLower ? kAtUpper : kAtLower;
        track_degeneracy(own_span);
        continue;
      }
      if (leave_row == -1) return false;  // unbounded ray

      const double enter_val = bound_value(enter) + dir * t_best;
      for (int i = 0; i < m_; ++i) {
        if (i != leave_row) xb_[static_cast<std::size_t>(i)] -= dir * t_best * at(i, enter);
      }
      pivot(leave_row, enter, leave_to_lower != 0);
      xb_[static_cast<std::size_t>(leave_row)] = enter_val;
      track_degeneracy(t_best);
    }
  }

  void track_degeneracy(double step) {
    if (step <= kDegenStep) {
      if (++degen_streak_ > kBlandTrigger) bland_ = true;
    } else {
      degen_streak_ = 0;
      bland_ = false;
    }
  }

  void pivot(int r, int e, bool leaving_to_lower) {
    const int l = basic_[static_cast<std::size_t>(r)];
    const double piv = at(r, e);
    double* rowr = &tab_[static_cast<std::size_t>(r) * static_cast<std::size_t>(ncols_)];
    const double inv = 1.0 / piv;
    for (int j = 0; j < ncols_; ++j) rowr[j] *= inv;
    rowr[e] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, e);
      if (f == 0.0) continue;
      double* rowi = &tab_[static_cast<std::size_t>(i) * static_cast<std::size_t>(ncols_)];
      for (int j = 0; j < ncols_; ++j) rowi[j] -= f * rowr[j];
      rowi[e] = 0.0;
    }
    const double fd = d_[static_cast<std::size_t>(e)];
    if (fd != 0.0) {
      for (int j = 0; j < ncols_; ++j) d_[static_cast<std::size_t>(j)] -= fd * rowr[j];
      d_[static_cast<std::size_t>(e)] = 0.0;
    }
    basic_[static_cast<std::size_t>(r)] = e;
    state_[static_cast<std::size_t>(e)] = kBasicState;
    state_[static_cast<std::size_t>(l)] = leaving_to_lower ? kAtLower : kAtUpper;
    if (state_[static_cast<std::size_t>(l)] == kAtUpper && !std::isfinite(up_[static_cast<std::size_t>(l)])) {
      state_[static_cast<std::size_t>(l)] = kAtLower;  // free leaving var parks at zero
    }
    if (lo_[static_cast<std::size_t>(l)] == -kInfinity && up_[static_cast<std::size_t>(l)] == kInfinity) {
      state_[static_cast<std::size_t>(l)] = kFreeZero;
    }
  }

  // Degenerate pivots that swap zero-valued artificials for real columns
  // so phase 2 starts from a clean basis; rows with no eligible pivot are
  // redundant and keep their pinned artificial.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      const int b = basic_[static_cast<std::size_t>(i)];
      if (std::find(art_cols_.begin(), art_cols_.end(), b) == art_cols_.end()) continue;
      int target = -1;
      double best = kPivotTol;
      for (int j = 0; j < nstruct_ + m_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == kBasicState) continue;
        if (std::abs(at(i, j)) > best) { best = std::abs(at(i, j)); target = j; }
      }
      if (target == -1) continue;
      // Degenerate exchange: the artificial held ~0, so the entering
      // column keeps its bound value and the other basics are unchanged.
      const double enter_val = bound_value(target);
      pivot(i, target, true);
      xb_[static_cast<std::size_t>(i)] = enter_val;
    }
  }

  const Model& model_;
  int m_ = 0, nstruct_ = 0, ncols_ = 0;
  std::vector<double> tab_, xb_, lo_, up_, cost_, d_, rhs_scaled_, colscale_;
  std::vector<int> basic_;
  std::vector<signed char> state_;
  std::vector<int> art_cols_;
  bool need_phase1_ = false;
  bool bland_ = false;
  int degen_streak_ = 0;
  int iters_ = 0;
};

}  // namespace detail

// LP relaxation with explicit bound overrides (integrality ignored).
inline LpSolution solve_lp(const Model& model, std::span<const double> lb, std::span<const double> ub) {
  detail::Simplex s(model, lb, ub);
  return s.solve();
}

// LP relaxation using the model's own bounds.
inline LpSolution solve_lp(const Model& model) {
  std::vector<double> lb(static_cast<std::size_t>(model.n_vars()));
  std::vector<double> ub(static_cast<std::size_t>(model.n_vars()));
  for (int j = 0; j < model.n_vars(); ++j) {
    lb[static_cast<std::size_t>(j)] = model.var(j).lb;
    ub[static_cast<std::size_t>(j)] = model.var(j).ub;
  }
  return solve_lp(model, lb, ub);
}

// Shared terminal step of solve_mip and enumerate_oracle: fix the listed
// integral variables and re-solve the continuous remainder from scratch.
// Both callers funnel through this one function, so a given assignment
// maps to bit-identical objective values on either path.
inline LpSolution fix_and_solve(const Model& model, std::span<const int> int_vars,
                                std::span<const std::int64_t> values) {
  std::vector<double> lb(static_cast<std::size_t>(model.n_vars()));
  std::vector<double> ub(static_cast<std::size_t>(model.n_vars()));
  for (int j = 0; j < model.n_vars(); ++j) {
    lb[static_cast<std::size_t>(j)] = model.var(j).lb;
    ub[static_cast<std::size_t>(j)] = model.var(j).ub;
  }
  for (std::size_t k = 0; k < int_vars.size(); ++k) {
    const auto j = static_cast<std::size_t>(int_vars[k]);
    lb[j] = ub[j] = static_cast<double>(values[k]);
  }
  return solve_lp(model, lb, ub);
}

}  // namespace fcmplan::milp
