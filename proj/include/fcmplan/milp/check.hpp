// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fcmplan/milp/model.hpp"

namespace fcmplan::milp {

struct Violation {
  enum class Kind { kBound, kConstraint, kIntegrality };
  Kind kind;
  int index;         // variable or constraint index
  std::string name;  // offending variable/constraint name
  double amount;     // magnitude by which the requirement is missed
};

// Lists every violated bound, constraint, and integrality requirement at
// the given point; empty result means feasible within tol.
inline std::vector<Violation> check_solution(const Model& model, std::span<const double> x,
                                             double tol = kFeasTol) {
  std::vector<Violation> out;
  for (int j = 0; j < model.n_vars(); ++j) {
    const auto& v = model.var(j);
    const double val = x[static_cast<std::size_t>(j)];
    if (val < v.lb - tol) out.push_back({Violation::Kind::kBound, j, v.name, v.lb - val});
    if (val > v.ub + tol) out.push_back({Violation::Kind::kBound, j, v.name, val - v.ub});
    if (v.is_integral()) {
      const double frac = std::abs(val - std::round(val));
      if (frac > kIntTol) out.push_back({Violation::Kind::kIntegrality, j, v.name, frac});
    }
  }
  for (int i = 0; i < model.n_cons(); ++i) {
    const auto& c = model.con(i);
    double lhs = 0.0, comp = 0.0;  // compensated sum; rows mix unit and scaled-cost magnitudes
    for (const auto& t : c.terms) {
      const double y = t.coef * x[static_cast<std::size_t>(t.var)] - comp;
      const double s = lhs + y;
      comp = (s - lhs) - y;
      lhs = s;
    }
    double miss = 0.0;
    switch (c.sense) {
      case Sense::kLe: miss = lhs - c.rhs; break;
      case Sense::kGe: miss = c.rhs - lhs; break;
      case Sense::kEq: miss = std::abs(lhs - c.rhs); break;
    }
    if (miss > tol) out.push_back({Violation::Kind::kConstraint, i, c.name, miss});
  }
  return out;
}

}  // namespace fcmplan::milp
