// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fcmplan/error.hpp"

namespace fcmplan::milp {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Feasibility / integrality tolerances used by every solver entry point.
constexpr double kFeasTol = 1e-6;
constexpr double kIntTol = 1e-6;

// Stage models multiply currency coefficients by this factor and round,
// making cost data integral so oracle-vs-solver objective comparisons are
// exact. Costs are therefore quantized to 1e-4 currency units.
constexpr double kCostScale = 1e4;

inline double scale_cost(double c) { return std::round(c * kCostScale); }
inline double unscale_cost(double c) { return c / kCostScale; }

enum class VarType { kContinuous, kInteger, kBinary };
enum class Sense { kLe, kEq, kGe };
enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kInfeasible: return "INFEASIBLE";
    case SolveStatus::kUnbounded: return "UNBOUNDED";
  }
  return "?";
}

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInfinity;
  VarType type = VarType::kContinuous;

  bool is_integral() const { return type != VarType::kContinuous; }
};

struct LinTerm {
  int var = -1;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinTerm> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

// Minimization MILP. Build once, then treat as immutable; all solver
// entry points take a const reference and own their scratch state, so
// distinct solves may run concurrently on the same model.
class Model {
 public:
  int add_variable(std::string name, double lb, double ub, VarType type) {
    vars_.push_back({std::move(name), lb, ub, type});
    return static_cast<int>(vars_.size()) - 1;
  }
  int add_continuous(std::string name, double lb, double ub) {
    return add_variable(std::move(name), lb, ub, VarType::kContinuous);
  }
  int add_integer(std::string name, double lb, double ub) {
    return add_variable(std::move(name), lb, ub, VarType::kInteger);
  }
  int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarType::kBinary); }

  void add_constraint(std::string name, std::vector<LinTerm> terms, Sense sense, double rhs) {
    cons_.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  void set_objective(std::vector<LinTerm> terms, double constant = 0.0) {
    obj_terms_ = std::move(terms);
    obj_constant_ = constant;
  }

  int n_vars() const { return static_cast<int>(vars_.size()); }
  int n_cons() const { return static_cast<int>(cons_.size()); }
  const Variable& var(int j) const { return vars_[static_cast<std::size_t>(j)]; }
  const Constraint& con(int i) const { return cons_[static_cast<std::size_t>(i)]; }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Constraint>& cons() const { return cons_; }
  const std::vector<LinTerm>& objective_terms() const { return obj_terms_; }
  double objective_constant() const { return obj_constant_; }

  // Objective evaluated with compensated summation; at scaled-cost
  // magnitudes a naive sum loses digits the acceptance comparisons need.
  double objective_value(std::span<const double> x) const {
    double sum = obj_constant_, comp = 0.0;
    for (const auto& t : obj_terms_) {
      const double y = t.coef * x[static_cast<std::size_t>(t.var)] - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
    return sum;
  }

  // Throws Error(kValidation) on malformed structure: crossed bounds,
  // dangling term references, or binaries outside [0,1].
  void validate() const {
    for (int j = 0; j < n_vars(); ++j) {
      const auto& v = vars_[static_cast<std::size_t>(j)];
      if (!(v.lb <= v.ub)) {
        throw Error(ErrorCode::kValidation,
                    "variable " + v.name + ": lower bound exceeds upper bound");
      }
      if (v.type == VarType::kBinary && (v.lb < 0.0 || v.ub > 1.0)) {
        throw Error(ErrorCode::kValidation, "binary variable " + v.name + " outside [0,1]");
      }
    }
    auto check_terms = [this](const std::vector<LinTerm>& terms, const std::string& where) {
      for (const auto& t : terms) {
        if (t.var < 0 || t.var >= n_vars()) {
          throw Error(ErrorCode::kValidation, where + ": term references undeclared variable");
        }
        if (!std::isfinite(t.coef)) {
          throw Error(ErrorCode::kValidation, where + ": non-finite coefficient");
        }
      }
    };
    for (const auto& c : cons_) {
      check_terms(c.terms, "constraint " + c.name);
      if (!std::isfinite(c.rhs)) {
        throw Error(ErrorCode::kValidation, "constraint " + c.name + ": non-finite rhs");
      }
    }
    check_terms(obj_terms_, "objective");
  }

  // Plain-text dump for debugging, in LP-file style:
  //   Minimize     obj: <coef> <var> [+ ...] [+ <constant>]
  //   Subject To   <name>: <terms> <=|=|>= <rhs>
  //   Bounds       <lb> <= <var> <= <ub>   (one line per variable)
  //   Generals / Binaries sections list integral variables by name
  //   End
  std::string to_lp_string() const {
    std::ostringstream out;
    auto term_str = [this](const std::vector<LinTerm>& terms) {
      std::ostringstream t;
      bool first = true;
      for (const auto& term : terms) {
        const double c = term.coef;
        if (first) {
          t << (c < 0 ? "- " : "");
          first = false;
        } else {
          t << (c < 0 ? " - " : " + ");
        }
        t << std::abs(c) << " " << vars_[static_cast<std::size_t>(term.var)].name;
      }
      if (first) t << "0";
      return t.str();
    };
    out << "Minimize\n obj: " << term_str(obj_terms_);
    if (obj_constant_ != 0.0) out << " + " << obj_constant_;
    out << "\nSubject To\n";
    for (const auto& c : cons_) {
      out << " " << c.name << ": " << term_str(c.terms);
      out << (c.sense == Sense::kLe ? " <= " : c.sense == Sense::kEq ? " = " : " >= ");
      out << c.rhs << "\n";
    }
    out << "Bounds\n";
    for (const auto& v : vars_) {
      out << " " << v.lb << " <= " << v.name << " <= " << v.ub << "\n";
    }
    bool have_int = false, have_bin = false;
    for (const auto& v : vars_) {
      have_int |= v.type == VarType::kInteger;
      have_bin |= v.type == VarType::kBinary;
    }
    if (have_int) {
      out << "Generals\n";
      for (const auto& v : vars_)
        if (v.type == VarType::kInteger) out << " " << v.name << "\n";
    }
    if (have_bin) {
      out << "Binaries\n";
      for (const auto& v : vars_)
        if (v.type == VarType::kBinary) out << " " << v.name << "\n";
    }
    out << "End\n";
    return out.str();
  }

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  std::vector<LinTerm> obj_terms_;
  double obj_constant_ = 0.0;
};

}  // namespace fcmplan::milp
