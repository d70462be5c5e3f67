// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fcmplan/error.hpp"
#include "fcmplan/json_util.hpp"

namespace fcmplan {

// Energy not served for one node: (1 - u) * load * T, in kWh.
inline double ens(bool stabilized, double load_kw, double duration_hours) {
  return stabilized ? 0.0 : load_kw * duration_hours;
}

struct CvarResult {
  double cvar = 0.0;
  double zeta = 0.0;  // VaR threshold attaining the minimum
};

// Discrete CVaR by exact minimization of zeta + E[(c - zeta)^+]/(1-alpha)
// over the candidate thresholds: the minimum of this piecewise-linear
// function is attained at one of the cost atoms, so every atom is
// evaluated and ties resolve to the smallest zeta. Handles weighted
// distributions; sorting-based tail averaging would not.
inline CvarResult cvar_discrete(std::span<const double> costs, std::span<const double> probs,
                                double alpha) {
  if (costs.size() != probs.size()) {
    throw Error(ErrorCode::kShape, "costs and probs must have equal length");
  }
  if (costs.empty()) throw Error(ErrorCode::kDomain, "empty cost vector");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::kDomain, "alpha must be in [0,1)");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw Error(ErrorCode::kDomain, "probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kDomain, "probabilities must sum to 1");

  std::vector<double> candidates(costs.begin(), costs.end());
  std::sort(candidates.begin(), candidates.end());
  CvarResult best;
  bool have = false;
  for (double zeta : candidates) {
    double tail = 0.0;
    for (std::size_t s = 0; s < costs.size(); ++s) {
      tail += probs[s] * std::max(costs[s] - zeta, 0.0);
    }
    const double value = zeta + tail / (1.0 - alpha);
    if (!have || value < best.cvar) {
      best = {value, zeta};
      have = true;
    }
  }
  return best;
}

inline CvarResult cvar_discrete(std::span<const double> costs, double alpha) {
  std::vector<double> probs(costs.size(), 1.0 / static_cast<double>(costs.size()));
  return cvar_discrete(costs, probs, alpha);
}

// One report row per scenario.
struct ScenarioOutcome {
  int scenario_id = 0;
  double q_cost = 0.0;                       // recourse cost Q_s, currency
  std::map<std::string, double> ens_by_node; // kWh per affected node
  double ens_total = 0.0;                    // kWh
  double residual_kwh = 0.0;                 // tracking residual unmet energy
};

struct RiskReport {
  double alpha = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  int scenario_count = 0;
  std::vector<ScenarioOutcome> per_scenario;
  double expected_cost = 0.0;
  double var_threshold = 0.0;  // zeta*
  double cvar = 0.0;
  double expected_ens = 0.0;
  double expected_residual_kwh = 0.0;
};

// Aggregates per-scenario rows into report totals. `reference_cvar`,
// when finite, is the planner's extensive-form CVaR term; a mismatch
// beyond 1e-7 signals an internal inconsistency and is rejected loudly.
inline RiskReport build_risk_report(std::vector<ScenarioOutcome> rows,
                                    std::span<const double> probs, double alpha, double lambda,
                                    std::uint64_t seed,
                                    double reference_cvar = std::numeric_limits<double>::quiet_NaN()) {
  if (rows.size() != probs.size()) {
    throw Error(ErrorCode::kShape, "scenario outcome and probability counts disagree");
  }
  RiskReport report;
  report.alpha = alpha;
  report.lambda = lambda;
  report.seed = seed;
  report.scenario_count = static_cast<int>(rows.size());
  std::vector<double> costs;
  costs.reserve(rows.size());
  for (std::size_t s = 0; s < rows.size(); ++s) {
    costs.push_back(rows[s].q_cost);
    report.expected_cost += probs[s] * rows[s].q_cost;
    report.expected_ens += probs[s] * rows[s].ens_total;
    report.expected_residual_kwh += probs[s] * rows[s].residual_kwh;
  }
  const CvarResult cv = cvar_discrete(costs, probs, alpha);
  report.cvar = cv.cvar;
  report.var_threshold = cv.zeta;
  report.per_scenario = std::move(rows);
  if (std::isfinite(reference_cvar) && std::abs(reference_cvar - report.cvar) > 1e-7) {
    throw Error(ErrorCode::kValidation,
                "extensive-form CVaR " + std::to_string(reference_cvar) +
                    " disagrees with cvar_discrete " + std::to_string(report.cvar));
  }
  return report;
}

inline Json risk_report_to_json(const RiskReport& r) {
  Json per = Json::array();
  for (const auto& row : r.per_scenario) {
    Json ens_by_node = Json::object();
    for (const auto& [node, kwh] : row.ens_by_node) ens_by_node[node] = kwh;
    per.push_back({{"id", row.scenario_id},
                   {"q", row.q_cost},
                   {"ens_by_node", ens_by_node},
                   {"ens_total", row.ens_total},
                   {"residual_kwh", row.residual_kwh}});
  }
  return Json{{"alpha", r.alpha},
              {"lambda", r.lambda},
              {"seed", r.seed},
              {"scenario_count", r.scenario_count},
              {"per_scenario", per},
              {"totals",
               {{"expected_cost", r.expected_cost},
                {"var_threshold", r.var_threshold},
                {"cvar", r.cvar},
                {"expected_ens", r.expected_ens},
                {"expected_residual_kwh", r.expected_residual_kwh}}}};
}

// Flat plot data, one row per scenario.
inline std::string risk_report_to_csv(const RiskReport& r) {
  std::ostringstream out;
  out << "scenario_id,q_cost,ens_total_kwh,residual_kwh\n";
  out.precision(17);
  for (const auto& row : r.per_scenario) {
    out << row.scenario_id << "," << row.q_cost << "," << row.ens_total << ","
        << row.residual_kwh << "\n";
  }
  return out.str();
}

}  // namespace fcmplan
