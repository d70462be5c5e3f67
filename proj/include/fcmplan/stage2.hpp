// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fcmplan/instance.hpp"
#include "fcmplan/milp/check.hpp"
#include "fcmplan/milp/model.hpp"
#include "fcmplan/milp/solve.hpp"
#include "fcmplan/scenario.hpp"

namespace fcmplan {

// Units available per (hub, type) after Stage I.
struct StagedUnits {
  std::map<std::string, std::map<std::string, int>> units;  // hub -> type -> count

  int at(const std::string& hub, const std::string& type) const {
    auto h = units.find(hub);
    if (h == units.end()) return 0;
    auto t = h->second.find(type);
    return t == h->second.end() ? 0 : t->second;
  }
};

// Variable handles for one scenario's dispatch block inside a model.
struct Stage2Index {
  struct XVar {
    std::string node, hub, type;
    int requirement = 0;  // d^xi for this (node, type)
    int var = -1;
  };
  std::vector<XVar> x;
  std::map<std::pair<std::string, std::string>, int> w;  // (node, hub) -> serve indicator
  std::map<std::string, int> u;                          // node -> stabilization indicator
  std::map<std::string, int> t;                          // node -> response time, minutes
  std::vector<milp::LinTerm> objective_terms;            // scaled-cost expression of Q_s
  double objective_constant = 0.0;                       // scaled; also the all-shortfall value
};

// How the dispatch block sees Stage-I supply at a (hub, type): either a
// fixed staged count, or a list of first-stage shipment variables whose
// sum is the supply (extensive form).
struct SupplySource {
  std::function<int(const std::string& hub, const std::string& type)> fixed;
  std::function<std::vector<milp::LinTerm>(const std::string& hub, const std::string& type)> terms;
};

namespace detail_stage2 {

inline double big_m_response(const Instance& inst, const DistanceMatrix& dm, const LoadNode& node,
                             const NodeShock& shock) {
  double mt = 0.0;
  for (const auto& hub : inst.hubs) {
    for (const auto& [type_id, req] : shock.requirement) {
      if (req <= 0) continue;
      const FcmType* type = inst.find_type(type_id);
      mt = std::max(mt, activation_minutes(*type, dm.km(hub.bus, node.bus), inst.risk.travel_speed));
    }
  }
  return mt;
}

}  // namespace detail_stage2

// Appends one scenario's dispatch block to `model`.
//
// Variables per affected node i: integer x[i,d,l] in [0, d^xi] for each
// hub d and required type l; binary w[i,d] marking "hub d serves i";
// binary u[i]; continuous t[i] (minutes). Constraints:
//   supply       sum_i x[i,d,l]            <= staged(d,l)        per (d,l)
//   demand cap   sum_d x[i,d,l]            <= d^xi[i,l]          per (i,l)
//   serve link   sum_l x[i,d,l]            <= U_i * w[i,d]       per (i,d), U_i = sum_l d^xi
//   timing       a[d,i,l] * w[i,d] - t[i]  <= 0                  per (i,d,l)
//   coverage     d^xi[i,l] * u[i] - sum_d x[i,d,l] <= 0          per (i,l)
//   window       t[i] + M_t * u[i]         <= T_stab[i] + M_t    per (i)
// with a[d,i,l] the travel-plus-lead activation time, M_t its maximum
// over (d,l). Stabilization therefore requires full per-type coverage
// and response inside the window; a serving hub's response time counts
// the slowest FCM type the node requires.
//
// The scenario objective (scaled costs) is returned in the index, with
// the all-shortfall value as its constant:
//   Q_s = sum_{i,l} P[l,i] (d^xi - sum_d x) + gamma sum_i (1-u) load_i T_i
inline Stage2Index add_stage2_block(milp::Model& model, const Instance& inst,
                                    const DistanceMatrix& dm, const DemandShockScenario& scen,
                                    const SupplySource& supply, const std::string& prefix) {
  using milp::LinTerm;
  using milp::Sense;
  Stage2Index ix;

  // Variables, node by node.
  for (const auto& shock : scen.shocks) {
    const LoadNode* node = inst.find_node(shock.node);
    if (node == nullptr) throw Error(ErrorCode::kValidation, "scenario references unknown node " + shock.node);
    for (const auto& hub : inst.hubs) {
      for (const auto& type : inst.fcm_types) {
        const auto it = shock.requirement.find(type.id);
        if (it == shock.requirement.end() || it->second <= 0) continue;
        const int var = model.add_integer(
            prefix + "x_" + shock.node + "_" + hub.id + "_" + type.id, 0.0,
            static_cast<double>(it->second));
        ix.x.push_back({shock.node, hub.id, type.id, it->second, var});
      }
    }
    int u_sum = 0;
    for (const auto& [type_id, req] : shock.requirement) u_sum += std::max(req, 0);
    if (u_sum > 0) {
      for (const auto& hub : inst.hubs) {
        ix.w[{shock.node, hub.id}] = model.add_binary(prefix + "w_" + shock.node + "_" + hub.id);
      }
    }
    ix.u[shock.node] = model.add_binary(prefix + "u_" + shock.node);
    const double mt = detail_stage2::big_m_response(inst, dm, *node, shock);
    ix.t[shock.node] = model.add_continuous(prefix + "t_" + shock.node, 0.0,
                                            std::max(node->stabilize_window, mt));
  }

  // Supply coupling, per (hub, type) with at least one x variable.
  for (const auto& hub : inst.hubs) {
    for (const auto& type : inst.fcm_types) {
      std::vector<LinTerm> terms;
      for (const auto& xv : ix.x) {
        if (xv.hub == hub.id && xv.type == type.id) terms.push_back({xv.var, 1.0});
      }
      if (terms.empty()) continue;
      if (supply.fixed) {
        model.add_constraint(prefix + "supply_" + hub.id + "_" + type.id, std::move(terms),
                             Sense::kLe, static_cast<double>(supply.fixed(hub.id, type.id)));
      } else {
        for (const auto& yt : supply.terms(hub.id, type.id)) terms.push_back({yt.var, -yt.coef});
        model.add_constraint(prefix + "supply_" + hub.id + "_" + type.id, std::move(terms),
                             Sense::kLe, 0.0);
      }
    }
  }

  for (const auto& shock : scen.shocks) {
    const LoadNode* node = inst.find_node(shock.node);
    int u_total = 0;
    for (const auto& [type_id, req] : shock.requirement) u_total += std::max(req, 0);

    // Demand cap and coverage per required type.
    for (const auto& [type_id, req] : shock.requirement) {
      if (req <= 0) continue;
      std::vector<LinTerm> dispatched;
      for (const auto& xv : ix.x) {
        if (xv.node == shock.node && xv.type == type_id) dispatched.push_back({xv.var, 1.0});
      }
      model.add_constraint(prefix + "demand_" + shock.node + "_" + type_id, dispatched, Sense::kLe,
                           static_cast<double>(req));
      std::vector<LinTerm> cover = dispatched;
      for (auto& term : cover) term.coef = -1.0;
      cover.push_back({ix.u.at(shock.node), static_cast<double>(req)});
      model.add_constraint(prefix + "cover_" + shock.node + "_" + type_id, std::move(cover),
                           Sense::kLe, 0.0);
    }

    // Serve link and per-type timing, per hub.
    if (u_total > 0) {
      for (const auto& hub : inst.hubs) {
        const int w_var = ix.w.at({shock.node, hub.id});
        std::vector<LinTerm> link;
        for (const auto& xv : ix.x) {
          if (xv.node == shock.node && xv.hub == hub.id) link.push_back({xv.var, 1.0});
        }
        if (!link.empty()) {
          link.push_back({w_var, -static_cast<double>(u_total)});
          model.add_constraint(prefix + "serve_" + shock.node + "_" + hub.id, std::move(link),
                               Sense::kLe, 0.0);
        }
        for (const auto& [type_id, req] : shock.requirement) {
          if (req <= 0) continue;
          const FcmType* type = inst.find_type(type_id);
          const double a = activation_minutes(*type, dm.km(hub.bus, node->bus), inst.risk.travel_speed);
          model.add_constraint(prefix + "timing_" + shock.node + "_" + hub.id + "_" + type_id,
                               {{w_var, a}, {ix.t.at(shock.node), -1.0}}, Sense::kLe, 0.0);
        }
      }
    }

    // Stabilization window with tight big-M.
    const double mt = detail_stage2::big_m_response(inst, dm, *node, shock);
    model.add_constraint(prefix + "window_" + shock.node,
                         {{ix.t.at(shock.node), 1.0}, {ix.u.at(shock.node), mt}}, Sense::kLe,
                         node->stabilize_window + mt);

    // Objective contribution.
    const double restoration = milp::scale_cost(inst.risk.gamma * node->base_load * shock.duration);
    ix.objective_constant += restoration;
    ix.objective_terms.push_back({ix.u.at(shock.node), -restoration});
    for (const auto& [type_id, req] : shock.requirement) {
      if (req <= 0) continue;
      const double penalty = milp::scale_cost(node->penalty_of(type_id));
      ix.objective_constant += penalty * req;
    }
  }
  for (const auto& xv : ix.x) {
    const LoadNode* node = inst.find_node(xv.node);
    ix.objective_terms.push_back({xv.var, -milp::scale_cost(node->penalty_of(xv.type))});
  }
  return ix;
}

struct DispatchDecision {
  int scenario_id = 0;
  struct Shipment {
    std::string node, hub, type;
    int units = 0;
    bool operator==(const Shipment&) const = default;
  };
  std::vector<Shipment> dispatch;                          // x > 0 entries
  std::map<std::string, bool> stabilized;                  // u per affected node
  std::map<std::string, double> response_minutes;          // t per affected node
  std::map<std::string, std::set<std::string>> serving;    // node -> hubs with w = 1
  double q_cost = 0.0;            // currency
  double shortfall_cost = 0.0;    // currency
  double restoration_cost = 0.0;  // currency

  int units_to(const std::string& node, const std::string& type) const {
    int total = 0;
    for (const auto& s : dispatch)
      if (s.node == node && s.type == type) total += s.units;
    return total;
  }
};

struct Stage2Solution {
  DispatchDecision decision;
  milp::Model model;
  Stage2Index index;
  milp::MipSolution raw;
};

// Builds the standalone dispatch MILP for one scenario against fixed
// staged units. Always feasible: x = 0, u = 0 pays full shortfall.
inline std::pair<milp::Model, Stage2Index> build_stage2_model(const StagedUnits& staged,
                                                              const DemandShockScenario& scen,
                                                              const Instance& inst,
                                                              const DistanceMatrix& dm) {
  milp::Model model;
  SupplySource supply;
  supply.fixed = [&staged](const std::string& hub, const std::string& type) {
    return staged.at(hub, type);
  };
  Stage2Index ix = add_stage2_block(model, inst, dm, scen, supply, "");
  model.set_objective(ix.objective_terms, ix.objective_constant);
  return {std::move(model), std::move(ix)};
}

inline DispatchDecision extract_decision(const Instance& inst, const DemandShockScenario& scen,
                                         const Stage2Index& ix, std::span<const double> x,
                                         int scenario_id) {
  DispatchDecision d;
  d.scenario_id = scenario_id;
  double shortfall_scaled = 0.0;
  for (const auto& shock : scen.shocks) {
    const LoadNode* node = inst.find_node(shock.node);
    d.stabilized[shock.node] = x[static_cast<std::size_t>(ix.u.at(shock.node))] > 0.5;
    d.response_minutes[shock.node] = x[static_cast<std::size_t>(ix.t.at(shock.node))];
    d.serving[shock.node] = {};
    if (!d.stabilized[shock.node]) {
      d.restoration_cost +=
          milp::unscale_cost(milp::scale_cost(inst.risk.gamma * node->base_load * shock.duration));
    }
    for (const auto& [type_id, req] : shock.requirement) {
      if (req > 0) shortfall_scaled += milp::scale_cost(node->penalty_of(type_id)) * req;
    }
  }
  for (const auto& xv : ix.x) {
    const int units = static_cast<int>(std::llround(x[static_cast<std::size_t>(xv.var)]));
    const LoadNode* node = inst.find_node(xv.node);
    shortfall_scaled -= milp::scale_cost(node->penalty_of(xv.type)) * units;
    if (units > 0) d.dispatch.push_back({xv.node, xv.hub, xv.type, units});
  }
  for (const auto& [key, var] : ix.w) {
    if (x[static_cast<std::size_t>(var)] > 0.5) d.serving[key.first].insert(key.second);
  }
  d.shortfall_cost = milp::unscale_cost(shortfall_scaled);
  d.q_cost = d.shortfall_cost + d.restoration_cost;
  return d;
}

// Solves the dispatch problem and re-derives the objective from the raw
// decision values; any disagreement with the solver beyond 1e-6 is a
// kernel bug and is surfaced loudly.
inline Stage2Solution solve_stage2(const StagedUnits& staged, const DemandShockScenario& scen,
                                   const Instance& inst, const DistanceMatrix& dm,
                                   const milp::MipOptions& options = {}) {
  Stage2Solution out;
  auto [model, ix] = build_stage2_model(staged, scen, inst, dm);
  out.raw = milp::solve_mip(model, options);
  if (out.raw.status != milp::SolveStatus::kOptimal) {
    throw Error(ErrorCode::kNumerics, "stage-2 dispatch reported " +
                                          std::string(milp::to_string(out.raw.status)) +
                                          "; the model is feasible by construction");
  }
  out.decision = extract_decision(inst, scen, ix, out.raw.x, scen.id);
  const double recomputed = out.decision.q_cost;
  const double solver_obj = milp::unscale_cost(out.raw.objective);
  if (std::abs(recomputed - solver_obj) > 1e-6) {
    throw Error(ErrorCode::kNumerics, "stage-2 objective recomputation drifted: " +
                                          std::to_string(recomputed) + " vs " +
                                          std::to_string(solver_obj));
  }
  // Shortfall term is a sum of nonnegative penalty gaps.
  if (out.decision.shortfall_cost < -1e-9) {
    throw Error(ErrorCode::kNumerics, "negative shortfall term");
  }
  out.model = std::move(model);
  out.index = std::move(ix);
  return out;
}

}  // namespace fcmplan
