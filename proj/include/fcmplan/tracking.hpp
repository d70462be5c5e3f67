// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fcmplan/instance.hpp"
#include "fcmplan/scenario.hpp"
#include "fcmplan/stage2.hpp"

namespace fcmplan {

struct NodeTracking {
  std::string node;
  std::vector<double> required_kw;   // shock profile echo (signed)
  std::vector<double> delivered_kw;  // total delivered (signed; + injection, - absorption)
  std::map<std::string, std::vector<double>> delivered_by_category;  // category name -> kW
  std::map<std::string, std::vector<double>> soc_kwh;  // storage categories, trace incl. t=0
  double residual_unmet_kwh = 0.0;   // energy the dispatch could not follow
  double overshoot_kwh = 0.0;        // delivery forced past the requirement by ramp-down limits
};

struct TrackingResult {
  int scenario_id = 0;
  std::vector<NodeTracking> nodes;
  std::vector<std::string> violations;  // empty by construction; populated by the self-check
  double residual_total_kwh = 0.0;
};

namespace detail_tracking {

// Per-category aggregate of the units dispatched to one node.
struct CatState {
  FcmCategory category;
  double p_max = 0.0;
  double e_max = 0.0;
  double r_max = 0.0;
  double eta_ch = 1.0;
  double eta_dis = 1.0;
  bool storage = false;
  double soc = 0.0;
  double p_prev = 0.0;
};

// Largest sustainable |power| within cap such that this step's energy
// plus the energy spent while ramping back to zero at r_max stays within
// budget. energy_per_kw = dt/eta_dis for discharge, dt*eta_ch for
// charge. Guarantees the ramp limit never collides with an empty (or
// full) store mid-delivery.
inline double max_sustainable_power(double cap, double ramp, double energy_per_kw, double budget) {
  if (cap <= 0.0 || budget <= 0.0) return 0.0;
  auto need = [&](double p) {
    double total = p;
    double q = p - ramp;
    while (q > 0.0) {
      total += q;
      q -= ramp;
    }
    return total * energy_per_kw;
  };
  if (need(cap) <= budget) return cap;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (need(mid) <= budget) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace detail_tracking

// Greedy time-domain tracking of the shock profile by the dispatched
// units. Units aggregate per category into (P_max, E_max, R_max, eta)
// blocks; storage efficiencies take the most conservative value among
// dispatched types. Each step allocates the required deviation across
// categories in a fixed priority order (fast generation, demand
// response, then storage) subject to power, per-category ramp, and SoC
// limits; storage follows
//   SoC_{t+1} = SoC_t + (eta_ch * p_ch - p_dis / eta_dis) * dt
// within [0, E_max], starting from initial_soc_fraction * E_max.
// Non-storage categories only inject; absorption of load drops is
// storage charging. Shortcoming shows up as residual energy, never as a
// failure.
inline TrackingResult simulate_tracking(const DispatchDecision& decision,
                                        const DemandShockScenario& scen, const Instance& inst) {
  using detail_tracking::CatState;
  TrackingResult result;
  result.scenario_id = scen.id;
  const double dt_h = inst.time_step_minutes / 60.0;

  for (const auto& shock : scen.shocks) {
    NodeTracking nt;
    nt.node = shock.node;
    nt.required_kw = shock.ramp_profile;

    // Aggregate dispatched units by category, priority order.
    const FcmCategory priority[] = {FcmCategory::kFastGen, FcmCategory::kDemandResponse,
                                    FcmCategory::kBess, FcmCategory::kPsh};
    std::vector<CatState> cats;
    for (FcmCategory cat : priority) {
      CatState cs;
      cs.category = cat;
      cs.storage = is_storage(cat);
      bool any = false;
      for (const auto& type : inst.fcm_types) {
        if (type.category != cat) continue;
        const int units = decision.units_to(shock.node, type.id);
        if (units <= 0) continue;
        cs.p_max += units * type.unit_power_rating;
        cs.e_max += units * type.unit_energy_rating;
        cs.r_max += units * type.unit_ramp_limit;
        if (!any) {
          cs.eta_ch = type.eta_ch;
          cs.eta_dis = type.eta_dis;
        } else {
          cs.eta_ch = std::min(cs.eta_ch, type.eta_ch);
          cs.eta_dis = std::min(cs.eta_dis, type.eta_dis);
        }
        any = true;
      }
      if (!any) continue;
      cs.soc = cs.storage ? inst.initial_soc_fraction * cs.e_max : 0.0;
      cats.push_back(cs);
    }
    for (const auto& cs : cats) {
      nt.delivered_by_category[to_string(cs.category)] = {};
      if (cs.storage) nt.soc_kwh[to_string(cs.category)] = {cs.soc};
    }

    for (std::size_t t = 0; t < shock.ramp_profile.size(); ++t) {
      const double required = shock.ramp_profile[t];

      // Feasible power interval per category.
      std::vector<double> lo(cats.size()), hi(cats.size());
      for (std::size_t c = 0; c < cats.size(); ++c) {
        const CatState& cs = cats[c];
        double l = cs.storage ? -cs.p_max : 0.0;
        double h = cs.p_max;
        l = std::max(l, cs.p_prev - cs.r_max);
        h = std::min(h, cs.p_prev + cs.r_max);
        if (cs.storage) {
          h = std::min(h, detail_tracking::max_sustainable_power(h, cs.r_max, dt_h / cs.eta_dis, cs.soc));
          l = std::max(l, -detail_tracking::max_sustainable_power(-l, cs.r_max, dt_h * cs.eta_ch,
                                                                  cs.e_max - cs.soc));
        }
        if (h < l) h = l;  // ramp floor dominates; sustainable caps keep this within SoC bounds
        lo[c] = l;
        hi[c] = h;
      }
      double lo_sum = 0.0, hi_sum = 0.0;
      for (std::size_t c = 0; c < cats.size(); ++c) {
        lo_sum += lo[c];
        hi_sum += hi[c];
      }
      const double target = std::clamp(required, lo_sum, hi_sum);

      // Waterfall: everyone at the floor, then fill by priority.
      double pool = target - lo_sum;
      double delivered = 0.0;
      for (std::size_t c = 0; c < cats.size(); ++c) {
        CatState& cs = cats[c];
        const double add = std::clamp(pool, 0.0, hi[c] - lo[c]);
        const double p = lo[c] + add;
        pool -= add;
        double p_final = p;
        if (cs.storage) {
          // Nudge the boundary ulps out so the stored trace is the raw
          // Eq. (10) recursion and still lands inside [0, E_max].
          auto next_soc = [&](double power) {
            const double p_dis = std::max(power, 0.0);
            const double p_ch = std::max(-power, 0.0);
            return cs.soc + (cs.eta_ch * p_ch - p_dis / cs.eta_dis) * dt_h;
          };
          for (int guard = 0; guard < 128 && p_final > 0.0 && next_soc(p_final) < 0.0; ++guard) {
            p_final = std::nextafter(p_final, 0.0);
          }
          for (int guard = 0; guard < 128 && p_final < 0.0 && next_soc(p_final) > cs.e_max; ++guard) {
            p_final = std::nextafter(p_final, 0.0);
          }
          cs.soc = next_soc(p_final);
          nt.soc_kwh[to_string(cs.category)].push_back(cs.soc);
        }
        nt.delivered_by_category[to_string(cs.category)].push_back(p_final);
        cs.p_prev = p_final;
        delivered += p_final;
      }
      nt.delivered_kw.push_back(delivered);

      if (required >= 0.0) {
        nt.residual_unmet_kwh += std::max(required - delivered, 0.0) * dt_h;
        nt.overshoot_kwh += std::max(delivered - required, 0.0) * dt_h;
      } else {
        nt.residual_unmet_kwh += std::max(delivered - required, 0.0) * dt_h;
        nt.overshoot_kwh += std::max(required - delivered, 0.0) * dt_h;
      }
    }

    // Self-check of the published dynamics invariants.
    for (const auto& cs : cats) {
      const auto& p = nt.delivered_by_category[to_string(cs.category)];
      double prev = 0.0;
      for (double v : p) {
        if (std::abs(v - prev) > cs.r_max + 1e-9) {
          result.violations.push_back(nt.node + "/" + to_string(cs.category) + ": ramp limit exceeded");
        }
        prev = v;
      }
      if (cs.storage) {
        for (double soc : nt.soc_kwh[to_string(cs.category)]) {
          if (soc < -1e-9 || soc > cs.e_max + 1e-9) {
            result.violations.push_back(nt.node + "/" + to_string(cs.category) + ": SoC out of range");
          }
        }
      }
    }
    result.residual_total_kwh += nt.residual_unmet_kwh;
    result.nodes.push_back(std::move(nt));
  }
  return result;
}

// Residual unmet energy per node, the ENS surrogate fed to risk metrics.
inline std::map<std::string, double> residual_to_metrics(const TrackingResult& tr) {
  std::map<std::string, double> out;
  for (const auto& nt : tr.nodes) out[nt.node] = nt.residual_unmet_kwh;
  return out;
}

}  // namespace fcmplan
