// SPDX-FileCopyrightText: 2026 fcmplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// Test-side reference implementations. Everything here is deliberately
// independent of the solver code paths it is used to check: vertices by
// exhaustive hyperplane enumeration, CVaR by sorted tail averaging,
// shortest paths by Dijkstra.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "fcmplan/milp/model.hpp"
#include "fcmplan/rng.hpp"

namespace testing_oracles {

// Minimum objective over all vertices of the (bounded) feasible region:
// choose every n-subset of hyperplanes from {constraint rows as
// equalities} + {each finite variable bound}, solve the square system by
// Gaussian elimination, keep feasible solutions. Requires finite bounds
// on every variable so the feasible set is a polytope.
inline std::optional<double> lp_vertex_oracle(const fcmplan::milp::Model& m) {
  using fcmplan::milp::Sense;
  const int n = m.n_vars();
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (int i = 0; i < m.n_cons(); ++i) {
    Plane p{std::vector<double>(static_cast<std::size_t>(n), 0.0), m.con(i).rhs};
    for (const auto& t : m.con(i).terms) p.a[static_cast<std::size_t>(t.var)] += t.coef;
    planes.push_back(std::move(p));
  }
  for (int j = 0; j < n; ++j) {
    Plane lo{std::vector<double>(static_cast<std::size_t>(n), 0.0), m.var(j).lb};
    lo.a[static_cast<std::size_t>(j)] = 1.0;
    planes.push_back(std::move(lo));
    Plane up{std::vector<double>(static_cast<std::size_t>(n), 0.0), m.var(j).ub};
    up.a[static_cast<std::size_t>(j)] = 1.0;
    planes.push_back(std::move(up));
  }

  const int p = static_cast<int>(planes.size());
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::iota(pick.begin(), pick.end(), 0);
  std::optional<double> best;

  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j) {
      if (x[static_cast<std::size_t>(j)] < m.var(j).lb - 1e-7) return false;
      if (x[static_cast<std::size_t>(j)] > m.var(j).ub + 1e-7) return false;
    }
    for (int i = 0; i < m.n_cons(); ++i) {
      double lhs = 0.0;
      for (const auto& t : m.con(i).terms) lhs += t.coef * x[static_cast<std::size_t>(t.var)];
      const auto& c = m.con(i);
      if (c.sense == Sense::kLe && lhs > c.rhs + 1e-7) return false;
      if (c.sense == Sense::kGe && lhs < c.rhs - 1e-7) return false;
      if (c.sense == Sense::kEq && std::abs(lhs - c.rhs) > 1e-7) return false;
    }
    return true;
  };

  for (;;) {
    // Solve the picked square system.
    std::vector<std::vector<double>> aug(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      const auto& pl = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
      for (int c = 0; c < n; ++c) aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = pl.a[static_cast<std::size_t>(c)];
      aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] = pl.b;
    }
    bool singular = false;
    for (int c = 0; c < n && !singular; ++c) {
      int piv = -1;
      double mag = 1e-9;
      for (int r = c; r < n; ++r) {
        if (std::abs(aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) > mag) {
          mag = std::abs(aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
          piv = r;
        }
      }
      if (piv == -1) {
        singular = true;
        break;
      }
      std::swap(aug[static_cast<std::size_t>(c)], aug[static_cast<std::size_t>(piv)]);
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / aug[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        if (f == 0.0) continue;
        for (int k = c; k <= n; ++k) {
          aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * aug[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
        }
      }
    }
    if (!singular) {
      std::vector<double> x(static_cast<std::size_t>(n));
      bool finite = true;
      for (int j = 0; j < n; ++j) {
        x[static_cast<std::size_t>(j)] = aug[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)] / aug[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        finite = finite && std::isfinite(x[static_cast<std::size_t>(j)]);
      }
      if (finite && feasible(x)) {
        const double obj = m.objective_value(x);
        if (!best || obj < *best) best = obj;
      }
    }
    // Next combination.
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == p - n + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

// Discrete CVaR for the equiprobable case by direct tail averaging: sort
// costs descending, average the worst (1-alpha) probability mass with a
// fractional share of the boundary atom.
inline double cvar_tail_oracle(std::vector<double> costs, double alpha) {
  std::sort(costs.begin(), costs.end(), std::greater<>());
  const double s = static_cast<double>(costs.size());
  double mass = (1.0 - alpha);  // tail probability to cover
  double acc = 0.0;
  for (double c : costs) {
    const double take = std::min(mass, 1.0 / s);
    acc += take * c;
    mass -= take;
    if (mass <= 1e-15) break;
  }
  return acc / (1.0 - alpha);
}

// Single-source shortest paths over an undirected weighted graph.
inline std::vector<double> dijkstra_oracle(int n_nodes,
                                           const std::vector<std::tuple<int, int, double>>& edges,
                                           int source) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n_nodes));
  for (const auto& [u, v, w] : edges) {
    adj[static_cast<std::size_t>(u)].emplace_back(v, w);
    adj[static_cast<std::size_t>(v)].emplace_back(u, w);
  }
  std::vector<double> dist(static_cast<std::size_t>(n_nodes), std::numeric_limits<double>::infinity());
  dist[static_cast<std::size_t>(source)] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (d + w < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = d + w;
        pq.push({dist[static_cast<std::size_t>(v)], v});
      }
    }
  }
  return dist;
}

}  // namespace testing_oracles
