// Copyright 2026 the bmkp authors
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

#ifndef BMKP_EXACT_ORACLE_HPP
#define BMKP_EXACT_ORACLE_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <type_traits>
#include <vector>

#include "bmkp/model.hpp"

namespace bmkp {

struct ExactResult {
  Rat opt;
  Assignment witness;
  long nodes_explored = 0;
  bool optimal = true;  // false when the node budget ran out
};

namespace oracle_detail {

// Branch and bound over items in decreasing profit (ties by id), assigning
// each item to knapsack 0..m-1 in order or discarding it. Per-node bound:
// min over knapsacks of current profit plus the fractional greedy completion
// from the unplaced suffix. Identical capacities break symmetry by only
// opening the lowest-indexed empty knapsack.
template <typename Num>
struct Search {
  int n, m;
  std::vector<Num> profit, weight;  // in branch order
  std::vector<int> id;              // branch order -> item id
  std::vector<Num> cap;
  bool identical;
  std::vector<int> dens_order;  // density-descending item indices

  long budget;
  long nodes = 0;
  bool exhausted_budget = false;

  Num best_value{};
  bool have_best = false;
  std::vector<int> assign, best_assign;  // item -> knapsack or -1

  std::vector<Num> load, prof;
  std::vector<bool> used;

  void run() {
    assign.assign(n, -1);
    best_assign.assign(n, -1);
    load.assign(m, Num{});
    prof.assign(m, Num{});
    used.assign(n, false);
    dfs(0);
  }

  Num bound() const {
    // For each knapsack: profit reachable ignoring the other knapsacks.
    Num res{};
    bool first = true;
    for (int j = 0; j < m; ++j) {
      Num room = cap[j] - load[j];
      Num p = prof[j];
      for (int idx : dens_order) {
        if (used[idx]) continue;
        if (weight[idx] <= room) {
          room -= weight[idx];
          p += profit[idx];
        } else if (weight[idx] > Num{} && room > Num{}) {
          // fractional completion; integers round up to stay an upper bound
          if constexpr (std::is_same_v<Num, long long>) {
            __int128 num = static_cast<__int128>(profit[idx]) * room;
            p += static_cast<long long>((num + weight[idx] - 1) / weight[idx]);
          } else {
            p += profit[idx] * room / weight[idx];
          }
          room = Num{};
          break;
        }
      }
      if (first || p < res) {
        res = p;
        first = false;
      }
    }
    return res;
  }

  void record() {
    Num v = prof.empty() ? Num{} : *std::min_element(prof.begin(), prof.end());
    if (!have_best || v > best_value) {
      best_value = v;
      best_assign = assign;
      have_best = true;
    }
  }

  void dfs(int depth) {
    if (exhausted_budget) return;
    if (++nodes > budget) {
      exhausted_budget = true;
      return;
    }
    if (have_best && bound() <= best_value) return;
    if (depth == n) {
      record();
      return;
    }
    bool opened_empty = false;
    for (int j = 0; j < m; ++j) {
      bool empty = load[j] == Num{} && prof[j] == Num{};
      if (identical && empty) {
        if (opened_empty) continue;  // symmetry: only the first empty knapsack
        opened_empty = true;
      }
      if (load[j] + weight[depth] > cap[j]) continue;
      load[j] += weight[depth];
      prof[j] += profit[depth];
      used[depth] = true;
      assign[depth] = j;
      dfs(depth + 1);
      assign[depth] = -1;
      used[depth] = false;
      load[j] -= weight[depth];
      prof[j] -= profit[depth];
      if (exhausted_budget) return;
    }
    dfs(depth + 1);  // discard
  }
};

// Scales all profits/weights/capacities to a common integer grid; returns
// false when the scaled values would not fit comfortably in int64.
inline bool to_int64_grid(const Instance& inst, std::vector<long long>& p,
                          std::vector<long long>& w,
                          std::vector<long long>& cap, Int& denom_out) {
  Int denom(1);
  auto fold = [&denom](const Rat& r) {
    Int d;
    mpz_lcm(d.get_mpz_t(), denom.get_mpz_t(), r.get_den().get_mpz_t());
    denom = d;
  };
  for (const Item& it : inst.items) {
    fold(it.profit);
    fold(it.weight);
  }
  for (const Rat& b : inst.capacities) fold(b);
  const long long lim = std::numeric_limits<long long>::max() / 4096;
  auto scaled = [&](const Rat& r, long long& out) {
    Rat s = r * denom;
    if (!rat_is_integer(s) || !s.get_num().fits_slong_p()) return false;
    long v = s.get_num().get_si();
    if (v > lim / std::max<long long>(1, inst.n() + inst.m())) return false;
    out = v;
    return true;
  };
  p.resize(inst.n());
  w.resize(inst.n());
  cap.resize(inst.m());
  for (int i = 0; i < inst.n(); ++i)
    if (!scaled(inst.items[i].profit, p[i]) ||
        !scaled(inst.items[i].weight, w[i]))
      return false;
  for (int j = 0; j < inst.m(); ++j)
    if (!scaled(inst.capacities[j], cap[j])) return false;
  denom_out = denom;
  return true;
}

}  // namespace oracle_detail

/// Exact bottleneck solver for desk-scale instances (n <~ 16 recommended).
/// Deterministic: lowest item id first among equal profits, lowest knapsack
/// index preferred, first-found optimum kept.
inline ExactResult solve_exact(const Instance& inst,
                               long node_budget = 200'000'000L) {
  inst.require_valid();
  const int n = inst.n(), m = inst.m();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.items[a].profit != inst.items[b].profit)
      return inst.items[a].profit > inst.items[b].profit;
    return inst.items[a].id < inst.items[b].id;
  });

  bool identical = inst.kind == Kind::identical ||
                   std::all_of(inst.capacities.begin(), inst.capacities.end(),
                               [&](const Rat& b) {
                                 return b == inst.capacities.front();
                               });

  auto finish = [&](auto& search, auto to_rat) {
    ExactResult res;
    res.nodes_explored = search.nodes;
    res.optimal = !search.exhausted_budget;
    res.witness = Assignment::empty(m);
    if (search.have_best) {
      res.opt = to_rat(search.best_value);
      for (int k = 0; k < n; ++k)
        if (search.best_assign[k] >= 0)
          res.witness.bundles[search.best_assign[k]].push_back(
              inst.items[order[k]].id);
      for (auto& b : res.witness.bundles) std::sort(b.begin(), b.end());
    } else {
      res.opt = Rat(0);
    }
    return res;
  };

  auto density_order = [&](auto& weight, auto& profit) {
    using Num = std::decay_t<decltype(weight[0])>;
    std::vector<int> d(n);
    std::iota(d.begin(), d.end(), 0);
    std::sort(d.begin(), d.end(), [&](int a, int b) {
      // compare p_a/w_a > p_b/w_b without division
      if constexpr (std::is_same_v<Num, long long>) {
        __int128 lhs = static_cast<__int128>(profit[a]) * weight[b];
        __int128 rhs = static_cast<__int128>(profit[b]) * weight[a];
        if (lhs != rhs) return lhs > rhs;
      } else {
        Num lhs = profit[a] * weight[b];
        Num rhs = profit[b] * weight[a];
        if (lhs != rhs) return lhs > rhs;
      }
      return a < b;
    });
    return d;
  };

  std::vector<long long> pi, wi, ci;
  Int grid_denom(1);
  if (oracle_detail::to_int64_grid(inst, pi, wi, ci, grid_denom)) {
    oracle_detail::Search<long long> s;
    s.n = n;
    s.m = m;
    s.identical = identical;
    s.budget = node_budget;
    s.profit.resize(n);
    s.weight.resize(n);
    s.id.resize(n);
    for (int k = 0; k < n; ++k) {
      s.profit[k] = pi[order[k]];
      s.weight[k] = wi[order[k]];
      s.id[k] = inst.items[order[k]].id;
    }
    s.cap = ci;
    s.dens_order = density_order(s.weight, s.profit);
    s.run();
    return finish(s, [&](long long v) {
      return rat(Int(static_cast<long>(v)), grid_denom);
    });
  }

  oracle_detail::Search<Rat> s;
  s.n = n;
  s.m = m;
  s.identical = identical;
  s.budget = node_budget;
  s.profit.resize(n);
  s.weight.resize(n);
  s.id.resize(n);
  for (int k = 0; k < n; ++k) {
    s.profit[k] = inst.items[order[k]].profit;
    s.weight[k] = inst.items[order[k]].weight;
    s.id[k] = inst.items[order[k]].id;
  }
  s.cap = inst.capacities;
  s.dens_order = density_order(s.weight, s.profit);
  s.run();
  return finish(s, [](const Rat& v) { return v; });
}

}  // namespace bmkp

#endif  // BMKP_EXACT_ORACLE_HPP
