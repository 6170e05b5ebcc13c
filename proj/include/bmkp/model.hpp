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

#ifndef BMKP_MODEL_HPP
#define BMKP_MODEL_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bmkp/rational.hpp"

namespace bmkp {

enum class Kind { identical, arbitrary };

struct Item {
  int id = 0;
  Rat profit;
  Rat weight;
};

/// A max-min multiple-knapsack instance: items with exact rational profits and
/// weights, and a non-decreasing list of capacities. `identical` instances
/// carry equal capacities.
struct Instance {
  std::vector<Item> items;
  std::vector<Rat> capacities;
  Kind kind = Kind::identical;

  int n() const { return static_cast<int>(items.size()); }
  int m() const { return static_cast<int>(capacities.size()); }

  const Item& by_id(int id) const {
    for (const Item& it : items)
      if (it.id == id) return it;
    throw Error("unknown item id " + std::to_string(id));
  }

  std::optional<const Item*> find(int id) const {
    for (const Item& it : items)
      if (it.id == id) return &it;
    return std::nullopt;
  }

  Rat total_profit() const {
    Rat s(0);
    for (const Item& it : items) s += it.profit;
    return s;
  }

  /// Checks the structural invariants; returns a message for the first
  /// violation found, or nullopt when the instance is well formed.
  std::optional<std::string> invariant_violation() const {
    if (capacities.empty()) return "instance needs at least one knapsack";
    std::set<int> ids;
    for (const Item& it : items) {
      if (!ids.insert(it.id).second)
        return "duplicate item id " + std::to_string(it.id);
      if (it.profit < 0 || it.weight < 0)
        return "negative profit/weight on item " + std::to_string(it.id);
      if (it.weight == 0 && it.profit != 0)
        return "zero-weight item " + std::to_string(it.id) +
               " must carry zero profit";
    }
    for (int j = 0; j + 1 < m(); ++j)
      if (capacities[j] > capacities[j + 1])
        return "capacities not sorted non-decreasing";
    if (kind == Kind::identical)
      for (int j = 1; j < m(); ++j)
        if (capacities[j] != capacities[0])
          return "identical kind with unequal capacities";
    for (const Rat& b : capacities)
      if (b < 0) return "negative capacity";
    return std::nullopt;
  }

  void require_valid() const {
    if (auto v = invariant_violation()) throw Error("bad instance: " + *v);
  }
};

/// Integral item->knapsack map. Items may be left unassigned; the pipelines
/// discard items freely.
struct Assignment {
  std::vector<std::vector<int>> bundles;  // item ids per knapsack

  static Assignment empty(int m) {
    Assignment a;
    a.bundles.assign(m, {});
    return a;
  }
};

/// Sparse z_{ij} matrix of the assignment LP, value in [0,1].
struct FractionalAssignment {
  std::map<std::pair<int, int>, Rat> z;  // (item id, knapsack index) -> value

  Rat at(int id, int j) const {
    auto it = z.find({id, j});
    return it == z.end() ? Rat(0) : it->second;
  }
  void set(int id, int j, const Rat& v) {
    if (v == 0)
      z.erase({id, j});
    else
      z[{id, j}] = v;
  }
  void add(int id, int j, const Rat& v) { set(id, j, at(id, j) + v); }

  Rat row_sum(int id) const {
    Rat s(0);
    for (const auto& [key, v] : z)
      if (key.first == id) s += v;
    return s;
  }
};

struct ItemClass {
  bool heavy = false;
  bool expensive = false;
};

inline Rat density(const Item& it) {
  if (it.weight == 0) return Rat(0);  // dummy convention
  return it.profit / it.weight;
}

/// Minimum bundle profit. Does not require feasibility; pair with validate.
inline Rat evaluate(const Instance& inst, const Assignment& a) {
  if (static_cast<int>(a.bundles.size()) != inst.m())
    throw Error("assignment has wrong number of bundles");
  Rat best;
  bool first = true;
  for (const auto& bundle : a.bundles) {
    Rat p(0);
    for (int id : bundle) p += inst.by_id(id).profit;
    if (first || p < best) {
      best = p;
      first = false;
    }
  }
  return first ? Rat(0) : best;
}

struct ValidationReport {
  bool ok = true;
  std::vector<int> unknown_ids;
  std::vector<int> duplicated_items;              // assigned to >= 2 bundles
  std::vector<std::pair<int, Rat>> capacity_excess;  // (knapsack, excess)

  std::string to_string() const {
    if (ok) return "ok";
    std::string s;
    for (int id : unknown_ids) s += "unknown item " + std::to_string(id) + "; ";
    for (int id : duplicated_items)
      s += "item " + std::to_string(id) + " in two bundles; ";
    for (const auto& [j, e] : capacity_excess)
      s += "knapsack " + std::to_string(j) + " over capacity by " +
           rat_str(e) + "; ";
    return s;
  }
};

/// Reports disjointness violations and per-knapsack capacity excess exactly.
/// Violations are data, not errors.
inline ValidationReport validate(const Instance& inst, const Assignment& a) {
  ValidationReport rep;
  std::set<int> seen;
  int mm = std::min<int>(a.bundles.size(), inst.m());
  for (int j = 0; j < static_cast<int>(a.bundles.size()); ++j) {
    Rat w(0);
    for (int id : a.bundles[j]) {
      auto it = inst.find(id);
      if (!it) {
        rep.unknown_ids.push_back(id);
        continue;
      }
      if (!seen.insert(id).second) rep.duplicated_items.push_back(id);
      w += (*it)->weight;
    }
    if (j < mm && w > inst.capacities[j])
      rep.capacity_excess.emplace_back(j, w - inst.capacities[j]);
  }
  if (static_cast<int>(a.bundles.size()) != inst.m()) rep.ok = false;
  rep.ok = rep.ok && rep.unknown_ids.empty() && rep.duplicated_items.empty() &&
           rep.capacity_excess.empty();
  return rep;
}

/// eps = 1/k with integer k, as the algorithms assume.
struct Epsilon {
  long k = 10;

  explicit Epsilon(long reciprocal = 10) : k(reciprocal) {
    if (k <= 0) throw Error("epsilon must be a positive unit fraction");
  }
  Rat value() const { return rat(1, k); }

  static Epsilon parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos || s.substr(0, slash) != "1")
      throw Error("epsilon must be written as 1/k, got '" + s + "'");
    return Epsilon(std::stol(s.substr(slash + 1)));
  }
  std::string str() const { return "1/" + std::to_string(k); }
};

/// Scaling applied by normalize; original = scaled value times the factor.
struct ScalingRecord {
  Rat capacity_scale{1};  // weights and capacities were divided by this
  Rat profit_scale{1};    // profits were divided by this
};

/// Scales weights/capacities so the smallest capacity is 1 (thus B = 1 in the
/// identical case), then profits so the target objective is 1. Capacity is
/// scaled first; the order does not affect any classification.
inline std::pair<Instance, ScalingRecord> normalize(const Instance& inst,
                                                    const Rat& opt_guess) {
  if (opt_guess <= 0) throw Error("normalize: optGuess must be positive");
  inst.require_valid();
  if (inst.capacities.front() <= 0)
    throw Error("normalize: smallest capacity must be positive");
  ScalingRecord rec;
  rec.capacity_scale = inst.capacities.front();
  rec.profit_scale = opt_guess;
  Instance out = inst;
  for (Item& it : out.items) {
    it.weight /= rec.capacity_scale;
    it.profit /= rec.profit_scale;
  }
  for (Rat& b : out.capacities) b /= rec.capacity_scale;
  return {out, rec};
}

/// Classification on a normalized instance (OPT-guess = 1, and B = 1 when
/// identical): heavy iff w >= 1 - eps^2 (identical only), expensive iff
/// p >= eps.
inline std::vector<ItemClass> classify(const Instance& normalized,
                                       const Epsilon& eps) {
  Rat e = eps.value();
  Rat heavy_cut = Rat(1) - e * e;
  std::vector<ItemClass> out;
  out.reserve(normalized.items.size());
  for (const Item& it : normalized.items) {
    ItemClass c;
    c.expensive = it.profit >= e;
    c.heavy = normalized.kind == Kind::identical && it.weight >= heavy_cut;
    out.push_back(c);
  }
  return out;
}

}  // namespace bmkp

#endif  // BMKP_MODEL_HPP
