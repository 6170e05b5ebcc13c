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

#ifndef BMKP_LP_HPP
#define BMKP_LP_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bmkp/rational.hpp"

namespace bmkp {

enum class Rel { le, eq, ge };
enum class Sense { maximize, minimize, feasibility };

/// Generic LP in inequality form with per-variable [lower, upper] bounds.
/// Lower bounds must be finite; upper bounds may be absent.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, Rat>> coeffs;
    Rel rel = Rel::le;
    Rat rhs;
  };

  Sense sense = Sense::feasibility;
  std::vector<Rat> objective;  // indexed by variable; missing -> 0
  std::vector<Rat> lower;
  std::vector<std::optional<Rat>> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(lower.size()); }

  int add_var(const Rat& lo, std::optional<Rat> up = std::nullopt) {
    if (up && *up < lo) throw Error("variable with empty bound interval");
    lower.push_back(lo);
    upper.push_back(std::move(up));
    return num_vars() - 1;
  }

  void add_row(std::vector<std::pair<int, Rat>> coeffs, Rel rel,
               const Rat& rhs) {
    for (auto& [v, c] : coeffs)
      if (v < 0 || v >= num_vars()) throw Error("row references unknown var");
    rows.push_back(Row{std::move(coeffs), rel, rhs});
  }

  void set_objective(Sense s, std::vector<Rat> c) {
    sense = s;
    objective = std::move(c);
    objective.resize(lower.size(), Rat(0));
  }

  Rat objective_value(const std::vector<Rat>& x) const {
    Rat v(0);
    for (size_t i = 0; i < objective.size() && i < x.size(); ++i)
      v += objective[i] * x[i];
    return v;
  }
};

/// A vertex of the feasible region: exact values plus the tight-constraint
/// certificate whose rank equals the number of variables.
struct BasicSolution {
  std::vector<Rat> x;
  Rat objective;
  std::vector<int> tight_rows;
  std::vector<std::pair<int, int>> tight_bounds;  // (var, -1 lower / +1 upper)
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  BasicSolution sol;
  /// Row multipliers certifying infeasibility (Farkas direction) when
  /// status == infeasible, indexed by original row.
  std::vector<Rat> farkas;
};

namespace lp_detail {

// Bounded-variable primal simplex on a dense tableau, exact arithmetic,
// Bland's rule for anti-cycling. Rows are normalized to a*x + s = b with
// slack bounds [0, inf) for <= rows and [0, 0] for equalities.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {
    ns_ = lp.num_vars();
    r_ = static_cast<int>(lp.rows.size());
    total_ = ns_ + r_;
    lo_.assign(total_, Rat(0));
    up_.assign(total_, std::optional<Rat>());
    for (int v = 0; v < ns_; ++v) {
      lo_[v] = lp.lower[v];
      up_[v] = lp.upper[v];
    }
    // Dense row-major tableau of the original system (slack part implicit).
    a_.assign(r_, std::vector<Rat>(total_, Rat(0)));
    b_.assign(r_, Rat(0));
    for (int i = 0; i < r_; ++i) {
      const auto& row = lp.rows[i];
      Rat sign = row.rel == Rel::ge ? Rat(-1) : Rat(1);
      for (const auto& [v, c] : row.coeffs) a_[i][v] += sign * c;
      b_[i] = sign * row.rhs;
      int s = ns_ + i;
      a_[i][s] = Rat(1);
      lo_[s] = Rat(0);
      if (row.rel == Rel::eq) up_[s] = Rat(0);
    }
  }

  LpResult solve() {
    init_basis();
    if (!phase1()) {
      LpResult res;
      res.status = LpStatus::infeasible;
      res.farkas = farkas_;
      return res;
    }
    std::vector<Rat> cost(total_, Rat(0));
    if (lp_.sense != Sense::feasibility) {
      Rat sgn = lp_.sense == Sense::maximize ? Rat(-1) : Rat(1);
      for (int v = 0; v < ns_ && v < static_cast<int>(lp_.objective.size());
           ++v)
        cost[v] = sgn * lp_.objective[v];
    }
    if (!optimize(cost, /*phase1=*/false)) {
      LpResult res;
      res.status = LpStatus::unbounded;
      return res;
    }
    LpResult res;
    res.status = LpStatus::optimal;
    res.sol = extract();
    return res;
  }

 private:
  const LinearProgram& lp_;
  int ns_ = 0, r_ = 0, total_ = 0;
  std::vector<std::vector<Rat>> a_;  // working tableau rows over all vars
  std::vector<Rat> b_;               // working rhs
  std::vector<Rat> lo_;
  std::vector<std::optional<Rat>> up_;
  std::vector<int> basis_;           // row -> basic var
  std::vector<int> status_;          // var -> -1 at lower, +1 at upper, 0 basic
  std::vector<Rat> val_;             // current value per var
  std::vector<int> art_;             // artificial var per row, or -1
  std::vector<Rat> farkas_;

  void init_basis() {
    basis_.assign(r_, -1);
    status_.assign(total_, -1);
    val_.assign(total_, Rat(0));
    for (int v = 0; v < total_; ++v) {
      status_[v] = -1;
      val_[v] = lo_[v];
    }
    art_.assign(r_, -1);
    // Start with slacks basic; rows whose slack value violates its bounds get
    // an artificial variable carrying the violation.
    for (int i = 0; i < r_; ++i) {
      int s = ns_ + i;
      Rat rest(0);
      for (int v = 0; v < total_; ++v)
        if (v != s) rest += a_[i][v] * val_[v];
      Rat sval = b_[i] - rest;
      bool fits = sval >= lo_[s] && (!up_[s] || sval <= *up_[s]);
      if (fits) {
        basis_[i] = s;
        status_[s] = 0;
        val_[s] = sval;
      } else {
        // pin slack at the nearest bound, add artificial for the residual
        Rat pin = sval < lo_[s] ? lo_[s] : *up_[s];
        status_[s] = sval < lo_[s] ? -1 : +1;
        val_[s] = pin;
        Rat resid = sval - pin;  // what the artificial must absorb
        int z = add_artificial(i, resid >= 0 ? Rat(1) : Rat(-1));
        art_[i] = z;
        basis_[i] = z;
        status_[z] = 0;
        val_[z] = resid >= 0 ? resid : -resid;
      }
    }
    reduce_tableau();
  }

  int add_artificial(int row, const Rat& sign) {
    for (auto& r : a_) r.push_back(Rat(0));
    a_[row][total_] = sign;
    lo_.push_back(Rat(0));
    up_.push_back(std::optional<Rat>());
    val_.push_back(Rat(0));
    status_.push_back(-1);
    return total_++;
  }

  // Gaussian elimination turning basic columns into unit columns.
  void reduce_tableau() {
    for (int i = 0; i < r_; ++i) {
      int bv = basis_[i];
      Rat piv = a_[i][bv];
      if (piv == 0) throw Error("simplex: degenerate starting basis");
      if (piv != 1)
        for (int v = 0; v < total_; ++v) a_[i][v] /= piv;
      if (piv != 1) b_[i] /= piv;
      for (int k = 0; k < r_; ++k) {
        if (k == i || a_[k][bv] == 0) continue;
        Rat f = a_[k][bv];
        for (int v = 0; v < total_; ++v) a_[k][v] -= f * a_[i][v];
        b_[k] -= f * b_[i];
      }
    }
    recompute_basic_values();
  }

  void recompute_basic_values() {
    for (int i = 0; i < r_; ++i) {
      Rat rest(0);
      for (int v = 0; v < total_; ++v)
        if (status_[v] != 0) rest += a_[i][v] * val_[v];
      val_[basis_[i]] = b_[i] - rest;
    }
  }

  bool phase1() {
    bool any = false;
    std::vector<Rat> cost(total_, Rat(0));
    for (int i = 0; i < r_; ++i)
      if (art_[i] >= 0) {
        cost[art_[i]] = Rat(1);
        any = true;
      }
    if (!any) return true;
    if (!optimize(cost, /*phase1=*/true))
      throw Error("simplex: phase 1 unbounded");
    Rat inf(0);
    for (int i = 0; i < r_; ++i)
      if (art_[i] >= 0) inf += val_[art_[i]];
    if (inf > 0) {
      build_farkas(cost);
      return false;
    }
    // Pivot surviving artificials out of the basis where possible; rows that
    // resist are linearly dependent and keep a [0,0]-pinned artificial.
    for (int i = 0; i < r_; ++i) {
      int z = art_[i];
      if (z < 0 || basis_[i] != z) continue;
      int enter = -1;
      for (int v = 0; v < ns_ + r_; ++v)
        if (status_[v] != 0 && !is_artificial(v) && a_[i][v] != 0) {
          enter = v;
          break;
        }
      if (enter >= 0)
        pivot(enter, i, val_[z]);
      else
        up_[z] = Rat(0);  // redundant row
    }
    for (int v = ns_ + r_; v < total_; ++v)
      if (status_[v] != 0) up_[v] = Rat(0);  // freeze nonbasic artificials
    return true;
  }

  bool is_artificial(int v) const { return v >= ns_ + r_; }

  void build_farkas(const std::vector<Rat>& cost) {
    // y_i = reduced multiplier of row i at phase-1 optimum, mapped back to the
    // original row orientation.
    farkas_.assign(r_, Rat(0));
    std::vector<Rat> red = reduced_costs(cost);
    for (int i = 0; i < r_; ++i) {
      int s = ns_ + i;
      Rat y = cost[s] - red[s];  // dual on the slack column
      if (lp_.rows[i].rel == Rel::ge) y = -y;
      farkas_[i] = y;
    }
  }

  std::vector<Rat> reduced_costs(const std::vector<Rat>& cost) const {
    std::vector<Rat> red = cost;
    for (int i = 0; i < r_; ++i) {
      Rat cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (int v = 0; v < total_; ++v)
        if (status_[v] != 0 && a_[i][v] != 0) red[v] -= cb * a_[i][v];
    }
    return red;
  }

  // Primal simplex loop with Bland's rule; returns false on unboundedness.
  bool optimize(const std::vector<Rat>& cost, bool phase1) {
    for (;;) {
      std::vector<Rat> red = reduced_costs(cost);
      int enter = -1, dir = 0;
      for (int v = 0; v < total_; ++v) {
        if (status_[v] == 0) continue;
        if (phase1 == false && is_artificial(v)) continue;
        if (status_[v] == -1 && red[v] < 0) {
          enter = v;
          dir = +1;
          break;
        }
        bool boxed_flip = up_[v].has_value();
        if (status_[v] == +1 && red[v] > 0 && boxed_flip) {
          enter = v;
          dir = -1;
          break;
        }
      }
      if (enter < 0) return true;

      // Ratio test: entering moves by t*dir; basic var i changes by
      // -a_col[i] * t * dir.
      std::optional<Rat> limit;  // max step t >= 0
      int leave_row = -1, leave_to = 0;
      if (up_[enter])
        limit = *up_[enter] - lo_[enter];  // bound flip distance
      for (int i = 0; i < r_; ++i) {
        Rat coef = a_[i][enter] * dir;
        if (coef == 0) continue;
        int bv = basis_[i];
        Rat t;
        int to;
        if (coef > 0) {
          // basic value decreases toward its lower bound
          t = (val_[bv] - lo_[bv]) / coef;
          to = -1;
        } else {
          if (!up_[bv]) continue;
          t = (val_[bv] - *up_[bv]) / coef;  // coef < 0 -> t >= 0
          to = +1;
        }
        if (!limit || t < *limit ||
            (t == *limit && leave_row >= 0 && bv < basis_[leave_row])) {
          if (!limit || t <= *limit) {
            limit = t;
            leave_row = i;
            leave_to = to;
          }
        }
      }
      if (!limit) return false;  // unbounded direction
      Rat step = *limit * dir;
      if (leave_row < 0) {
        // bound flip
        status_[enter] = -status_[enter];
        val_[enter] += step;
        recompute_basic_values();
        continue;
      }
      int bv = basis_[leave_row];
      val_[enter] += step;
      pivot(enter, leave_row, val_[enter]);
      status_[bv] = leave_to;
      val_[bv] = leave_to == -1 ? lo_[bv] : *up_[bv];
      recompute_basic_values();
    }
  }

  void pivot(int enter, int row, const Rat& enter_val) {
    int bv = basis_[row];
    Rat piv = a_[row][enter];
    if (piv == 0) throw Error("simplex: zero pivot");
    for (int v = 0; v < total_; ++v) a_[row][v] /= piv;
    b_[row] /= piv;
    for (int k = 0; k < r_; ++k) {
      if (k == row || a_[k][enter] == 0) continue;
      Rat f = a_[k][enter];
      for (int v = 0; v < total_; ++v) a_[k][v] -= f * a_[row][v];
      b_[k] -= f * b_[row];
    }
    basis_[row] = enter;
    status_[enter] = 0;
    val_[enter] = enter_val;
    (void)bv;
  }

  BasicSolution extract() const {
    BasicSolution sol;
    sol.x.assign(ns_, Rat(0));
    for (int v = 0; v < ns_; ++v) sol.x[v] = val_[v];
    sol.objective = lp_.objective_value(sol.x);
    for (int i = 0; i < r_; ++i) {
      const auto& row = lp_.rows[i];
      Rat lhs(0);
      for (const auto& [v, c] : row.coeffs) lhs += c * sol.x[v];
      if (lhs == row.rhs) sol.tight_rows.push_back(i);
    }
    for (int v = 0; v < ns_; ++v) {
      if (sol.x[v] == lp_.lower[v]) sol.tight_bounds.emplace_back(v, -1);
      if (lp_.upper[v] && sol.x[v] == *lp_.upper[v])
        sol.tight_bounds.emplace_back(v, +1);
    }
    return sol;
  }
};

inline int rank_of(std::vector<std::vector<Rat>> mat) {
  int rows = static_cast<int>(mat.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(mat[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int p = -1;
    for (int r = rank; r < rows; ++r)
      if (mat[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(mat[rank], mat[p]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || mat[r][c] == 0) continue;
      Rat f = mat[r][c] / mat[rank][c];
      for (int cc = c; cc < cols; ++cc) mat[r][cc] -= f * mat[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace lp_detail

/// Deterministic exact LP solve; the result of a feasible run is always a
/// basic feasible solution (a vertex).
inline LpResult solve_lp(const LinearProgram& lp) {
  lp_detail::Simplex s(lp);
  return s.solve();
}

/// True iff `x` satisfies every constraint and the tight rows/bounds at `x`
/// have rank equal to the number of variables (vertex property), checked by
/// exact Gaussian elimination.
inline bool verify_basic(const LinearProgram& lp, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != lp.num_vars()) return false;
  int n = lp.num_vars();
  std::vector<std::vector<Rat>> tight;
  for (const auto& row : lp.rows) {
    Rat lhs(0);
    for (const auto& [v, c] : row.coeffs) lhs += c * x[v];
    bool ok = row.rel == Rel::le   ? lhs <= row.rhs
              : row.rel == Rel::ge ? lhs >= row.rhs
                                   : lhs == row.rhs;
    if (!ok) return false;
    if (lhs == row.rhs) {
      std::vector<Rat> dense(n, Rat(0));
      for (const auto& [v, c] : row.coeffs) dense[v] += c;
      tight.push_back(std::move(dense));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (x[v] < lp.lower[v]) return false;
    if (lp.upper[v] && x[v] > *lp.upper[v]) return false;
    if (x[v] == lp.lower[v] || (lp.upper[v] && x[v] == *lp.upper[v])) {
      std::vector<Rat> dense(n, Rat(0));
      dense[v] = Rat(1);
      tight.push_back(std::move(dense));
    }
  }
  return lp_detail::rank_of(std::move(tight)) == n;
}

inline bool verify_basic(const LinearProgram& lp, const BasicSolution& sol) {
  return verify_basic(lp, sol.x);
}

enum class MilpStatus { found, infeasible, budget_exceeded };

struct MilpResult {
  MilpStatus status = MilpStatus::infeasible;
  BasicSolution sol;
  long nodes = 0;
  /// Best relaxation bound seen when the budget ran out.
  std::optional<Rat> best_bound;
};

/// Depth-first branch and bound on the listed integer variables: branch on
/// the most fractional one (ties by lowest index), floor child first.
/// Replaces the fixed-dimension MILP machinery at desk scale.
inline MilpResult solve_milp(const LinearProgram& lp,
                             const std::vector<int>& integer_vars,
                             long node_budget = 100000) {
  MilpResult res;
  struct Node {
    std::vector<std::pair<int, Rat>> lower_of;  // tightened bounds
    std::vector<std::pair<int, Rat>> upper_of;
  };
  std::vector<Node> stack{Node{}};
  bool maximize = lp.sense == Sense::maximize;
  bool optimizing = lp.sense != Sense::feasibility;
  std::optional<Rat> incumbent;

  while (!stack.empty()) {
    if (res.nodes >= node_budget) {
      res.status = incumbent && res.status == MilpStatus::found
                       ? MilpStatus::found
                       : MilpStatus::budget_exceeded;
      return res;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++res.nodes;

    LinearProgram sub = lp;
    for (const auto& [v, lo] : node.lower_of)
      sub.lower[v] = std::max(sub.lower[v], lo);
    for (const auto& [v, hi] : node.upper_of)
      sub.upper[v] = sub.upper[v] ? std::min(*sub.upper[v], hi) : hi;
    bool empty_box = false;
    for (int v = 0; v < sub.num_vars(); ++v)
      if (sub.upper[v] && *sub.upper[v] < sub.lower[v]) empty_box = true;
    if (empty_box) continue;

    LpResult rel = solve_lp(sub);
    if (rel.status == LpStatus::infeasible) continue;
    if (rel.status == LpStatus::unbounded)
      throw Error("solve_milp: relaxation unbounded");
    if (optimizing && incumbent) {
      if (maximize && rel.sol.objective <= *incumbent) continue;
      if (!maximize && rel.sol.objective >= *incumbent) continue;
    }
    if (!res.best_bound ||
        (maximize ? rel.sol.objective > *res.best_bound
                  : rel.sol.objective < *res.best_bound))
      res.best_bound = rel.sol.objective;

    int branch = -1;
    Rat best_dist(-1);
    for (int v : integer_vars) {
      const Rat& xv = rel.sol.x[v];
      if (rat_is_integer(xv)) continue;
      Rat fl(rat_floor(xv));
      Rat dist = std::min(xv - fl, fl + 1 - xv);
      if (dist > best_dist) {
        best_dist = dist;
        branch = v;
      }
    }
    if (branch < 0) {
      if (!optimizing) {
        res.status = MilpStatus::found;
        res.sol = rel.sol;
        return res;
      }
      if (!incumbent || (maximize ? rel.sol.objective > *incumbent
                                  : rel.sol.objective < *incumbent)) {
        incumbent = rel.sol.objective;
        res.sol = rel.sol;
        res.status = MilpStatus::found;
      }
      continue;
    }
    Rat fl(rat_floor(rel.sol.x[branch]));
    Node down = node, upn = node;
    down.upper_of.emplace_back(branch, fl);
    upn.lower_of.emplace_back(branch, fl + 1);
    stack.push_back(std::move(upn));   // explored second
    stack.push_back(std::move(down));  // floor child first
  }
  if (res.status != MilpStatus::found) res.status = MilpStatus::infeasible;
  return res;
}

}  // namespace bmkp

#endif  // BMKP_LP_HPP
