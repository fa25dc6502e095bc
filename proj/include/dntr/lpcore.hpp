#pragma once

// Bounded-variable linear programming.
//
// solve_lp runs a light presolve (fixed columns, singleton rows, rows made
// redundant by column bounds), splits the remaining program into
// independent blocks, and solves each block with a dense-tableau two-phase
// primal simplex. Nonbasic columns may sit at either bound, so finite upper
// bounds never become rows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace dntr::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t column;
  double coefficient;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// minimize objective . x  subject to rows and lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_variable(double cost, double lo, double hi) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return objective.size() - 1;
  }

  std::size_t add_row(std::vector<Term> terms, Sense sense, double rhs) {
    rows.push_back({std::move(terms), sense, rhs});
    return rows.size() - 1;
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

struct LpOutcome {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> values;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  std::size_t stall_threshold = 50;  // degenerate pivots before switching to Bland's rule
  std::size_t iteration_limit = 200000;
  bool presolve = true;
  bool decompose = true;
};

class MalformedProgram : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class IterationLimitExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void check_well_formed(const LinearProgram& lp) {
  const auto n = lp.objective.size();
  if (lp.lower.size() != n || lp.upper.size() != n)
    throw MalformedProgram("bounds size does not match objective size");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.objective[j])) throw MalformedProgram("non-finite cost on column " + std::to_string(j));
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) || lp.lower[j] == kInfinity || lp.upper[j] == -kInfinity)
      throw MalformedProgram("invalid bound on column " + std::to_string(j));
    if (lp.lower[j] > lp.upper[j]) throw MalformedProgram("lower > upper on column " + std::to_string(j));
  }
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    if (!std::isfinite(lp.rows[r].rhs)) throw MalformedProgram("non-finite rhs on row " + std::to_string(r));
    for (const auto& t : lp.rows[r].terms) {
      if (t.column >= n) throw MalformedProgram("row " + std::to_string(r) + " references missing column");
      if (!std::isfinite(t.coefficient)) throw MalformedProgram("non-finite coefficient on row " + std::to_string(r));
    }
  }
}

namespace detail {

/// Dense tableau simplex for one block. Columns are shifted/reflected so
/// every tableau column lives in [0, ub]; free columns are split in two.
class BoundedSimplex {
public:
  BoundedSimplex(const std::vector<double>& cost, const std::vector<double>& lower, const std::vector<double>& upper,
                 const std::vector<Row>& rows, const SimplexOptions& opts)
      : opts_(opts), num_vars_(cost.size()), lower_(lower), upper_(upper) {
    // Structural columns.
    shift_.assign(num_vars_, 0.0);
    for (std::size_t j = 0; j < num_vars_; ++j) {
      if (std::isfinite(lower[j])) {
        shift_[j] = lower[j];
        add_column(j, 1.0, upper[j] - lower[j], cost[j]);
      } else if (std::isfinite(upper[j])) {
        shift_[j] = upper[j];
        add_column(j, -1.0, kInfinity, -cost[j]);
      } else {
        add_column(j, 1.0, kInfinity, cost[j]);
        add_column(j, -1.0, kInfinity, -cost[j]);
      }
    }
    std::vector<std::vector<std::size_t>> columns_of(num_vars_);
    for (std::size_t c = 0; c < var_of_.size(); ++c) columns_of[var_of_[c]].push_back(c);

    m_ = rows.size();
    std::vector<double> rhs(m_);
    std::vector<int> slack_sign(m_, 0);
    std::vector<std::size_t> slack_col(m_, npos);
    for (std::size_t r = 0; r < m_; ++r) {
      rhs[r] = rows[r].rhs;
      for (const auto& t : rows[r].terms) rhs[r] -= t.coefficient * shift_[t.column];
      if (rows[r].sense != Sense::Equal) {
        slack_sign[r] = rows[r].sense == Sense::LessEqual ? 1 : -1;
        slack_col[r] = var_of_.size();
        add_column(npos, 1.0, kInfinity, 0.0);
      }
    }
    std::vector<double> row_sign(m_, 1.0);
    std::vector<std::size_t> artificial_col(m_, npos);
    for (std::size_t r = 0; r < m_; ++r) {
      if (rhs[r] < 0.0) row_sign[r] = -1.0;
      const bool slack_basic = slack_col[r] != npos && row_sign[r] * slack_sign[r] > 0.0;
      if (!slack_basic) {
        artificial_col[r] = var_of_.size();
        add_column(npos, 1.0, kInfinity, 0.0);
      }
    }

    n_ = var_of_.size();
    tableau_.assign(m_ * n_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, npos);
    state_.assign(n_, AtLower);
    excluded_.assign(n_, false);
    is_artificial_.assign(n_, false);
    rhs_abs_.assign(m_, 0.0);
    artificial_row_.assign(n_, npos);

    for (std::size_t r = 0; r < m_; ++r) {
      double* row = &tableau_[r * n_];
      for (const auto& t : rows[r].terms)
        for (auto c : columns_of[t.column]) row[c] += row_sign[r] * t.coefficient * sign_[c];
      if (slack_col[r] != npos) row[slack_col[r]] = row_sign[r] * slack_sign[r];
      beta_[r] = row_sign[r] * rhs[r];
      rhs_abs_[r] = std::abs(rhs[r]);
      if (artificial_col[r] != npos) {
        row[artificial_col[r]] = 1.0;
        basis_[r] = artificial_col[r];
        is_artificial_[artificial_col[r]] = true;
        artificial_row_[artificial_col[r]] = r;
      } else {
        basis_[r] = slack_col[r];
      }
      state_[basis_[r]] = Basic;
    }
  }

  Status solve() {
    bool any_artificial = std::any_of(is_artificial_.begin(), is_artificial_.end(), [](bool b) { return b; });
    if (any_artificial) {
      std::vector<double> phase1(n_, 0.0);
      for (std::size_t c = 0; c < n_; ++c)
        if (is_artificial_[c]) phase1[c] = 1.0;
      run_phase(phase1);
      for (std::size_t c = 0; c < n_; ++c) {
        if (!is_artificial_[c]) continue;
        const double v = value_of(c);
        if (v > opts_.feasibility_tol * (1.0 + rhs_abs_[artificial_row_[c]])) return Status::Infeasible;
      }
      for (std::size_t c = 0; c < n_; ++c)
        if (is_artificial_[c]) {
          ub_[c] = 0.0;
          excluded_[c] = true;
        }
    }
    if (!run_phase(cost_)) return Status::Unbounded;
    return Status::Optimal;
  }

  std::vector<double> values() const {
    std::vector<double> x(shift_);
    for (std::size_t c = 0; c < n_; ++c) {
      if (var_of_[c] == npos) continue;
      x[var_of_[c]] += sign_[c] * value_of(c);
    }
    for (std::size_t j = 0; j < num_vars_; ++j) x[j] = std::clamp(x[j], lower_[j], upper_[j]);
    return x;
  }

  std::size_t iterations() const { return iterations_; }

private:
  enum State : std::uint8_t { Basic, AtLower, AtUpper };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void add_column(std::size_t var, double sign, double ub, double cost) {
    var_of_.push_back(var);
    sign_.push_back(sign);
    ub_.push_back(ub);
    cost_.push_back(cost);
  }

  double value_of(std::size_t c) const {
    if (state_[c] == Basic) {
      for (std::size_t r = 0; r < m_; ++r)
        if (basis_[r] == c) return beta_[r];
      return 0.0;
    }
    return state_[c] == AtUpper ? ub_[c] : 0.0;
  }

  void price(const std::vector<double>& cost) {
    d_ = cost;
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &tableau_[r * n_];
      for (std::size_t c = 0; c < n_; ++c) d_[c] -= cb * row[c];
    }
    for (std::size_t r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
  }

  /// Returns false on unboundedness.
  bool run_phase(const std::vector<double>& cost) {
    price(cost);
    bool bland = false;
    std::size_t stall = 0;
    std::vector<std::size_t> nz;
    nz.reserve(n_);
    for (;;) {
      if (++iterations_ > opts_.iteration_limit) throw IterationLimitExceeded("simplex iteration limit exceeded");

      std::size_t q = npos;
      double best_score = 0.0;
      for (std::size_t c = 0; c < n_; ++c) {
        if (state_[c] == Basic || excluded_[c]) continue;
        double score = 0.0;
        if (state_[c] == AtLower) {
          if (ub_[c] > 0.0 && d_[c] < -opts_.optimality_tol) score = -d_[c];
        } else if (d_[c] > opts_.optimality_tol) {
          score = d_[c];
        }
        if (score <= 0.0) continue;
        if (bland) {
          q = c;
          break;
        }
        if (score > best_score) {
          best_score = score;
          q = c;
        }
      }
      if (q == npos) return true;

      const double dir = state_[q] == AtLower ? 1.0 : -1.0;
      auto limit = [&](std::size_t r, double alpha, double slack) {
        if (alpha > 0.0) return (std::max(beta_[r], 0.0) + slack) / alpha;
        const double ub = ub_[basis_[r]];
        if (!std::isfinite(ub)) return kInfinity;
        return (std::max(ub - beta_[r], 0.0) + slack) / -alpha;
      };
      // Harris pass: relaxed bound, then the largest pivot among rows that
      // block within it. Bland mode keeps the exact minimum ratio.
      double relaxed = ub_[q];
      if (!bland)
        for (std::size_t r = 0; r < m_; ++r) {
          const double alpha = dir * tableau_[r * n_ + q];
          if (std::abs(alpha) <= opts_.pivot_tol) continue;
          relaxed = std::min(relaxed, limit(r, alpha, opts_.feasibility_tol));
        }
      double step = ub_[q];
      std::size_t leave = npos;
      double leave_alpha = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double alpha = dir * tableau_[r * n_ + q];
        if (std::abs(alpha) <= opts_.pivot_tol) continue;
        const double ratio = limit(r, alpha, 0.0);
        if (!std::isfinite(ratio)) continue;
        if (bland) {
          const double tie = 1e-12 * std::max(1.0, std::isfinite(step) ? std::abs(step) : 1.0);
          if (ratio < step - tie || (ratio <= step + tie && leave != npos && basis_[r] < basis_[leave])) {
            step = ratio;
            leave = r;
          }
        } else if (ratio <= relaxed && std::abs(alpha) > leave_alpha) {
          leave_alpha = std::abs(alpha);
          leave = r;
        }
      }
      if (!bland && leave != npos) {
        step = limit(leave, dir * tableau_[leave * n_ + q], 0.0);
        if (step >= ub_[q]) {
          step = ub_[q];
          leave = npos;
        }
      }
      if (!std::isfinite(step)) return false;

      for (std::size_t r = 0; r < m_; ++r) {
        const double a = tableau_[r * n_ + q];
        if (a != 0.0) beta_[r] -= dir * a * step;
      }

      if (step <= 1e-12) {
        if (++stall > opts_.stall_threshold) bland = true;
      } else {
        stall = 0;
      }

      if (leave == npos) {
        state_[q] = state_[q] == AtLower ? AtUpper : AtLower;
        continue;
      }

      const double entering_value = (state_[q] == AtLower ? 0.0 : ub_[q]) + dir * step;
      const std::size_t out = basis_[leave];
      state_[out] = dir * tableau_[leave * n_ + q] > 0.0 ? AtLower : AtUpper;
      basis_[leave] = q;
      state_[q] = Basic;
      beta_[leave] = entering_value;
      pivot(leave, q, nz);
    }
  }

  void pivot(std::size_t p, std::size_t q, std::vector<std::size_t>& nz) {
    double* prow = &tableau_[p * n_];
    const double inv = 1.0 / prow[q];
    nz.clear();
    for (std::size_t c = 0; c < n_; ++c) {
      if (prow[c] == 0.0) continue;
      prow[c] *= inv;
      nz.push_back(c);
    }
    prow[q] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == p) continue;
      double* row = &tableau_[r * n_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (auto c : nz) row[c] -= f * prow[c];
      row[q] = 0.0;
    }
    const double f = d_[q];
    if (f != 0.0) {
      for (auto c : nz) d_[c] -= f * prow[c];
      d_[q] = 0.0;
    }
  }

  SimplexOptions opts_;
  std::size_t num_vars_;
  std::vector<double> lower_, upper_, shift_;

  std::vector<std::size_t> var_of_;
  std::vector<double> sign_, ub_, cost_;

  std::size_t m_ = 0, n_ = 0;
  std::vector<double> tableau_, beta_, d_, rhs_abs_;
  std::vector<std::size_t> basis_, artificial_row_;
  std::vector<State> state_;
  std::vector<bool> excluded_, is_artificial_;
  std::size_t iterations_ = 0;
};

struct Reduced {
  bool infeasible = false;
  std::vector<double> lower, upper;
  std::vector<bool> fixed;
  std::vector<Row> rows;
};

inline double row_tol(const SimplexOptions& opts, double rhs) { return opts.feasibility_tol * (1.0 + std::abs(rhs)); }

/// Removes fixed columns, turns singleton rows into bounds and drops rows
/// whose activity range already satisfies them.
inline Reduced presolve(const LinearProgram& lp, const SimplexOptions& opts) {
  Reduced red;
  red.lower = lp.lower;
  red.upper = lp.upper;
  red.fixed.assign(lp.num_variables(), false);

  // Merge duplicate column entries.
  std::vector<Row> rows;
  rows.reserve(lp.rows.size());
  for (const auto& row : lp.rows) {
    std::map<std::size_t, double> merged;
    for (const auto& t : row.terms) merged[t.column] += t.coefficient;
    Row r{{}, row.sense, row.rhs};
    for (const auto& [c, a] : merged)
      if (a != 0.0) r.terms.push_back({c, a});
    rows.push_back(std::move(r));
  }
  std::vector<bool> active(rows.size(), true);

  if (!opts.presolve) {
    for (auto& row : rows) {
      if (!row.terms.empty()) {
        red.rows.push_back(std::move(row));
        continue;
      }
      const double tol = row_tol(opts, row.rhs);
      const bool ok = (row.sense == Sense::LessEqual && 0.0 <= row.rhs + tol) ||
                      (row.sense == Sense::GreaterEqual && 0.0 >= row.rhs - tol) ||
                      (row.sense == Sense::Equal && std::abs(row.rhs) <= tol);
      if (!ok) red.infeasible = true;
    }
    return red;
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
      if (!red.fixed[j] && red.lower[j] == red.upper[j]) {
        red.fixed[j] = true;
        changed = true;
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!active[r]) continue;
      auto& row = rows[r];
      // Substitute fixed columns.
      std::size_t keep = 0;
      for (const auto& t : row.terms) {
        if (red.fixed[t.column]) {
          row.rhs -= t.coefficient * red.lower[t.column];
        } else {
          row.terms[keep++] = t;
        }
      }
      if (keep != row.terms.size()) {
        row.terms.resize(keep);
        changed = true;
      }
      const double tol = row_tol(opts, row.rhs);

      if (row.terms.empty()) {
        const bool ok = (row.sense == Sense::LessEqual && 0.0 <= row.rhs + tol) ||
                        (row.sense == Sense::GreaterEqual && 0.0 >= row.rhs - tol) ||
                        (row.sense == Sense::Equal && std::abs(row.rhs) <= tol);
        if (!ok) {
          red.infeasible = true;
          return red;
        }
        active[r] = false;
        changed = true;
        continue;
      }

      if (row.terms.size() == 1) {
        const auto [c, a] = row.terms.front();
        const double v = row.rhs / a;
        const bool upper_side = (row.sense == Sense::LessEqual) == (a > 0.0);
        if (row.sense == Sense::Equal) {
          red.lower[c] = std::max(red.lower[c], v);
          red.upper[c] = std::min(red.upper[c], v);
        } else if (upper_side) {
          red.upper[c] = std::min(red.upper[c], v);
        } else {
          red.lower[c] = std::max(red.lower[c], v);
        }
        if (red.lower[c] > red.upper[c]) {
          const double gap = red.lower[c] - red.upper[c];
          if (gap > opts.feasibility_tol * (1.0 + std::abs(red.lower[c]))) {
            red.infeasible = true;
            return red;
          }
          red.upper[c] = red.lower[c];
        }
        active[r] = false;
        changed = true;
        continue;
      }

      double lo = 0.0, hi = 0.0;
      for (const auto& t : row.terms) {
        const double l = red.lower[t.column], u = red.upper[t.column];
        if (t.coefficient > 0.0) {
          lo += t.coefficient * l;
          hi += t.coefficient * u;
        } else {
          lo += t.coefficient * u;
          hi += t.coefficient * l;
        }
      }
      const bool lo_violates = lo > row.rhs + tol;
      const bool hi_violates = hi < row.rhs - tol;
      if ((row.sense != Sense::GreaterEqual && lo_violates) || (row.sense != Sense::LessEqual && hi_violates)) {
        red.infeasible = true;
        return red;
      }
      const bool redundant = (row.sense == Sense::LessEqual && hi <= row.rhs) ||
                             (row.sense == Sense::GreaterEqual && lo >= row.rhs);
      if (redundant) {
        active[r] = false;
        changed = true;
      }
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (active[r]) red.rows.push_back(std::move(rows[r]));
  return red;
}

/// Geometric row/column scaling by powers of two, applied in place. Returns
/// the column factors: original value = scaled value * factor.
inline std::vector<double> equilibrate(std::vector<double>& cost, std::vector<double>& lower,
                                       std::vector<double>& upper, std::vector<Row>& rows) {
  const auto n = cost.size();
  std::vector<double> col(n, 1.0);
  auto pow2 = [](double v) { return std::exp2(std::round(std::log2(v))); };
  for (int pass = 0; pass < 4; ++pass) {
    for (auto& row : rows) {
      double lo = kInfinity, hi = 0.0;
      for (const auto& t : row.terms) {
        const double a = std::abs(t.coefficient);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      if (hi == 0.0) continue;
      const double f = pow2(1.0 / std::sqrt(lo * hi));
      for (auto& t : row.terms) t.coefficient *= f;
      row.rhs *= f;
    }
    std::vector<double> lo(n, kInfinity), hi(n, 0.0);
    for (const auto& row : rows)
      for (const auto& t : row.terms) {
        const double a = std::abs(t.coefficient);
        lo[t.column] = std::min(lo[t.column], a);
        hi[t.column] = std::max(hi[t.column], a);
      }
    std::vector<double> f(n, 1.0);
    for (std::size_t j = 0; j < n; ++j)
      if (hi[j] > 0.0) f[j] = pow2(1.0 / std::sqrt(lo[j] * hi[j]));
    for (auto& row : rows)
      for (auto& t : row.terms) t.coefficient *= f[t.column];
    for (std::size_t j = 0; j < n; ++j) {
      col[j] *= f[j];
      cost[j] *= f[j];
      lower[j] /= f[j];
      upper[j] /= f[j];
    }
  }
  return col;
}

}  // namespace detail

inline LpOutcome solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {}) {
  check_well_formed(lp);
  const auto n = lp.num_variables();
  LpOutcome out;
  out.values.assign(n, 0.0);

  auto red = detail::presolve(lp, opts);
  if (red.infeasible) {
    out.status = Status::Infeasible;
    return out;
  }

  // Blocks: connected components of the column/row incidence graph.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& row : red.rows)
    for (std::size_t k = 1; k < row.terms.size(); ++k) {
      const auto a = find(row.terms[0].column);
      const auto b = find(row.terms[k].column);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  if (!opts.decompose) {
    std::size_t first = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!red.fixed[j]) {
        if (first == n)
          first = j;
        else
          parent[find(j)] = find(first);
      }
  }

  std::vector<bool> in_row(n, false);
  for (const auto& row : red.rows)
    for (const auto& t : row.terms) in_row[t.column] = true;

  bool infeasible = false, unbounded = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (red.fixed[j]) {
      out.values[j] = red.lower[j];
    } else if (!in_row[j]) {
      const double c = lp.objective[j], l = red.lower[j], u = red.upper[j];
      double v;
      if (c > 0.0) {
        v = l;
      } else if (c < 0.0) {
        v = u;
      } else {
        v = std::isfinite(l) ? l : (std::isfinite(u) ? u : 0.0);
      }
      if (!std::isfinite(v)) {
        unbounded = true;
        v = 0.0;
      }
      out.values[j] = v;
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> block_rows;
  for (std::size_t r = 0; r < red.rows.size(); ++r) block_rows[find(red.rows[r].terms.front().column)].push_back(r);

  std::vector<std::size_t> local(n, 0);
  for (const auto& [root, rows_idx] : block_rows) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (!red.fixed[j] && in_row[j] && find(j) == root) cols.push_back(j);
    std::vector<double> cost, lo, hi;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      local[cols[k]] = k;
      cost.push_back(lp.objective[cols[k]]);
      lo.push_back(red.lower[cols[k]]);
      hi.push_back(red.upper[cols[k]]);
    }
    std::vector<Row> rows;
    rows.reserve(rows_idx.size());
    for (auto r : rows_idx) {
      Row row{{}, red.rows[r].sense, red.rows[r].rhs};
      for (const auto& t : red.rows[r].terms) row.terms.push_back({local[t.column], t.coefficient});
      rows.push_back(std::move(row));
    }
    const auto col_scale = detail::equilibrate(cost, lo, hi, rows);
    detail::BoundedSimplex simplex(cost, lo, hi, rows, opts);
    const auto status = simplex.solve();
    out.iterations += simplex.iterations();
    if (status == Status::Infeasible) {
      infeasible = true;
      break;
    }
    if (status == Status::Unbounded) unbounded = true;
    const auto x = simplex.values();
    for (std::size_t k = 0; k < cols.size(); ++k)
      out.values[cols[k]] = std::clamp(x[k] * col_scale[k], red.lower[cols[k]], red.upper[cols[k]]);
  }

  if (infeasible) {
    out.status = Status::Infeasible;
  } else if (unbounded) {
    out.status = Status::Unbounded;
  } else {
    out.status = Status::Optimal;
  }
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += lp.objective[j] * out.values[j];
  return out;
}

}  // namespace dntr::lp
