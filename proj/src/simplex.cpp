// Copyright 2026 The splitbranch Authors
//
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

#include "splitbranch/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "splitbranch/error.hpp"

namespace splitbranch {
namespace {

std::shared_ptr<LpData> assemble(const StandardForm& sf,
                                 std::span<const Cut> cuts,
                                 const ColumnBounds* bounds) {
  auto lp = std::make_shared<LpData>();
  int num_artificial = 0;
  for (int r = 0; r < sf.num_rows; ++r) {
    if (sf.slack_of_row[r] < 0) ++num_artificial;
  }
  const int num_cuts = static_cast<int>(cuts.size());
  lp->num_sf_rows = sf.num_rows;
  lp->num_rows = sf.num_rows + num_cuts;
  lp->num_sf_cols = sf.num_cols();
  lp->num_structural = sf.num_structural;
  lp->num_cols = sf.num_cols() + num_artificial + num_cuts;
  lp->objective_offset = sf.objective_offset;
  lp->a = Eigen::MatrixXd::Zero(lp->num_rows, lp->num_cols);
  lp->b = Eigen::VectorXd::Zero(lp->num_rows);
  lp->c = Eigen::VectorXd::Zero(lp->num_cols);
  lp->lower.assign(lp->num_cols, 0.0);
  lp->upper.assign(lp->num_cols, kInfinity);
  lp->role.assign(lp->num_cols, ColumnRole::kStructural);
  lp->row_of_column.assign(lp->num_cols, -1);

  const ColumnBounds defaults = bounds ? ColumnBounds{} : sf.default_bounds();
  const ColumnBounds& bnd = bounds ? *bounds : defaults;
  for (int j = 0; j < sf.num_cols(); ++j) {
    lp->c(j) = sf.cost[j];
    lp->lower[j] = bnd.lower[j];
    lp->upper[j] = bnd.upper[j];
    if (j >= sf.num_structural) {
      lp->role[j] = ColumnRole::kSlack;
      lp->row_of_column[j] = sf.var_map[j].index;
    }
  }
  for (int r = 0; r < sf.num_rows; ++r) {
    for (int j = 0; j < sf.num_cols(); ++j) lp->a(r, j) = sf.at(r, j);
    lp->b(r) = sf.rhs[r];
  }
  int col = sf.num_cols();
  for (int r = 0; r < sf.num_rows; ++r) {
    if (sf.slack_of_row[r] >= 0) continue;
    lp->a(r, col) = 1.0;
    lp->upper[col] = 0.0;
    lp->role[col] = ColumnRole::kArtificial;
    lp->row_of_column[col] = r;
    ++col;
  }
  for (int k = 0; k < num_cuts; ++k) {
    const Cut& cut = cuts[k];
    const int row = sf.num_rows + k;
    for (std::size_t e = 0; e < cut.indices.size(); ++e) {
      lp->a(row, cut.indices[e]) += cut.coefficients[e];
    }
    lp->b(row) = cut.rhs;
    lp->a(row, col) = 1.0;
    lp->role[col] = ColumnRole::kCutSlack;
    lp->row_of_column[col] = row;
    ++col;
  }
  return lp;
}

class PrimalSimplex {
 public:
  PrimalSimplex(std::shared_ptr<const LpData> lp, const LpLimits& limits)
      : lp_(std::move(lp)), limits_(limits), m_(lp_->num_rows), n_(lp_->num_cols) {}

  LpResult run(const Basis* start) {
    LpResult result;
    result.lp = lp_;
    for (int j = 0; j < n_; ++j) {
      if (lp_->lower[j] > lp_->upper[j] + limits_.feasibility_tol) {
        result.status = LpStatus::kInfeasible;
        result.values.assign(n_, 0.0);
        result.position.assign(n_, -1);
        return result;
      }
    }
    bool warm = start != nullptr && load_basis(*start) && factorize();
    if (!warm) {
      cold_basis();
      if (!factorize()) {
        throw Error(ErrorCode::kNumericalFailure, "slack basis is singular");
      }
    }
    result.used_warm_start = warm;
    bool restarted = false;
    LpStatus status;
    while (true) {
      try {
        status = iterate();
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNumericalFailure || restarted) throw;
        restarted = true;
        cold_basis();
        if (!factorize()) throw;
      }
    }
    result.status = status;
    result.iterations = iterations_;
    result.used_bland = bland_;
    result.values.assign(x_.data(), x_.data() + n_);
    result.basis = Basis{basic_, status_};
    result.position = position_;
    result.basis_inverse = std::make_shared<const Eigen::MatrixXd>(binv_);
    if (status == LpStatus::kOptimal) {
      double obj = lp_->objective_offset;
      for (int j = 0; j < lp_->num_sf_cols; ++j) obj += lp_->c(j) * x_(j);
      result.objective = obj;
    } else if (status == LpStatus::kUnbounded) {
      result.objective = -kInfinity;
    }
    return result;
  }

 private:
  bool fixed(int j) const { return lp_->upper[j] - lp_->lower[j] <= 0.0; }

  bool load_basis(const Basis& start) {
    const int old_cols = static_cast<int>(start.status.size());
    const int old_rows = static_cast<int>(start.basic.size());
    const int extra = m_ - old_rows;
    // Only extension by trailing cut rows/slacks is supported.
    if (extra < 0 || n_ - old_cols != extra) return false;
    for (int j = old_cols; j < n_; ++j) {
      if (lp_->role[j] != ColumnRole::kCutSlack) return false;
    }
    status_ = start.status;
    basic_ = start.basic;
    for (int k = 0; k < extra; ++k) {
      status_.push_back(ColumnStatus::kBasic);
      basic_.push_back(old_cols + k);
    }
    position_.assign(n_, -1);
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (j < 0 || j >= n_ || position_[j] >= 0 ||
          status_[j] != ColumnStatus::kBasic) {
        return false;
      }
      position_[j] = r;
    }
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == ColumnStatus::kBasic && position_[j] < 0) return false;
      if (status_[j] == ColumnStatus::kAtUpper && !std::isfinite(lp_->upper[j])) {
        status_[j] = ColumnStatus::kAtLower;
      }
    }
    return true;
  }

  void cold_basis() {
    status_.assign(n_, ColumnStatus::kAtLower);
    basic_.assign(m_, -1);
    position_.assign(n_, -1);
    for (int j = 0; j < n_; ++j) {
      const ColumnRole role = lp_->role[j];
      if (role == ColumnRole::kStructural) continue;
      const int r = lp_->row_of_column[j];
      basic_[r] = j;
      position_[j] = r;
      status_[j] = ColumnStatus::kBasic;
    }
    bland_ = false;
    degenerate_run_ = 0;
  }

  double nonbasic_value(int j) const {
    return status_[j] == ColumnStatus::kAtUpper ? lp_->upper[j] : lp_->lower[j];
  }

  // Rebuilds B^-1 from scratch and recomputes the primal values.
  bool factorize() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int r = 0; r < m_; ++r) basis_matrix.col(r) = lp_->a.col(basic_[r]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    pivots_since_refactor_ = 0;
    recompute_primal();
    return true;
  }

  void recompute_primal() {
    x_ = Eigen::VectorXd::Zero(n_);
    Eigen::VectorXd rhs = lp_->b;
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == ColumnStatus::kBasic) continue;
      x_(j) = nonbasic_value(j);
      if (x_(j) != 0.0) rhs -= x_(j) * lp_->a.col(j);
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) x_(basic_[r]) = xb(r);
  }

  // Infeasibility direction of a basic column: -1 below lower, +1 above
  // upper, 0 inside.
  int infeasibility(int j) const {
    if (x_(j) < lp_->lower[j] - limits_.feasibility_tol) return -1;
    if (x_(j) > lp_->upper[j] + limits_.feasibility_tol) return 1;
    return 0;
  }

  LpStatus iterate() {
    Eigen::VectorXd cb(m_);
    Eigen::VectorXd alpha(m_);
    while (true) {
      if (pivots_since_refactor_ >= limits_.refactor_interval) {
        if (!factorize()) {
          throw Error(ErrorCode::kNumericalFailure,
                      "basis became singular during refactorization");
        }
      }
      bool phase1 = false;
      for (int r = 0; r < m_; ++r) {
        const int s = infeasibility(basic_[r]);
        cb(r) = s;
        if (s != 0) phase1 = true;
      }
      if (!phase1) {
        for (int r = 0; r < m_; ++r) cb(r) = lp_->c(basic_[r]);
      }
      const Eigen::RowVectorXd y = cb.transpose() * binv_;

      int entering = -1;
      double best = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (status_[j] == ColumnStatus::kBasic || fixed(j)) continue;
        const double cj = phase1 ? 0.0 : lp_->c(j);
        const double d = cj - y.dot(lp_->a.col(j));
        double gain = 0.0;
        if (status_[j] == ColumnStatus::kAtLower && d < -limits_.optimality_tol) {
          gain = -d;
        } else if (status_[j] == ColumnStatus::kAtUpper &&
                   d > limits_.optimality_tol) {
          gain = d;
        }
        if (gain <= 0.0) continue;
        if (bland_) {
          entering = j;
          break;
        }
        if (gain > best) {
          best = gain;
          entering = j;
        }
      }

      if (entering < 0) {
        // Confirm against a fresh factorization before declaring a status.
        if (pivots_since_refactor_ > 0) {
          if (!factorize()) {
            throw Error(ErrorCode::kNumericalFailure, "singular final basis");
          }
          continue;
        }
        return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
      }
      if (iterations_ >= limits_.max_iterations) return LpStatus::kIterationLimit;
      ++iterations_;

      const double dir = status_[entering] == ColumnStatus::kAtLower ? 1.0 : -1.0;
      alpha = binv_ * lp_->a.col(entering);

      // Ratio test. rate = d x_basic / d t for a step t >= 0 of the entering
      // column in direction `dir`.
      double step = lp_->upper[entering] - lp_->lower[entering];
      int leave_row = -1;
      bool leave_at_upper = false;
      auto limit_for = [&](int r, double rate, double slack_tol, double* t,
                           bool* at_upper) -> bool {
        const int j = basic_[r];
        const double xj = x_(j);
        const int inf = phase1 ? infeasibility(j) : 0;
        if (inf < 0) {
          if (rate <= 0.0) return false;
          *t = (lp_->lower[j] - xj + slack_tol) / rate;
          *at_upper = false;
          return true;
        }
        if (inf > 0) {
          if (rate >= 0.0) return false;
          *t = (xj - lp_->upper[j] + slack_tol) / -rate;
          *at_upper = true;
          return true;
        }
        if (rate > 0.0) {
          if (!std::isfinite(lp_->upper[j])) return false;
          *t = (lp_->upper[j] - xj + slack_tol) / rate;
          *at_upper = true;
          return true;
        }
        *t = (xj - lp_->lower[j] + slack_tol) / -rate;
        *at_upper = false;
        return true;
      };

      if (bland_) {
        int best_col = -1;
        for (int r = 0; r < m_; ++r) {
          const double rate = -dir * alpha(r);
          if (std::abs(rate) < limits_.pivot_tol) continue;
          double t;
          bool up;
          if (!limit_for(r, rate, 0.0, &t, &up)) continue;
          t = std::max(t, 0.0);
          if (t < step - 1e-12 ||
              (leave_row >= 0 && t <= step + 1e-12 && basic_[r] < best_col)) {
            step = t;
            leave_row = r;
            leave_at_upper = up;
            best_col = basic_[r];
          }
        }
      } else {
        // Harris two-pass: relaxed bound first, then the largest pivot among
        // rows whose exact ratio fits under it.
        double relaxed = step;
        for (int r = 0; r < m_; ++r) {
          const double rate = -dir * alpha(r);
          if (std::abs(rate) < limits_.pivot_tol) continue;
          double t;
          bool up;
          if (!limit_for(r, rate, limits_.feasibility_tol, &t, &up)) continue;
          relaxed = std::min(relaxed, t);
        }
        double best_pivot = 0.0;
        for (int r = 0; r < m_; ++r) {
          const double rate = -dir * alpha(r);
          if (std::abs(rate) < limits_.pivot_tol) continue;
          double t;
          bool up;
          if (!limit_for(r, rate, 0.0, &t, &up)) continue;
          if (t <= relaxed && std::abs(rate) > best_pivot) {
            best_pivot = std::abs(rate);
            leave_row = r;
            leave_at_upper = up;
            step = std::max(t, 0.0);
          }
        }
        if (leave_row >= 0 && step > lp_->upper[entering] - lp_->lower[entering]) {
          leave_row = -1;
          step = lp_->upper[entering] - lp_->lower[entering];
        }
      }

      if (!std::isfinite(step)) {
        if (phase1) {
          throw Error(ErrorCode::kNumericalFailure,
                      "unbounded ray while minimizing infeasibility");
        }
        return LpStatus::kUnbounded;
      }

      if (step <= 1e-12) {
        if (++degenerate_run_ >= limits_.stall_threshold) bland_ = true;
      } else {
        degenerate_run_ = 0;
      }

      x_(entering) += dir * step;
      for (int r = 0; r < m_; ++r) x_(basic_[r]) -= dir * alpha(r) * step;

      if (leave_row < 0) {
        status_[entering] = status_[entering] == ColumnStatus::kAtLower
                                ? ColumnStatus::kAtUpper
                                : ColumnStatus::kAtLower;
        x_(entering) = nonbasic_value(entering);
        continue;
      }

      const int leaving = basic_[leave_row];
      status_[leaving] = leave_at_upper ? ColumnStatus::kAtUpper : ColumnStatus::kAtLower;
      if (fixed(leaving)) status_[leaving] = ColumnStatus::kAtLower;
      x_(leaving) = nonbasic_value(leaving);
      position_[leaving] = -1;
      basic_[leave_row] = entering;
      status_[entering] = ColumnStatus::kBasic;
      position_[entering] = leave_row;

      const double pivot = alpha(leave_row);
      binv_.row(leave_row) /= pivot;
      const Eigen::RowVectorXd pivot_row = binv_.row(leave_row);
      for (int r = 0; r < m_; ++r) {
        if (r != leave_row && alpha(r) != 0.0) binv_.row(r) -= alpha(r) * pivot_row;
      }
      ++pivots_since_refactor_;
    }
  }

  std::shared_ptr<const LpData> lp_;
  LpLimits limits_;
  int m_;
  int n_;
  std::vector<int> basic_;
  std::vector<ColumnStatus> status_;
  std::vector<int> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd x_;
  std::int64_t iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

}  // namespace

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

LpResult solve_lp(const StandardForm& sf, std::span<const Cut> cuts,
                  const ColumnBounds* bounds, const Basis* start,
                  const LpLimits& limits) {
  for (const Cut& cut : cuts) {
    if (cut.space != CutSpace::kStandard) {
      throw Error(ErrorCode::kInvalidParams, "LP cuts must be in standard space");
    }
    for (int i : cut.indices) {
      if (i < 0 || i >= sf.num_structural) {
        throw Error(ErrorCode::kInvalidParams, "cut index out of range");
      }
    }
  }
  PrimalSimplex simplex(assemble(sf, cuts, bounds), limits);
  return simplex.run(start);
}

TableauRow tableau_row(const LpResult& res, int column) {
  if (column < 0 || column >= static_cast<int>(res.position.size()) ||
      res.position[column] < 0) {
    throw Error(ErrorCode::kNotBasic,
                "column " + std::to_string(column) + " is not basic");
  }
  const LpData& lp = *res.lp;
  const Eigen::RowVectorXd rho = res.basis_inverse->row(res.position[column]);
  TableauRow row;
  row.basic_column = column;
  row.rhs = res.values[column];
  for (int j = 0; j < lp.num_cols; ++j) {
    if (res.position[j] >= 0) continue;
    TableauEntry entry;
    entry.column = j;
    entry.coefficient = rho.dot(lp.a.col(j));
    entry.complemented = res.basis.status[j] == ColumnStatus::kAtUpper;
    entry.fixed = lp.upper[j] - lp.lower[j] <= 0.0;
    if (entry.complemented) entry.coefficient = -entry.coefficient;
    row.entries.push_back(entry);
  }
  return row;
}

std::vector<FractionalBasic> fractional_basics(const LpResult& res,
                                               const StandardForm& sf,
                                               double int_tol) {
  std::vector<FractionalBasic> out;
  for (int j = 0; j < sf.num_structural; ++j) {
    if (!sf.integer[j]) continue;
    const double v = res.values[j];
    const double f = v - std::floor(v);
    if (f > int_tol && f < 1.0 - int_tol) out.push_back({j, f});
  }
  return out;
}

std::vector<double> reduced_costs(const LpResult& res) {
  const LpData& lp = *res.lp;
  Eigen::VectorXd cb(lp.num_rows);
  for (int r = 0; r < lp.num_rows; ++r) cb(r) = lp.c(res.basis.basic[r]);
  const Eigen::RowVectorXd y = cb.transpose() * *res.basis_inverse;
  std::vector<double> d(lp.num_cols, 0.0);
  for (int j = 0; j < lp.num_cols; ++j) {
    if (res.position[j] >= 0) continue;
    d[j] = lp.c(j) - y.dot(lp.a.col(j));
  }
  return d;
}

std::vector<bool> lp_integer_mask(const LpResult& res, const StandardForm& sf) {
  std::vector<bool> mask(res.lp->num_cols, false);
  for (int j = 0; j < sf.num_structural; ++j) mask[j] = sf.integer[j];
  return mask;
}

}  // namespace splitbranch
