#include "svmcompare/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "svmcompare/error.hpp"

namespace svmcompare {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Rows 0..m-1 hold constraints, row m the objective in "z - c'x = 0" form.
// The last column is the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index vars, const SimplexOptions& opts)
      : t_(Eigen::MatrixXd::Zero(rows + 1, vars + 1)),
        basis_(static_cast<std::size_t>(rows), -1),
        opts_(opts) {}

  Eigen::MatrixXd& t() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }
  std::int64_t pivots() const { return pivots_; }
  bool used_bland() const { return used_bland_; }

  void pivot(Eigen::Index r, Eigen::Index col) {
    t_.row(r) /= t_(r, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = col;
    ++pivots_;
  }

  // Eliminates basic columns from the objective row.
  void price_out() {
    const Eigen::Index obj = rows();
    for (Eigen::Index r = 0; r < rows(); ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      const double f = t_(obj, b);
      if (f != 0.0) t_.row(obj) -= f * t_.row(r);
    }
  }

  // Runs pivots over columns [0, allowed). Returns false when unbounded.
  bool optimize(Eigen::Index allowed) {
    const Eigen::Index obj = rows();
    const Eigen::Index rhs = rhs_col();
    int degenerate = 0;
    while (true) {
      Eigen::Index enter = -1;
      double best = -opts_.eps;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t_(obj, j) < best) {
          enter = j;
          if (bland_) break;
          best = t_(obj, j);
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a <= opts_.eps) continue;
        const double q = std::max(t_(r, rhs), 0.0) / a;
        if (q < ratio - 1e-12 ||
            (std::abs(q - ratio) <= 1e-12 &&
             basis_[static_cast<std::size_t>(r)] <
                 basis_[static_cast<std::size_t>(leave)])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave < 0) return false;

      if (ratio <= opts_.eps) {
        if (++degenerate > opts_.degenerate_limit && !bland_) {
          bland_ = true;
          used_bland_ = true;
        }
      } else {
        degenerate = 0;
      }
      if (pivots_ >= opts_.max_pivots) {
        throw Error("simplex: pivot limit reached (cycling?)");
      }
      pivot(leave, enter);
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  SimplexOptions opts_;
  std::int64_t pivots_ = 0;
  bool bland_ = false;
  bool used_bland_ = false;
};

}  // namespace

SimplexResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  const Eigen::Index m = lp.a.rows();
  const Eigen::Index n = lp.a.cols();
  if (lp.b.size() != m || lp.c.size() != n) {
    throw Error("simplex: inconsistent problem dimensions");
  }
  if (!lp.a.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    throw Error("simplex: non-finite coefficients");
  }

  std::vector<Eigen::Index> negative_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (lp.b[i] < 0.0) negative_rows.push_back(i);
  }
  const Eigen::Index n_art = static_cast<Eigen::Index>(negative_rows.size());
  const Eigen::Index slack0 = n;
  const Eigen::Index art0 = n + m;

  Tableau tab(m, n + m + n_art, opts);
  Eigen::MatrixXd& t = tab.t();
  const Eigen::Index rhs = tab.rhs_col();
  Eigen::Index next_art = art0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * lp.a.row(i);
    t(i, slack0 + i) = sign;
    t(i, rhs) = sign * lp.b[i];
    if (sign > 0.0) {
      tab.basis()[static_cast<std::size_t>(i)] = slack0 + i;
    } else {
      t(i, next_art) = 1.0;
      tab.basis()[static_cast<std::size_t>(i)] = next_art++;
    }
  }

  SimplexResult res;
  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    t.row(m).setZero();
    t.row(m).segment(art0, n_art).setOnes();
    tab.price_out();
    tab.optimize(art0 + n_art);
    const double scale = 1.0 + lp.b.cwiseAbs().maxCoeff();
    if (t(m, rhs) < -1e-9 * scale) {
      res.status = LpStatus::kInfeasible;
      res.pivots = tab.pivots();
      res.used_bland = tab.used_bland();
      return res;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index r = 0; r < m; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < art0) continue;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(t(r, j)) > opts.eps) {
          tab.pivot(r, j);
          break;
        }
      }
    }
  }

  // Phase 2 on the original objective; artificial columns may not re-enter.
  t.row(m).setZero();
  t.row(m).head(n) = -lp.c.transpose();
  tab.price_out();
  const bool bounded = tab.optimize(art0);

  res.pivots = tab.pivots();
  res.used_bland = tab.used_bland();
  if (!bounded) {
    res.status = LpStatus::kUnbounded;
    return res;
  }
  res.status = LpStatus::kOptimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index b = tab.basis()[static_cast<std::size_t>(r)];
    if (b < n) res.x[b] = std::max(t(r, rhs), 0.0);
  }
  res.objective = lp.c.dot(res.x);
  return res;
}

}  // namespace svmcompare
