#include "svmcompare/qpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svmcompare/error.hpp"

namespace svmcompare {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for degenerate directions
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_psd(const Eigen::MatrixXd& q) {
  const double diag = std::max(1.0, q.diagonal().cwiseAbs().maxCoeff());
  const Eigen::Index m = q.rows();
  Eigen::MatrixXd shifted = q;
  shifted.diagonal().array() += 1e-8 * diag;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw Error("dual problem matrix is not positive semidefinite (m=" +
                std::to_string(m) + ")");
  }
}

struct Selection {
  Eigen::Index up = -1;
  Eigen::Index low = -1;
  double gap = 0.0;
};

// I_up = {y=+1, v<C} u {y=-1, v>0}; I_low = {y=+1, v>0} u {y=-1, v<C}.
// Scans ascending with strict comparisons so ties go to the lowest index.
Selection select_pair(const std::vector<int>& y, const Eigen::VectorXd& v,
                      const Eigen::VectorXd& g, double c) {
  Selection s;
  double gmax = -kInf;
  double gmin = kInf;
  for (Eigen::Index t = 0; t < v.size(); ++t) {
    const int yt = y[static_cast<std::size_t>(t)];
    const double val = -yt * g[t];
    const bool up = yt > 0 ? v[t] < c : v[t] > 0.0;
    const bool low = yt > 0 ? v[t] > 0.0 : v[t] < c;
    if (up && val > gmax) {
      gmax = val;
      s.up = t;
    }
    if (low && val < gmin) {
      gmin = val;
      s.low = t;
    }
  }
  if (s.up >= 0 && s.low >= 0) s.gap = std::max(0.0, gmax - gmin);
  return s;
}

double projected_gradient(double v, double g, double c) {
  if (v <= 0.0) return std::min(g, 0.0);
  if (v >= c) return std::max(g, 0.0);
  return g;
}

double max_projected_gradient(const Eigen::VectorXd& v,
                              const Eigen::VectorXd& g, double c,
                              Eigen::Index* arg) {
  double best = 0.0;
  Eigen::Index at = -1;
  for (Eigen::Index t = 0; t < v.size(); ++t) {
    const double pg = std::abs(projected_gradient(v[t], g[t], c));
    if (pg > best) {
      best = pg;
      at = t;
    }
  }
  if (arg != nullptr) *arg = at;
  return best;
}

}  // namespace

void DualProblem::validate() const {
  if (q.rows() == 0 || q.rows() != q.cols()) {
    throw Error("dual problem needs a non-empty square matrix");
  }
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("cost C must be positive");
  if (!q.allFinite()) throw Error("dual problem matrix has non-finite entries");
  if (biased()) {
    if (y.size() != size()) throw Error("label count does not match matrix");
    for (int yi : y) {
      if (yi != 1 && yi != -1) throw Error("dual labels must be +1 or -1");
    }
  }
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error("dual problem matrix is not symmetric");
  }
}

double dual_objective(const Eigen::MatrixXd& q, const Eigen::VectorXd& v) {
  return 0.5 * v.dot(q * v) - v.sum();
}

double recover_bias(const DualProblem& p, const Eigen::VectorXd& v,
                    const Eigen::VectorXd& gradient) {
  double sum_free = 0.0;
  std::size_t n_free = 0;
  double lower = -kInf;
  double upper = kInf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int yi = p.y[static_cast<std::size_t>(i)];
    const double r = -yi * gradient[i];
    if (v[i] > 0.0 && v[i] < p.c) {
      sum_free += r;
      ++n_free;
    } else if ((yi > 0) == (v[i] <= 0.0)) {
      lower = std::max(lower, r);
    } else {
      upper = std::min(upper, r);
    }
  }
  if (n_free > 0) return sum_free / static_cast<double>(n_free);
  if (std::isinf(lower)) return upper;
  if (std::isinf(upper)) return lower;
  return 0.5 * (lower + upper);
}

double kkt_violation(const DualProblem& p, const DualSolution& s) {
  const Eigen::VectorXd g = p.q * s.v - Eigen::VectorXd::Ones(s.v.size());
  if (p.biased()) return select_pair(p.y, s.v, g, p.c).gap;
  return max_projected_gradient(s.v, g, p.c, nullptr);
}

DualSolution solve_dual_biased(const DualProblem& p, const SolverOptions& opts) {
  p.validate();
  if (!p.biased()) throw Error("solve_dual_biased needs labels");
  if (opts.check_psd) check_psd(p.q);

  const Eigen::Index m = p.q.rows();
  const double c = p.c;
  const Eigen::MatrixXd& q = p.q;
  DualSolution s;
  s.v = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(m, -1.0);
  if (opts.record_trace) s.trace.push_back(0.0);

  while (true) {
    const Selection sel = select_pair(p.y, s.v, g, c);
    s.kkt_violation = sel.gap;
    if (sel.up < 0 || sel.low < 0 || sel.gap <= opts.tol) {
      s.converged = true;
      break;
    }
    if (s.iterations >= opts.max_iter) break;
    ++s.iterations;

    const Eigen::Index i = sel.up;
    const Eigen::Index j = sel.low;
    const int yi = p.y[static_cast<std::size_t>(i)];
    const int yj = p.y[static_cast<std::size_t>(j)];
    const double old_vi = s.v[i];
    const double old_vj = s.v[j];
    double vi = old_vi;
    double vj = old_vj;

    if (yi != yj) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-g[i] - g[j]) / quad;
      const double diff = vi - vj;
      vi += delta;
      vj += delta;
      if (diff > 0.0) {
        if (vj < 0.0) {
          vj = 0.0;
          vi = diff;
        }
      } else if (vi < 0.0) {
        vi = 0.0;
        vj = -diff;
      }
      if (diff > 0.0) {
        if (vi > c) {
          vi = c;
          vj = c - diff;
        }
      } else if (vj > c) {
        vj = c;
        vi = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (g[i] - g[j]) / quad;
      const double sum = vi + vj;
      vi -= delta;
      vj += delta;
      if (sum > c) {
        if (vi > c) {
          vi = c;
          vj = sum - c;
        } else if (vj > c) {
          vj = c;
          vi = sum - c;
        }
      } else {
        if (vj < 0.0) {
          vj = 0.0;
          vi = sum;
        } else if (vi < 0.0) {
          vi = 0.0;
          vj = sum;
        }
      }
    }

    s.v[i] = vi;
    s.v[j] = vj;
    const double dvi = vi - old_vi;
    const double dvj = vj - old_vj;
    g.noalias() += q.col(i) * dvi + q.col(j) * dvj;
    if (opts.record_trace) s.trace.push_back(0.5 * s.v.dot(g - Eigen::VectorXd::Ones(m)));
  }

  s.beta = recover_bias(p, s.v, g);
  s.objective = 0.5 * s.v.dot(g - Eigen::VectorXd::Ones(m));
  return s;
}

DualSolution solve_dual_unbiased(const Eigen::MatrixXd& q, double c,
                                 const SolverOptions& opts) {
  DualProblem p{q, {}, c};
  p.validate();
  if (opts.check_psd) check_psd(q);

  const Eigen::Index m = q.rows();
  DualSolution s;
  s.v = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(m, -1.0);
  if (opts.record_trace) s.trace.push_back(0.0);

  while (true) {
    Eigen::Index t = -1;
    s.kkt_violation = max_projected_gradient(s.v, g, c, &t);
    if (t < 0 || s.kkt_violation <= opts.tol) {
      s.converged = true;
      break;
    }
    if (s.iterations >= opts.max_iter) break;
    ++s.iterations;

    const double qtt = q(t, t);
    double vt;
    if (qtt > 0.0) {
      vt = std::clamp(s.v[t] - g[t] / qtt, 0.0, c);
    } else {
      vt = g[t] < 0.0 ? c : 0.0;
    }
    const double dv = vt - s.v[t];
    s.v[t] = vt;
    g.noalias() += q.col(t) * dv;
    if (opts.record_trace) s.trace.push_back(0.5 * s.v.dot(g - Eigen::VectorXd::Ones(m)));
  }

  s.objective = 0.5 * s.v.dot(g - Eigen::VectorXd::Ones(m));
  return s;
}

DualSolution oracle_solve(const DualProblem& p) {
  p.validate();
  const std::size_t m = p.size();
  if (m > 8) throw Error("oracle limited to m <= 8");
  const double c = p.c;
  const double box_tol = 1e-10 * std::max(1.0, c);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m));

  std::size_t combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos *= 3;

  DualSolution best;
  best.objective = kInf;
  std::vector<int> state(m);  // 0: at zero, 1: at C, 2: free

  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    std::vector<Eigen::Index> free;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      state[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (state[i] == 1) v[static_cast<Eigen::Index>(i)] = c;
      if (state[i] == 2) free.push_back(static_cast<Eigen::Index>(i));
    }

    const Eigen::Index nf = static_cast<Eigen::Index>(free.size());
    const Eigen::Index extra = p.biased() ? 1 : 0;
    if (nf > 0) {
      // [Q_FF y_F; y_F' 0] [v_F; lambda] = [1 - Q_FB v_B; -y_B' v_B]
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nf + extra, nf + extra);
      Eigen::VectorXd rhs(nf + extra);
      const Eigen::VectorXd qv_bound = p.q * v;
      for (Eigen::Index r = 0; r < nf; ++r) {
        for (Eigen::Index k = 0; k < nf; ++k) a(r, k) = p.q(free[r], free[k]);
        rhs[r] = 1.0 - qv_bound[free[r]];
        if (extra) {
          const double yr = p.y[static_cast<std::size_t>(free[r])];
          a(r, nf) = yr;
          a(nf, r) = yr;
        }
      }
      if (extra) {
        double yv = 0.0;
        for (std::size_t i = 0; i < m; ++i) yv += p.y[i] * v[static_cast<Eigen::Index>(i)];
        rhs[nf] = -yv;
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
      const Eigen::VectorXd sol = cod.solve(rhs);
      if ((a * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
      bool inside = true;
      for (Eigen::Index r = 0; r < nf; ++r) {
        double val = sol[r];
        if (val < -box_tol || val > c + box_tol) {
          inside = false;
          break;
        }
        v[free[r]] = std::clamp(val, 0.0, c);
      }
      if (!inside) continue;
    }
    if (p.biased()) {
      double yv = 0.0;
      for (std::size_t i = 0; i < m; ++i) yv += p.y[i] * v[static_cast<Eigen::Index>(i)];
      if (std::abs(yv) > box_tol * static_cast<double>(m)) continue;
    }
    const double obj = dual_objective(p.q, v);
    if (obj < best.objective) {
      best.objective = obj;
      best.v = v;
    }
  }

  if (!std::isfinite(best.objective)) throw Error("oracle found no feasible point");
  best.converged = true;
  const Eigen::VectorXd g = p.q * best.v - ones;
  if (p.biased()) best.beta = recover_bias(p, best.v, g);
  best.kkt_violation = kkt_violation(p, best);
  return best;
}

}  // namespace svmcompare
