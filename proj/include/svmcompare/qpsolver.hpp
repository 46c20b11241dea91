#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace svmcompare {

// minimize 1/2 v'Qv - v'1  subject to 0 <= v <= C and, when y is non-empty,
// sum_i v_i y_i = 0. For the comparison problem Q = Y K~ Y.
struct DualProblem {
  Eigen::MatrixXd q;
  std::vector<int> y;  // empty for the unbiased (box-only) problem
  double c = 1.0;

  bool biased() const { return !y.empty(); }
  std::size_t size() const { return static_cast<std::size_t>(q.rows()); }
  // Throws Error on shape, label, cost, or symmetry problems.
  void validate() const;
};

struct SolverOptions {
  double tol = 1e-3;
  std::int64_t max_iter = 10'000'000;
  // Reject Q with an eigenvalue below -1e-8 * max(1, max diag).
  bool check_psd = true;
  // Record the objective after every update in DualSolution::trace.
  bool record_trace = false;
};

struct DualSolution {
  Eigen::VectorXd v;
  double beta = 0.0;
  double objective = 0.0;
  double kkt_violation = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

// SMO with maximal-violating-pair working set selection.
DualSolution solve_dual_biased(const DualProblem& p,
                               const SolverOptions& opts = {});

// Greedy coordinate descent with exact per-coordinate clipping.
DualSolution solve_dual_unbiased(const Eigen::MatrixXd& q, double c,
                                 const SolverOptions& opts = {});

// Exact solution by enumerating every {0, C, free} assignment. m <= 8.
DualSolution oracle_solve(const DualProblem& p);

// Biased: max-violating-pair gap. Unbiased: largest projected gradient.
// Zero at an exact optimum.
double kkt_violation(const DualProblem& p, const DualSolution& s);

double dual_objective(const Eigen::MatrixXd& q, const Eigen::VectorXd& v);

// Bias from complementary slackness: mean of -y_i G_i over free variables,
// or the midpoint of the feasible interval when none are free.
double recover_bias(const DualProblem& p, const Eigen::VectorXd& v,
                    const Eigen::VectorXd& gradient);

}  // namespace svmcompare
