#pragma once

#include <Eigen/Dense>

#include "svmcompare/pairdata.hpp"
#include "svmcompare/simplex.hpp"

namespace svmcompare {

struct LpSolution {
  Eigen::VectorXd w;
  double mu = 0.0;
  LpStatus status = LpStatus::kInfeasible;
};

// maximize mu >= 0 over (mu, w) subject to
//   mu <= 1 - |w'(x'_i - x_i)|        for ties
//   mu <= -1 + y_i w'(x'_i - x_i)      for inequality pairs
// Infeasible means the pairs are not linearly separable; a dataset without
// ties is unbounded whenever it is feasible.
LpSolution solve_max_margin_lp(const PairDataset& d,
                               const SimplexOptions& opts = {});

struct MappedMargin {
  Eigen::VectorXd w_hat;
  double mu_hat = 0.0;
};

// (w, mu) = (-u / beta, -1 / beta). Requires beta < 0.
MappedMargin qp_to_lp_margin(const Eigen::VectorXd& u, double beta);

// Largest violation of the LP constraints above (<= 0 means feasible).
// mu >= 0 is included.
double check_lp_feasible(const Eigen::VectorXd& w, double mu,
                         const PairDataset& d);

}  // namespace svmcompare
