#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace svmcompare {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus s);

// maximize c'x  subject to  A x <= b,  x >= 0.  b may have negative entries.
struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct SimplexResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  std::int64_t pivots = 0;
  // True when Bland's rule had to take over from the largest-coefficient rule.
  bool used_bland = false;
};

struct SimplexOptions {
  double eps = 1e-9;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_limit = 50;
  std::int64_t max_pivots = 100'000;
};

// Dense two-phase tableau simplex. Throws Error if the pivot limit is hit.
SimplexResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace svmcompare
