#include "svmcompare/lpmargin.hpp"

#include <algorithm>
#include <cmath>

#include "svmcompare/error.hpp"

namespace svmcompare {

LpSolution solve_max_margin_lp(const PairDataset& d,
                               const SimplexOptions& opts) {
  if (d.empty()) throw Error("empty dataset");
  const Eigen::Index p = static_cast<Eigen::Index>(d.dim());
  const Eigen::Index rows =
      static_cast<Eigen::Index>(2 * d.count_equal() + d.count_unequal());

  // Variables: [w+ (p), w- (p), mu].
  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Zero(rows, 2 * p + 1);
  lp.b.resize(rows);
  lp.c = Eigen::VectorXd::Zero(2 * p + 1);
  lp.c[2 * p] = 1.0;

  Eigen::Index r = 0;
  auto add_row = [&](const Eigen::VectorXd& coef, double rhs) {
    lp.a.row(r).head(p) = coef.transpose();
    lp.a.row(r).segment(p, p) = -coef.transpose();
    lp.a(r, 2 * p) = 1.0;
    lp.b[r] = rhs;
    ++r;
  };
  for (const LabeledPair& pr : d) {
    const Eigen::VectorXd diff = pr.x_prime - pr.x;
    if (pr.y == Label::kEqual) {
      add_row(diff, 1.0);   // mu + w'd <= 1
      add_row(-diff, 1.0);  // mu - w'd <= 1
    } else {
      add_row(-to_int(pr.y) * diff, -1.0);  // mu - y w'd <= -1
    }
  }

  const SimplexResult res = solve_lp(lp, opts);
  LpSolution out;
  out.status = res.status;
  if (res.status == LpStatus::kOptimal) {
    out.w = res.x.head(p) - res.x.segment(p, p);
    out.mu = res.x[2 * p];
  }
  return out;
}

MappedMargin qp_to_lp_margin(const Eigen::VectorXd& u, double beta) {
  if (!(beta < 0.0)) throw Error("QP solution has beta >= 0; the LP mapping needs beta < 0");
  return {-u / beta, -1.0 / beta};
}

double check_lp_feasible(const Eigen::VectorXd& w, double mu,
                         const PairDataset& d) {
  if (!d.empty() && static_cast<std::size_t>(w.size()) != d.dim()) {
    throw Error("check_lp_feasible: dimension mismatch");
  }
  double worst = -mu;
  for (const LabeledPair& pr : d) {
    const double s = w.dot(pr.x_prime - pr.x);
    const double bound =
        pr.y == Label::kEqual ? 1.0 - std::abs(s) : -1.0 + to_int(pr.y) * s;
    worst = std::max(worst, mu - bound);
  }
  return worst;
}

}  // namespace svmcompare
