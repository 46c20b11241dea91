#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "svmcompare/error.hpp"
#include "svmcompare/lpmargin.hpp"
#include "svmcompare/simulate.hpp"

using namespace svmcompare;
using testing::pair;
using testing::vec;

namespace {

// For a unit direction e and w = s e, the best scale balances the tightest
// tie row 1 - s A with the tightest inequality row -1 + s B, where
// A = max |e'd| over ties and B = min y e'd over inequality pairs; the margin
// is then (B - A) / (A + B). Scanning e over the circle bounds the LP optimum.
double margin_by_angle_scan(const PairDataset& d, int steps) {
  double best = -INFINITY;
  for (int k = 0; k < steps; ++k) {
    const double t = 2.0 * std::numbers::pi * k / steps;
    const Eigen::Vector2d e(std::cos(t), std::sin(t));
    double a = 0.0, b = INFINITY;
    for (const auto& p : d) {
      const double s = e.dot(p.x_prime - p.x);
      if (p.y == Label::kEqual) {
        a = std::max(a, std::abs(s));
      } else {
        b = std::min(b, to_int(p.y) * s);
      }
    }
    if (b > 0.0) best = std::max(best, (b - a) / (a + b));
  }
  return best;
}

}  // namespace

TEST_CASE("1D toy: w = 5/6, mu = 2/3") {
  const LpSolution s = solve_max_margin_lp(testing::toy_1d());
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.w[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
  CHECK(s.mu == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(check_lp_feasible(s.w, s.mu, testing::toy_1d()) <= 1e-8);
}

TEST_CASE("contradictory pairs are infeasible") {
  const PairDataset d({pair({0, 0}, {1, 1}, 1), pair({0, 0}, {1, 1}, -1)});
  CHECK(solve_max_margin_lp(d).status == LpStatus::kInfeasible);
}

TEST_CASE("no ties makes the margin unbounded") {
  const PairDataset d({pair({0}, {1}, 1)});
  CHECK(solve_max_margin_lp(d).status == LpStatus::kUnbounded);
}

TEST_CASE("QP to LP margin map") {
  const MappedMargin toy = qp_to_lp_margin(vec({1.25}), -1.5);
  CHECK(toy.w_hat[0] == doctest::Approx(5.0 / 6.0));
  CHECK(toy.mu_hat == doctest::Approx(2.0 / 3.0));
  const MappedMargin m = qp_to_lp_margin(vec({2, 0}), -2.0);
  CHECK(m.w_hat[0] == doctest::Approx(1.0));
  CHECK(m.w_hat[1] == 0.0);
  CHECK(m.mu_hat == doctest::Approx(0.5));
  CHECK_THROWS_AS(qp_to_lp_margin(vec({1}), 0.0), Error);
  CHECK_THROWS_AS(qp_to_lp_margin(vec({1}), 0.5), Error);
}

TEST_CASE("feasibility check by hand") {
  const PairDataset d({pair({0}, {1}, 1), pair({0}, {0.1}, 0)});
  // mu <= -1 + 0 for the inequality pair: violation 2
  CHECK(check_lp_feasible(vec({0}), 1.0, d) >= 2.0);
  CHECK(check_lp_feasible(vec({0}), -0.5, d) == doctest::Approx(0.5));
  CHECK_THROWS_AS(check_lp_feasible(vec({0, 1}), 0.0, d), Error);
}

TEST_CASE("LP optimum agrees with an angle scan on separable 2D data") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const PairDataset d = make_separable_dataset(16, seed);
    const LpSolution s = solve_max_margin_lp(d);
    REQUIRE(s.status == LpStatus::kOptimal);
    CAPTURE(seed);
    CHECK(check_lp_feasible(s.w, s.mu, d) <= 1e-8);
    const double scan = margin_by_angle_scan(d, 200000);
    CHECK(s.mu >= scan - 1e-9);
    CHECK(s.mu <= scan + 1e-4);
  }
}
