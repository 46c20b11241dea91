#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "svmcompare/error.hpp"
#include "svmcompare/simulate.hpp"
#include "svmcompare/threshold.hpp"

using namespace svmcompare;
using testing::vec;

TEST_CASE("latent patterns") {
  CHECK(latent_rank(Pattern::kNorm2, vec({2, 0})) - latent_rank(Pattern::kNorm2, vec({0, 0})) ==
        4.0);
  CHECK(t_tau(latent_rank(Pattern::kNorm2, vec({2, 0})), 1.0) == 1);
  CHECK(latent_rank(Pattern::kNorm1, vec({1, -2})) == 9.0);
  CHECK(latent_rank(Pattern::kNorm2, vec({1, -2})) == 5.0);
  CHECK(latent_rank(Pattern::kNormInf, vec({1, -2})) == 4.0);
  CHECK(pattern_from_string("norminf") == Pattern::kNormInf);
  CHECK(to_string(Pattern::kNorm1) == "norm1");
  CHECK_THROWS_AS(pattern_from_string("norm3"), Error);
}

TEST_CASE("default noise level") { CHECK(SimSpec{}.sigma == 0.25); }

TEST_CASE("exact label proportions") {
  for (Pattern p : {Pattern::kNorm1, Pattern::kNorm2, Pattern::kNormInf}) {
    for (double rho : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      const PairDataset d = simulate_dataset({p, 100, rho, 0.25, 7});
      CHECK(d.size() == 100);
      CHECK(d.count_equal() == equality_quota(100, rho));
      CHECK(d.dim() == 2);
      for (const auto& pr : d) {
        CHECK(pr.x.cwiseAbs().maxCoeff() <= 3.0);
        CHECK(pr.x_prime.cwiseAbs().maxCoeff() <= 3.0);
      }
    }
  }
}

TEST_CASE("labels follow the noisy latent difference") {
  // With tiny noise the label is t_1 of the noiseless difference except in a
  // thin band around |diff| = 1.
  const PairDataset d = simulate_dataset({Pattern::kNorm2, 400, 0.5, 1e-9, 3});
  for (const auto& p : d) {
    const double diff = latent_rank(Pattern::kNorm2, p.x_prime) - latent_rank(Pattern::kNorm2, p.x);
    if (std::abs(std::abs(diff) - 1.0) > 1e-6) CHECK(to_int(p.y) == t_tau(diff, 1.0));
  }
}

TEST_CASE("simulation is deterministic in the seed") {
  const PairDataset a = simulate_dataset({Pattern::kNorm1, 50, 0.5, 0.25, 11});
  const PairDataset b = simulate_dataset({Pattern::kNorm1, 50, 0.5, 0.25, 11});
  const PairDataset c = simulate_dataset({Pattern::kNorm1, 50, 0.5, 0.25, 12});
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    differs |= a[i].x != c[i].x;
  }
  CHECK(differs);
}

TEST_CASE("invalid noise") {
  CHECK_THROWS_AS(simulate_dataset({Pattern::kNorm2, 10, 0.5, 0.0, 1}), Error);
}

TEST_CASE("separable generator") {
  const PairDataset d = make_separable_dataset(20, 5);
  CHECK(d.size() == 20);
  CHECK(d.count_equal() == 10);
  CHECK_THROWS_AS(make_separable_dataset(1, 5), Error);
}
