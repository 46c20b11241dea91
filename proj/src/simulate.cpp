#include "svmcompare/simulate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "svmcompare/error.hpp"
#include "svmcompare/threshold.hpp"

namespace svmcompare {

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::kNorm1:
      return "norm1";
    case Pattern::kNorm2:
      return "norm2";
    case Pattern::kNormInf:
      return "norminf";
  }
  return "unknown";
}

Pattern pattern_from_string(const std::string& s) {
  if (s == "norm1") return Pattern::kNorm1;
  if (s == "norm2") return Pattern::kNorm2;
  if (s == "norminf") return Pattern::kNormInf;
  throw Error("unknown pattern '" + s + "'");
}

double latent_rank(Pattern p, const Eigen::VectorXd& x) {
  double norm = 0.0;
  switch (p) {
    case Pattern::kNorm1:
      norm = x.lpNorm<1>();
      break;
    case Pattern::kNorm2:
      return x.squaredNorm();
    case Pattern::kNormInf:
      norm = x.lpNorm<Eigen::Infinity>();
      break;
  }
  return norm * norm;
}

PairDataset simulate_dataset(const SimSpec& s) {
  if (!(s.sigma > 0.0)) throw Error("sigma must be positive");
  std::size_t ties_left = equality_quota(s.n, s.rho);
  std::size_t unequal_left = s.n - ties_left;

  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::normal_distribution<double> noise(0.0, s.sigma);

  std::vector<LabeledPair> pairs;
  pairs.reserve(s.n);
  while (ties_left + unequal_left > 0) {
    Eigen::VectorXd x(2), xp(2);
    x << coord(rng), coord(rng);
    xp << coord(rng), coord(rng);
    const double eps = noise(rng);
    const int y = t_tau(latent_rank(s.pattern, xp) - latent_rank(s.pattern, x) + eps, 1.0);
    std::size_t& left = y == 0 ? ties_left : unequal_left;
    if (left == 0) continue;
    --left;
    pairs.push_back({std::move(x), std::move(xp), label_from_int(y)});
  }
  return PairDataset(std::move(pairs));
}

PairDataset make_separable_dataset(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error("separable dataset needs n >= 2");
  constexpr double kTieBand = 0.5;
  constexpr double kGap = 1.5;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double theta = angle(rng);
  Eigen::Vector2d w0(std::cos(theta), std::sin(theta));

  std::size_t ties_left = n / 2;
  std::size_t unequal_left = n - ties_left;
  std::vector<LabeledPair> pairs;
  while (ties_left + unequal_left > 0) {
    Eigen::VectorXd x(2), xp(2);
    x << coord(rng), coord(rng);
    xp << coord(rng), coord(rng);
    const double s = w0.dot(xp - x);
    if (std::abs(s) < kTieBand && ties_left > 0) {
      --ties_left;
      pairs.push_back({std::move(x), std::move(xp), Label::kEqual});
    } else if (std::abs(s) > kGap && unequal_left > 0) {
      --unequal_left;
      pairs.push_back({std::move(x), std::move(xp),
                       s > 0 ? Label::kSecondBetter : Label::kFirstBetter});
    }
  }
  return PairDataset(std::move(pairs));
}

}  // namespace svmcompare
