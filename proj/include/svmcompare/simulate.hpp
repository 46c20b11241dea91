#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "svmcompare/pairdata.hpp"

namespace svmcompare {

// Latent ranking functions r(x) = |x|_j^2 for j in {1, 2, inf}.
enum class Pattern { kNorm1, kNorm2, kNormInf };

std::string to_string(Pattern p);
Pattern pattern_from_string(const std::string& s);

double latent_rank(Pattern p, const Eigen::VectorXd& x);

struct SimSpec {
  Pattern pattern = Pattern::kNorm2;
  std::size_t n = 100;
  double rho = 0.5;
  double sigma = 0.25;
  std::uint64_t seed = 1;
};

// Points uniform on [-3, 3]^2, labels y = t_1(r(x') - r(x) + eps) with
// eps ~ N(0, sigma). Draws are rejected once a label class has its quota, so
// the output has exactly equality_quota(n, rho) ties.
PairDataset simulate_dataset(const SimSpec& s);

// A linearly separable 2D dataset with n pairs, about half ties. Ties have
// |w0'(x' - x)| < 0.5 and inequality pairs |w0'(x' - x)| > 1.5 for a random
// unit direction w0.
PairDataset make_separable_dataset(std::size_t n, std::uint64_t seed);

}  // namespace svmcompare
