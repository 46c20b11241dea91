#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "svmcompare/pairdata.hpp"

namespace svmcompare {

enum class KernelFamily { kLinear, kGaussian };

// linear: x'z. gaussian: exp(-gamma * |x - z|^2).
struct KernelSpec {
  KernelFamily family = KernelFamily::kLinear;
  double gamma = 1.0;

  static KernelSpec linear() { return {KernelFamily::kLinear, 1.0}; }
  static KernelSpec gaussian(double gamma);

  // Throws Error when gamma is not a positive finite number for gaussian.
  void validate() const;
  std::string name() const;
};

KernelFamily kernel_family_from_string(const std::string& s);
std::string to_string(KernelFamily f);

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& z);

// Unchecked evaluation on arbitrary same-shaped Eigen expressions.
template <typename A, typename B>
double kernel_value(const KernelSpec& spec, const Eigen::MatrixBase<A>& x,
                    const Eigen::MatrixBase<B>& z) {
  if (spec.family == KernelFamily::kLinear) return x.dot(z);
  return std::exp(-spec.gamma * (x - z).squaredNorm());
}

// k: the 2m x 2m kernel matrix over [x~_1..x~_m, x~'_1..x~'_m].
// k_tilde: M' K M with M = [-I; I], the kernel between difference vectors.
struct GramPair {
  Eigen::MatrixXd k;
  Eigen::MatrixXd k_tilde;
};

GramPair gram(const KernelSpec& spec, const FlippedDataset& f);

// Same as above for arbitrary row-aligned (first, second) pairs.
GramPair gram(const KernelSpec& spec, const Eigen::MatrixXd& first,
              const Eigen::MatrixXd& second);

// [kappa(x~_1, x) .. kappa(x~_m, x), kappa(x~'_1, x) .. kappa(x~'_m, x)]
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const FlippedDataset& f,
                              const Eigen::VectorXd& x);

}  // namespace svmcompare
