#include "svmcompare/kernel.hpp"

#include <cmath>

#include "svmcompare/error.hpp"

namespace svmcompare {

KernelSpec KernelSpec::gaussian(double gamma) {
  KernelSpec k{KernelFamily::kGaussian, gamma};
  k.validate();
  return k;
}

void KernelSpec::validate() const {
  if (family == KernelFamily::kGaussian &&
      !(gamma > 0.0 && std::isfinite(gamma))) {
    throw Error("gaussian kernel needs gamma > 0");
  }
}

std::string KernelSpec::name() const { return to_string(family); }

KernelFamily kernel_family_from_string(const std::string& s) {
  if (s == "linear") return KernelFamily::kLinear;
  if (s == "gaussian") return KernelFamily::kGaussian;
  throw Error("unknown kernel family '" + s + "'");
}

std::string to_string(KernelFamily f) {
  return f == KernelFamily::kLinear ? "linear" : "gaussian";
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& z) {
  if (x.size() != z.size()) throw Error("kernel_eval: dimension mismatch");
  return kernel_value(spec, x, z);
}

GramPair gram(const KernelSpec& spec, const Eigen::MatrixXd& first,
              const Eigen::MatrixXd& second) {
  spec.validate();
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw Error("gram: first/second shape mismatch");
  }
  const Eigen::Index m = first.rows();
  if (m == 0) throw Error("gram: empty dataset");

  Eigen::MatrixXd points(2 * m, first.cols());
  points << first, second;

  GramPair g;
  g.k.resize(2 * m, 2 * m);
  for (Eigen::Index j = 0; j < 2 * m; ++j) {
    for (Eigen::Index i = j; i < 2 * m; ++i) {
      const double v = kernel_value(spec, points.row(i), points.row(j));
      if (!std::isfinite(v)) throw Error("gram: non-finite kernel value");
      g.k(i, j) = v;
      g.k(j, i) = v;
    }
  }

  // M' K M, expanded blockwise: K22 - K21 - K12 + K11.
  const auto k11 = g.k.topLeftCorner(m, m);
  const auto k12 = g.k.topRightCorner(m, m);
  const auto k21 = g.k.bottomLeftCorner(m, m);
  const auto k22 = g.k.bottomRightCorner(m, m);
  g.k_tilde = k22 - k21 - k12 + k11;
  // Summation order differs between (i, j) and (j, i); average them.
  g.k_tilde = (0.5 * (g.k_tilde + g.k_tilde.transpose())).eval();
  return g;
}

GramPair gram(const KernelSpec& spec, const FlippedDataset& f) {
  return gram(spec, f.x_tilde, f.x_tilde_prime);
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const FlippedDataset& f,
                              const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != f.dim()) {
    throw Error("kernel_vector: dimension mismatch");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(f.rows());
  Eigen::VectorXd out(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out[i] = kernel_value(spec, f.x_tilde.row(i), x.transpose());
    out[m + i] = kernel_value(spec, f.x_tilde_prime.row(i), x.transpose());
  }
  return out;
}

}  // namespace svmcompare
