#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "svmcompare/kernel.hpp"
#include "svmcompare/pairdata.hpp"
#include "svmcompare/qpsolver.hpp"
#include "svmcompare/threshold.hpp"

namespace svmcompare {

enum class Algorithm { kCompare, kRank, kRank2 };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct TrainOptions {
  SolverOptions solver;
  // Standardize features before training. The fitted scaler is stored in the
  // model and applied to every input at prediction time.
  bool standardize = true;
};

// Trained SVMcompare model. Support pairs are stored in scaled space.
//   r(x) = sum_i y~_i v_i [k(x~_i, s(x)) - k(x~'_i, s(x))] / beta
struct CompareModel {
  static constexpr double kCanonicalTau = 1.0;

  KernelSpec kernel;
  Scaler scaler;
  Eigen::MatrixXd sv_x;
  Eigen::MatrixXd sv_x_prime;
  std::vector<int> sv_y;
  Eigen::VectorXd sv_v;
  double beta = 0.0;
  double cost = 0.0;
  std::size_t training_pairs = 0;
  std::size_t flipped_rows = 0;

  std::size_t dim() const { return scaler.dim(); }
  std::size_t support_size() const { return sv_y.size(); }
  double rank_score(const Eigen::VectorXd& x) const;
  int predict(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
              double tau = kCanonicalTau) const;
  // u = sum_i y~_i v_i (x~'_i - x~_i), linear kernel only.
  Eigen::VectorXd primal_weights() const;
};

// SVMrank (optionally on rank2-transformed pairs) with a fitted threshold.
//   r(x) = sum_i y_i v_i [k(x'_i, s(x)) - k(x_i, s(x))]
struct RankModel {
  Algorithm algorithm = Algorithm::kRank;
  KernelSpec kernel;
  Scaler scaler;
  Eigen::MatrixXd sv_x;
  Eigen::MatrixXd sv_x_prime;
  std::vector<int> sv_y;
  Eigen::VectorXd sv_v;
  double tau_hat = 0.0;
  double cost = 0.0;
  std::size_t training_pairs = 0;

  std::size_t dim() const { return scaler.dim(); }
  std::size_t support_size() const { return sv_y.size(); }
  double rank_score(const Eigen::VectorXd& x) const;
  int predict(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime) const;
  int predict(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
              double tau) const;
  Eigen::VectorXd primal_weights() const;
};

using Model = std::variant<CompareModel, RankModel>;

Algorithm algorithm_of(const Model& m);
std::size_t model_dim(const Model& m);
double rank_score(const Model& m, const Eigen::VectorXd& x);
// tau used for predictions: 1 for compare, tau_hat for rank models.
double comparison_threshold(const Model& m);
int predict(const Model& m, const Eigen::VectorXd& x,
            const Eigen::VectorXd& x_prime);
// r(x'_i) - r(x_i) for every pair.
std::vector<double> rank_differences(const Model& m, const PairDataset& d);
std::vector<int> predict_all(const Model& m, const PairDataset& d);

struct CompareFit {
  CompareModel model;
  FlippedDataset flipped;  // scaled space
  DualSolution dual;
};

// Scale, flip, build K and K~ = M'KM, solve the biased dual, keep v_i > 0.
// Throws Error without both ties and inequality pairs, or when the solver
// does not converge.
CompareFit fit_compare(const PairDataset& d, double cost,
                       const KernelSpec& kernel, const TrainOptions& opts = {});
CompareModel train_compare(const PairDataset& d, double cost,
                           const KernelSpec& kernel,
                           const TrainOptions& opts = {});

struct RankFit {
  RankModel model;
  PairDataset optimized;  // scaled pairs that entered the QP
  DualSolution dual;
};

// Unbiased dual over the inequality pairs only; tau_hat fitted on all pairs.
// The scaler is fitted on the inequality pairs so ties cannot influence r.
RankFit fit_rank(const PairDataset& d, double cost, const KernelSpec& kernel,
                 const TrainOptions& opts = {});
RankModel train_rank(const PairDataset& d, double cost,
                     const KernelSpec& kernel, const TrainOptions& opts = {});

// rank on rank2_transform(d); tau_hat fitted on the original pairs.
RankFit fit_rank2(const PairDataset& d, double cost, const KernelSpec& kernel,
                  const TrainOptions& opts = {});
RankModel train_rank2(const PairDataset& d, double cost,
                      const KernelSpec& kernel, const TrainOptions& opts = {});

Model train(Algorithm a, const PairDataset& d, double cost,
            const KernelSpec& kernel, const TrainOptions& opts = {});

// Minimizes training zero-one loss of t_tau(r_diff) over candidates
// {0} u midpoints of distinct sorted |r_diff| u {max |r_diff| + 1}.
// Ties go to the smallest tau.
double fit_threshold(std::span<const double> r_diffs, std::span<const int> labels);

enum class Metric { kZeroOne, kAuc };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

struct Grid {
  std::vector<double> costs;
  std::vector<double> gammas;

  // C in 10^-3..10^3 and gamma in 2^-7..2^4, 10 log-uniform points each.
  static Grid standard();
  std::size_t size() const { return costs.size() * gammas.size(); }
};

struct GridCell {
  double cost = 0.0;
  double gamma = 0.0;
  bool ok = false;
  std::string error;
  double val_zero_one = std::numeric_limits<double>::quiet_NaN();
  double val_auc = std::numeric_limits<double>::quiet_NaN();
  std::int64_t iterations = 0;
  std::size_t support_size = 0;
};

struct GridSearchOptions {
  Grid grid = Grid::standard();
  TrainOptions train;
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct GridSearchResult {
  std::vector<GridCell> cells;  // cost-major, both axes ascending
  std::size_t best = 0;
  Model model;
};

// Trains every (C, gamma) cell with a gaussian kernel and picks the minimum
// validation zero-one loss or maximum validation AUC. Ties go to the smaller
// C, then the smaller gamma. Failed cells are reported and skipped.
GridSearchResult grid_search(const PairDataset& train, const PairDataset& val,
                             Algorithm algo, Metric metric,
                             const GridSearchOptions& opts = {});

struct Evaluation {
  double zero_one = 0.0;
  double auc = std::numeric_limits<double>::quiet_NaN();
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t inversions = 0;
};

// AUC is NaN when d lacks ties or inequality pairs.
Evaluation evaluate(const Model& m, const PairDataset& d);

}  // namespace svmcompare
