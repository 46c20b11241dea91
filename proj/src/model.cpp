#include "svmcompare/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "svmcompare/error.hpp"
#include "svmcompare/eval.hpp"

namespace svmcompare {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kCompare:
      return "compare";
    case Algorithm::kRank:
      return "rank";
    case Algorithm::kRank2:
      return "rank2";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "compare") return Algorithm::kCompare;
  if (s == "rank") return Algorithm::kRank;
  if (s == "rank2") return Algorithm::kRank2;
  throw Error("unknown algorithm '" + s + "'");
}

std::string to_string(Metric m) {
  return m == Metric::kZeroOne ? "zero_one" : "auc";
}

Metric metric_from_string(const std::string& s) {
  if (s == "zero_one") return Metric::kZeroOne;
  if (s == "auc") return Metric::kAuc;
  throw Error("unknown metric '" + s + "'");
}

namespace {

// sum_i coef_i [k(plus_i, z) - k(minus_i, z)]
double expansion(const KernelSpec& kernel, const Eigen::MatrixXd& plus,
                 const Eigen::MatrixXd& minus, const Eigen::VectorXd& coef,
                 const Eigen::VectorXd& z) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < coef.size(); ++i) {
    r += coef[i] * (kernel_value(kernel, plus.row(i), z.transpose()) -
                    kernel_value(kernel, minus.row(i), z.transpose()));
  }
  return r;
}

Eigen::VectorXd signed_coefficients(const std::vector<int>& y,
                                    const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = y[static_cast<std::size_t>(i)] * v[i];
  }
  return out;
}

void check_dim(std::size_t expected, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != expected) {
    throw Error("feature dimension mismatch: model has " +
                std::to_string(expected) + ", input has " +
                std::to_string(x.size()));
  }
}

Eigen::VectorXd weights_from_support(const KernelSpec& kernel,
                                     const Eigen::MatrixXd& plus,
                                     const Eigen::MatrixXd& minus,
                                     const Eigen::VectorXd& coef,
                                     std::size_t dim) {
  if (kernel.family != KernelFamily::kLinear) {
    throw Error("primal weights exist only for the linear kernel");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < coef.size(); ++i) {
    u += coef[i] * (plus.row(i) - minus.row(i)).transpose();
  }
  return u;
}

Scaler make_scaler(const PairDataset& d, bool standardize) {
  return standardize ? fit_scaler(d) : Scaler::identity(d.dim());
}

}  // namespace

double CompareModel::rank_score(const Eigen::VectorXd& x) const {
  check_dim(dim(), x);
  if (sv_y.empty()) return 0.0;
  const Eigen::VectorXd z = scaler.apply(x);
  // y~_i v_i [k(x~_i, z) - k(x~'_i, z)] / beta
  return expansion(kernel, sv_x, sv_x_prime, signed_coefficients(sv_y, sv_v), z) /
         beta;
}

int CompareModel::predict(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& x_prime, double tau) const {
  return t_tau(rank_score(x_prime) - rank_score(x), tau);
}

Eigen::VectorXd CompareModel::primal_weights() const {
  return weights_from_support(kernel, sv_x_prime, sv_x,
                              signed_coefficients(sv_y, sv_v), dim());
}

double RankModel::rank_score(const Eigen::VectorXd& x) const {
  check_dim(dim(), x);
  if (sv_y.empty()) return 0.0;
  const Eigen::VectorXd z = scaler.apply(x);
  return expansion(kernel, sv_x_prime, sv_x, signed_coefficients(sv_y, sv_v), z);
}

int RankModel::predict(const Eigen::VectorXd& x,
                       const Eigen::VectorXd& x_prime) const {
  return predict(x, x_prime, tau_hat);
}

int RankModel::predict(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime,
                       double tau) const {
  return t_tau(rank_score(x_prime) - rank_score(x), tau);
}

Eigen::VectorXd RankModel::primal_weights() const {
  return weights_from_support(kernel, sv_x_prime, sv_x,
                              signed_coefficients(sv_y, sv_v), dim());
}

Algorithm algorithm_of(const Model& m) {
  if (const auto* r = std::get_if<RankModel>(&m)) return r->algorithm;
  return Algorithm::kCompare;
}

std::size_t model_dim(const Model& m) {
  return std::visit([](const auto& mm) { return mm.dim(); }, m);
}

double rank_score(const Model& m, const Eigen::VectorXd& x) {
  return std::visit([&](const auto& mm) { return mm.rank_score(x); }, m);
}

double comparison_threshold(const Model& m) {
  if (const auto* r = std::get_if<RankModel>(&m)) return r->tau_hat;
  return CompareModel::kCanonicalTau;
}

int predict(const Model& m, const Eigen::VectorXd& x,
            const Eigen::VectorXd& x_prime) {
  return t_tau(rank_score(m, x_prime) - rank_score(m, x), comparison_threshold(m));
}

std::vector<double> rank_differences(const Model& m, const PairDataset& d) {
  std::vector<double> out;
  out.reserve(d.size());
  for (const LabeledPair& p : d) {
    out.push_back(rank_score(m, p.x_prime) - rank_score(m, p.x));
  }
  return out;
}

std::vector<int> predict_all(const Model& m, const PairDataset& d) {
  const double tau = comparison_threshold(m);
  std::vector<int> out;
  out.reserve(d.size());
  for (double diff : rank_differences(m, d)) out.push_back(t_tau(diff, tau));
  return out;
}

CompareFit fit_compare(const PairDataset& d, double cost,
                       const KernelSpec& kernel, const TrainOptions& opts) {
  if (d.empty()) throw Error("empty dataset");
  if (d.count_equal() == 0 || d.count_unequal() == 0) {
    throw Error("both classes required: need equality and inequality pairs");
  }
  kernel.validate();

  CompareFit fit;
  CompareModel& model = fit.model;
  model.kernel = kernel;
  model.cost = cost;
  model.scaler = make_scaler(d, opts.standardize);
  model.training_pairs = d.size();

  fit.flipped = flip(model.scaler.apply(d));
  const FlippedDataset& f = fit.flipped;
  model.flipped_rows = f.rows();

  const GramPair g = gram(kernel, f);
  DualProblem problem;
  problem.y = f.y_tilde;
  problem.c = cost;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXi>(
      f.y_tilde.data(), static_cast<Eigen::Index>(f.rows())).cast<double>();
  problem.q = y.asDiagonal() * g.k_tilde * y.asDiagonal();

  fit.dual = solve_dual_biased(problem, opts.solver);
  if (!fit.dual.converged) {
    throw Error("SMO did not converge after " +
                std::to_string(fit.dual.iterations) + " iterations (kkt " +
                std::to_string(fit.dual.kkt_violation) + ")");
  }

  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < fit.dual.v.size(); ++i) {
    if (fit.dual.v[i] > 0.0) sv.push_back(i);
  }
  if (!sv.empty() && fit.dual.beta == 0.0) {
    throw Error("degenerate solution: zero bias");
  }
  model.beta = fit.dual.beta;
  const auto n_sv = static_cast<Eigen::Index>(sv.size());
  model.sv_x.resize(n_sv, f.x_tilde.cols());
  model.sv_x_prime.resize(n_sv, f.x_tilde.cols());
  model.sv_v.resize(n_sv);
  for (Eigen::Index k = 0; k < n_sv; ++k) {
    model.sv_x.row(k) = f.x_tilde.row(sv[k]);
    model.sv_x_prime.row(k) = f.x_tilde_prime.row(sv[k]);
    model.sv_y.push_back(f.y_tilde[static_cast<std::size_t>(sv[k])]);
    model.sv_v[k] = fit.dual.v[sv[k]];
  }
  return fit;
}

CompareModel train_compare(const PairDataset& d, double cost,
                           const KernelSpec& kernel, const TrainOptions& opts) {
  return fit_compare(d, cost, kernel, opts).model;
}

namespace {

// Solves the SVMrank dual over `optimize` (no ties) and fits tau_hat on
// `thresholds`.
RankFit fit_rank_core(Algorithm algo, const PairDataset& optimize,
                      const PairDataset& thresholds, double cost,
                      const KernelSpec& kernel, const TrainOptions& opts) {
  if (optimize.empty()) throw Error("rank training needs inequality pairs");
  kernel.validate();

  RankFit fit;
  RankModel& model = fit.model;
  model.algorithm = algo;
  model.kernel = kernel;
  model.cost = cost;
  model.scaler = make_scaler(optimize, opts.standardize);
  model.training_pairs = optimize.size();
  fit.optimized = model.scaler.apply(optimize);

  const auto n = static_cast<Eigen::Index>(fit.optimized.size());
  const auto p = static_cast<Eigen::Index>(fit.optimized.dim());
  Eigen::MatrixXd first(n, p);
  Eigen::MatrixXd second(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const LabeledPair& pr = fit.optimized[static_cast<std::size_t>(i)];
    first.row(i) = pr.x.transpose();
    second.row(i) = pr.x_prime.transpose();
    y[i] = to_int(pr.y);
  }
  const GramPair g = gram(kernel, first, second);
  const Eigen::MatrixXd q = y.asDiagonal() * g.k_tilde * y.asDiagonal();
  fit.dual = solve_dual_unbiased(q, cost, opts.solver);
  if (!fit.dual.converged) {
    throw Error("coordinate descent did not converge after " +
                std::to_string(fit.dual.iterations) + " iterations (kkt " +
                std::to_string(fit.dual.kkt_violation) + ")");
  }

  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (fit.dual.v[i] > 0.0) sv.push_back(i);
  }
  const auto n_sv = static_cast<Eigen::Index>(sv.size());
  model.sv_x.resize(n_sv, p);
  model.sv_x_prime.resize(n_sv, p);
  model.sv_v.resize(n_sv);
  for (Eigen::Index k = 0; k < n_sv; ++k) {
    model.sv_x.row(k) = first.row(sv[k]);
    model.sv_x_prime.row(k) = second.row(sv[k]);
    model.sv_y.push_back(static_cast<int>(y[sv[k]]));
    model.sv_v[k] = fit.dual.v[sv[k]];
  }

  const Model as_model = model;
  const std::vector<double> diffs = rank_differences(as_model, thresholds);
  const std::vector<int> labels = thresholds.labels();
  model.tau_hat = fit_threshold(diffs, labels);
  return fit;
}

}  // namespace

RankFit fit_rank(const PairDataset& d, double cost, const KernelSpec& kernel,
                 const TrainOptions& opts) {
  if (d.empty()) throw Error("empty dataset");
  std::vector<std::size_t> unequal;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].y != Label::kEqual) unequal.push_back(i);
  }
  if (unequal.empty()) throw Error("rank training needs inequality pairs");
  return fit_rank_core(Algorithm::kRank, d.subset(unequal), d, cost, kernel, opts);
}

RankModel train_rank(const PairDataset& d, double cost,
                     const KernelSpec& kernel, const TrainOptions& opts) {
  return fit_rank(d, cost, kernel, opts).model;
}

RankFit fit_rank2(const PairDataset& d, double cost, const KernelSpec& kernel,
                  const TrainOptions& opts) {
  return fit_rank_core(Algorithm::kRank2, rank2_transform(d), d, cost, kernel,
                       opts);
}

RankModel train_rank2(const PairDataset& d, double cost,
                      const KernelSpec& kernel, const TrainOptions& opts) {
  return fit_rank2(d, cost, kernel, opts).model;
}

Model train(Algorithm a, const PairDataset& d, double cost,
            const KernelSpec& kernel, const TrainOptions& opts) {
  switch (a) {
    case Algorithm::kCompare:
      return train_compare(d, cost, kernel, opts);
    case Algorithm::kRank:
      return train_rank(d, cost, kernel, opts);
    case Algorithm::kRank2:
      return train_rank2(d, cost, kernel, opts);
  }
  throw Error("unknown algorithm");
}

double fit_threshold(std::span<const double> r_diffs,
                     std::span<const int> labels) {
  if (r_diffs.size() != labels.size()) {
    throw Error("fit_threshold: length mismatch");
  }
  if (r_diffs.empty()) throw Error("fit_threshold: empty input");

  struct Item {
    double abs_diff;
    bool wrong_if_zero;     // y != 0
    bool wrong_if_nonzero;  // y != sign(diff)
  };
  std::vector<Item> items;
  items.reserve(r_diffs.size());
  for (std::size_t i = 0; i < r_diffs.size(); ++i) {
    const double d = r_diffs[i];
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    items.push_back({std::abs(d), labels[i] != 0, labels[i] != sign});
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.abs_diff < b.abs_diff; });

  // prefix_zero[k]: loss among the first k items when all predict 0;
  // suffix_nonzero[k]: loss among items k.. when they predict sign(diff).
  const std::size_t n = items.size();
  std::vector<std::size_t> prefix_zero(n + 1, 0);
  std::vector<std::size_t> suffix_nonzero(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    prefix_zero[k + 1] = prefix_zero[k] + items[k].wrong_if_zero;
  }
  for (std::size_t k = n; k-- > 0;) {
    suffix_nonzero[k] = suffix_nonzero[k + 1] + items[k].wrong_if_nonzero;
  }

  std::vector<double> candidates{0.0};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (items[k].abs_diff != items[k + 1].abs_diff) {
      candidates.push_back(0.5 * (items[k].abs_diff + items[k + 1].abs_diff));
    }
  }
  candidates.push_back(items.back().abs_diff + 1.0);

  double best_tau = 0.0;
  std::size_t best_loss = n + 1;
  for (double tau : candidates) {
    const auto k = static_cast<std::size_t>(
        std::upper_bound(items.begin(), items.end(), tau,
                         [](double t, const Item& it) { return t < it.abs_diff; }) -
        items.begin());
    const std::size_t loss = prefix_zero[k] + suffix_nonzero[k];
    if (loss < best_loss) {
      best_loss = loss;
      best_tau = tau;
    }
  }
  return best_tau;
}

Grid Grid::standard() {
  Grid g;
  for (int k = 0; k < 10; ++k) {
    g.costs.push_back(std::pow(10.0, -3.0 + 6.0 * k / 9.0));
    g.gammas.push_back(std::pow(2.0, -7.0 + 11.0 * k / 9.0));
  }
  return g;
}

Evaluation evaluate(const Model& m, const PairDataset& d) {
  if (d.empty()) throw Error("evaluate: empty dataset");
  const std::vector<double> diffs = rank_differences(m, d);
  const std::vector<int> labels = d.labels();
  const double tau = comparison_threshold(m);
  std::vector<int> pred;
  pred.reserve(diffs.size());
  for (double x : diffs) pred.push_back(t_tau(x, tau));

  Evaluation e;
  e.zero_one = zero_one_loss(pred, labels);
  const ConfusionCounts c = confusion(pred, labels);
  e.fp = c.fp;
  e.fn = c.fn;
  e.inversions = c.inversions;
  if (d.count_equal() > 0 && d.count_unequal() > 0) {
    e.auc = auc(roc_curve(diffs, labels));
  }
  return e;
}

GridSearchResult grid_search(const PairDataset& train_set,
                             const PairDataset& val, Algorithm algo,
                             Metric metric, const GridSearchOptions& opts) {
  if (train_set.empty() || val.empty()) {
    throw Error("grid_search: train and validation sets must be non-empty");
  }
  const Grid& grid = opts.grid;
  if (grid.size() == 0) throw Error("grid_search: empty grid");

  GridSearchResult result;
  result.cells.resize(grid.size());
  std::vector<std::optional<Model>> models(grid.size());
  for (std::size_t ci = 0; ci < grid.costs.size(); ++ci) {
    for (std::size_t gi = 0; gi < grid.gammas.size(); ++gi) {
      GridCell& cell = result.cells[ci * grid.gammas.size() + gi];
      cell.cost = grid.costs[ci];
      cell.gamma = grid.gammas[gi];
    }
  }

  auto run_cell = [&](std::size_t idx) {
    GridCell& cell = result.cells[idx];
    try {
      const KernelSpec kernel = KernelSpec::gaussian(cell.gamma);
      Model m;
      if (algo == Algorithm::kCompare) {
        CompareFit fit = fit_compare(train_set, cell.cost, kernel, opts.train);
        cell.iterations = fit.dual.iterations;
        m = std::move(fit.model);
      } else {
        RankFit fit = algo == Algorithm::kRank
                          ? fit_rank(train_set, cell.cost, kernel, opts.train)
                          : fit_rank2(train_set, cell.cost, kernel, opts.train);
        cell.iterations = fit.dual.iterations;
        m = std::move(fit.model);
      }
      cell.support_size =
          std::visit([](const auto& mm) { return mm.support_size(); }, m);
      const Evaluation e = evaluate(m, val);
      cell.val_zero_one = e.zero_one;
      cell.val_auc = e.auc;
      if (metric == Metric::kAuc && std::isnan(e.auc)) {
        throw Error("validation set needs both ties and inequality pairs for AUC");
      }
      cell.ok = true;
      models[idx] = std::move(m);
    } catch (const std::exception& ex) {
      cell.ok = false;
      cell.error = ex.what();
    }
  };

  unsigned workers = opts.workers != 0 ? opts.workers
                                       : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) run_cell(i);
      });
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const GridCell& cell = result.cells[i];
    if (!cell.ok) continue;
    if (!best) {
      best = i;
      continue;
    }
    const GridCell& b = result.cells[*best];
    const bool better = metric == Metric::kZeroOne
                            ? cell.val_zero_one < b.val_zero_one
                            : cell.val_auc > b.val_auc;
    if (better) best = i;
  }
  if (!best) {
    throw Error("grid_search: every cell failed (first error: " +
                result.cells.front().error + ")");
  }
  result.best = *best;
  result.model = std::move(*models[*best]);
  return result;
}

}  // namespace svmcompare
