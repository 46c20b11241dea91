#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace svmcompare {

// Which element of a pair is better. kEqual is a tie.
enum class Label : int { kFirstBetter = -1, kEqual = 0, kSecondBetter = 1 };

constexpr int to_int(Label y) { return static_cast<int>(y); }

// Throws Error unless v is one of -1, 0, 1.
Label label_from_int(int v);

struct LabeledPair {
  Eigen::VectorXd x;
  Eigen::VectorXd x_prime;
  Label y = Label::kEqual;
};

// A validated collection of labeled pairs sharing one feature dimension.
class PairDataset {
 public:
  PairDataset() = default;
  explicit PairDataset(std::vector<LabeledPair> pairs);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  // Feature dimension p; 0 for an empty dataset.
  std::size_t dim() const { return dim_; }

  const LabeledPair& operator[](std::size_t i) const { return pairs_[i]; }
  std::span<const LabeledPair> pairs() const { return pairs_; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  // Indices of pairs with label y, in ascending order.
  std::vector<std::size_t> indices(Label y) const;
  std::size_t count(Label y) const;
  std::size_t count_equal() const { return count(Label::kEqual); }
  std::size_t count_unequal() const { return size() - count_equal(); }

  PairDataset subset(std::span<const std::size_t> idx) const;
  std::vector<int> labels() const;

 private:
  std::vector<LabeledPair> pairs_;
  std::size_t dim_ = 0;
};

// Pairs re-encoded for a binary SVM. Rows are
//   x_tilde       = [X_1; X'_{-1}; X_0; X'_0]
//   x_tilde_prime = [X'_1; X_{-1}; X'_0; X_0]
//   y_tilde       = [1; 1; -1; -1]
// `source` gives the originating pair index of each row.
struct FlippedDataset {
  Eigen::MatrixXd x_tilde;
  Eigen::MatrixXd x_tilde_prime;
  std::vector<int> y_tilde;
  std::vector<std::size_t> source;

  std::size_t rows() const { return y_tilde.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(x_tilde.cols()); }
};

FlippedDataset flip(const PairDataset& d);

// Each tie (x, x', 0) becomes (x', x, 1) and (x, x', 1); each inequality
// pair is emitted twice. Output size is 2n with no ties.
PairDataset rank2_transform(const PairDataset& d);

// Per-feature standardization pooled over the x and x' rows.
struct Scaler {
  static constexpr double kScaleFloor = 1e-12;

  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  // Set when at least one feature had its scale floored.
  bool floored = false;

  static Scaler identity(std::size_t p);

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& z) const;
  PairDataset apply(const PairDataset& d) const;
};

Scaler fit_scaler(const PairDataset& d);
PairDataset apply_scaler(const Scaler& s, const PairDataset& d);

// round(rho * n), halves away from zero.
std::size_t equality_quota(std::size_t n, double rho);

// Draws n pairs without replacement, exactly equality_quota(n, rho) of
// them ties. Output keeps source order.
PairDataset sample_with_proportion(const PairDataset& source, std::size_t n,
                                   double rho, std::uint64_t seed);

// `count` pairwise-disjoint samples, each with the same n and rho.
std::vector<PairDataset> sample_disjoint(const PairDataset& source,
                                         std::size_t n, double rho,
                                         std::size_t count, std::uint64_t seed);

// Pair CSV: header x1..xp,xp1..xpp,y then one row per pair.
void write_pairs_csv(std::ostream& out, const PairDataset& d);
void write_pairs_csv(const std::string& path, const PairDataset& d);
PairDataset read_pairs_csv(std::istream& in);
PairDataset read_pairs_csv(const std::string& path);

}  // namespace svmcompare
