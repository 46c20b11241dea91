#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace svmcompare {

//            y=-1   y=0   y=1
//   yhat=-1   ok    FP    inv
//   yhat= 0   FN    ok    FN
//   yhat= 1   inv   FP    ok
struct ConfusionCounts {
  std::size_t correct = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t inversions = 0;

  std::size_t total() const { return correct + fp + fn + inversions; }
};

enum class Outcome { kCorrect, kFalsePositive, kFalseNegative, kInversion };

Outcome classify(int predicted, int truth);

double zero_one_loss(std::span<const int> pred, std::span<const int> y);
ConfusionCounts confusion(std::span<const int> pred, std::span<const int> y);

struct RocPoint {
  double tau = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Points ordered by ascending tau; the last has tau = +infinity.
struct RocCurve {
  std::vector<RocPoint> points;
};

// Sweeps tau over {0} u midpoints of distinct sorted |r_diff| u {inf}.
// FPR = FP / |I_0|, TPR = 1 - FN / (|I_1| + |I_-1|); inversions count in
// neither rate.
RocCurve roc_curve(std::span<const double> r_diffs, std::span<const int> y);

// Trapezoidal area over (fpr, tpr) sorted by fpr.
double auc(const RocCurve& c);

}  // namespace svmcompare
