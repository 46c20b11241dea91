#include "svmcompare/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svmcompare/error.hpp"
#include "svmcompare/threshold.hpp"

namespace svmcompare {

Outcome classify(int predicted, int truth) {
  if (predicted == truth) return Outcome::kCorrect;
  if (truth == 0) return Outcome::kFalsePositive;
  if (predicted == 0) return Outcome::kFalseNegative;
  return Outcome::kInversion;
}

double zero_one_loss(std::span<const int> pred, std::span<const int> y) {
  if (pred.size() != y.size()) throw Error("zero_one_loss: length mismatch");
  if (pred.empty()) throw Error("zero_one_loss: empty input");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) wrong += pred[i] != y[i];
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

ConfusionCounts confusion(std::span<const int> pred, std::span<const int> y) {
  if (pred.size() != y.size()) throw Error("confusion: length mismatch");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    switch (classify(pred[i], y[i])) {
      case Outcome::kCorrect:
        ++c.correct;
        break;
      case Outcome::kFalsePositive:
        ++c.fp;
        break;
      case Outcome::kFalseNegative:
        ++c.fn;
        break;
      case Outcome::kInversion:
        ++c.inversions;
        break;
    }
  }
  return c;
}

RocCurve roc_curve(std::span<const double> r_diffs, std::span<const int> y) {
  if (r_diffs.size() != y.size()) throw Error("roc_curve: length mismatch");
  std::vector<double> tie_abs;
  std::vector<double> other_abs;
  for (std::size_t i = 0; i < y.size(); ++i) {
    (y[i] == 0 ? tie_abs : other_abs).push_back(std::abs(r_diffs[i]));
  }
  if (tie_abs.empty()) throw Error("roc_curve: no equality (y=0) pairs");
  if (other_abs.empty()) throw Error("roc_curve: no inequality (y!=0) pairs");
  std::sort(tie_abs.begin(), tie_abs.end());
  std::sort(other_abs.begin(), other_abs.end());

  std::vector<double> all(tie_abs);
  all.insert(all.end(), other_abs.begin(), other_abs.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::vector<double> taus{0.0};
  for (std::size_t k = 0; k + 1 < all.size(); ++k) {
    taus.push_back(0.5 * (all[k] + all[k + 1]));
  }
  taus.push_back(std::numeric_limits<double>::infinity());

  const double n_ties = static_cast<double>(tie_abs.size());
  const double n_other = static_cast<double>(other_abs.size());
  RocCurve curve;
  curve.points.reserve(taus.size());
  for (double tau : taus) {
    // |diff| <= tau predicts 0.
    const auto ties_zero =
        std::upper_bound(tie_abs.begin(), tie_abs.end(), tau) - tie_abs.begin();
    const auto fn =
        std::upper_bound(other_abs.begin(), other_abs.end(), tau) - other_abs.begin();
    const double fp = n_ties - static_cast<double>(ties_zero);
    curve.points.push_back(
        {tau, fp / n_ties, 1.0 - static_cast<double>(fn) / n_other});
  }
  return curve;
}

double auc(const RocCurve& c) {
  std::vector<RocPoint> pts = c.points;
  std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.fpr < b.fpr || (a.fpr == b.fpr && a.tpr < b.tpr);
  });
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    area += (pts[k + 1].fpr - pts[k].fpr) * 0.5 * (pts[k].tpr + pts[k + 1].tpr);
  }
  return area;
}

}  // namespace svmcompare
