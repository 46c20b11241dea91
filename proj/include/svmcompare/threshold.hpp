#pragma once

namespace svmcompare {

// -1 below -tau, 0 on [-tau, tau], 1 above tau.
constexpr int t_tau(double x, double tau) {
  if (x < -tau) return -1;
  if (x > tau) return 1;
  return 0;
}

}  // namespace svmcompare
