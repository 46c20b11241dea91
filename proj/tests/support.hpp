#pragma once

#include <atomic>
#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "svmcompare/pairdata.hpp"

namespace testing {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline svmcompare::LabeledPair pair(std::initializer_list<double> x,
                                    std::initializer_list<double> xp, int y) {
  return {vec(x), vec(xp), svmcompare::label_from_int(y)};
}

// (0, 2) better second, (0, 0.4) a tie. Hand solution of the hard-margin
// problem: r(x) = 5x/6, LP margin 2/3.
inline svmcompare::PairDataset toy_1d() {
  return svmcompare::PairDataset({pair({0.0}, {2.0}, 1), pair({0.0}, {0.4}, 0)});
}

inline Eigen::MatrixXd random_psd(Eigen::Index m, Eigen::Index rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd b(m, rank);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) b(i, j) = g(rng);
  }
  return b * b.transpose();
}

inline svmcompare::PairDataset random_pairs(std::size_t n, Eigen::Index p,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> lab(-1, 1);
  std::vector<svmcompare::LabeledPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd x(p), xp(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      x[j] = g(rng);
      xp[j] = g(rng);
    }
    out.push_back({x, xp, svmcompare::label_from_int(lab(rng))});
  }
  return svmcompare::PairDataset(std::move(out));
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("svmcompare_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
