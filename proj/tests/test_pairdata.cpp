#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "support.hpp"
#include "svmcompare/error.hpp"
#include "svmcompare/pairdata.hpp"

using namespace svmcompare;
using testing::pair;
using testing::vec;

TEST_CASE("labels outside {-1,0,1} are rejected") {
  CHECK(label_from_int(-1) == Label::kFirstBetter);
  CHECK(label_from_int(0) == Label::kEqual);
  CHECK(label_from_int(1) == Label::kSecondBetter);
  CHECK_THROWS_AS(label_from_int(2), Error);
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(PairDataset({pair({1, 2}, {3}, 1)}), Error);
  CHECK_THROWS_AS(PairDataset({pair({1}, {2}, 1), pair({1, 2}, {3, 4}, 0)}), Error);
  CHECK_THROWS_AS(PairDataset({pair({NAN}, {2}, 1)}), Error);
  const PairDataset d({pair({1}, {2}, 1), pair({3}, {4}, 0), pair({5}, {6}, -1)});
  CHECK(d.size() == 3);
  CHECK(d.dim() == 1);
  CHECK(d.count_equal() == 1);
  CHECK(d.count_unequal() == 2);
  CHECK(d.indices(Label::kFirstBetter) == std::vector<std::size_t>{2});
}

TEST_CASE("flip rows follow the [X_1; X'_-1; X_0; X'_0] layout") {
  // [(a,b,+1), (c,d,-1), (e,f,0)] -> (a,b,+1), (d,c,+1), (e,f,-1), (f,e,-1)
  const PairDataset d({pair({1}, {2}, 1), pair({3}, {4}, -1), pair({5}, {6}, 0)});
  const FlippedDataset f = flip(d);
  REQUIRE(f.rows() == 4);
  CHECK(f.x_tilde.col(0).transpose() == vec({1, 4, 5, 6}).transpose());
  CHECK(f.x_tilde_prime.col(0).transpose() == vec({2, 3, 6, 5}).transpose());
  CHECK(f.y_tilde == std::vector<int>{1, 1, -1, -1});
  CHECK(f.source == std::vector<std::size_t>{0, 1, 2, 2});
}

TEST_CASE("flip edge cases") {
  SUBCASE("no ties") {
    const PairDataset d({pair({1}, {2}, 1), pair({3}, {4}, 1), pair({5}, {6}, 1)});
    const FlippedDataset f = flip(d);
    CHECK(f.rows() == 3);
    CHECK(f.y_tilde == std::vector<int>{1, 1, 1});
  }
  SUBCASE("a single tie is duplicated") {
    const FlippedDataset f = flip(PairDataset({pair({7}, {8}, 0)}));
    CHECK(f.rows() == 2);
    CHECK(f.x_tilde(0, 0) == 7);
    CHECK(f.x_tilde_prime(0, 0) == 8);
    CHECK(f.x_tilde(1, 0) == 8);
    CHECK(f.x_tilde_prime(1, 0) == 7);
    CHECK(f.y_tilde == std::vector<int>{-1, -1});
  }
  SUBCASE("empty input") { CHECK_THROWS_AS(flip(PairDataset()), Error); }
}

TEST_CASE("flip size law m = n + |I_0| on random data") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const PairDataset d = testing::random_pairs(1 + trial * 3, 3, rng);
    const FlippedDataset f = flip(d);
    CHECK(f.rows() == d.size() + d.count_equal());
    for (std::size_t i = 0; i < f.rows(); ++i) {
      // every inequality row is oriented so the better item comes second
      const LabeledPair& src = d[f.source[i]];
      if (src.y == Label::kEqual) continue;
      const bool better_second = src.y == Label::kSecondBetter;
      CHECK(f.x_tilde_prime.row(static_cast<Eigen::Index>(i)).transpose() ==
            (better_second ? src.x_prime : src.x));
    }
  }
}

TEST_CASE("rank2 transform") {
  const PairDataset tie({pair({1}, {2}, 0)});
  const PairDataset t = rank2_transform(tie);
  REQUIRE(t.size() == 2);
  CHECK(t[0].x[0] == 2);
  CHECK(t[0].x_prime[0] == 1);
  CHECK(t[0].y == Label::kSecondBetter);
  CHECK(t[1].x[0] == 1);
  CHECK(t[1].x_prime[0] == 2);
  CHECK(t[1].y == Label::kSecondBetter);

  const PairDataset ineq = rank2_transform(PairDataset({pair({1}, {2}, 1)}));
  REQUIRE(ineq.size() == 2);
  for (const auto& p : ineq) {
    CHECK(p.x[0] == 1);
    CHECK(p.x_prime[0] == 2);
    CHECK(p.y == Label::kSecondBetter);
  }

  const PairDataset mixed({pair({1}, {2}, 0), pair({3}, {4}, 1), pair({5}, {6}, -1)});
  const PairDataset m = rank2_transform(mixed);
  CHECK(m.size() == 6);
  CHECK(m.count_equal() == 0);
}

TEST_CASE("scaler pools x and x' rows") {
  const PairDataset d({pair({0}, {4}, 1), pair({2}, {6}, 0)});
  const Scaler s = fit_scaler(d);
  CHECK(s.mean[0] == doctest::Approx(3.0));
  CHECK(s.scale[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK_FALSE(s.floored);
  CHECK(s.invert(s.apply(vec({1.5})))[0] == doctest::Approx(1.5));
}

TEST_CASE("scaler is idempotent on standardized data") {
  std::mt19937_64 rng(3);
  const PairDataset d = testing::random_pairs(40, 3, rng);
  const PairDataset z = apply_scaler(fit_scaler(d), d);
  const Scaler again = fit_scaler(z);
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(std::abs(again.mean[j]) < 1e-12);
    CHECK(again.scale[j] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constant feature hits the scale floor and maps to 0") {
  const PairDataset d({pair({5, 1}, {5, 2}, 1), pair({5, 3}, {5, 4}, 0)});
  const Scaler s = fit_scaler(d);
  CHECK(s.floored);
  CHECK(s.scale[0] == Scaler::kScaleFloor);
  const PairDataset z = apply_scaler(s, d);
  for (const auto& p : z) {
    CHECK(p.x[0] == 0.0);
    CHECK(p.x_prime[0] == 0.0);
  }
}

TEST_CASE("equality quota rounds half away from zero") {
  CHECK(equality_quota(100, 0.5) == 50);
  CHECK(equality_quota(3, 0.5) == 2);
  CHECK(equality_quota(10, 0.0) == 0);
  CHECK(equality_quota(10, 1.0) == 10);
}

TEST_CASE("sampling with proportion") {
  std::vector<LabeledPair> pool;
  for (int i = 0; i < 300; ++i) {
    pool.push_back(pair({double(i)}, {double(i) + 1}, i % 3 - 1));
  }
  const PairDataset source(pool);

  const PairDataset s = sample_with_proportion(source, 100, 0.5, 11);
  CHECK(s.size() == 100);
  CHECK(s.count_equal() == 50);

  const PairDataset none = sample_with_proportion(source, 60, 0.0, 11);
  CHECK(none.count_equal() == 0);

  const PairDataset again = sample_with_proportion(source, 100, 0.5, 11);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].x == again[i].x);

  CHECK_THROWS_AS(sample_with_proportion(source, 250, 0.9, 1), Error);
  CHECK_THROWS_AS(sample_with_proportion(source, 10, 1.5, 1), Error);
}

TEST_CASE("disjoint samples share no pair") {
  std::vector<LabeledPair> pool;
  for (int i = 0; i < 300; ++i) {
    pool.push_back(pair({double(i)}, {double(i) + 1}, i % 3 - 1));
  }
  const auto parts = sample_disjoint(PairDataset(pool), 60, 0.5, 3, 5);
  REQUIRE(parts.size() == 3);
  std::set<double> seen;
  for (const auto& part : parts) {
    CHECK(part.size() == 60);
    CHECK(part.count_equal() == 30);
    for (const auto& p : part) CHECK(seen.insert(p.x[0]).second);
  }
}

TEST_CASE("pair CSV round trip is exact") {
  std::mt19937_64 rng(9);
  const PairDataset d = testing::random_pairs(25, 3, rng);
  std::stringstream buf;
  write_pairs_csv(buf, d);
  std::string header;
  std::getline(std::istringstream(buf.str()), header);
  CHECK(header == "x1,x2,x3,xp1,xp2,xp3,y");
  const PairDataset back = read_pairs_csv(buf);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back[i].x == d[i].x);
    CHECK(back[i].x_prime == d[i].x_prime);
    CHECK(back[i].y == d[i].y);
  }
}

TEST_CASE("pair CSV errors carry line numbers") {
  std::istringstream bad_label("x1,xp1,y\n1,2,1\n1,2,5\n");
  CHECK_THROWS_WITH_AS(read_pairs_csv(bad_label), doctest::Contains("line 3"), Error);
  std::istringstream short_row("x1,xp1,y\n1,2\n");
  CHECK_THROWS_WITH_AS(read_pairs_csv(short_row), doctest::Contains("line 2"), Error);
  std::istringstream bad_header("a,b,c\n1,2,1\n");
  CHECK_THROWS_AS(read_pairs_csv(bad_header), Error);
}
