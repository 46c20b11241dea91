#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "support.hpp"
#include "svmcompare/error.hpp"
#include "svmcompare/sushi.hpp"

using namespace svmcompare;

namespace {

constexpr int kItems = 20;
constexpr int kUsers = 12;

// Scores for user u: ten items chosen by a fixed stride, scores cycling 0..4.
std::vector<int> score_row(int u) {
  std::vector<int> row(kItems, -1);
  for (int k = 0; k < 10; ++k) row[(u * 3 + k * 2) % kItems] = (u + k) % 5;
  return row;
}

void write_fixture(const testing::TempDir& dir) {
  std::ofstream scores(dir.file(kSushiScoreFile));
  for (int u = 0; u < kUsers; ++u) {
    const auto row = score_row(u);
    for (int j = 0; j < kItems; ++j) scores << (j ? " " : "") << row[j];
    scores << '\n';
  }
  std::ofstream items(dir.file(kSushiItemFile));
  for (int i = 0; i < kItems; ++i) {
    items << i << "\titem_" << i << '\t' << i % 2 << '\t' << i % 3 << '\t' << i % 12 << '\t'
          << 0.5 * i << '\t' << 1.25 << '\t' << 0.1 * i << '\t' << 0.9 << '\n';
  }
  std::ofstream users(dir.file(kSushiUserFile));
  for (int u = 0; u < kUsers; ++u) {
    users << u << '\t' << u % 2 << '\t' << u % 6 << '\t' << 300 + u << '\t' << u % 48 << '\t'
          << 1 << '\t' << 0 << '\t' << (u + 5) % 47 << '\t' << 2 << '\t' << 1 << '\t' << 0
          << '\n';
  }
}

}  // namespace

TEST_CASE("bundled prefecture table") {
  const PrefectureTable t = load_prefecture_table(default_prefecture_table_path());
  CHECK(t.size() == 48);
  for (int code = 0; code <= 47; ++code) {
    REQUIRE(t.count(code) == 1);
    CHECK(t.at(code).latitude > 24.0);
    CHECK(t.at(code).latitude < 46.0);
    CHECK(t.at(code).longitude > 122.0);
    CHECK(t.at(code).longitude < 146.0);
  }
  // Hokkaido is north of Okinawa
  CHECK(t.at(0).latitude > t.at(46).latitude);
}

TEST_CASE("prefecture table errors") {
  std::istringstream no_header("0,Hokkaido,43,141\n");
  CHECK_THROWS_AS(load_prefecture_table(no_header), Error);
  std::istringstream bad("code,name,latitude,longitude\n0,Hokkaido,north,141\n");
  CHECK_THROWS_WITH_AS(load_prefecture_table(bad), doctest::Contains("line 2"), Error);
}

TEST_CASE("parse a synthetic dataset") {
  testing::TempDir dir;
  write_fixture(dir);
  const SushiTables t = parse_sushi(dir.path());
  CHECK(t.users() == kUsers);
  CHECK(t.items() == kItems);
  CHECK(t.total_ratings() == kUsers * 10);
  CHECK(t.item_features.cols() == 7);
  CHECK(t.user_features.cols() == 7);
  CHECK(t.item_features(3, 3) == doctest::Approx(1.5));
  const PrefectureTable prefs = load_prefecture_table(default_prefecture_table_path());
  CHECK(t.user_features(2, 3) == prefs.at(2).latitude);
  CHECK(t.user_features(2, 6) == prefs.at(7).longitude);
  for (int u = 0; u < kUsers; ++u) {
    const auto row = score_row(u);
    for (const Rating& r : t.ratings[static_cast<std::size_t>(u)]) CHECK(row[r.item] == r.score);
  }
}

TEST_CASE("writing scores back reproduces the file") {
  testing::TempDir dir;
  write_fixture(dir);
  const SushiTables t = parse_sushi(dir.path());
  std::ostringstream out;
  write_sushi_scores(out, t);
  std::ifstream original(dir.file(kSushiScoreFile));
  std::stringstream expected;
  expected << original.rdbuf();
  CHECK(out.str() == expected.str());
}

TEST_CASE("score file errors name the line and user") {
  std::istringstream eleven("0 1 2 3 4 0 1 2 3 4 0 -1\n");
  CHECK_THROWS_WITH_AS(parse_sushi_scores(eleven, 10), doctest::Contains("user 0 has 11"),
                       Error);
  std::istringstream range("0 1 2 3 4 0 1 2 3 7 -1\n");
  CHECK_THROWS_WITH_AS(parse_sushi_scores(range, 10), doctest::Contains("out of range"), Error);
  std::istringstream ragged("0 1 2 3 4 0 1 2 3 4 -1\n0 1\n");
  CHECK_THROWS_WITH_AS(parse_sushi_scores(ragged, 10), doctest::Contains("line 2"), Error);
}

TEST_CASE("item and user file errors") {
  std::istringstream short_item("0\tmaguro\t1\t0\t0\n");
  CHECK_THROWS_WITH_AS(parse_sushi_items(short_item), doctest::Contains("line 1"), Error);
  const PrefectureTable prefs{{0, {43.0, 141.0}}};
  std::istringstream unknown("0\t1\t2\t300\t0\t1\t0\t5\t1\t0\t1\n");
  CHECK_THROWS_WITH_AS(parse_sushi_users(unknown, prefs),
                       doctest::Contains("unknown prefecture code 5"), Error);
  std::istringstream columns("0\t1\t2\t300\t0\t1\t0\n");
  CHECK_THROWS_AS(parse_sushi_users(columns, prefs), Error);
}

TEST_CASE("missing files") {
  testing::TempDir dir;
  CHECK_THROWS_AS(parse_sushi(dir.path()), Error);
}

TEST_CASE("pairs: five disjoint pairs per user with sign labels") {
  testing::TempDir dir;
  write_fixture(dir);
  const SushiTables t = parse_sushi(dir.path());
  const PairDataset pairs = build_pairs(t, 42);
  REQUIRE(pairs.size() == kUsers * 5);
  CHECK(pairs.dim() == 14);

  // Recover items from their feature rows to check the partition.
  auto item_of = [&](const Eigen::VectorXd& x) {
    for (int i = 0; i < kItems; ++i) {
      if (t.item_features.row(i).transpose() == x.head(7)) return i;
    }
    return -1;
  };
  for (int u = 0; u < kUsers; ++u) {
    std::set<int> seen;
    const auto row = score_row(u);
    for (int k = 0; k < 5; ++k) {
      const LabeledPair& p = pairs[static_cast<std::size_t>(u * 5 + k)];
      CHECK(p.x.tail(7) == p.x_prime.tail(7));
      CHECK(p.x.tail(7) == t.user_features.row(u).transpose());
      const int a = item_of(p.x), b = item_of(p.x_prime);
      REQUIRE(a >= 0);
      REQUIRE(b >= 0);
      CHECK(seen.insert(a).second);
      CHECK(seen.insert(b).second);
      const int expected = (row[b] > row[a]) - (row[b] < row[a]);
      CHECK(to_int(p.y) == expected);
    }
    CHECK(seen.size() == 10);
  }

  const PairDataset again = build_pairs(t, 42);
  const PairDataset other = build_pairs(t, 43);
  bool differs = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].x == again[i].x);
    CHECK(pairs[i].x_prime == again[i].x_prime);
    differs |= pairs[i].x != other[i].x;
  }
  CHECK(differs);
}

TEST_CASE("equal scores give a tie") {
  SushiTables t;
  t.ratings = {{{0, 3}, {1, 3}}};
  t.item_features = Eigen::MatrixXd::Identity(2, 7);
  t.user_features = Eigen::MatrixXd::Zero(1, 7);
  const PairDataset p = build_pairs(t, 1);
  REQUIRE(p.size() == 1);
  CHECK(p[0].y == Label::kEqual);
}
