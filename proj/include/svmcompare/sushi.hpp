#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svmcompare/pairdata.hpp"

namespace svmcompare {

inline constexpr const char* kSushiScoreFile = "sushi3b.5000.10.score";
inline constexpr const char* kSushiItemFile = "sushi3.idata";
inline constexpr const char* kSushiUserFile = "sushi3.udata";

struct Coordinates {
  double latitude = 0.0;
  double longitude = 0.0;
};

using PrefectureTable = std::map<int, Coordinates>;

// CSV with header code,name,latitude,longitude; '#' lines are comments.
PrefectureTable load_prefecture_table(std::istream& in);
PrefectureTable load_prefecture_table(const std::string& path);
// Path of the table shipped with the library.
std::string default_prefecture_table_path();

struct Rating {
  int item = 0;
  int score = 0;  // 0 (least liked) .. 4 (most liked)
};

struct SushiTables {
  static constexpr int kItemFeatures = 7;
  static constexpr int kUserFeatures = 7;

  // Per user, the rated items in column order; unrated items are absent.
  std::vector<std::vector<Rating>> ratings;
  // style, major, minor, oily, eating frequency, price, selling frequency
  Eigen::MatrixXd item_features;
  // gender, age, time, birthplace lat/long, current home lat/long
  Eigen::MatrixXd user_features;

  std::size_t users() const { return ratings.size(); }
  std::size_t items() const { return static_cast<std::size_t>(item_features.rows()); }
  std::size_t total_ratings() const;
};

struct SushiParseOptions {
  std::size_t ratings_per_user = 10;
  std::string prefecture_table;  // empty: default_prefecture_table_path()
};

// Individual parsers, exposed for testing. Errors carry line numbers.
std::vector<std::vector<Rating>> parse_sushi_scores(std::istream& in,
                                                    std::size_t ratings_per_user);
Eigen::MatrixXd parse_sushi_items(std::istream& in);
Eigen::MatrixXd parse_sushi_users(std::istream& in, const PrefectureTable& prefs);

// Reads the three published files from `dir`.
SushiTables parse_sushi(const std::string& dir, const SushiParseOptions& opts = {});

// Writes ratings back in the score-file layout (-1 for unrated).
void write_sushi_scores(std::ostream& out, const SushiTables& t);

// Randomly partitions each user's rated items into disjoint pairs. Features
// are [item (7), user (7)]; y = sign(score' - score).
PairDataset build_pairs(const SushiTables& t, std::uint64_t seed);

}  // namespace svmcompare
