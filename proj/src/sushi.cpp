#include "svmcompare/sushi.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "svmcompare/error.hpp"

namespace svmcompare {

namespace {

// Tab-separated when the line has tabs, whitespace-separated otherwise.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  if (line.find('\t') != std::string::npos) {
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, '\t')) {
      cell.erase(0, cell.find_first_not_of(" \r"));
      cell.erase(cell.find_last_not_of(" \r") + 1);
      out.push_back(cell);
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
  } else {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
  }
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

[[noreturn]] void fail(const std::string& what, std::size_t line_no,
                       const std::string& msg) {
  throw Error(what + " line " + std::to_string(line_no) + ": " + msg);
}

double to_double(const std::string& s, const std::string& what, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(what, line_no, "bad number '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, const std::string& what, std::size_t line_no) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(what, line_no, "bad integer '" + s + "'");
  }
  return v;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

PrefectureTable load_prefecture_table(std::istream& in) {
  PrefectureTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line[0] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != "code,name,latitude,longitude") {
        fail("prefecture table", line_no, "expected header code,name,latitude,longitude");
      }
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) fail("prefecture table", line_no, "expected 4 columns");
    const int code = to_int(cells[0], "prefecture table", line_no);
    table[code] = {to_double(cells[2], "prefecture table", line_no),
                   to_double(cells[3], "prefecture table", line_no)};
  }
  if (table.empty()) throw Error("prefecture table is empty");
  return table;
}

PrefectureTable load_prefecture_table(const std::string& path) {
  auto in = open(path);
  return load_prefecture_table(in);
}

std::string default_prefecture_table_path() {
  return std::string(SVMCOMPARE_DATA_DIR) + "/prefectures.csv";
}

std::size_t SushiTables::total_ratings() const {
  std::size_t n = 0;
  for (const auto& r : ratings) n += r.size();
  return n;
}

std::vector<std::vector<Rating>> parse_sushi_scores(std::istream& in,
                                                    std::size_t ratings_per_user) {
  const std::string what = "score file";
  std::vector<std::vector<Rating>> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto tokens = tokenize(line);
    if (columns == 0) columns = tokens.size();
    if (tokens.size() != columns) {
      fail(what, line_no, "expected " + std::to_string(columns) + " columns, got " +
                              std::to_string(tokens.size()));
    }
    std::vector<Rating> user;
    for (std::size_t item = 0; item < tokens.size(); ++item) {
      const int score = to_int(tokens[item], what, line_no);
      if (score == -1) continue;
      if (score < 0 || score > 4) {
        fail(what, line_no, "score " + std::to_string(score) + " out of range");
      }
      user.push_back({static_cast<int>(item), score});
    }
    if (user.size() != ratings_per_user) {
      fail(what, line_no, "user " + std::to_string(out.size()) + " has " +
                              std::to_string(user.size()) + " ratings, expected " +
                              std::to_string(ratings_per_user));
    }
    out.push_back(std::move(user));
  }
  if (out.empty()) throw Error("score file is empty");
  return out;
}

Eigen::MatrixXd parse_sushi_items(std::istream& in) {
  const std::string what = "item file";
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto tokens = tokenize(line);
    // id, name, then the seven attributes
    if (tokens.size() != 9) {
      fail(what, line_no, "expected 9 columns, got " + std::to_string(tokens.size()));
    }
    const int id = to_int(tokens[0], what, line_no);
    if (id != static_cast<int>(rows.size())) {
      fail(what, line_no, "item ids must be consecutive from 0");
    }
    Eigen::VectorXd row(SushiTables::kItemFeatures);
    for (int j = 0; j < SushiTables::kItemFeatures; ++j) {
      row[j] = to_double(tokens[static_cast<std::size_t>(j) + 2], what, line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("item file is empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), SushiTables::kItemFeatures);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i];
  return m;
}

Eigen::MatrixXd parse_sushi_users(std::istream& in, const PrefectureTable& prefs) {
  const std::string what = "user file";
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  std::size_t line_no = 0;
  auto locate = [&](const std::string& tok) {
    const int code = to_int(tok, what, line_no);
    auto it = prefs.find(code);
    if (it == prefs.end()) {
      fail(what, line_no, "unknown prefecture code " + std::to_string(code));
    }
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto tokens = tokenize(line);
    // id, gender, age, time, pref15, region15, east/west15, pref, region,
    // east/west, moved
    if (tokens.size() != 11) {
      fail(what, line_no, "expected 11 columns, got " + std::to_string(tokens.size()));
    }
    const int id = to_int(tokens[0], what, line_no);
    if (id != static_cast<int>(rows.size())) {
      fail(what, line_no, "user ids must be consecutive from 0");
    }
    const Coordinates birth = locate(tokens[4]);
    const Coordinates home = locate(tokens[7]);
    Eigen::VectorXd row(SushiTables::kUserFeatures);
    row << to_double(tokens[1], what, line_no), to_double(tokens[2], what, line_no),
        to_double(tokens[3], what, line_no), birth.latitude, birth.longitude,
        home.latitude, home.longitude;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("user file is empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), SushiTables::kUserFeatures);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i];
  return m;
}

SushiTables parse_sushi(const std::string& dir, const SushiParseOptions& opts) {
  const PrefectureTable prefs = load_prefecture_table(
      opts.prefecture_table.empty() ? default_prefecture_table_path()
                                    : opts.prefecture_table);
  SushiTables t;
  {
    auto in = open(dir + "/" + kSushiScoreFile);
    t.ratings = parse_sushi_scores(in, opts.ratings_per_user);
  }
  {
    auto in = open(dir + "/" + kSushiItemFile);
    t.item_features = parse_sushi_items(in);
  }
  {
    auto in = open(dir + "/" + kSushiUserFile);
    t.user_features = parse_sushi_users(in, prefs);
  }
  if (static_cast<std::size_t>(t.user_features.rows()) != t.users()) {
    throw Error("score file has " + std::to_string(t.users()) +
                " users but user file has " + std::to_string(t.user_features.rows()));
  }
  for (std::size_t u = 0; u < t.users(); ++u) {
    for (const Rating& r : t.ratings[u]) {
      if (static_cast<std::size_t>(r.item) >= t.items()) {
        throw Error("score file line " + std::to_string(u + 1) + ": item " +
                    std::to_string(r.item) + " missing from item file");
      }
    }
  }
  return t;
}

void write_sushi_scores(std::ostream& out, const SushiTables& t) {
  for (const auto& user : t.ratings) {
    std::vector<int> row(t.items(), -1);
    for (const Rating& r : user) row[static_cast<std::size_t>(r.item)] = r.score;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ' ';
      out << row[j];
    }
    out << '\n';
  }
}

PairDataset build_pairs(const SushiTables& t, std::uint64_t seed) {
  constexpr Eigen::Index kItem = SushiTables::kItemFeatures;
  constexpr Eigen::Index kUser = SushiTables::kUserFeatures;
  std::mt19937_64 rng(seed);
  std::vector<LabeledPair> pairs;
  pairs.reserve(t.total_ratings() / 2);
  for (std::size_t u = 0; u < t.users(); ++u) {
    std::vector<Rating> rated = t.ratings[u];
    if (rated.size() % 2 != 0) {
      throw Error("user " + std::to_string(u) + " has an odd number of ratings");
    }
    std::shuffle(rated.begin(), rated.end(), rng);
    const auto person = t.user_features.row(static_cast<Eigen::Index>(u));
    for (std::size_t k = 0; k + 1 < rated.size(); k += 2) {
      const Rating& a = rated[k];
      const Rating& b = rated[k + 1];
      LabeledPair p;
      p.x.resize(kItem + kUser);
      p.x_prime.resize(kItem + kUser);
      p.x << t.item_features.row(a.item).transpose(), person.transpose();
      p.x_prime << t.item_features.row(b.item).transpose(), person.transpose();
      p.y = label_from_int((b.score > a.score) - (b.score < a.score));
      pairs.push_back(std::move(p));
    }
  }
  return PairDataset(std::move(pairs));
}

}  // namespace svmcompare
