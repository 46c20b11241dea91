#include "svmcompare/pairdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include "svmcompare/error.hpp"

namespace svmcompare {

Label label_from_int(int v) {
  if (v < -1 || v > 1) {
    throw Error("label must be -1, 0 or 1, got " + std::to_string(v));
  }
  return static_cast<Label>(v);
}

PairDataset::PairDataset(std::vector<LabeledPair> pairs)
    : pairs_(std::move(pairs)) {
  if (pairs_.empty()) return;
  dim_ = static_cast<std::size_t>(pairs_.front().x.size());
  if (dim_ == 0) throw Error("pairs must have at least one feature");
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const LabeledPair& p = pairs_[i];
    if (static_cast<std::size_t>(p.x.size()) != dim_ ||
        static_cast<std::size_t>(p.x_prime.size()) != dim_) {
      throw Error("pair " + std::to_string(i) + " has dimension mismatch");
    }
    if (!p.x.allFinite() || !p.x_prime.allFinite()) {
      throw Error("pair " + std::to_string(i) + " has non-finite features");
    }
    label_from_int(to_int(p.y));
  }
}

std::vector<std::size_t> PairDataset::indices(Label y) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (pairs_[i].y == y) out.push_back(i);
  }
  return out;
}

std::size_t PairDataset::count(Label y) const {
  return static_cast<std::size_t>(std::count_if(
      pairs_.begin(), pairs_.end(),
      [y](const LabeledPair& p) { return p.y == y; }));
}

PairDataset PairDataset::subset(std::span<const std::size_t> idx) const {
  std::vector<LabeledPair> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pairs_.at(i));
  return PairDataset(std::move(out));
}

std::vector<int> PairDataset::labels() const {
  std::vector<int> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(to_int(p.y));
  return out;
}

FlippedDataset flip(const PairDataset& d) {
  if (d.empty()) throw Error("empty dataset");
  const auto pos = d.indices(Label::kSecondBetter);
  const auto neg = d.indices(Label::kFirstBetter);
  const auto ties = d.indices(Label::kEqual);
  const std::size_t m = pos.size() + neg.size() + 2 * ties.size();
  const auto p = static_cast<Eigen::Index>(d.dim());

  FlippedDataset f;
  f.x_tilde.resize(static_cast<Eigen::Index>(m), p);
  f.x_tilde_prime.resize(static_cast<Eigen::Index>(m), p);
  f.y_tilde.reserve(m);
  f.source.reserve(m);

  Eigen::Index row = 0;
  auto emit = [&](std::size_t i, bool swap, int label) {
    const LabeledPair& pr = d[i];
    f.x_tilde.row(row) = (swap ? pr.x_prime : pr.x).transpose();
    f.x_tilde_prime.row(row) = (swap ? pr.x : pr.x_prime).transpose();
    f.y_tilde.push_back(label);
    f.source.push_back(i);
    ++row;
  };
  for (std::size_t i : pos) emit(i, false, 1);
  for (std::size_t i : neg) emit(i, true, 1);
  for (std::size_t i : ties) emit(i, false, -1);
  for (std::size_t i : ties) emit(i, true, -1);
  return f;
}

PairDataset rank2_transform(const PairDataset& d) {
  if (d.empty()) throw Error("empty dataset");
  std::vector<LabeledPair> out;
  out.reserve(2 * d.size());
  for (const LabeledPair& p : d) {
    if (p.y == Label::kEqual) {
      out.push_back({p.x_prime, p.x, Label::kSecondBetter});
      out.push_back({p.x, p.x_prime, Label::kSecondBetter});
    } else {
      out.push_back(p);
      out.push_back(p);
    }
  }
  return PairDataset(std::move(out));
}

Scaler Scaler::identity(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  return Scaler{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n), false};
}

Eigen::VectorXd Scaler::apply(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) throw Error("scaler dimension mismatch");
  return ((x - mean).array() / scale.array()).matrix();
}

Eigen::VectorXd Scaler::invert(const Eigen::VectorXd& z) const {
  if (z.size() != mean.size()) throw Error("scaler dimension mismatch");
  return (z.array() * scale.array()).matrix() + mean;
}

PairDataset Scaler::apply(const PairDataset& d) const {
  std::vector<LabeledPair> out;
  out.reserve(d.size());
  for (const LabeledPair& p : d) out.push_back({apply(p.x), apply(p.x_prime), p.y});
  return PairDataset(std::move(out));
}

Scaler fit_scaler(const PairDataset& d) {
  if (d.empty()) throw Error("empty dataset");
  const auto p = static_cast<Eigen::Index>(d.dim());
  const double rows = 2.0 * static_cast<double>(d.size());

  Scaler s{Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p), false};
  Eigen::VectorXd lo = d[0].x, hi = d[0].x;
  for (const LabeledPair& pr : d) {
    s.mean += pr.x + pr.x_prime;
    lo = lo.cwiseMin(pr.x).cwiseMin(pr.x_prime);
    hi = hi.cwiseMax(pr.x).cwiseMax(pr.x_prime);
  }
  s.mean /= rows;
  // A constant column must map to exactly zero.
  for (Eigen::Index j = 0; j < p; ++j) {
    if (lo[j] == hi[j]) s.mean[j] = lo[j];
  }
  for (const LabeledPair& pr : d) {
    s.scale += (pr.x - s.mean).cwiseAbs2() + (pr.x_prime - s.mean).cwiseAbs2();
  }
  s.scale = (s.scale / rows).cwiseSqrt();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(s.scale[j] >= Scaler::kScaleFloor)) {
      s.scale[j] = Scaler::kScaleFloor;
      s.floored = true;
    }
  }
  return s;
}

PairDataset apply_scaler(const Scaler& s, const PairDataset& d) {
  return s.apply(d);
}

std::size_t equality_quota(std::size_t n, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error("rho must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
}

std::vector<PairDataset> sample_disjoint(const PairDataset& source,
                                         std::size_t n, double rho,
                                         std::size_t count,
                                         std::uint64_t seed) {
  const std::size_t ties = equality_quota(n, rho);
  const std::size_t unequal = n - ties;

  std::vector<std::size_t> tie_idx = source.indices(Label::kEqual);
  std::vector<std::size_t> ineq_idx;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i].y != Label::kEqual) ineq_idx.push_back(i);
  }
  if (tie_idx.size() < ties * count) {
    throw Error("not enough equality pairs: need " +
                std::to_string(ties * count) + ", have " +
                std::to_string(tie_idx.size()));
  }
  if (ineq_idx.size() < unequal * count) {
    throw Error("not enough inequality pairs: need " +
                std::to_string(unequal * count) + ", have " +
                std::to_string(ineq_idx.size()));
  }

  std::mt19937_64 rng(seed);
  std::shuffle(tie_idx.begin(), tie_idx.end(), rng);
  std::shuffle(ineq_idx.begin(), ineq_idx.end(), rng);

  std::vector<PairDataset> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::size_t> chosen(tie_idx.begin() + k * ties,
                                    tie_idx.begin() + (k + 1) * ties);
    chosen.insert(chosen.end(), ineq_idx.begin() + k * unequal,
                  ineq_idx.begin() + (k + 1) * unequal);
    std::sort(chosen.begin(), chosen.end());
    out.push_back(source.subset(chosen));
  }
  return out;
}

PairDataset sample_with_proportion(const PairDataset& source, std::size_t n,
                                   double rho, std::uint64_t seed) {
  return std::move(sample_disjoint(source, n, rho, 1, seed).front());
}

namespace {

void append_double(std::string& line, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line_no) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("line " + std::to_string(line_no) + ": bad number '" +
                std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_pairs_csv(std::ostream& out, const PairDataset& d) {
  const std::size_t p = d.dim();
  std::string line;
  for (std::size_t j = 1; j <= p; ++j) line += "x" + std::to_string(j) + ",";
  for (std::size_t j = 1; j <= p; ++j) line += "xp" + std::to_string(j) + ",";
  line += "y\n";
  out << line;
  for (const LabeledPair& pr : d) {
    line.clear();
    for (Eigen::Index j = 0; j < pr.x.size(); ++j) {
      append_double(line, pr.x[j]);
      line += ',';
    }
    for (Eigen::Index j = 0; j < pr.x_prime.size(); ++j) {
      append_double(line, pr.x_prime[j]);
      line += ',';
    }
    line += std::to_string(to_int(pr.y));
    line += '\n';
    out << line;
  }
}

void write_pairs_csv(const std::string& path, const PairDataset& d) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_pairs_csv(out, d);
}

PairDataset read_pairs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("pair CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 3 || header.size() % 2 == 0 || header.back() != "y") {
    throw Error("pair CSV: header must be x1..xp,xp1..xpp,y");
  }
  const std::size_t p = (header.size() - 1) / 2;
  for (std::size_t j = 0; j < p; ++j) {
    if (header[j] != "x" + std::to_string(j + 1) ||
        header[p + j] != "xp" + std::to_string(j + 1)) {
      throw Error("pair CSV: unexpected column '" + std::string(header[j]) +
                  "'");
    }
  }

  std::vector<LabeledPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw Error("line " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " columns");
    }
    LabeledPair pr{Eigen::VectorXd(p), Eigen::VectorXd(p), Label::kEqual};
    for (std::size_t j = 0; j < p; ++j) {
      pr.x[static_cast<Eigen::Index>(j)] = parse_double(cells[j], line_no);
      pr.x_prime[static_cast<Eigen::Index>(j)] = parse_double(cells[p + j], line_no);
    }
    const double y = parse_double(cells.back(), line_no);
    if (y != -1.0 && y != 0.0 && y != 1.0) {
      throw Error("line " + std::to_string(line_no) + ": label must be -1, 0 or 1");
    }
    pr.y = label_from_int(static_cast<int>(y));
    pairs.push_back(std::move(pr));
  }
  return PairDataset(std::move(pairs));
}

PairDataset read_pairs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_pairs_csv(in);
}

}  // namespace svmcompare
