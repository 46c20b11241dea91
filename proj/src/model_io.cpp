#include "svmcompare/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "svmcompare/error.hpp"

namespace svmcompare {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "svmcompare-model";

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(vector_to_json(m.row(i).transpose()));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXd row = vector_from_json(j.at(static_cast<std::size_t>(i)));
    if (row.size() != cols) throw Error("model file: ragged support matrix");
    m.row(i) = row.transpose();
  }
  return m;
}

template <typename M>
void write_common(json& j, const M& m) {
  j["kernel"] = {{"family", to_string(m.kernel.family)}, {"gamma", m.kernel.gamma}};
  j["scaler"] = {{"mean", vector_to_json(m.scaler.mean)},
                 {"scale", vector_to_json(m.scaler.scale)},
                 {"floored", m.scaler.floored}};
  j["cost"] = m.cost;
  j["training_pairs"] = m.training_pairs;
  j["sv_x"] = matrix_to_json(m.sv_x);
  j["sv_x_prime"] = matrix_to_json(m.sv_x_prime);
  j["sv_y"] = m.sv_y;
  j["sv_v"] = vector_to_json(m.sv_v);
}

template <typename M>
void read_common(const json& j, M& m) {
  m.kernel.family = kernel_family_from_string(j.at("kernel").at("family").get<std::string>());
  m.kernel.gamma = j.at("kernel").at("gamma").get<double>();
  m.kernel.validate();
  m.scaler.mean = vector_from_json(j.at("scaler").at("mean"));
  m.scaler.scale = vector_from_json(j.at("scaler").at("scale"));
  m.scaler.floored = j.at("scaler").at("floored").get<bool>();
  if (m.scaler.mean.size() != m.scaler.scale.size() || m.scaler.mean.size() == 0) {
    throw Error("model file: bad scaler");
  }
  m.cost = j.at("cost").get<double>();
  m.training_pairs = j.at("training_pairs").get<std::size_t>();
  const Eigen::Index p = m.scaler.mean.size();
  m.sv_x = matrix_from_json(j.at("sv_x"), p);
  m.sv_x_prime = matrix_from_json(j.at("sv_x_prime"), p);
  m.sv_y = j.at("sv_y").get<std::vector<int>>();
  m.sv_v = vector_from_json(j.at("sv_v"));
  const auto n = static_cast<Eigen::Index>(m.sv_y.size());
  if (m.sv_x.rows() != n || m.sv_x_prime.rows() != n || m.sv_v.size() != n) {
    throw Error("model file: support vector arrays disagree in length");
  }
}

}  // namespace

void save_model(std::ostream& out, const ModelFile& f) {
  json j;
  j["format"] = kFormat;
  j["version"] = ModelFile::kVersion;
  j["algorithm"] = to_string(algorithm_of(f.model));
  if (const auto* c = std::get_if<CompareModel>(&f.model)) {
    write_common(j, *c);
    j["beta"] = c->beta;
    j["tau"] = CompareModel::kCanonicalTau;
    j["flipped_rows"] = c->flipped_rows;
  } else {
    const auto& r = std::get<RankModel>(f.model);
    write_common(j, r);
    j["tau"] = r.tau_hat;
  }
  if (f.cell) j["grid_cell"] = {{"cost", f.cell->cost}, {"gamma", f.cell->gamma}};
  out << j.dump(1) << '\n';
}

void save_model(const std::string& path, const ModelFile& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  save_model(out, f);
}

ModelFile load_model(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("model file: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw Error("model file: unrecognized format");
    }
    const int version = j.at("version").get<int>();
    if (version != ModelFile::kVersion) {
      throw Error("model file: unsupported version " + std::to_string(version));
    }
    ModelFile f;
    const Algorithm algo = algorithm_from_string(j.at("algorithm").get<std::string>());
    if (algo == Algorithm::kCompare) {
      CompareModel c;
      read_common(j, c);
      c.beta = j.at("beta").get<double>();
      c.flipped_rows = j.at("flipped_rows").get<std::size_t>();
      f.model = std::move(c);
    } else {
      RankModel r;
      r.algorithm = algo;
      read_common(j, r);
      r.tau_hat = j.at("tau").get<double>();
      f.model = std::move(r);
    }
    if (j.contains("grid_cell")) {
      f.cell = TrainingCell{j["grid_cell"].at("cost").get<double>(),
                            j["grid_cell"].at("gamma").get<double>()};
    }
    return f;
  } catch (const json::exception& e) {
    throw Error(std::string("model file: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_model(in);
}

}  // namespace svmcompare
