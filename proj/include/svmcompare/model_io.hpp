#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "svmcompare/model.hpp"

namespace svmcompare {

// Grid cell a model came from, recorded alongside it.
struct TrainingCell {
  double cost = 0.0;
  double gamma = 0.0;
};

struct ModelFile {
  static constexpr int kVersion = 1;
  Model model;
  std::optional<TrainingCell> cell;
};

// Self-describing JSON document. Doubles are written in shortest round-trip
// form, so loading reproduces predictions exactly.
void save_model(std::ostream& out, const ModelFile& f);
void save_model(const std::string& path, const ModelFile& f);
ModelFile load_model(std::istream& in);
ModelFile load_model(const std::string& path);

}  // namespace svmcompare
