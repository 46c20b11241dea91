#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "svmcompare/error.hpp"
#include "svmcompare/model_io.hpp"
#include "svmcompare/simulate.hpp"

using namespace svmcompare;

TEST_CASE("save and load reproduce predictions bit for bit") {
  const PairDataset d = simulate_dataset({Pattern::kNormInf, 50, 0.5, 0.25, 4});
  const PairDataset probe = simulate_dataset({Pattern::kNormInf, 30, 0.5, 0.25, 5});
  for (Algorithm a : {Algorithm::kCompare, Algorithm::kRank, Algorithm::kRank2}) {
    for (const KernelSpec k : {KernelSpec::linear(), KernelSpec::gaussian(0.7)}) {
      ModelFile f;
      f.model = train(a, d, 2.0, k);
      f.cell = TrainingCell{2.0, 0.7};
      std::stringstream buf;
      save_model(buf, f);
      const ModelFile back = load_model(buf);
      CHECK(algorithm_of(back.model) == a);
      REQUIRE(back.cell.has_value());
      CHECK(back.cell->cost == 2.0);
      CHECK(comparison_threshold(back.model) == comparison_threshold(f.model));
      CHECK(rank_differences(back.model, probe) == rank_differences(f.model, probe));
    }
  }
}

TEST_CASE("model files round-trip through disk") {
  testing::TempDir dir;
  ModelFile f;
  f.model = train(Algorithm::kCompare, testing::toy_1d(), 10.0, KernelSpec::linear());
  save_model(dir.file("m.json"), f);
  const ModelFile back = load_model(dir.file("m.json"));
  CHECK_FALSE(back.cell.has_value());
  const auto& c = std::get<CompareModel>(back.model);
  CHECK(c.beta == std::get<CompareModel>(f.model).beta);
  CHECK(c.flipped_rows == 3);
}

TEST_CASE("malformed model files are rejected") {
  std::istringstream not_json("hello");
  CHECK_THROWS_AS(load_model(not_json), Error);
  std::istringstream wrong_format(R"({"format": "other", "version": 1})");
  CHECK_THROWS_WITH_AS(load_model(wrong_format), doctest::Contains("format"), Error);
  std::istringstream wrong_version(R"({"format": "svmcompare-model", "version": 99})");
  CHECK_THROWS_WITH_AS(load_model(wrong_version), doctest::Contains("version"), Error);
  std::istringstream missing(R"({"format": "svmcompare-model", "version": 1, "algorithm": "rank"})");
  CHECK_THROWS_AS(load_model(missing), Error);
  CHECK_THROWS_AS(load_model(std::string("/nonexistent/model.json")), Error);
}
