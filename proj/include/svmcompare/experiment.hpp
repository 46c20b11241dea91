#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "svmcompare/model.hpp"
#include "svmcompare/pairdata.hpp"
#include "svmcompare/simulate.hpp"

namespace svmcompare {

struct Splits {
  PairDataset train;
  PairDataset val;
  PairDataset test;
};

// Three independent simulations; the seeds are derived from `seed` so the
// sets never share a draw.
Splits simulate_splits(Pattern pattern, std::size_t n, double rho, double sigma,
                       std::uint64_t seed);
// Three disjoint samples of `pool`, each with n pairs and proportion rho.
Splits sample_splits(const PairDataset& pool, std::size_t n, double rho,
                     std::uint64_t seed);

struct ExperimentConfig {
  std::vector<Pattern> patterns{Pattern::kNorm1, Pattern::kNorm2, Pattern::kNormInf};
  std::vector<std::size_t> n_list{50, 100, 200, 400, 800};
  std::vector<double> rho_list{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t n = 400;  // fixed n of the rho study
  double rho = 0.5;     // fixed rho of the n study
  double sigma = 0.25;
  std::size_t seeds = 4;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::kCompare, Algorithm::kRank,
                                    Algorithm::kRank2};
  GridSearchOptions search;
};

// One (source, algorithm, n, rho, seed) run.
struct RunRecord {
  std::string study;   // "error-vs-n", "auc-vs-rho" or caller supplied
  std::string source;  // pattern name or dataset name
  Algorithm algorithm = Algorithm::kCompare;
  Metric metric = Metric::kZeroOne;
  std::size_t n = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double cost = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  std::size_t failed_cells = 0;
  Evaluation test;
};

struct Summary {
  std::string study;
  std::string source;
  Algorithm algorithm = Algorithm::kCompare;
  std::size_t n = 0;
  double rho = 0.0;
  std::string measure;  // "zero_one" or "auc"
  std::size_t runs = 0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();  // sample sd
};

// Grid-searches every algorithm on one split and scores the chosen model on
// the test set. Failures are recorded in the returned rows.
std::vector<RunRecord> run_split(const Splits& s, const ExperimentConfig& cfg,
                                 Metric metric, const RunRecord& prototype);

// Seeds run base_seed, base_seed + 1, ...
std::vector<RunRecord> run_error_vs_n(const ExperimentConfig& cfg);
std::vector<RunRecord> run_auc_vs_rho(const ExperimentConfig& cfg);
// Same protocol on a fixed pool (e.g. the sushi pairs) at cfg.n, cfg.rho.
std::vector<RunRecord> run_on_pool(const PairDataset& pool, const std::string& name,
                                   Metric metric, const ExperimentConfig& cfg);

// Groups successful runs by (study, source, algorithm, n, rho) and reports
// the test measure selected by the run's metric.
std::vector<Summary> summarize(const std::vector<RunRecord>& runs);

// Results CSV. A new or empty file starts with the schema line and header;
// existing files are appended to after the schema line is checked.
inline constexpr const char* kResultsSchema = "# svmcompare-results v1";
void append_results(const std::string& path, const std::vector<RunRecord>& runs,
                    const std::vector<Summary>& summaries);
void write_results(std::ostream& out, const std::vector<RunRecord>& runs,
                   const std::vector<Summary>& summaries, bool header);

// Evaluation report: model,n,rho,seed,zero_one,auc,fp,fn,inversions
void write_evaluation_header(std::ostream& out);
void write_evaluation_row(std::ostream& out, const std::string& model,
                          std::size_t n, double rho, std::uint64_t seed,
                          const Evaluation& e);

// Hard-margin SVMcompare vs the max-margin LP on a standardized separable
// 2D dataset.
struct MarginTrial {
  std::size_t trial = 0;
  std::size_t n = 0;
  bool ok = false;
  std::string error;
  double lp_mu = std::numeric_limits<double>::quiet_NaN();
  double mapped_mu = std::numeric_limits<double>::quiet_NaN();
  double feasibility_violation = std::numeric_limits<double>::quiet_NaN();
};

struct MarginTrialOptions {
  double cost = 1e6;
  double tol = 1e-10;
};

MarginTrial margin_trial(const PairDataset& d, std::size_t trial,
                         const MarginTrialOptions& opts = {});
// trial,lp_mu,mapped_mu,feasibility_violation
void write_margin_trials(std::ostream& out, const std::vector<MarginTrial>& trials);

// r on a resolution x resolution lattice over [-3, 3]^2 as x1,x2,r rows.
void export_level_curves(const Model& m, std::size_t resolution, std::ostream& out);

}  // namespace svmcompare
