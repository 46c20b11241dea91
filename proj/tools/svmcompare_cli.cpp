// Command-line front end: data generation, training, evaluation and the
// simulation studies. Every subcommand writes CSV (model files are JSON).

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svmcompare/error.hpp"
#include "svmcompare/experiment.hpp"
#include "svmcompare/model.hpp"
#include "svmcompare/model_io.hpp"
#include "svmcompare/pairdata.hpp"
#include "svmcompare/simulate.hpp"
#include "svmcompare/sushi.hpp"

namespace sc = svmcompare;

namespace {

// "-" is stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw sc::Error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<sc::Pattern> parse_patterns(const std::vector<std::string>& names) {
  std::vector<sc::Pattern> out;
  for (const auto& n : names) out.push_back(sc::pattern_from_string(n));
  return out;
}

double tie_fraction(const sc::PairDataset& d) {
  return d.empty() ? 0.0
                   : static_cast<double>(d.count_equal()) / static_cast<double>(d.size());
}

struct GridFlags {
  std::vector<double> costs;
  std::vector<double> gammas;
  unsigned workers = 0;
  bool no_standardize = false;
  double tol = 1e-3;

  void attach(CLI::App* app) {
    app->add_option("--costs", costs, "Cost grid (default 10^-3..10^3, 10 points)");
    app->add_option("--gammas", gammas, "Gaussian gamma grid (default 2^-7..2^4, 10 points)");
    app->add_option("--workers", workers, "Worker threads, 0 = hardware concurrency");
    app->add_flag("--no-standardize", no_standardize, "Train on raw features");
    app->add_option("--tol", tol, "Solver KKT tolerance");
  }

  sc::GridSearchOptions options() const {
    sc::GridSearchOptions o;
    if (!costs.empty()) o.grid.costs = costs;
    if (!gammas.empty()) o.grid.gammas = gammas;
    o.workers = workers;
    o.train.standardize = !no_standardize;
    o.train.solver.tol = tol;
    return o;
  }
};

void report(const std::vector<sc::RunRecord>& runs) {
  for (const auto& r : runs) {
    if (!r.ok) {
      std::cerr << "run failed: " << r.source << " " << sc::to_string(r.algorithm)
                << " n=" << r.n << " rho=" << r.rho << " seed=" << r.seed << ": "
                << r.error << '\n';
    }
  }
  for (const auto& s : sc::summarize(runs)) {
    std::cerr << s.source << ' ' << sc::to_string(s.algorithm) << " n=" << s.n
              << " rho=" << s.rho << ' ' << s.measure << " mean=" << s.mean
              << " sd=" << s.sd << " runs=" << s.runs << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning to compare with ties: SVMcompare and SVMrank baselines"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a simulated pair dataset");
  std::string sim_pattern = "norm2", sim_out = "-";
  sc::SimSpec spec;
  sim->add_option("--pattern", sim_pattern, "norm1, norm2 or norminf")->capture_default_str();
  sim->add_option("--n", spec.n, "Number of pairs")->capture_default_str();
  sim->add_option("--rho", spec.rho, "Proportion of ties")->capture_default_str();
  sim->add_option("--sigma", spec.sigma, "Label noise sd")->capture_default_str();
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("-o,--out", sim_out, "Output pair CSV")->capture_default_str();

  // train
  auto* tr = app.add_subcommand("train", "Train a model on a pair CSV");
  std::string tr_data, tr_val, tr_out = "model.json", tr_algo = "compare",
                              tr_kernel = "gaussian", tr_metric = "zero_one";
  double tr_cost = 1.0, tr_gamma = 1.0;
  GridFlags tr_grid;
  tr->add_option("--data", tr_data, "Training pairs")->required()->check(CLI::ExistingFile);
  tr->add_option("--val", tr_val, "Validation pairs; enables the grid search")
      ->check(CLI::ExistingFile);
  tr->add_option("--algorithm", tr_algo, "compare, rank or rank2")->capture_default_str();
  tr->add_option("--kernel", tr_kernel, "linear or gaussian")->capture_default_str();
  tr->add_option("--cost", tr_cost, "Cost C")->capture_default_str();
  tr->add_option("--gamma", tr_gamma, "Gaussian gamma")->capture_default_str();
  tr->add_option("--metric", tr_metric, "Grid search metric: zero_one or auc")
      ->capture_default_str();
  tr->add_option("-o,--out", tr_out, "Model file")->capture_default_str();
  tr->add_option("--seed", seed, "Random seed (training is deterministic)");
  tr_grid.attach(tr);

  // predict
  auto* pr = app.add_subcommand("predict", "Predict labels for a pair CSV");
  std::string pr_model, pr_data, pr_out = "-";
  pr->add_option("--model", pr_model, "Model file")->required()->check(CLI::ExistingFile);
  pr->add_option("--data", pr_data, "Pairs (y is ignored)")->required()->check(CLI::ExistingFile);
  pr->add_option("-o,--out", pr_out, "Output CSV")->capture_default_str();
  pr->add_option("--seed", seed, "Random seed (unused)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Zero-one loss, AUC and error counts");
  std::string ev_model, ev_data, ev_out = "-", ev_name;
  ev->add_option("--model", ev_model, "Model file")->required()->check(CLI::ExistingFile);
  ev->add_option("--data", ev_data, "Labelled pairs")->required()->check(CLI::ExistingFile);
  ev->add_option("--name", ev_name, "Value of the model column (default: algorithm)");
  ev->add_option("-o,--out", ev_out, "Output CSV")->capture_default_str();
  ev->add_option("--seed", seed, "Seed recorded in the report");

  // lp-check
  auto* lp = app.add_subcommand("lp-check", "Max-margin LP vs hard-margin QP trials");
  std::size_t lp_trials = 50, lp_n = 20;
  std::string lp_out = "-";
  lp->add_option("--trials", lp_trials, "Number of datasets")->capture_default_str();
  lp->add_option("--n", lp_n, "Pairs per dataset")->capture_default_str();
  lp->add_option("--seed", seed, "Random seed");
  lp->add_option("-o,--out", lp_out, "Output CSV")->capture_default_str();

  // sushi-prepare
  auto* su = app.add_subcommand("sushi-prepare", "Build pairs from the sushi3b files");
  std::string su_dir, su_out = "-", su_prefs;
  su->add_option("--sushi-dir", su_dir, "Directory with the sushi3 files")
      ->required()
      ->check(CLI::ExistingDirectory);
  su->add_option("--prefectures", su_prefs, "Prefecture coordinate table");
  su->add_option("--seed", seed, "Pairing seed");
  su->add_option("-o,--out", su_out, "Output pair CSV")->capture_default_str();

  // experiments
  sc::ExperimentConfig cfg;
  std::vector<std::string> exp_patterns{"norm1", "norm2", "norminf"};
  std::string exp_out = "results.csv", exp_pool, exp_pool_name = "pool";
  GridFlags exp_grid;
  auto attach_common = [&](CLI::App* c) {
    c->add_option("--patterns", exp_patterns, "Latent patterns")->capture_default_str();
    c->add_option("--seeds", cfg.seeds, "Number of seeds")->capture_default_str();
    c->add_option("--seed", seed, "First seed");
    c->add_option("--sigma", cfg.sigma, "Label noise sd")->capture_default_str();
    c->add_option("--pool", exp_pool, "Sample splits from this pair CSV instead of simulating")
        ->check(CLI::ExistingFile);
    c->add_option("--pool-name", exp_pool_name, "Source name for pool runs")
        ->capture_default_str();
    c->add_option("-o,--out", exp_out, "Results CSV (appended)")->capture_default_str();
    exp_grid.attach(c);
  };
  auto* en = app.add_subcommand("exp-error-vs-n", "Test zero-one loss as n varies");
  attach_common(en);
  en->add_option("--n-list", cfg.n_list, "Training set sizes")->capture_default_str();
  en->add_option("--rho", cfg.rho, "Proportion of ties")->capture_default_str();
  auto* er = app.add_subcommand("exp-auc-vs-rho", "Test AUC as rho varies");
  attach_common(er);
  er->add_option("--rho-list", cfg.rho_list, "Tie proportions")->capture_default_str();
  er->add_option("--n", cfg.n, "Training set size")->capture_default_str();

  // export-levels
  auto* lv = app.add_subcommand("export-levels", "Ranking function on a 2D lattice");
  std::string lv_model, lv_out = "-";
  std::size_t lv_res = 101;
  lv->add_option("--model", lv_model, "Model file")->required()->check(CLI::ExistingFile);
  lv->add_option("--resolution", lv_res, "Points per axis")->capture_default_str();
  lv->add_option("--seed", seed, "Random seed (unused)");
  lv->add_option("-o,--out", lv_out, "Output CSV")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      spec.pattern = sc::pattern_from_string(sim_pattern);
      spec.seed = seed;
      Output out(sim_out);
      sc::write_pairs_csv(out.stream(), sc::simulate_dataset(spec));
    } else if (*tr) {
      const sc::PairDataset data = sc::read_pairs_csv(tr_data);
      const sc::Algorithm algo = sc::algorithm_from_string(tr_algo);
      sc::ModelFile file;
      if (!tr_val.empty()) {
        const sc::PairDataset val = sc::read_pairs_csv(tr_val);
        sc::GridSearchResult g = sc::grid_search(data, val, algo,
                                                 sc::metric_from_string(tr_metric),
                                                 tr_grid.options());
        const sc::GridCell& best = g.cells[g.best];
        std::cerr << "selected C=" << best.cost << " gamma=" << best.gamma
                  << " val_zero_one=" << best.val_zero_one << " val_auc=" << best.val_auc
                  << '\n';
        file.model = std::move(g.model);
        file.cell = sc::TrainingCell{best.cost, best.gamma};
      } else {
        const sc::KernelFamily fam = sc::kernel_family_from_string(tr_kernel);
        const sc::KernelSpec kernel = fam == sc::KernelFamily::kLinear
                                          ? sc::KernelSpec::linear()
                                          : sc::KernelSpec::gaussian(tr_gamma);
        file.model = sc::train(algo, data, tr_cost, kernel, tr_grid.options().train);
      }
      sc::save_model(tr_out, file);
    } else if (*pr) {
      const sc::Model m = sc::load_model(pr_model).model;
      const sc::PairDataset data = sc::read_pairs_csv(pr_data);
      Output out(pr_out);
      auto& os = out.stream();
      os.precision(17);
      os << "r_x,r_x_prime,diff,yhat\n";
      for (const auto& p : data) {
        const double a = sc::rank_score(m, p.x);
        const double b = sc::rank_score(m, p.x_prime);
        os << a << ',' << b << ',' << b - a << ','
           << sc::t_tau(b - a, sc::comparison_threshold(m)) << '\n';
      }
    } else if (*ev) {
      const sc::Model m = sc::load_model(ev_model).model;
      const sc::PairDataset data = sc::read_pairs_csv(ev_data);
      Output out(ev_out);
      sc::write_evaluation_header(out.stream());
      sc::write_evaluation_row(out.stream(),
                               ev_name.empty() ? sc::to_string(sc::algorithm_of(m)) : ev_name,
                               data.size(), tie_fraction(data), seed, sc::evaluate(m, data));
    } else if (*lp) {
      std::vector<sc::MarginTrial> trials;
      for (std::size_t t = 0; t < lp_trials; ++t) {
        trials.push_back(sc::margin_trial(sc::make_separable_dataset(lp_n, seed + t), t));
        if (!trials.back().ok) {
          std::cerr << "trial " << t << " failed: " << trials.back().error << '\n';
        }
      }
      Output out(lp_out);
      sc::write_margin_trials(out.stream(), trials);
    } else if (*su) {
      sc::SushiParseOptions opts;
      opts.prefecture_table = su_prefs;
      const sc::SushiTables t = sc::parse_sushi(su_dir, opts);
      const sc::PairDataset pairs = sc::build_pairs(t, seed);
      std::cerr << "users=" << t.users() << " items=" << t.items()
                << " pairs=" << pairs.size() << " ties=" << pairs.count_equal()
                << " first_better=" << pairs.count(sc::Label::kFirstBetter)
                << " second_better=" << pairs.count(sc::Label::kSecondBetter)
                << " tie_fraction=" << tie_fraction(pairs) << '\n';
      Output out(su_out);
      sc::write_pairs_csv(out.stream(), pairs);
    } else if (*en || *er) {
      cfg.patterns = parse_patterns(exp_patterns);
      cfg.base_seed = seed;
      cfg.search = exp_grid.options();
      std::vector<sc::RunRecord> runs;
      if (!exp_pool.empty()) {
        const sc::PairDataset pool = sc::read_pairs_csv(exp_pool);
        if (*en) {
          for (std::size_t n : cfg.n_list) {
            cfg.n = n;
            auto r = sc::run_on_pool(pool, exp_pool_name, sc::Metric::kZeroOne, cfg);
            runs.insert(runs.end(), r.begin(), r.end());
          }
        } else {
          for (double rho : cfg.rho_list) {
            cfg.rho = rho;
            auto r = sc::run_on_pool(pool, exp_pool_name, sc::Metric::kAuc, cfg);
            runs.insert(runs.end(), r.begin(), r.end());
          }
        }
      } else {
        runs = *en ? sc::run_error_vs_n(cfg) : sc::run_auc_vs_rho(cfg);
      }
      report(runs);
      if (exp_out == "-") {
        sc::write_results(std::cout, runs, sc::summarize(runs), true);
      } else {
        sc::append_results(exp_out, runs, sc::summarize(runs));
      }
    } else if (*lv) {
      const sc::Model m = sc::load_model(lv_model).model;
      Output out(lv_out);
      sc::export_level_curves(m, lv_res, out.stream());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
