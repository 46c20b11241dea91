#include "svmcompare/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>

#include "svmcompare/error.hpp"
#include "svmcompare/lpmargin.hpp"

namespace svmcompare {

namespace {

// splitmix64 finalizer; spreads (seed, stream) into unrelated generator seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const char* measure_of(Metric m) { return m == Metric::kZeroOne ? "zero_one" : "auc"; }

}  // namespace

Splits simulate_splits(Pattern pattern, std::size_t n, double rho, double sigma,
                       std::uint64_t seed) {
  auto make = [&](std::uint64_t stream) {
    return simulate_dataset({pattern, n, rho, sigma, derive_seed(seed, stream)});
  };
  return {make(0), make(1), make(2)};
}

Splits sample_splits(const PairDataset& pool, std::size_t n, double rho,
                     std::uint64_t seed) {
  auto parts = sample_disjoint(pool, n, rho, 3, seed);
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

std::vector<RunRecord> run_split(const Splits& s, const ExperimentConfig& cfg,
                                 Metric metric, const RunRecord& prototype) {
  std::vector<RunRecord> out;
  for (Algorithm algo : cfg.algorithms) {
    RunRecord r = prototype;
    r.algorithm = algo;
    r.metric = metric;
    try {
      const GridSearchResult g = grid_search(s.train, s.val, algo, metric, cfg.search);
      for (const GridCell& c : g.cells) r.failed_cells += c.ok ? 0 : 1;
      r.cost = g.cells[g.best].cost;
      r.gamma = g.cells[g.best].gamma;
      r.test = evaluate(g.model, s.test);
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> run_error_vs_n(const ExperimentConfig& cfg) {
  std::vector<RunRecord> out;
  for (Pattern p : cfg.patterns) {
    for (std::size_t n : cfg.n_list) {
      for (std::size_t k = 0; k < cfg.seeds; ++k) {
        RunRecord proto;
        proto.study = "error-vs-n";
        proto.source = to_string(p);
        proto.n = n;
        proto.rho = cfg.rho;
        proto.seed = cfg.base_seed + k;
        const Splits s = simulate_splits(p, n, cfg.rho, cfg.sigma, proto.seed);
        auto rows = run_split(s, cfg, Metric::kZeroOne, proto);
        out.insert(out.end(), rows.begin(), rows.end());
      }
    }
  }
  return out;
}

std::vector<RunRecord> run_auc_vs_rho(const ExperimentConfig& cfg) {
  std::vector<RunRecord> out;
  for (Pattern p : cfg.patterns) {
    for (double rho : cfg.rho_list) {
      for (std::size_t k = 0; k < cfg.seeds; ++k) {
        RunRecord proto;
        proto.study = "auc-vs-rho";
        proto.source = to_string(p);
        proto.n = cfg.n;
        proto.rho = rho;
        proto.seed = cfg.base_seed + k;
        const Splits s = simulate_splits(p, cfg.n, rho, cfg.sigma, proto.seed);
        auto rows = run_split(s, cfg, Metric::kAuc, proto);
        out.insert(out.end(), rows.begin(), rows.end());
      }
    }
  }
  return out;
}

std::vector<RunRecord> run_on_pool(const PairDataset& pool, const std::string& name,
                                   Metric metric, const ExperimentConfig& cfg) {
  std::vector<RunRecord> out;
  for (std::size_t k = 0; k < cfg.seeds; ++k) {
    RunRecord proto;
    proto.study = metric == Metric::kZeroOne ? "error-vs-n" : "auc-vs-rho";
    proto.source = name;
    proto.n = cfg.n;
    proto.rho = cfg.rho;
    proto.seed = cfg.base_seed + k;
    const Splits s = sample_splits(pool, cfg.n, cfg.rho, proto.seed);
    auto rows = run_split(s, cfg, metric, proto);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<Summary> summarize(const std::vector<RunRecord>& runs) {
  using Key = std::tuple<std::string, std::string, int, std::size_t, double, int>;
  std::map<Key, std::vector<double>> groups;
  std::vector<Key> order;
  for (const RunRecord& r : runs) {
    if (!r.ok) continue;
    const double v = r.metric == Metric::kZeroOne ? r.test.zero_one : r.test.auc;
    if (std::isnan(v)) continue;
    Key key{r.study, r.source, static_cast<int>(r.algorithm), r.n, r.rho,
            static_cast<int>(r.metric)};
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.push_back(v);
  }
  std::vector<Summary> out;
  for (const Key& key : order) {
    const auto& values = groups[key];
    Summary s;
    s.study = std::get<0>(key);
    s.source = std::get<1>(key);
    s.algorithm = static_cast<Algorithm>(std::get<2>(key));
    s.n = std::get<3>(key);
    s.rho = std::get<4>(key);
    s.measure = measure_of(static_cast<Metric>(std::get<5>(key)));
    s.runs = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(s);
  }
  return out;
}

void write_results(std::ostream& out, const std::vector<RunRecord>& runs,
                   const std::vector<Summary>& summaries, bool header) {
  if (header) {
    out << kResultsSchema << '\n'
        << "kind,study,source,algorithm,n,rho,seed,metric,cost,gamma,zero_one,auc,"
           "fp,fn,inversions,failed_cells,runs,mean,sd,error\n";
  }
  for (const RunRecord& r : runs) {
    std::string err = r.error;
    for (char& c : err) {
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    }
    out << "run," << r.study << ',' << r.source << ',' << to_string(r.algorithm) << ','
        << r.n << ',' << fmt(r.rho) << ',' << r.seed << ',' << to_string(r.metric) << ','
        << fmt(r.cost) << ',' << fmt(r.gamma) << ','
        << (r.ok ? fmt(r.test.zero_one) : "nan") << ','
        << (r.ok ? fmt(r.test.auc) : "nan") << ',' << r.test.fp << ',' << r.test.fn << ','
        << r.test.inversions << ',' << r.failed_cells << ",1,,," << err << '\n';
  }
  for (const Summary& s : summaries) {
    out << "summary," << s.study << ',' << s.source << ',' << to_string(s.algorithm) << ','
        << s.n << ',' << fmt(s.rho) << ",," << s.measure << ",,,,,,,,," << s.runs << ','
        << fmt(s.mean) << ',' << fmt(s.sd) << ",\n";
  }
}

void append_results(const std::string& path, const std::vector<RunRecord>& runs,
                    const std::vector<Summary>& summaries) {
  bool header = true;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (first != kResultsSchema) {
      throw Error(path + " is not a results file of schema '" + kResultsSchema + "'");
    }
    header = false;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_results(out, runs, summaries, header);
}

void write_evaluation_header(std::ostream& out) {
  out << "model,n,rho,seed,zero_one,auc,fp,fn,inversions\n";
}

void write_evaluation_row(std::ostream& out, const std::string& model,
                          std::size_t n, double rho, std::uint64_t seed,
                          const Evaluation& e) {
  out << model << ',' << n << ',' << fmt(rho) << ',' << seed << ',' << fmt(e.zero_one)
      << ',' << fmt(e.auc) << ',' << e.fp << ',' << e.fn << ',' << e.inversions << '\n';
}

MarginTrial margin_trial(const PairDataset& d, std::size_t trial,
                         const MarginTrialOptions& opts) {
  MarginTrial t;
  t.trial = trial;
  t.n = d.size();
  try {
    const PairDataset scaled = apply_scaler(fit_scaler(d), d);
    const LpSolution lp = solve_max_margin_lp(scaled);
    if (lp.status != LpStatus::kOptimal) {
      throw Error(std::string("LP is ") + to_string(lp.status));
    }
    t.lp_mu = lp.mu;

    TrainOptions train;
    train.standardize = false;
    train.solver.tol = opts.tol;
    const CompareModel m = train_compare(scaled, opts.cost, KernelSpec::linear(), train);
    const MappedMargin mapped = qp_to_lp_margin(m.primal_weights(), m.beta);
    t.mapped_mu = mapped.mu_hat;
    t.feasibility_violation = check_lp_feasible(mapped.w_hat, mapped.mu_hat, scaled);
    t.ok = true;
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

void write_margin_trials(std::ostream& out, const std::vector<MarginTrial>& trials) {
  out << "trial,lp_mu,mapped_mu,feasibility_violation\n";
  for (const MarginTrial& t : trials) {
    out << t.trial << ',' << fmt(t.lp_mu) << ',' << fmt(t.mapped_mu) << ','
        << fmt(t.feasibility_violation) << '\n';
  }
}

void export_level_curves(const Model& m, std::size_t resolution, std::ostream& out) {
  if (model_dim(m) != 2) {
    throw Error("level curves need a 2D model, got dimension " +
                std::to_string(model_dim(m)));
  }
  if (resolution < 2) throw Error("resolution must be at least 2");
  const double step = 6.0 / static_cast<double>(resolution - 1);
  out << "x1,x2,r\n";
  Eigen::VectorXd x(2);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      x << -3.0 + step * static_cast<double>(i), -3.0 + step * static_cast<double>(j);
      out << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(rank_score(m, x)) << '\n';
    }
  }
}

}  // namespace svmcompare
