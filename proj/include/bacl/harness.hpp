#pragma once

// Experiment drivers. Each run returns its output tables as CSV text keyed by
// file name, together with a manifest that is sufficient to replay it.
// Every random draw comes from a substream derived from the master seed and
// a (stream, n, m0, trial) path, and rows are emitted in trial order, so the
// tables do not depend on the worker count.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bacl/ctqw.hpp"
#include "bacl/error.hpp"
#include "bacl/generators.hpp"
#include "bacl/graph.hpp"
#include "bacl/models.hpp"
#include "bacl/parallel.hpp"
#include "bacl/rng.hpp"
#include "bacl/spectra.hpp"
#include "bacl/stats.hpp"
#include "bacl/weights.hpp"
#include "json.hpp"

namespace bacl::harness {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
  std::string experiment;
  std::vector<std::size_t> m0_list{4};
  std::vector<std::size_t> order_list{1000};
  std::size_t trials = 50;
  double epsilon = 0.05;
  std::size_t batch = 300;
  std::size_t max_rounds = 200;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string cache_dir;  // empty: weights are not cached

  // Second ensemble for the comparison experiments: "cl" (the model under
  // study), "ba" (an independent BA ensemble, null control) or "ba-same"
  // (the very same BA graphs, identity control).
  std::string compare = "cl";

  // ctqw-search / scaling
  std::string model = "ba";  // ba | cl | both (scaling only)
  std::string weights_path;
  std::optional<std::size_t> marked;  // default: m0
  double tmax = 15.0;
  double dt = 0.1;
  std::string rule = "plateau";  // plateau | expected
  double coeff = 0.1;
  double rel_tol = 0.2;
  std::string backend = "krylov";  // krylov | dense
  double tolerance = 1e-9;

  // degree-law
  std::string law = "pmf";
  std::string sample_path;
  std::size_t kmax = 100;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"spectral-bulk", "extreme-eigs", "principal-vec",
                                              "ctqw-search",   "scaling",      "derive-weights",
                                              "degree-law"};
  return names;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["m0_list"] = c.m0_list;
  j["order_list"] = c.order_list;
  j["trials"] = c.trials;
  j["epsilon"] = c.epsilon;
  j["batch"] = c.batch;
  j["max_rounds"] = c.max_rounds;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["cache_dir"] = c.cache_dir;
  j["compare"] = c.compare;
  j["model"] = c.model;
  j["weights_path"] = c.weights_path;
  j["marked"] = c.marked ? nlohmann::json(*c.marked) : nlohmann::json(nullptr);
  j["tmax"] = c.tmax;
  j["dt"] = c.dt;
  j["rule"] = c.rule;
  j["coeff"] = c.coeff;
  j["rel_tol"] = c.rel_tol;
  j["backend"] = c.backend;
  j["tolerance"] = c.tolerance;
  j["law"] = c.law;
  j["sample_path"] = c.sample_path;
  j["kmax"] = c.kmax;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.experiment = j.at("experiment").get<std::string>();
    c.m0_list = j.at("m0_list").get<std::vector<std::size_t>>();
    c.order_list = j.at("order_list").get<std::vector<std::size_t>>();
    c.trials = j.at("trials").get<std::size_t>();
    c.epsilon = j.at("epsilon").get<double>();
    c.batch = j.at("batch").get<std::size_t>();
    c.max_rounds = j.at("max_rounds").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.workers = j.at("workers").get<std::size_t>();
    c.cache_dir = j.at("cache_dir").get<std::string>();
    c.compare = j.at("compare").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.weights_path = j.at("weights_path").get<std::string>();
    if (!j.at("marked").is_null()) c.marked = j.at("marked").get<std::size_t>();
    c.tmax = j.at("tmax").get<double>();
    c.dt = j.at("dt").get<double>();
    c.rule = j.at("rule").get<std::string>();
    c.coeff = j.at("coeff").get<double>();
    c.rel_tol = j.at("rel_tol").get<double>();
    c.backend = j.at("backend").get<std::string>();
    c.tolerance = j.at("tolerance").get<double>();
    c.law = j.at("law").get<std::string>();
    c.sample_path = j.at("sample_path").get<std::string>();
    c.kmax = j.at("kmax").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("invalid experiment config: ") + e.what());
  }
  return c;
}

struct TrialSeed {
  std::string stream;
  std::size_t n = 0;
  std::size_t m0 = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
};

struct RunManifest {
  ExperimentConfig config;
  std::vector<TrialSeed> trial_seeds;
  std::string tool_version = kToolVersion;
  std::string started;
  std::string finished;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool_version"] = m.tool_version;
  j["master_seed"] = m.config.seed;
  j["config"] = to_json(m.config);
  j["started"] = m.started;
  j["finished"] = m.finished;
  auto& seeds = j["trial_seeds"] = nlohmann::json::array();
  for (const auto& s : m.trial_seeds)
    seeds.push_back({{"stream", s.stream}, {"n", s.n}, {"m0", s.m0}, {"trial", s.trial}, {"seed", s.seed}});
  return j;
}

struct RunOutput {
  std::map<std::string, std::string> files;  // file name -> CSV text
  RunManifest manifest;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// CSV text with a fixed number format so that output is byte-stable.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string> header) {
    bool first = true;
    for (const auto& h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
    os_ << std::setprecision(17);
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((os_ << (first ? "" : ",") << fields, first = false), ...);
    os_ << '\n';
  }

  void line(const std::string& text) { os_ << text << '\n'; }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

enum StreamTag : std::uint64_t {
  kWeightsStream = 1,
  kBaStream = 2,
  kClStream = 3,
  kControlStream = 4,
  kSearchStream = 5,
};

inline Seed trial_seed(const ExperimentConfig& cfg, StreamTag tag, std::size_t n, std::size_t m0,
                       std::size_t trial) {
  return derive_seed(Seed{cfg.seed}, {tag, n, m0, trial});
}

inline void validate(const ExperimentConfig& cfg) {
  require(cfg.trials >= 1, ErrorKind::config, "trials must be >= 1");
  require(cfg.workers >= 1, ErrorKind::config, "workers must be >= 1");
  require(!cfg.order_list.empty(), ErrorKind::config, "order list is empty");
  require(!cfg.m0_list.empty(), ErrorKind::config, "m0 list is empty");
  for (std::size_t k = 1; k < cfg.order_list.size(); ++k)
    require(cfg.order_list[k] > cfg.order_list[k - 1], ErrorKind::config,
            "orders must be strictly ascending");
  require(cfg.epsilon > 0.0, ErrorKind::config, "epsilon must be > 0");
  require(cfg.batch >= 1, ErrorKind::config, "batch must be >= 1");
}

/// CL weights for a cell: derived once per (n, m0, ...) and cached on disk
/// when a cache directory is configured. Cached values round-trip exactly.
inline WeightVector weights_for(const ExperimentConfig& cfg, std::size_t n, std::size_t m0) {
  DerivationConfig dc;
  dc.n = n;
  dc.m0 = m0;
  dc.batch = cfg.batch;
  dc.epsilon = cfg.epsilon;
  dc.max_rounds = cfg.max_rounds;
  dc.workers = cfg.workers;
  dc.seed = derive_seed(Seed{cfg.seed}, {kWeightsStream, n, m0});
  std::filesystem::path cache;
  if (!cfg.cache_dir.empty()) {
    std::ostringstream name;
    name << "weights_n" << n << "_m" << m0 << "_b" << cfg.batch << "_e" << std::setprecision(17)
         << cfg.epsilon << "_r" << cfg.max_rounds << "_s" << dc.seed.value << ".csv";
    cache = std::filesystem::path(cfg.cache_dir) / name.str();
    if (std::filesystem::exists(cache)) return load_weights_csv(cache.string());
  }
  WeightVector w = derive_weights(dc).w_bar;
  if (!cache.empty()) {
    std::filesystem::create_directories(cache.parent_path());
    const auto tmp = cache.string() + ".tmp";
    save_weights_csv(tmp, w);
    std::filesystem::rename(tmp, cache);
  }
  return w;
}

/// Second-ensemble graph for a comparison trial.
inline Graph comparison_graph(const ExperimentConfig& cfg, const WeightVector* w, std::size_t n,
                              std::size_t m0, std::size_t trial, const Graph& ba) {
  if (cfg.compare == "ba-same") return ba;
  if (cfg.compare == "ba") {
    const Seed s = trial_seed(cfg, kControlStream, n, m0, trial);
    return generate_ba(n, m0, s);
  }
  return generate_cl(*w, trial_seed(cfg, kClStream, n, m0, trial));
}

inline void record_seeds(const ExperimentConfig& cfg, RunManifest& manifest, std::size_t n,
                         std::size_t m0) {
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    manifest.trial_seeds.push_back({"ba", n, m0, t, trial_seed(cfg, kBaStream, n, m0, t).value});
    if (cfg.compare == "cl")
      manifest.trial_seeds.push_back({"cl", n, m0, t, trial_seed(cfg, kClStream, n, m0, t).value});
    else if (cfg.compare == "ba")
      manifest.trial_seeds.push_back({"ba-control", n, m0, t, trial_seed(cfg, kControlStream, n, m0, t).value});
  }
}

inline void require_compare(const ExperimentConfig& cfg) {
  require(cfg.compare == "cl" || cfg.compare == "ba" || cfg.compare == "ba-same", ErrorKind::config,
          "compare must be cl, ba or ba-same");
}

/// Eigenvalues rounded to 1e-9 so that numerically split copies of one exact
/// eigenvalue (e.g. the many zeros of forests) tie in the KS statistic.
inline std::vector<double> quantized(std::vector<double> values) {
  for (double& v : values) v = std::round(v * 1e9) / 1e9 + 0.0;
  return values;
}

inline RunOutput run_spectral_bulk(const ExperimentConfig& cfg) {
  validate(cfg);
  require_compare(cfg);
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  CsvWriter csv{"n", "m0", "pair_index", "p_value"};
  for (std::size_t n : cfg.order_list)
    for (std::size_t m0 : cfg.m0_list) {
      std::optional<WeightVector> w;
      if (cfg.compare == "cl") w = weights_for(cfg, n, m0);
      record_seeds(cfg, out.manifest, n, m0);
      std::vector<double> p(cfg.trials);
      parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) {
        const Graph ba = generate_ba(n, m0, trial_seed(cfg, kBaStream, n, m0, i));
        const Graph other = comparison_graph(cfg, w ? &*w : nullptr, n, m0, i, ba);
        const auto a = quantized(full_spectrum(ba));
        const auto b = quantized(full_spectrum(other));
        p[i] = ks_two_sample(a, b).p_value;
      });
      for (std::size_t i = 0; i < cfg.trials; ++i) csv.row(n, m0, i, p[i]);
    }
  out.files["spectral_bulk.csv"] = csv.str();
  out.manifest.finished = utc_timestamp();
  return out;
}

inline RunOutput run_extreme_eigs(const ExperimentConfig& cfg) {
  validate(cfg);
  require_compare(cfg);
  require(cfg.trials >= 30, ErrorKind::config, "extreme-eigs needs at least 30 trials per cell");
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  CsvWriter csv{"n", "m0", "which", "mean_ba", "mean_cl", "p_value_standardized"};
  for (std::size_t n : cfg.order_list)
    for (std::size_t m0 : cfg.m0_list) {
      std::optional<WeightVector> w;
      if (cfg.compare == "cl") w = weights_for(cfg, n, m0);
      record_seeds(cfg, out.manifest, n, m0);
      std::vector<ExtremeEigs> ba_eigs(cfg.trials), other_eigs(cfg.trials);
      parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) {
        const Graph ba = generate_ba(n, m0, trial_seed(cfg, kBaStream, n, m0, i));
        const Graph other = comparison_graph(cfg, w ? &*w : nullptr, n, m0, i, ba);
        ba_eigs[i] = extreme_eigs(ba);
        other_eigs[i] = extreme_eigs(other);
      });
      const std::pair<const char*, double ExtremeEigs::*> kinds[] = {
          {"first", &ExtremeEigs::lambda1}, {"second", &ExtremeEigs::lambda2}, {"last", &ExtremeEigs::lambda_n}};
      for (const auto& [name, member] : kinds) {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < cfg.trials; ++i) {
          a.push_back(ba_eigs[i].*member);
          b.push_back(other_eigs[i].*member);
        }
        const double p = ks_two_sample(standardize(a), standardize(b)).p_value;
        csv.row(n, m0, name, mean(a), mean(b), p);
      }
    }
  out.files["extreme_eigs.csv"] = csv.str();
  out.manifest.finished = utc_timestamp();
  return out;
}

inline RunOutput run_principal_vec(const ExperimentConfig& cfg) {
  validate(cfg);
  require_compare(cfg);
  require(cfg.trials >= 10, ErrorKind::config, "principal-vec needs at least 10 trials");
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  CsvWriter csv{"n", "m0", "trial", "euclid_half", "inf_norm", "status"};
  for (std::size_t n : cfg.order_list)
    for (std::size_t m0 : cfg.m0_list) {
      std::optional<WeightVector> w;
      if (cfg.compare == "cl") w = weights_for(cfg, n, m0);
      record_seeds(cfg, out.manifest, n, m0);
      struct Row {
        double euclid = 0.0, inf = 0.0;
        std::string status = "ok";
      };
      std::vector<Row> rows(cfg.trials);
      parallel_for(cfg.trials, cfg.workers, [&](std::size_t i) {
        const Graph ba = generate_ba(n, m0, trial_seed(cfg, kBaStream, n, m0, i));
        const Graph other = comparison_graph(cfg, w ? &*w : nullptr, n, m0, i, ba);
        std::vector<double> a, b;
        try {
          a = principal_eigenvector(ba);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::degeneracy) throw;
          rows[i].status = "excluded:degenerate-ba";
          return;
        }
        try {
          b = principal_eigenvector(other);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::degeneracy) throw;
          rows[i].status = "excluded:degenerate-" + cfg.compare;
          return;
        }
        rows[i].euclid = euclid_half_distance(a, b);
        rows[i].inf = inf_distance(a, b);
      });
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        if (rows[i].status == "ok")
          csv.row(n, m0, i, rows[i].euclid, rows[i].inf, rows[i].status);
        else
          csv.row(n, m0, i, "", "", rows[i].status);
      }
    }
  out.files["principal_vec.csv"] = csv.str();
  out.manifest.finished = utc_timestamp();
  return out;
}

inline EvolutionConfig evolution_config(const ExperimentConfig& cfg) {
  EvolutionConfig ec;
  require(cfg.backend == "krylov" || cfg.backend == "dense", ErrorKind::config,
          "backend must be krylov or dense");
  ec.backend = cfg.backend == "dense" ? EvolutionBackend::dense : EvolutionBackend::krylov;
  ec.tolerance = cfg.tolerance;
  return ec;
}

inline Graph model_graph(const std::string& model, std::size_t n, std::size_t m0, const WeightVector* w,
                         Seed seed) {
  if (model == "ba") return generate_ba(n, m0, seed);
  require(model == "cl", ErrorKind::config, "model must be ba or cl");
  return generate_cl(*w, seed);
}

/// Weights for a CL search: from the configured file, else derived.
inline WeightVector search_weights(const ExperimentConfig& cfg, std::size_t n, std::size_t m0) {
  if (!cfg.weights_path.empty()) {
    WeightVector w = load_weights_csv(cfg.weights_path);
    require(w.size() == n, ErrorKind::config, "weights file length does not match n");
    return w;
  }
  return weights_for(cfg, n, m0);
}

inline RunOutput run_ctqw(const ExperimentConfig& cfg) {
  validate(cfg);
  require(cfg.rule == "plateau" || cfg.rule == "expected", ErrorKind::config,
          "rule must be plateau or expected");
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  const std::size_t n = cfg.order_list.front();
  const std::size_t m0 = cfg.m0_list.front();
  std::optional<WeightVector> w;
  if (cfg.model == "cl") w = search_weights(cfg, n, m0);
  const std::size_t marked = cfg.marked.value_or(m0);
  const auto times = uniform_grid(cfg.tmax, cfg.dt);
  const EvolutionConfig ec = evolution_config(cfg);

  std::vector<SearchRun> runs(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t)
    out.manifest.trial_seeds.push_back({cfg.model, n, m0, t, trial_seed(cfg, kSearchStream, n, m0, t).value});
  parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
    const Graph g = model_graph(cfg.model, n, m0, w ? &*w : nullptr, trial_seed(cfg, kSearchStream, n, m0, t));
    require(marked < n, ErrorKind::config, "marked vertex out of range");
    const SearchOperator op = SearchOperator::with_default_rate(g, static_cast<Vertex>(marked));
    SearchRun run = success_probabilities(op, times, ec);
    if (cfg.rule == "plateau") {
      const auto best = optimal_time_plateau(run, cfg.rel_tol);
      run.t_opt = best.t_opt;
      run.p_opt = best.p_opt;
      run.expected_time = (best.t_opt + cfg.coeff * std::log(static_cast<double>(n))) / best.p_opt;
    } else {
      const auto best = optimal_expected_time(run, n, cfg.coeff);
      run.t_opt = best.t_opt;
      run.p_opt = best.p_opt;
      run.expected_time = best.expected_time;
    }
    runs[t] = std::move(run);
  });

  CsvWriter curve{"t", "p"};
  for (std::size_t k = 0; k < runs[0].times.size(); ++k) curve.row(runs[0].times[k], runs[0].probs[k]);
  std::ostringstream summary;
  summary << std::setprecision(17) << "# summary t_opt=" << runs[0].t_opt << " p_opt=" << runs[0].p_opt
          << " expected_time=" << *runs[0].expected_time;
  curve.line(summary.str());
  out.files["ctqw_search.csv"] = curve.str();

  CsvWriter optimal{"trial", "t_opt", "p_opt", "expected_time"};
  for (std::size_t t = 0; t < runs.size(); ++t)
    optimal.row(t, runs[t].t_opt, runs[t].p_opt, *runs[t].expected_time);
  out.files["ctqw_optimal.csv"] = optimal.str();
  out.manifest.finished = utc_timestamp();
  return out;
}

inline RunOutput run_scaling(const ExperimentConfig& cfg) {
  validate(cfg);
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  const std::size_t m0 = cfg.m0_list.front();
  const std::size_t marked = cfg.marked.value_or(m0);
  const EvolutionConfig ec = evolution_config(cfg);
  std::vector<std::string> models;
  if (cfg.model == "both") models = {"ba", "cl"};
  else models = {cfg.model};

  CsvWriter trials_csv{"model", "n", "trial", "t_opt", "p_opt", "expected_time"};
  CsvWriter summary_csv{"model", "n", "mean_expected_time"};
  CsvWriter fit_csv{"model", "alpha", "intercept"};
  for (const auto& model : models) {
    require(model == "ba" || model == "cl", ErrorKind::config, "model must be ba, cl or both");
    const StreamTag tag = model == "ba" ? kBaStream : kClStream;
    std::map<std::size_t, WeightVector> weights;
    if (model == "cl")
      for (std::size_t n : cfg.order_list) weights.emplace(n, weights_for(cfg, n, m0));
    std::map<std::pair<std::size_t, std::size_t>, SearchRun> runs;
    for (std::size_t n : cfg.order_list)
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        out.manifest.trial_seeds.push_back({model, n, m0, t, trial_seed(cfg, tag, n, m0, t).value});
        runs[{n, t}];
      }
    const ScalingResult result = search_scaling(
        cfg.order_list, cfg.trials,
        [&](std::size_t n, std::size_t t) {
          const WeightVector* w = model == "cl" ? &weights.at(n) : nullptr;
          const Graph g = model_graph(model, n, m0, w, trial_seed(cfg, tag, n, m0, t));
          SearchRun run = expected_time_search(g, static_cast<Vertex>(marked), cfg.coeff, ec);
          const double e = *run.expected_time;
          runs.at({n, t}) = std::move(run);
          return e;
        },
        cfg.workers);
    for (const auto& row : result.table) {
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto& run = runs.at({row.n, t});
        trials_csv.row(model, row.n, t, run.t_opt, run.p_opt, *run.expected_time);
      }
      summary_csv.row(model, row.n, row.mean_expected_time);
    }
    fit_csv.row(model, result.fit.slope, result.fit.intercept);
  }
  out.files["scaling_trials.csv"] = trials_csv.str();
  out.files["scaling_summary.csv"] = summary_csv.str();
  out.files["scaling_fit.csv"] = fit_csv.str();
  out.manifest.finished = utc_timestamp();
  return out;
}

inline RunOutput run_derive_weights(const ExperimentConfig& cfg) {
  validate(cfg);
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  CsvWriter summary{"n", "m0", "rounds", "last_sup_delta", "sum_w"};
  for (std::size_t n : cfg.order_list)
    for (std::size_t m0 : cfg.m0_list) {
      DerivationConfig dc;
      dc.n = n;
      dc.m0 = m0;
      dc.batch = cfg.batch;
      dc.epsilon = cfg.epsilon;
      dc.max_rounds = cfg.max_rounds;
      dc.workers = cfg.workers;
      dc.seed = derive_seed(Seed{cfg.seed}, {kWeightsStream, n, m0});
      out.manifest.trial_seeds.push_back({"weights", n, m0, 0, dc.seed.value});
      const DerivationResult r = derive_weights(dc);
      std::ostringstream w;
      write_weights_csv(w, r.w_bar);
      out.files["weights_n" + std::to_string(n) + "_m" + std::to_string(m0) + ".csv"] = w.str();
      summary.row(n, m0, r.rounds, r.sup_deltas.back(), r.w_bar.sum());
    }
  out.files["derive_weights.csv"] = summary.str();
  out.manifest.finished = utc_timestamp();
  return out;
}

/// Reads a one-column sample, or the last column of a multi-column CSV;
/// non-numeric rows (headers) are skipped.
inline std::vector<double> read_sample_csv(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.rfind(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      values.push_back(v);
    } catch (const std::exception&) {
      continue;
    }
  }
  return values;
}

inline RunOutput run_degree_law(const ExperimentConfig& cfg) {
  require(!cfg.m0_list.empty(), ErrorKind::config, "m0 list is empty");
  require(cfg.law == "pmf" || cfg.law == "density", ErrorKind::config, "law must be pmf or density");
  RunOutput out;
  out.manifest.config = cfg;
  out.manifest.started = utc_timestamp();
  const auto m0 = static_cast<long>(cfg.m0_list.front());
  const DegreeLawKind kind = cfg.law == "pmf" ? DegreeLawKind::pmf : DegreeLawKind::density;
  CsvWriter law{"k", "value", "cdf"};
  for (long k = m0; k <= static_cast<long>(cfg.kmax); ++k) {
    const double x = static_cast<double>(k);
    if (kind == DegreeLawKind::pmf) law.row(k, ba_degree_pmf(k, m0), ba_degree_cdf(x, m0));
    else law.row(k, expected_degree_density(x, m0), expected_degree_cdf(x, m0));
  }
  out.files["degree_law.csv"] = law.str();
  if (!cfg.sample_path.empty()) {
    const auto sample = read_sample_csv(cfg.sample_path);
    CsvWriter cmp{"m0", "law", "sample_size", "sup_distance"};
    cmp.row(m0, cfg.law, sample.size(), histogram_compare(sample, kind, m0));
    out.files["degree_law_compare.csv"] = cmp.str();
  }
  out.manifest.finished = utc_timestamp();
  return out;
}

inline RunOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "spectral-bulk") return run_spectral_bulk(cfg);
  if (cfg.experiment == "extreme-eigs") return run_extreme_eigs(cfg);
  if (cfg.experiment == "principal-vec") return run_principal_vec(cfg);
  if (cfg.experiment == "ctqw-search") return run_ctqw(cfg);
  if (cfg.experiment == "scaling") return run_scaling(cfg);
  if (cfg.experiment == "derive-weights") return run_derive_weights(cfg);
  if (cfg.experiment == "degree-law") return run_degree_law(cfg);
  fail(ErrorKind::config, "unknown experiment '" + cfg.experiment + "'");
}

/// Writes every table plus manifest.json into dir.
inline void write_run(const RunOutput& run, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : run.files) {
    std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::io, "cannot write " + name + " in " + dir);
    os << text;
  }
  std::ofstream os(std::filesystem::path(dir) / "manifest.json");
  require(static_cast<bool>(os), ErrorKind::io, "cannot write manifest in " + dir);
  os << to_json(run.manifest).dump(2) << '\n';
}

inline RunManifest read_manifest(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::io, std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  m.config = config_from_json(j.at("config"));
  m.tool_version = j.value("tool_version", std::string{});
  return m;
}

}  // namespace bacl::harness
