// bacl: command-line front end for the graph ensemble experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bacl/harness.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using bacl::ErrorKind;
using bacl::harness::ExperimentConfig;
using bacl::harness::RunOutput;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  bacl::require(static_cast<bool>(os), ErrorKind::io, "cannot write " + path.string());
  os << text;
}

void write_manifest(const fs::path& path, const RunOutput& run) {
  write_text(path, bacl::harness::to_json(run.manifest).dump(2) + "\n");
}

/// Single-table verbs write the table to --out and the manifest beside it.
void write_single(const RunOutput& run, const std::string& table, const std::string& out) {
  write_text(out, run.files.at(table));
  for (const auto& [name, text] : run.files)
    if (name != table) write_text(fs::path(out).replace_filename(fs::path(out).stem().string() + "." + name), text);
  write_manifest(out + ".manifest.json", run);
}

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::json j{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
}

std::string graph_spectrum_csv(const bacl::Graph& g, const std::string& mode) {
  bacl::harness::CsvWriter csv =
      mode == "full" ? bacl::harness::CsvWriter{"index", "eigenvalue"}
      : mode == "extreme" ? bacl::harness::CsvWriter{"which", "eigenvalue"}
                          : bacl::harness::CsvWriter{"vertex", "value"};
  if (mode == "full") {
    const auto values = bacl::full_spectrum(g);
    for (std::size_t i = 0; i < values.size(); ++i) csv.row(i, values[i]);
  } else if (mode == "extreme") {
    const auto e = bacl::extreme_eigs(g);
    csv.row("first", e.lambda1);
    csv.row("second", e.lambda2);
    csv.row("last", e.lambda_n);
  } else if (mode == "principal") {
    const auto v = bacl::principal_eigenvector(g);
    for (std::size_t i = 0; i < v.size(); ++i) csv.row(i, v[i]);
  } else {
    bacl::fail(ErrorKind::config, "mode must be full, extreme or principal");
  }
  return csv.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barabasi-Albert vs Chung-Lu spectral comparison and quantum search experiments"};
  app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig cfg;
  std::string out;
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  app.add_option("--out", out, "Output file or directory");

  auto add_cell_options = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.order_list, "Graph order(s), ascending")->delimiter(',');
    sub->add_option("--m0", cfg.m0_list, "BA parameter(s)")->delimiter(',');
    sub->add_option("--eps", cfg.epsilon, "Weight derivation tolerance")->capture_default_str();
    sub->add_option("--batch", cfg.batch, "Weight derivation batch size")->capture_default_str();
    sub->add_option("--max-rounds", cfg.max_rounds, "Weight derivation round cap")->capture_default_str();
    sub->add_option("--cache-dir", cfg.cache_dir, "Directory for cached weight vectors");
  };

  // derive-weights
  auto* derive = app.add_subcommand("derive-weights", "Derive CL weights from BA ensembles");
  add_cell_options(derive);

  // generate
  std::string gen_model = "ba";
  auto* generate = app.add_subcommand("generate", "Sample one graph as an edge list");
  generate->add_option("--model", gen_model, "ba | cl")->capture_default_str();
  generate->add_option("--n", cfg.order_list)->delimiter(',');
  generate->add_option("--m0", cfg.m0_list)->delimiter(',');
  generate->add_option("--weights", cfg.weights_path, "Weight CSV for the CL model");

  // spectrum
  std::string in_path, mode = "full";
  auto* spectrum = app.add_subcommand("spectrum", "Spectrum of an edge-list graph");
  spectrum->add_option("--in", in_path, "Edge-list file")->required();
  spectrum->add_option("--mode", mode, "full | extreme | principal")->capture_default_str();

  // comparison experiments
  std::vector<CLI::App*> comparisons;
  for (const char* name : {"spectral-bulk", "extreme-eigs", "principal-vec"}) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " comparison");
    add_cell_options(sub);
    sub->add_option("--trials", cfg.trials, "Samples per model and cell")->capture_default_str();
    sub->add_option("--compare", cfg.compare, "cl | ba | ba-same")->capture_default_str();
    comparisons.push_back(sub);
  }

  // ctqw-search
  auto* search = app.add_subcommand("ctqw-search", "Quantum spatial search on one model");
  add_cell_options(search);
  search->add_option("--model", cfg.model, "ba | cl")->capture_default_str();
  search->add_option("--weights", cfg.weights_path, "Weight CSV for the CL model");
  search->add_option("--marked", cfg.marked, "Marked vertex id (default m0)");
  search->add_option("--tmax", cfg.tmax)->capture_default_str();
  search->add_option("--dt", cfg.dt)->capture_default_str();
  search->add_option("--rule", cfg.rule, "plateau | expected")->capture_default_str();
  search->add_option("--coeff", cfg.coeff, "Overhead coefficient c in (t + c ln n)/p")->capture_default_str();
  search->add_option("--rel-tol", cfg.rel_tol, "Plateau rule relative margin")->capture_default_str();
  search->add_option("--backend", cfg.backend, "krylov | dense")->capture_default_str();
  search->add_option("--tolerance", cfg.tolerance)->capture_default_str();
  search->add_option("--trials", cfg.trials)->capture_default_str();

  // scaling
  auto* scaling = app.add_subcommand("scaling", "Search-time scaling exponent");
  add_cell_options(scaling);
  scaling->add_option("--model", cfg.model, "ba | cl | both")->capture_default_str();
  scaling->add_option("--marked", cfg.marked, "Marked vertex id (default m0)");
  scaling->add_option("--coeff", cfg.coeff)->capture_default_str();
  scaling->add_option("--trials", cfg.trials)->capture_default_str();
  scaling->add_option("--backend", cfg.backend)->capture_default_str();

  // degree-law
  auto* law = app.add_subcommand("degree-law", "Evaluate a degree law, optionally against a sample");
  law->add_option("--m0", cfg.m0_list)->delimiter(',');
  law->add_option("--law", cfg.law, "pmf | density")->capture_default_str();
  law->add_option("--sample", cfg.sample_path, "CSV sample (last column is used)");
  law->add_option("--kmax", cfg.kmax)->capture_default_str();

  // replay
  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run an experiment from its manifest");
  replay->add_option("--manifest", manifest_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*replay) {
      bacl::require(!out.empty(), ErrorKind::config, "--out is required");
      ExperimentConfig replayed = bacl::harness::read_manifest(manifest_path).config;
      if (app.count("--workers") > 0) replayed.workers = cfg.workers;
      bacl::harness::write_run(bacl::harness::run_experiment(replayed), out);
      return 0;
    }
    bacl::require(!out.empty(), ErrorKind::config, "--out is required");

    if (*generate) {
      const std::size_t n = cfg.order_list.front(), m0 = cfg.m0_list.front();
      const bacl::Seed seed{cfg.seed};
      bacl::Graph g;
      if (gen_model == "ba") {
        g = bacl::generate_ba(n, m0, seed);
      } else {
        bacl::require(gen_model == "cl", ErrorKind::config, "model must be ba or cl");
        const auto w = cfg.weights_path.empty() ? bacl::harness::weights_for(cfg, n, m0)
                                                : bacl::load_weights_csv(cfg.weights_path);
        g = bacl::generate_cl(w, seed);
      }
      bacl::save_edge_list(out, g);
      return 0;
    }
    if (*spectrum) {
      write_text(out, graph_spectrum_csv(bacl::load_edge_list(in_path), mode));
      return 0;
    }
    if (*derive) {
      cfg.experiment = "derive-weights";
      bacl::require(cfg.order_list.size() == 1 && cfg.m0_list.size() == 1, ErrorKind::config,
                    "derive-weights takes a single --n and --m0");
      const RunOutput run = bacl::harness::run_experiment(cfg);
      write_single(run,
                   "weights_n" + std::to_string(cfg.order_list[0]) + "_m" + std::to_string(cfg.m0_list[0]) + ".csv",
                   out);
      return 0;
    }
    if (*search) {
      cfg.experiment = "ctqw-search";
      write_single(bacl::harness::run_experiment(cfg), "ctqw_search.csv", out);
      return 0;
    }
    if (*law) {
      cfg.experiment = "degree-law";
      const RunOutput run = bacl::harness::run_experiment(cfg);
      write_single(run, cfg.sample_path.empty() ? "degree_law.csv" : "degree_law_compare.csv", out);
      return 0;
    }
    for (auto* sub : comparisons)
      if (*sub) cfg.experiment = sub->get_name();
    if (*scaling) cfg.experiment = "scaling";
    bacl::harness::write_run(bacl::harness::run_experiment(cfg), out);
    return 0;
  } catch (const bacl::Error& e) {
    emit_error(std::string(bacl::to_string(e.kind())), e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
}
