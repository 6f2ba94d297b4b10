#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "entpoly/commands.hpp"
#include "entpoly/error.hpp"

using namespace entpoly;

namespace {

struct Options {
  std::string config_file;
  std::string state;
  std::string params;
  std::optional<std::uint64_t> seed;
  std::optional<double> counts;
  std::optional<double> eta;
  std::optional<double> visibility;
  std::optional<double> purity;
  std::optional<int> trials;
  std::optional<double> statistical_z;
  std::string out_dir = ".";
  std::string format = "json";
  bool degrees = false;
};

cli::ExperimentConfig build_config(const Options& o) {
  cli::set_stage("config");
  cli::ExperimentConfig cfg;
  if (!o.config_file.empty()) {
    io::Json j;
    try {
      j = io::Json::parse(io::read_file(o.config_file));
    } catch (const io::Json::exception& e) {
      throw InvalidArgument(std::string("cannot parse config: ") + e.what());
    }
    cfg = cli::ExperimentConfig::from_json(j);
  }
  if (!o.state.empty()) cfg.state = cli::state_from_name(o.state);
  if (!o.params.empty()) {
    const auto values = io::parse_list(o.params);
    if (cfg.state.kind == cli::StateKind::Family) {
      if (values.size() > 4) throw InvalidArgument("--params takes at most four family parameters");
      cfg.state.params = {};
      for (std::size_t i = 0; i < values.size(); ++i) cfg.state.params[i] = values[i];
    } else {
      if (values.size() != 2) throw InvalidArgument("--params takes alpha,beta for this state");
      cfg.state.alpha = values[0];
      cfg.state.beta = values[1];
    }
  }
  if (o.seed) cfg.seed = o.seed;
  if (o.counts) {
    cfg.detector.source_rate = *o.counts;
    cfg.detector.integration_time = 1.0;
  }
  if (o.eta) cfg.detector.efficiency = *o.eta;
  if (o.visibility) cfg.visibility = *o.visibility;
  if (o.purity) {
    cfg.purity = o.purity;
    cfg.purity_source = cli::PuritySource::Value;
  }
  if (o.trials) cfg.mc_trials = *o.trials;
  if (o.statistical_z) cfg.statistical_z = *o.statistical_z;
  if (o.degrees) cfg.degrees = true;
  cfg.out_dir = o.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-polytope witness pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::kVersion);

  Options o;
  app.add_option("--config", o.config_file, "ExperimentConfig JSON file");
  app.add_option("--state", o.state, "class (GHZ, W, BS_AB_C, ...), circuit preset or family name");
  app.add_option("--params", o.params, "family parameters a,b,c,d or amplitudes alpha,beta");
  app.add_option("--seed", o.seed, "seed for every stochastic stage");
  app.add_option("--counts", o.counts, "expected events per setting at unit efficiency");
  app.add_option("--eta", o.eta, "detector efficiency");
  app.add_option("--visibility", o.visibility, "white-noise visibility");
  app.add_option("--purity", o.purity, "global purity used for the noise bound");
  app.add_option("--trials", o.trials, "Monte Carlo trials for error bars");
  app.add_option("--statistical-z", o.statistical_z, "error-bar multiple added to epsilon, 0 disables");
  app.add_option("--out-dir", o.out_dir, "output directory");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--degrees", o.degrees, "circuit angles are given in degrees");

  auto* prepare = app.add_subcommand("prepare", "write the prepared density matrix");
  prepare->fallthrough();

  bool full_plan = false;
  auto* measure = app.add_subcommand("measure", "simulate tomography counts");
  measure->add_flag("--full", full_plan, "all 4^N product settings instead of the local plan");
  measure->fallthrough();

  std::string counts_file;
  std::string mode = "local";
  auto* reconstruct = app.add_subcommand("reconstruct", "maximum-likelihood reconstruction from counts");
  reconstruct->add_option("counts_file", counts_file, "counts CSV or JSON")->required();
  reconstruct->add_option("--mode", mode, "local or global")->check(CLI::IsMember({"local", "global"}));
  reconstruct->fallthrough();

  std::string spectrum;
  std::optional<double> epsilon;
  std::string witness_counts;
  auto* witness = app.add_subcommand("witness", "classify a local spectrum");
  witness->add_option("--spectrum", spectrum, "comma-separated maximal local eigenvalues");
  witness->add_option("--counts-file", witness_counts, "local tomography counts");
  witness->add_option("--epsilon", epsilon, "noise margin instead of a purity");
  witness->fallthrough();

  int qubits = 4;
  double overhead_eta = 1.0;
  std::string method = "all";
  int rank = 1;
  auto* overhead = app.add_subcommand("overhead", "measurement overhead per method");
  overhead->add_option("--qubits", qubits, "number of qubits");
  overhead->add_option("--method", method, "LPM, FQST, CSQST, WITNESS_A, WITNESS_B or all");
  overhead->add_option("--rank", rank, "compressed-sensing rank");
  overhead->fallthrough();

  auto* run = app.add_subcommand("run", "full pipeline with report");
  run->fallthrough();

  std::string target;
  auto* reproduce = app.add_subcommand("reproduce", "regenerate a published figure or table");
  reproduce->add_option("target", target, "fig3, fig4, table1 or overhead")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "table1", "overhead"}));
  reproduce->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const cli::ExperimentConfig cfg = build_config(o);
    const cli::Format format = cli::parse_format(o.format);
    std::vector<std::filesystem::path> written;
    if (*prepare) {
      written = cli::cmd_prepare(cfg);
    } else if (*measure) {
      written = cli::cmd_measure(cfg, full_plan, format);
    } else if (*reconstruct) {
      written = cli::cmd_reconstruct(counts_file, mode == "global", cfg);
    } else if (*witness) {
      cli::WitnessInput in;
      if (!spectrum.empty()) in.spectrum = io::parse_list(spectrum);
      if (!witness_counts.empty()) in.counts_file = witness_counts;
      in.purity = o.purity;
      in.epsilon = epsilon;
      written = cli::cmd_witness(in, cfg, format);
    } else if (*overhead) {
      if (o.eta) overhead_eta = *o.eta;
      written = cli::cmd_overhead(qubits, overhead_eta, method, rank, cfg, format);
    } else if (*run) {
      written = cli::cmd_run(cfg);
    } else if (*reproduce) {
      written = cli::cmd_reproduce(target, cfg);
    }
    for (const auto& path : written) std::cout << path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error in stage '" << cli::current_stage() << "': " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
}
