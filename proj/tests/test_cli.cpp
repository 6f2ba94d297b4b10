#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "entpoly/commands.hpp"
#include "entpoly/error.hpp"

using namespace entpoly;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("entpoly_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct ToolResult {
  int code = -1;
  std::string err;
};

ToolResult tool(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(ENTPOLY_TOOL) + " " + args + " --out-dir " + dir.string() + " >/dev/null 2>" +
                          err.string();
  const int status = std::system(cmd.c_str());
  ToolResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = io::read_file(err);
  return r;
}

io::Json read_json(const fs::path& p) { return io::Json::parse(io::read_file(p)); }

cli::ExperimentConfig config_for(const std::string& state, std::uint64_t seed, const fs::path& dir) {
  cli::ExperimentConfig cfg;
  cfg.state = cli::state_from_name(state);
  cfg.seed = seed;
  cfg.out_dir = dir;
  return cfg;
}

}  // namespace

TEST_CASE("canonical number formatting") {
  CHECK(io::round_significant(0.1 + 0.2) == 0.3);
  CHECK(io::round_significant(1.0 / 3.0) == 0.333333333333);
  CHECK(!std::signbit(io::round_significant(-0.0)));
  const io::Json j = io::canonical({{"b", 2.0000000000001}, {"a", {1.0 / 3.0, 7}}});
  CHECK(j.dump() == R"({"a":[0.333333333333,7],"b":2.0})");
  CHECK(io::hex64(io::fnv1a("")) == "cbf29ce484222325");
  CHECK(io::hex64(io::fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("prepared state files") {
  const fs::path dir = scratch("prepare");
  cli::cmd_prepare(config_for("GHZ", 1, dir));
  const DensityMatrix ghz = io::density_from_json(read_json(dir / "state.json"));
  CHECK(std::abs(fidelity(ghz, canonical_three_qubit(ThreeQubitClass::GHZ)) - 1.0) < 1e-12);

  cli::cmd_prepare(config_for("w", 1, dir));
  const DensityMatrix w = io::density_from_json(read_json(dir / "state.json"));
  // (|000> + |110> - |011>)/sqrt3 from the circuit expansion.
  for (Eigen::Index r = 0; r < 8; ++r) {
    for (Eigen::Index c = 0; c < 8; ++c) {
      const auto amp = [](Eigen::Index i) {
        if (i == 0 || i == 6) return 1.0 / std::sqrt(3.0);
        if (i == 3) return -1.0 / std::sqrt(3.0);
        return 0.0;
      };
      CHECK(std::abs(w(r, c) - cplx(amp(r) * amp(c))) < 1e-12);
    }
  }

  auto cfg = config_for("GHZ", 1, dir);
  cfg.visibility = 0.9;
  cli::cmd_prepare(cfg);
  const DensityMatrix noisy = io::density_from_json(read_json(dir / "state.json"));
  CHECK(std::abs(purity(noisy) - (0.81 + 0.19 / 8.0)) < 1e-11);
  CHECK_THROWS_AS(io::density_from_json(io::Json{{"num_qubits", 1}, {"entries", {{1, 0}}}}), InvalidArgument);
}

TEST_CASE("counts survive the CSV round trip") {
  const DensityMatrix rho = mix_white_noise(haar_random_pure(3, 4), 0.8);
  const auto recs = simulate_plan(rho, full_tomography_plan(3), {0.9, 500.0, 1.0}, 12);
  const std::string csv = io::counts_to_csv(recs, 3);
  const auto back = io::counts_from_csv(csv);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].setting.scope == recs[i].setting.scope);
    CHECK(back[i].counts == recs[i].counts);
    CHECK(back[i].setting.id(3) == recs[i].setting.id(3));
  }
  CHECK(io::counts_to_csv(back, 3) == csv);
  CHECK_THROWS_AS(io::counts_from_csv("id,outcome,count\n"), InvalidArgument);
  CHECK_THROWS_AS(io::counts_from_csv("setting_id,outcome,count\n0__,0,5\n"), InvalidArgument);
  CHECK_THROWS_AS(io::counts_from_csv("setting_id,outcome,count\n0__,0,5\n0__,1,-1\n"), InvalidArgument);
}

TEST_CASE("config JSON") {
  const io::Json j = {{"state", {{"kind", "circuit3"}, {"angles", {45.0, 45.0}}}},
                      {"degrees", true},
                      {"seed", 3},
                      {"counts", 2000},
                      {"purity", 0.9}};
  const cli::ExperimentConfig cfg = cli::ExperimentConfig::from_json(j);
  CHECK(cfg.purity_source == cli::PuritySource::Value);
  CHECK(cfg.detector.source_rate == 2000.0);
  const PureState psi = cli::target_state(cfg.state, cfg.degrees);
  CHECK(std::abs(fidelity(psi.projector(), canonical_three_qubit(ThreeQubitClass::GHZ)) - 1.0) < 1e-12);
  CHECK(cli::ExperimentConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());
  CHECK_THROWS_AS(cli::ExperimentConfig::from_json({{"sede", 1}}), InvalidArgument);
  CHECK_THROWS_AS(cli::ExperimentConfig::from_json({{"visibility", "high"}}), InvalidArgument);
  CHECK_THROWS_AS(cli::state_from_name("GHZ5"), InvalidArgument);
}

TEST_CASE("run verdicts at visibility one") {
  const struct {
    const char* state;
    Statement statement;
  } cases[] = {{"GHZ", Statement::GhzCertified},
               {"W", Statement::GenuineUndetermined},
               {"BS_AB_C", Statement::BiseparableConsistent},
               {"BS_BC_A", Statement::BiseparableConsistent},
               {"S", Statement::SeparableConsistent}};
  for (const auto& c : cases) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto cfg = config_for(c.state, seed, ".");
      cfg.detector.source_rate = 1e5;
      cfg.purity_trials = 0;
      const cli::RunOutcome out = cli::run_pipeline(cfg);
      CAPTURE(c.state);
      CHECK(out.verdict.statement == c.statement);
    }
  }
}

TEST_CASE("identical config and seed give byte-identical reports") {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  auto cfg = config_for("W", 21, a);
  cli::cmd_run(cfg);
  cfg.out_dir = b;
  cli::cmd_run(cfg);
  CHECK(io::read_file(a / "report.json") == io::read_file(b / "report.json"));
  CHECK(io::read_file(a / "projection.csv") == io::read_file(b / "projection.csv"));
  cfg.seed = 22;
  cli::cmd_run(cfg);
  CHECK(io::read_file(a / "report.json") != io::read_file(b / "report.json"));
}

TEST_CASE("plot CSVs repeat report values") {
  const fs::path dir = scratch("plot");
  cli::cmd_run(config_for("GHZ", 5, dir));
  const io::Json report = read_json(dir / "report.json");
  const std::string projection = io::read_file(dir / "projection.csv");
  char line[256];
  std::snprintf(line, sizeof line, "state,GHZ,%.12g,%.12g\n", report["projection"]["x"].get<double>(),
                report["projection"]["y"].get<double>());
  CHECK(projection.find(line) != std::string::npos);
  const double eps = report["verdict"]["epsilon"]["epsilon"].get<double>();
  for (const Polyline& l : plot_boundaries(eps)) CHECK(projection.find("boundary," + l.name + ",") != std::string::npos);
  const std::string purity_csv = io::read_file(dir / "purity.csv");
  std::snprintf(line, sizeof line, "GHZ,tomography,%.12g", report["purity"]["used"].get<double>());
  CHECK(purity_csv.find(line) != std::string::npos);
  const auto lambdas = report["spectrum"]["lambdas"].get<std::vector<double>>();
  CHECK(report["projection"]["y"].get<double>() == *std::min_element(lambdas.begin(), lambdas.end()));
}

TEST_CASE("measure, reconstruct and witness compose") {
  const fs::path dir = scratch("compose");
  auto cfg = config_for("GHZ", 8, dir);
  cli::cmd_measure(cfg, false, cli::Format::Csv);
  cli::cmd_reconstruct(dir / "counts.csv", false, cfg);
  const io::Json rec = read_json(dir / "reconstruction.json");
  CHECK(rec["mode"] == "local");
  CHECK(rec["spectrum"]["lambdas"].size() == 3);
  cli::WitnessInput in;
  in.counts_file = dir / "counts.csv";
  in.purity = 0.95;
  cli::cmd_witness(in, cfg, cli::Format::Json);
  CHECK(read_json(dir / "verdict.json")["verdict"]["certified_statement"] == "GHZ-CLASS-CERTIFIED");

  cli::cmd_measure(cfg, true, cli::Format::Json);
  cli::cmd_reconstruct(dir / "counts.json", true, cfg);
  const DensityMatrix rho = io::density_from_json(read_json(dir / "reconstruction.json")["density_matrix"]);
  CHECK(fidelity(rho, canonical_three_qubit(ThreeQubitClass::GHZ)) > 0.98);
}

TEST_CASE("reproduction targets") {
  const io::Json table = cli::reproduce("table1", 3);
  REQUIRE(table["rows"].size() == 6);
  for (const auto& row : table["rows"]) CHECK(row["paper_matches"] == true);
  const io::Json over = cli::reproduce("overhead", 0);
  CHECK(over["crossings"][0]["crossing_efficiency"] == 0.5);
  CHECK(over["crossings"][1]["crossing_efficiency"] == 0.75);
  CHECK(std::abs(over["crossings"][2]["crossing_efficiency"].get<double>() - std::pow(16.0, -1.0 / 7.0)) < 1e-11);
  CHECK(over["count_rate_ratio_n4_eta_quarter"] == 64.0);
  const io::Json fig3 = cli::reproduce("fig3", 3);
  for (const auto& row : fig3["rows"]) CHECK(row["noisy_matches_paper"] == true);
  CHECK_THROWS_AS(cli::reproduce("fig9", 1), InvalidArgument);
}

TEST_CASE("exit codes and failing stage") {
  const fs::path dir = scratch("exit");
  CHECK(tool("run --state GHZ --seed 1 --trials 0", dir).code == 0);
  CHECK(fs::exists(dir / "report.json"));

  const fs::path fresh = scratch("exit_fresh");
  const ToolResult no_seed = tool("run --state GHZ", fresh);
  CHECK(no_seed.code == 2);
  CHECK(no_seed.err.find("stage 'config'") != std::string::npos);

  const ToolResult low = tool("run --state GHZ --seed 1 --purity 0.4", fresh);
  CHECK(low.code == 4);
  CHECK(low.err.find("stage 'witness'") != std::string::npos);
  CHECK(!fs::exists(fresh / "report.json"));

  CHECK(tool("witness --spectrum 0.5,0.6,1.0", fresh).code == 3);
  CHECK(tool("witness --spectrum 0.5,0.5,0.5 --purity 0.5", fresh).code == 4);
  CHECK(tool("witness --spectrum 0.5,0.5,0.5", fresh).code == 0);
  CHECK(read_json(fresh / "verdict.json")["verdict"]["label"] == "GHZ-CLASS-CERTIFIED");
  CHECK(tool("prepare --state nonsense", fresh).code == 2);
  CHECK(tool("run --state GHZ --seed 1 --visibility 1.5", fresh).code == 2);
  CHECK(tool("frobnicate", fresh).code == 2);
  CHECK(tool("reconstruct " + (fresh / "missing.csv").string(), fresh).code == 2);
  CHECK(tool("prepare --state G_abcd --params 0,0,0,0", fresh).code == 2);
  CHECK(tool("overhead --qubits 4 --eta 0.5 --format csv", fresh).code == 0);
  CHECK(io::read_file(fresh / "overhead.csv").find("LPM,4,0.5,16,0.5,32") != std::string::npos);
}
