#include "entpoly/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>

#include "entpoly/error.hpp"
#include "entpoly/random.hpp"

namespace entpoly::cli {

namespace {

constexpr double kPaperPurityFloor = 0.87;
constexpr double kReproduceCounts = 1e4;

std::string g_stage = "setup";

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidArgument("complex value must be a number or [re, im]");
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

std::string kind_name(StateKind k) {
  switch (k) {
    case StateKind::Class: return "class";
    case StateKind::Preset: return "preset";
    case StateKind::Family: return "family";
    case StateKind::Circuit3: return "circuit3";
    case StateKind::Circuit4: return "circuit4";
  }
  return "?";
}

StateKind parse_kind(const std::string& s) {
  for (StateKind k : {StateKind::Class, StateKind::Preset, StateKind::Family, StateKind::Circuit3,
                      StateKind::Circuit4}) {
    if (kind_name(k) == s) return k;
  }
  throw InvalidArgument("unknown state kind '" + s + "'");
}

std::string source_name(PuritySource s) {
  switch (s) {
    case PuritySource::Tomography: return "tomography";
    case PuritySource::Exact: return "exact";
    case PuritySource::Value: return "value";
  }
  return "?";
}

PuritySource parse_source(const std::string& s) {
  for (PuritySource p : {PuritySource::Tomography, PuritySource::Exact, PuritySource::Value}) {
    if (source_name(p) == s) return p;
  }
  throw InvalidArgument("unknown purity source '" + s + "'");
}

std::optional<CircuitPreset> find_preset(const std::string& name) {
  for (auto list : {three_qubit_presets(), four_qubit_presets()}) {
    for (const CircuitPreset& p : list) {
      if (p.name == name) return p;
    }
  }
  return std::nullopt;
}

double angle(double value, bool degrees) { return degrees ? value * std::numbers::pi / 180.0 : value; }

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  return csv_field(Json(v.dump()));
}

std::string csv_row(const std::vector<Json>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

Json boundaries_json(double epsilon) {
  Json out = Json::array();
  for (const Polyline& line : plot_boundaries(epsilon)) {
    Json pts = Json::array();
    for (const PlotPoint& p : line.points) pts.push_back({{"x", p.x}, {"y", p.y}});
    out.push_back({{"name", line.name}, {"points", pts}});
  }
  return out;
}

int num_qubits_of_records(std::span<const CountRecord> records) {
  int n = 0;
  for (const CountRecord& r : records) n = std::max(n, r.setting.scope.back() + 1);
  return n;
}

std::vector<CountRecord> counts_from_json(const Json& j) {
  std::string csv = "setting_id,outcome,count\n";
  try {
    for (const Json& rec : j.at("records")) {
      const std::string id = rec.at("setting_id").get<std::string>();
      for (auto it = rec.at("counts").begin(); it != rec.at("counts").end(); ++it) {
        csv += id + "," + it.key() + "," + std::to_string(it.value().get<std::uint64_t>()) + "\n";
      }
    }
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed counts JSON: ") + e.what());
  }
  return io::counts_from_csv(csv);
}

std::vector<CountRecord> read_counts(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  if (path.extension() == ".json") {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw InvalidArgument(std::string("cannot parse counts JSON: ") + e.what());
    }
    return counts_from_json(j);
  }
  return io::counts_from_csv(text);
}

std::filesystem::path write(const ExperimentConfig& cfg, const std::string& name, const std::string& content) {
  const std::filesystem::path path = cfg.out_dir / name;
  io::write_atomic(path, content);
  return path;
}

std::string paper_statement_for(const std::string& expected) {
  if (expected == "GHZ") return to_string(Statement::GhzCertified);
  if (expected == "W") return to_string(Statement::GenuineUndetermined);
  if (expected.rfind("BS_", 0) == 0) return to_string(Statement::BiseparableConsistent);
  return to_string(Statement::SeparableConsistent);
}

struct PresetRun {
  std::string name;
  std::string expected;
  std::vector<double> ideal_lambdas;
  Verdict ideal;
  std::optional<RunOutcome> noisy;
  std::string error;
};

std::vector<PresetRun> run_three_qubit_presets(std::uint64_t seed) {
  std::vector<PresetRun> out;
  const auto presets = three_qubit_presets();
  for (std::size_t i = 0; i < presets.size(); ++i) {
    const CircuitPreset& p = presets[i];
    PresetRun run{p.name, p.expected, {}, {}, std::nullopt, {}};
    const PureState psi = p.prepare();
    run.ideal_lambdas = local_max_eigenvalues(psi);
    run.ideal = classify3(LocalSpectrum(run.ideal_lambdas), NoiseBound::exact(3));
    ExperimentConfig cfg;
    cfg.state.kind = StateKind::Preset;
    cfg.state.name = p.name;
    cfg.visibility = visibility_for_purity(kPaperPurityFloor, 3);
    cfg.detector = {1.0, kReproduceCounts, 1.0};
    cfg.seed = derive_seed(seed, i);
    cfg.mc_trials = 20;
    cfg.purity_trials = 0;
    try {
      run.noisy = run_pipeline(cfg);
    } catch (const Error& e) {
      run.error = e.what();
    }
    out.push_back(std::move(run));
  }
  return out;
}

Json reproduce_fig3(std::uint64_t seed) {
  Json rows = Json::array();
  for (const PresetRun& r : run_three_qubit_presets(seed)) {
    const std::string paper = paper_statement_for(r.expected);
    Json row = {{"name", r.name},
                {"expected_class", r.expected},
                {"paper_conclusion", paper},
                {"ideal", {{"lambdas", r.ideal_lambdas}, {"label", r.ideal.label()}}}};
    if (r.noisy) {
      row["noisy"] = {{"lambdas", r.noisy->lambdas},
                      {"std_errors", r.noisy->report["spectrum"]["std_errors"]},
                      {"purity", r.noisy->purity_used},
                      {"epsilon", r.noisy->verdict.epsilon.epsilon},
                      {"label", r.noisy->verdict.label()}};
      row["noisy_matches_paper"] = to_string(r.noisy->verdict.statement) == paper;
    } else {
      row["noisy"] = {{"error", r.error}};
      row["noisy_matches_paper"] = false;
    }
    rows.push_back(row);
  }
  return {{"target", "fig3"},
          {"seed", seed},
          {"target_purity", kPaperPurityFloor},
          {"counts_per_setting", kReproduceCounts},
          {"rows", rows}};
}

Json reproduce_fig4(std::uint64_t seed) {
  Json points = Json::array();
  std::vector<double> purities;
  for (const PresetRun& r : run_three_qubit_presets(seed)) {
    const PlotPoint ideal = project_for_plot(LocalSpectrum(r.ideal_lambdas));
    points.push_back({{"series", "ideal"}, {"name", r.name}, {"x", ideal.x}, {"y", ideal.y}});
    if (!r.noisy) continue;
    const PlotPoint noisy = project_for_plot(LocalSpectrum(r.noisy->lambdas));
    points.push_back({{"series", "noisy"}, {"name", r.name}, {"x", noisy.x}, {"y", noisy.y}});
    purities.push_back(r.noisy->purity_used);
  }
  if (purities.empty()) throw NumericError("no noisy run succeeded");
  const NoiseBound worst = worst_purity_bound(3, purities);
  return {{"target", "fig4"},
          {"seed", seed},
          {"worst_purity", worst.purity_used},
          {"epsilon", worst.epsilon},
          {"points", points},
          {"boundaries", boundaries_json(worst.epsilon)}};
}

struct TableRow {
  std::string family;
  std::string preset;
  std::vector<double> lambdas;
  std::vector<double> std_errors;
  double epsilon;
  std::string conclusion;
  std::function<bool(const Verdict&)> matches;
};

std::vector<TableRow> table_rows() {
  const auto is = [](Statement s, std::vector<int> parties = {}) {
    return [s, parties](const Verdict& v) {
      return v.statement == s && (parties.empty() || v.parties == parties);
    };
  };
  return {
      {"G_abcd", "ghz4", {0.532, 0.521, 0.524, 0.542}, {0.006, 0.009, 0.006, 0.008}, 0.5,
       "four-partite GHZ class", is(Statement::GhzCertified, {0, 1, 2, 3})},
      {"L_abc2", "separable", {0.9967, 0.9986, 0.9934, 0.9905}, {0.0006, 0.0005, 0.0007, 0.0008}, 0.26,
       "fully separable", is(Statement::SeparableConsistent)},
      {"L_a2b2", "bell_polarization", {0.9922, 0.961, 0.551, 0.552}, {0.0008, 0.001, 0.003, 0.004}, 0.26,
       "bipartite entangled", is(Statement::BiseparableConsistent)},
      {"L_ab3", "w4_type", {0.696, 0.805, 0.757, 0.731}, {0.004, 0.003, 0.004, 0.005}, 0.5,
       "genuinely multipartite, class undetermined",
       [](const Verdict& v) {
         return v.statement == Statement::GenuineUndetermined || v.statement == Statement::Indeterminate;
       }},
      {"L_a2_0_3plus1", "w3_product", {0.682, 0.970, 0.645, 0.689}, {0.003, 0.001, 0.003, 0.003}, 0.26,
       "genuine three-partite, class undetermined", is(Statement::GenuineUndetermined)},
      {"L_0_3plus1bar_0_3plus1", "ghz3_product", {0.594, 0.943, 0.572, 0.533}, {0.003, 0.001, 0.003, 0.005},
       0.26, "embedded three-partite GHZ class", is(Statement::GhzCertified)},
  };
}

Json reproduce_table1(std::uint64_t seed) {
  Json rows = Json::array();
  const auto rows_in = table_rows();
  for (std::size_t i = 0; i < rows_in.size(); ++i) {
    const TableRow& t = rows_in[i];
    const Verdict paper = classify4(LocalSpectrum(t.lambdas, t.std_errors), bound_from_epsilon(4, t.epsilon));
    Json row = {{"family", t.family},
                {"preset", t.preset},
                {"paper_lambdas", t.lambdas},
                {"paper_std_errors", t.std_errors},
                {"paper_sum", LocalSpectrum(t.lambdas).sum()},
                {"epsilon", t.epsilon},
                {"paper_conclusion", t.conclusion},
                {"paper_label", paper.label()},
                {"paper_matches", t.matches(paper)}};
    const PureState psi = find_preset(t.preset)->prepare();
    const std::vector<double> ideal = local_max_eigenvalues(psi);
    const Verdict ideal_v = classify4(LocalSpectrum(ideal), NoiseBound::exact(4));
    row["ideal"] = {{"lambdas", ideal}, {"label", ideal_v.label()}};
    ExperimentConfig cfg;
    cfg.state.kind = StateKind::Preset;
    cfg.state.name = t.preset;
    const double p = bound_from_epsilon(4, t.epsilon).purity_used;
    cfg.visibility = visibility_for_purity(p, 4);
    cfg.detector = {1.0, kReproduceCounts, 1.0};
    cfg.seed = derive_seed(seed, i);
    cfg.purity_source = PuritySource::Value;
    cfg.purity = p;
    cfg.mc_trials = 20;
    cfg.purity_trials = 0;
    try {
      const RunOutcome noisy = run_pipeline(cfg);
      row["noisy"] = {{"lambdas", noisy.lambdas},
                      {"std_errors", noisy.report["spectrum"]["std_errors"]},
                      {"purity", p},
                      {"label", noisy.verdict.label()}};
    } catch (const Error& e) {
      row["noisy"] = {{"error", e.what()}};
    }
    rows.push_back(row);
  }
  return {{"target", "table1"}, {"seed", seed}, {"counts_per_setting", kReproduceCounts}, {"rows", rows}};
}

Json reproduce_overhead() {
  Json crossings = Json::array();
  const struct {
    int n;
    WitnessType type;
    const char* name;
    double paper;
  } cases[] = {{4, WitnessType::A, "A", 0.5}, {4, WitnessType::B, "B", 0.75}, {8, WitnessType::A, "A", 0.67}};
  for (const auto& c : cases) {
    crossings.push_back({{"num_qubits", c.n},
                         {"witness", c.name},
                         {"crossing_efficiency", crossing_efficiency(c.n, c.type)},
                         {"paper", c.paper}});
  }
  Json table = Json::array();
  for (int n = 2; n <= 12; ++n) {
    for (double eta : {0.25, 0.5, 0.75, 1.0}) {
      for (Method m : {Method::LPM, Method::FQST, Method::CSQST, Method::WITNESS_A, Method::WITNESS_B}) {
        table.push_back(io::to_json(overhead({m}, n, eta)));
      }
    }
  }
  return {{"target", "overhead"},
          {"crossings", crossings},
          {"count_rate_ratio_n4_eta_quarter", count_rate(0.25, 1.0, 1) / count_rate(0.25, 1.0, 4)},
          {"paper_count_rate_ratio", 64},
          {"overheads", table}};
}

std::string reproduce_csv(const Json& doc) {
  const std::string target = doc["target"].get<std::string>();
  std::string out;
  if (target == "fig3") {
    out = "name,expected_class,paper_conclusion,ideal_label,noisy_label,noisy_purity,noisy_epsilon,"
          "lambda_1,lambda_2,lambda_3,noisy_matches_paper\n";
    for (const Json& r : doc["rows"]) {
      const Json& n = r["noisy"];
      const Json l = n.contains("lambdas") ? n["lambdas"] : Json::array({nullptr, nullptr, nullptr});
      out += csv_row({r["name"], r["expected_class"], r["paper_conclusion"], r["ideal"]["label"],
                      n.value("label", Json(nullptr)), n.value("purity", Json(nullptr)),
                      n.value("epsilon", Json(nullptr)), l[0], l[1], l[2], r["noisy_matches_paper"]});
    }
  } else if (target == "fig4") {
    out = "series,name,x,y\n";
    for (const Json& p : doc["points"]) out += csv_row({p["series"], p["name"], p["x"], p["y"]});
    for (const Json& b : doc["boundaries"]) {
      for (const Json& p : b["points"]) out += csv_row({"boundary", b["name"], p["x"], p["y"]});
    }
  } else if (target == "table1") {
    out = "family,preset,lambda_1,lambda_2,lambda_3,lambda_4,sum,epsilon,paper_conclusion,paper_label,"
          "paper_matches,ideal_label,noisy_label\n";
    for (const Json& r : doc["rows"]) {
      const Json& l = r["paper_lambdas"];
      out += csv_row({r["family"], r["preset"], l[0], l[1], l[2], l[3], r["paper_sum"], r["epsilon"],
                      r["paper_conclusion"], r["paper_label"], r["paper_matches"], r["ideal"]["label"],
                      r["noisy"].value("label", Json(nullptr))});
    }
  } else {
    out = "num_qubits,witness,crossing_efficiency,paper\n";
    for (const Json& c : doc["crossings"]) {
      out += csv_row({c["num_qubits"], c["witness"], c["crossing_efficiency"], c["paper"]});
    }
  }
  return out;
}

}  // namespace

int StateSpec::num_qubits() const {
  switch (kind) {
    case StateKind::Class:
    case StateKind::Circuit3: return 3;
    case StateKind::Family:
    case StateKind::Circuit4: return 4;
    case StateKind::Preset: {
      const auto p = find_preset(name);
      if (!p) throw InvalidArgument("unknown preset '" + name + "'");
      return p->num_qubits;
    }
  }
  return 0;
}

std::string StateSpec::label() const {
  switch (kind) {
    case StateKind::Class:
    case StateKind::Family: return name;
    case StateKind::Preset: return "preset:" + name;
    default: return kind_name(kind);
  }
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  static const std::vector<std::string> known = {
      "state", "visibility", "detector", "counts", "seed", "degrees", "purity_source", "purity",
      "mc_trials", "purity_trials", "statistical_z"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw InvalidArgument("unknown config key '" + it.key() + "'");
    }
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("state")) {
      const Json& s = j["state"];
      if (s.is_string()) {
        cfg.state = state_from_name(s.get<std::string>());
      } else {
        cfg.state.kind = parse_kind(s.at("kind").get<std::string>());
        if (s.contains("name")) cfg.state.name = s["name"].get<std::string>();
        if (s.contains("alpha")) cfg.state.alpha = complex_from_json(s["alpha"]);
        if (s.contains("beta")) cfg.state.beta = complex_from_json(s["beta"]);
        if (s.contains("params")) {
          const Json& p = s["params"];
          if (!p.is_array() || p.size() > 4) throw InvalidArgument("params takes up to four values");
          for (std::size_t i = 0; i < p.size(); ++i) cfg.state.params[i] = complex_from_json(p[i]);
        }
        if (s.contains("angles")) cfg.state.angles = s["angles"].get<std::vector<double>>();
      }
    }
    if (j.contains("visibility")) cfg.visibility = j["visibility"].get<double>();
    if (j.contains("detector")) {
      const Json& d = j["detector"];
      if (d.contains("efficiency")) cfg.detector.efficiency = d["efficiency"].get<double>();
      if (d.contains("source_rate")) cfg.detector.source_rate = d["source_rate"].get<double>();
      if (d.contains("integration_time")) cfg.detector.integration_time = d["integration_time"].get<double>();
    }
    if (j.contains("counts")) {
      cfg.detector.source_rate = j["counts"].get<double>();
      cfg.detector.integration_time = 1.0;
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("degrees")) cfg.degrees = j["degrees"].get<bool>();
    if (j.contains("purity")) {
      cfg.purity = j["purity"].get<double>();
      cfg.purity_source = PuritySource::Value;
    }
    if (j.contains("purity_source")) cfg.purity_source = parse_source(j["purity_source"].get<std::string>());
    if (j.contains("mc_trials")) cfg.mc_trials = j["mc_trials"].get<int>();
    if (j.contains("purity_trials")) cfg.purity_trials = j["purity_trials"].get<int>();
    if (j.contains("statistical_z")) cfg.statistical_z = j["statistical_z"].get<double>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

Json ExperimentConfig::to_json() const {
  Json params = Json::array();
  for (cplx p : state.params) params.push_back(complex_to_json(p));
  Json j = {{"state",
             {{"kind", kind_name(state.kind)},
              {"name", state.name},
              {"alpha", complex_to_json(state.alpha)},
              {"beta", complex_to_json(state.beta)},
              {"params", params},
              {"angles", state.angles}}},
            {"visibility", visibility},
            {"detector",
             {{"efficiency", detector.efficiency},
              {"source_rate", detector.source_rate},
              {"integration_time", detector.integration_time}}},
            {"seed", seed ? Json(*seed) : Json(nullptr)},
            {"degrees", degrees},
            {"purity_source", source_name(purity_source)},
            {"purity", optional_number(purity)},
            {"mc_trials", mc_trials},
            {"purity_trials", purity_trials},
            {"statistical_z", statistical_z}};
  return j;
}

void ExperimentConfig::validate() const {
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw InvalidArgument("visibility must lie in [0, 1]");
  detector.validate();
  if (mc_trials < 0 || mc_trials == 1) throw InvalidArgument("mc_trials must be 0 or at least 2");
  if (purity_trials < 0 || purity_trials == 1) throw InvalidArgument("purity_trials must be 0 or at least 2");
  if (!(statistical_z >= 0.0 && std::isfinite(statistical_z))) {
    throw InvalidArgument("statistical_z must be finite and non-negative");
  }
  if (purity_source == PuritySource::Value) {
    if (!purity) throw InvalidArgument("purity source 'value' needs a purity");
    if (!(*purity > 0.0 && *purity <= 1.0)) throw InvalidArgument("purity must lie in (0, 1]");
  }
  const int n = state.num_qubits();
  if (state.kind == StateKind::Circuit3 && state.angles.size() != 2) {
    throw InvalidArgument("circuit3 needs angles [split, rotation]");
  }
  if (state.kind == StateKind::Circuit4 && state.angles.size() != 4) {
    throw InvalidArgument("circuit4 needs angles [split_a, split_b, rotation_a, rotation_b]");
  }
  if (n != 3 && n != 4) throw InvalidArgument("only three- and four-qubit states are supported");
}

std::uint64_t ExperimentConfig::require_seed() const {
  if (!seed) throw InvalidArgument("--seed is required for stochastic commands");
  return *seed;
}

StateSpec state_from_name(const std::string& name) {
  StateSpec spec;
  spec.name = name;
  if (parse_three_qubit_class(name)) {
    spec.kind = StateKind::Class;
  } else if (find_preset(name)) {
    spec.kind = StateKind::Preset;
  } else if (parse_family(name)) {
    spec.kind = StateKind::Family;
    spec.params = {cplx(0.9), cplx(0.6), cplx(0.3), cplx(0.1)};
  } else {
    throw InvalidArgument("unknown state '" + name + "' (expected a class, preset or family name)");
  }
  return spec;
}

PureState target_state(const StateSpec& spec, bool degrees) {
  switch (spec.kind) {
    case StateKind::Class: {
      const auto c = parse_three_qubit_class(spec.name);
      if (!c) throw InvalidArgument("unknown three-qubit class '" + spec.name + "'");
      return canonical_three_qubit(*c, spec.alpha, spec.beta);
    }
    case StateKind::Preset: {
      const auto p = find_preset(spec.name);
      if (!p) throw InvalidArgument("unknown preset '" + spec.name + "'");
      return p->prepare();
    }
    case StateKind::Family: {
      const auto f = parse_family(spec.name);
      if (!f) throw InvalidArgument("unknown family '" + spec.name + "'");
      return canonical_four_qubit({*f, spec.params[0], spec.params[1], spec.params[2], spec.params[3]});
    }
    case StateKind::Circuit3: {
      if (spec.angles.size() != 2) throw InvalidArgument("circuit3 needs angles [split, rotation]");
      WaveplateConfig3 cfg{spec.alpha, spec.beta,
                           {angle(spec.angles[0], degrees), angle(spec.angles[1], degrees)}};
      return prepare_three_qubit(cfg);
    }
    case StateKind::Circuit4: {
      if (spec.angles.size() != 4) throw InvalidArgument("circuit4 needs four angles");
      std::array<double, 4> a{};
      for (std::size_t i = 0; i < 4; ++i) a[i] = angle(spec.angles[i], degrees);
      return prepare_four_qubit(WaveplateConfig4::from_angle_list(spec.alpha, spec.beta, a));
    }
  }
  throw InvalidArgument("unknown state kind");
}

DensityMatrix prepared_state(const ExperimentConfig& cfg) {
  return mix_white_noise(target_state(cfg.state, cfg.degrees), cfg.visibility);
}

void set_stage(const std::string& stage) { g_stage = stage; }
const std::string& current_stage() { return g_stage; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const BoundInapplicable*>(&e)) return 4;
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const DegenerateFamily*>(&e) ||
      dynamic_cast<const DegenerateOperator*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const Error*>(&e)) return 3;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 2;
  return 3;
}

Format parse_format(const std::string& text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw InvalidArgument("format must be json or csv");
}

RunOutcome run_pipeline(const ExperimentConfig& cfg) {
  set_stage("config");
  cfg.validate();
  const std::uint64_t seed = cfg.require_seed();

  set_stage("prepare");
  const PureState target = target_state(cfg.state, cfg.degrees);
  const DensityMatrix rho = mix_white_noise(target, cfg.visibility);
  const int n = target.num_qubits();
  const double exact_purity = purity(rho);

  set_stage("measure");
  RunOutcome out;
  out.local_counts = simulate_plan(rho, local_tomography_plan(n), cfg.detector, derive_seed(seed, 0));
  const bool global = cfg.purity_source == PuritySource::Tomography;
  if (global) out.global_counts = simulate_plan(rho, full_tomography_plan(n), cfg.detector, derive_seed(seed, 1));

  set_stage("tomography");
  const LocalReconstruction local = reconstruct_local(out.local_counts);
  const std::vector<double> raw = local.spectrum.lambdas();
  std::optional<ErrorEstimate> spectrum_errors;
  if (cfg.mc_trials > 0) spectrum_errors = monte_carlo_spectrum(out.local_counts, cfg.mc_trials, derive_seed(seed, 2));
  std::optional<double> tomo_purity;
  std::optional<double> tomo_fidelity;
  std::optional<ErrorEstimate> purity_errors;
  if (global) {
    const ReconstructionResult g = mle_reconstruct(out.global_counts, Eigen::Index{1} << n);
    tomo_purity = purity(g.rho);
    tomo_fidelity = fidelity(g.rho, target);
    if (cfg.purity_trials > 0) {
      purity_errors = monte_carlo_purity(out.global_counts, cfg.purity_trials, derive_seed(seed, 3));
    }
  }

  set_stage("witness");
  switch (cfg.purity_source) {
    case PuritySource::Tomography: out.purity_used = *tomo_purity; break;
    case PuritySource::Exact: out.purity_used = exact_purity; break;
    case PuritySource::Value: out.purity_used = *cfg.purity; break;
  }
  const double purity_epsilon = epsilon_bound(n, out.purity_used).epsilon;
  double allowance = 0.0;
  if (spectrum_errors) {
    for (double s : spectrum_errors->std_dev) allowance += cfg.statistical_z * s;
  }
  const NoiseBound bound =
      allowance > 0.0 ? bound_from_epsilon(n, purity_epsilon + allowance) : epsilon_bound(n, out.purity_used);
  out.lambdas = nearest_feasible_spectrum(raw);
  double shift = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) shift += std::abs(out.lambdas[i] - raw[i]);
  if (shift > allowance + kFacetTol) {
    throw MarginalInfeasible("local spectrum is " + std::to_string(shift) +
                             " (L1) outside the polygon, beyond the statistical allowance " +
                             std::to_string(allowance));
  }
  const LocalSpectrum spectrum(out.lambdas,
                               spectrum_errors ? std::optional(spectrum_errors->std_dev) : std::nullopt);
  out.verdict = classify(spectrum, bound);

  set_stage("resources");
  Json methods = Json::array();
  for (Method m : {Method::LPM, Method::FQST, Method::CSQST, Method::WITNESS_A, Method::WITNESS_B}) {
    methods.push_back(io::to_json(overhead({m}, n, cfg.detector.efficiency)));
  }

  set_stage("report");
  const Json config = cfg.to_json();
  Json spectrum_json = io::to_json(spectrum);
  if (!spectrum.std_errors()) spectrum_json["std_errors"] = nullptr;
  spectrum_json["monte_carlo"] = spectrum_errors ? io::to_json(*spectrum_errors) : Json(nullptr);
  spectrum_json["raw_lambdas"] = raw;
  spectrum_json["feasibility_shift"] = shift;
  Json projection = nullptr;
  if (n == 3) {
    const PlotPoint p = project_for_plot(spectrum);
    projection = {{"x", p.x}, {"y", p.y}, {"boundaries", boundaries_json(bound.epsilon)}};
  }
  out.report = {
      {"provenance",
       {{"config", config},
        {"config_hash", io::hex64(io::fnv1a(io::canonical(config).dump()))},
        {"seed", seed},
        {"version", kVersion}}},
      {"state",
       {{"label", cfg.state.label()},
        {"num_qubits", n},
        {"visibility", cfg.visibility},
        {"exact_purity", exact_purity},
        {"target_fidelity", fidelity(rho, target)}}},
      {"measurement",
       {{"local_settings", out.local_counts.size()},
        {"global_settings", out.global_counts.size()},
        {"expected_counts_per_setting", cfg.detector.source_rate * cfg.detector.integration_time},
        {"efficiency", cfg.detector.efficiency}}},
      {"spectrum", spectrum_json},
      {"purity",
       {{"source", source_name(cfg.purity_source)},
        {"used", out.purity_used},
        {"exact", exact_purity},
        {"tomography", optional_number(tomo_purity)},
        {"tomography_std_dev", purity_errors ? Json(purity_errors->std_dev[0]) : Json(nullptr)}}},
      {"fidelity", {{"global_mle_to_target", optional_number(tomo_fidelity)}}},
      {"noise_bound",
       {{"purity_epsilon", purity_epsilon},
        {"statistical_z", cfg.statistical_z},
        {"statistical_allowance", allowance},
        {"epsilon", bound.epsilon},
        {"equivalent_purity", bound.purity_used}}},
      {"verdict", io::to_json(out.verdict)},
      {"projection", projection},
      {"overhead",
       {{"methods", methods},
        {"crossing_efficiency",
         {{"witness_a", crossing_efficiency(n, WitnessType::A)},
          {"witness_b", crossing_efficiency(n, WitnessType::B)}}}}}};
  out.report = io::canonical(out.report);
  return out;
}

std::vector<std::filesystem::path> cmd_prepare(const ExperimentConfig& cfg) {
  set_stage("prepare");
  cfg.validate();
  return {write(cfg, "state.json", io::dump(io::to_json(prepared_state(cfg))))};
}

std::vector<std::filesystem::path> cmd_measure(const ExperimentConfig& cfg, bool full_plan, Format format) {
  set_stage("config");
  cfg.validate();
  const std::uint64_t seed = cfg.require_seed();
  set_stage("prepare");
  const DensityMatrix rho = prepared_state(cfg);
  const int n = rho.num_qubits();
  set_stage("measure");
  const auto plan = full_plan ? full_tomography_plan(n) : local_tomography_plan(n);
  const auto records = simulate_plan(rho, plan, cfg.detector, derive_seed(seed, full_plan ? 1 : 0));
  if (format == Format::Csv) return {write(cfg, "counts.csv", io::counts_to_csv(records, n))};
  Json recs = Json::array();
  for (const CountRecord& r : records) {
    Json counts = Json::object();
    for (std::size_t k = 0; k < r.counts.size(); ++k) counts[r.setting.outcome_label(k)] = r.counts[k];
    recs.push_back({{"setting_id", r.setting.id(n)}, {"counts", counts}});
  }
  return {write(cfg, "counts.json", io::dump({{"num_qubits", n}, {"seed", seed}, {"records", recs}}))};
}

std::vector<std::filesystem::path> cmd_reconstruct(const std::filesystem::path& counts_file, bool global,
                                                   const ExperimentConfig& cfg) {
  set_stage("read counts");
  const auto records = read_counts(counts_file);
  set_stage("tomography");
  Json doc;
  if (global) {
    const int m = static_cast<int>(records.front().setting.scope.size());
    doc = io::to_json(mle_reconstruct(records, Eigen::Index{1} << m));
    doc["mode"] = "global";
  } else {
    const LocalReconstruction local = reconstruct_local(records);
    Json marginals = Json::array();
    for (const ReconstructionResult& r : local.marginals) marginals.push_back(io::to_json(r.rho));
    doc = {{"mode", "local"}, {"spectrum", io::to_json(local.spectrum)}, {"marginals", marginals}};
    if (cfg.seed && cfg.mc_trials > 0) {
      doc["monte_carlo"] = io::to_json(monte_carlo_spectrum(records, cfg.mc_trials, derive_seed(*cfg.seed, 2)));
    }
  }
  doc["num_qubits"] = num_qubits_of_records(records);
  return {write(cfg, "reconstruction.json", io::dump(doc))};
}

std::vector<std::filesystem::path> cmd_witness(const WitnessInput& input, const ExperimentConfig& cfg,
                                               Format format) {
  set_stage("spectrum");
  if (input.spectrum.has_value() == input.counts_file.has_value()) {
    throw InvalidArgument("give exactly one of --spectrum and --counts-file");
  }
  if (input.purity && input.epsilon) throw InvalidArgument("give at most one of --purity and --epsilon");
  const LocalSpectrum spectrum =
      input.spectrum ? LocalSpectrum(*input.spectrum) : local_spectrum_from_counts(read_counts(*input.counts_file));
  set_stage("witness");
  const int n = spectrum.size();
  NoiseBound bound = NoiseBound::exact(n);
  if (input.purity) bound = epsilon_bound(n, *input.purity);
  if (input.epsilon) bound = bound_from_epsilon(n, *input.epsilon);
  const Verdict v = classify(spectrum, bound);
  if (format == Format::Csv) {
    std::string lambdas;
    for (double l : spectrum.lambdas()) lambdas += (lambdas.empty() ? "" : ";") + csv_field(Json(l));
    const Json doc = io::canonical({{"sum", spectrum.sum()}, {"epsilon", bound.epsilon}});
    return {write(cfg, "verdict.csv",
                  "lambdas,sum,epsilon,label\n" +
                      csv_row({lambdas, doc["sum"], doc["epsilon"], v.label()}))};
  }
  return {write(cfg, "verdict.json", io::dump({{"spectrum", io::to_json(spectrum)}, {"verdict", io::to_json(v)}}))};
}

std::vector<std::filesystem::path> cmd_overhead(int num_qubits, double eta, const std::string& method,
                                                int rank, const ExperimentConfig& cfg, Format format) {
  set_stage("resources");
  std::vector<Method> methods;
  if (method == "all") {
    methods = {Method::LPM, Method::FQST, Method::CSQST, Method::WITNESS_A, Method::WITNESS_B};
  } else {
    methods = {parse_method(method)};
  }
  Json rows = Json::array();
  for (Method m : methods) rows.push_back(io::to_json(overhead({m, m == Method::CSQST ? rank : 1}, num_qubits, eta)));
  rows = io::canonical(rows);
  if (format == Format::Csv) {
    std::string csv = "method,num_qubits,eta,measurements,efficiency,overhead\n";
    for (const Json& r : rows) {
      csv += csv_row({r["method"], r["num_qubits"], r["eta"], r["measurements"], r["efficiency"], r["overhead"]});
    }
    return {write(cfg, "overhead.csv", csv)};
  }
  Json doc = {{"rows", rows}};
  if (num_qubits >= 2) {
    doc["crossing_efficiency"] = {{"witness_a", crossing_efficiency(num_qubits, WitnessType::A)},
                                  {"witness_b", crossing_efficiency(num_qubits, WitnessType::B)}};
  }
  return {write(cfg, "overhead.json", io::dump(doc))};
}

std::vector<std::filesystem::path> cmd_run(const ExperimentConfig& cfg) {
  const RunOutcome out = run_pipeline(cfg);
  set_stage("write artifacts");
  std::vector<std::filesystem::path> written;
  try {
    const Json& r = out.report;
    written.push_back(write(cfg, "report.json", io::dump(r)));
    if (!r["projection"].is_null()) {
      const Json& p = r["projection"];
      std::string csv = "series,name,x,y\n" + csv_row({"state", r["state"]["label"], p["x"], p["y"]});
      for (const Json& b : p["boundaries"]) {
        for (const Json& pt : b["points"]) csv += csv_row({"boundary", b["name"], pt["x"], pt["y"]});
      }
      written.push_back(write(cfg, "projection.csv", csv));
    }
    const Json& p = r["purity"];
    written.push_back(write(cfg, "purity.csv",
                            "label,source,used,exact,tomography,tomography_std_dev\n" +
                                csv_row({r["state"]["label"], p["source"], p["used"], p["exact"], p["tomography"],
                                         p["tomography_std_dev"]})));
  } catch (...) {
    for (const auto& path : written) std::filesystem::remove(path);
    throw;
  }
  return written;
}

Json reproduce(const std::string& target, std::uint64_t seed) {
  if (target == "fig3") return io::canonical(reproduce_fig3(seed));
  if (target == "fig4") return io::canonical(reproduce_fig4(seed));
  if (target == "table1") return io::canonical(reproduce_table1(seed));
  if (target == "overhead") return io::canonical(reproduce_overhead());
  throw InvalidArgument("reproduce target must be fig3, fig4, table1 or overhead");
}

std::vector<std::filesystem::path> cmd_reproduce(const std::string& target, const ExperimentConfig& cfg) {
  set_stage("reproduce " + target);
  const std::uint64_t seed = target == "overhead" ? 0 : cfg.require_seed();
  const Json doc = reproduce(target, seed);
  std::vector<std::filesystem::path> written;
  try {
    written.push_back(write(cfg, target + ".json", io::dump(doc)));
    written.push_back(write(cfg, target + ".csv", reproduce_csv(doc)));
  } catch (...) {
    for (const auto& path : written) std::filesystem::remove(path);
    throw;
  }
  return written;
}

}  // namespace entpoly::cli
