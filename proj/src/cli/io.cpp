#include "entpoly/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "entpoly/error.hpp"

namespace entpoly::io {

double round_significant(double x, int digits) {
  if (x == 0.0) return 0.0;
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // drops negative zero
}

Json canonical(const Json& j) {
  if (j.is_number_float()) return round_significant(j.get<double>());
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = canonical(it.value());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(canonical(v));
    return out;
  }
  return j;
}

std::string dump(const Json& j) { return canonical(j).dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

Json to_json(const DensityMatrix& rho) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    for (Eigen::Index c = 0; c < rho.dim(); ++c) entries.push_back({rho(r, c).real(), rho(r, c).imag()});
  }
  return {{"num_qubits", rho.num_qubits()}, {"entries", entries}};
}

DensityMatrix density_from_json(const Json& j) {
  try {
    const int n = j.at("num_qubits").get<int>();
    if (n < 1 || n > kMaxQubits) throw InvalidArgument("num_qubits out of range");
    const Eigen::Index d = Eigen::Index{1} << n;
    const Json& entries = j.at("entries");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != d * d) {
      throw InvalidArgument("entries must hold 4^num_qubits [re, im] pairs");
    }
    CMatrix m(d, d);
    for (Eigen::Index k = 0; k < d * d; ++k) {
      const Json& e = entries[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("each entry must be [re, im]");
      m(k / d, k % d) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return DensityMatrix(n, std::move(m));
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("malformed density matrix JSON: ") + e.what());
  }
}

std::string counts_to_csv(std::span<const CountRecord> records, int num_qubits) {
  std::string out = "setting_id,outcome,count\n";
  for (const CountRecord& rec : records) {
    const std::string id = rec.setting.id(num_qubits);
    for (std::size_t k = 0; k < rec.counts.size(); ++k) {
      out += id + "," + rec.setting.outcome_label(k) + "," + std::to_string(rec.counts[k]) + "\n";
    }
  }
  return out;
}

std::vector<CountRecord> counts_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "setting_id,outcome,count") {
    throw InvalidArgument("counts CSV must start with the header setting_id,outcome,count");
  }
  std::vector<CountRecord> records;
  std::map<std::string, std::size_t> index;
  std::vector<std::string> ids;
  std::vector<std::vector<bool>> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw InvalidArgument("counts CSV line " + std::to_string(line_no) + " needs three fields");
    }
    const std::string id = line.substr(0, c1);
    const std::string outcome = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string count = line.substr(c2 + 1);
    auto [it, inserted] = index.try_emplace(id, records.size());
    if (inserted) {
      CountRecord rec;
      rec.setting_index = static_cast<int>(records.size());
      rec.setting = MeasurementSetting::from_id(id);
      rec.counts.assign(rec.setting.num_outcomes(), 0);
      records.push_back(std::move(rec));
      ids.push_back(id);
      seen.emplace_back(records.back().counts.size(), false);
    }
    CountRecord& rec = records[it->second];
    if (outcome.size() != rec.setting.scope.size() || outcome.find_first_not_of("01") != std::string::npos) {
      throw InvalidArgument("bad outcome '" + outcome + "' on line " + std::to_string(line_no));
    }
    const std::size_t k = std::stoull(outcome, nullptr, 2);
    if (seen[it->second][k]) throw InvalidArgument("duplicate outcome on line " + std::to_string(line_no));
    seen[it->second][k] = true;
    if (count.empty() || count.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidArgument("count must be a non-negative integer on line " + std::to_string(line_no));
    }
    rec.counts[k] = std::stoull(count);
  }
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (bool s : seen[r]) {
      if (!s) throw InvalidArgument("setting " + ids[r] + " is missing outcomes");
    }
  }
  if (records.empty()) throw InvalidArgument("counts CSV has no rows");
  return records;
}

Json to_json(const LocalSpectrum& s) {
  Json j = {{"lambdas", s.lambdas()}, {"sum", s.sum()}};
  if (s.std_errors()) j["std_errors"] = *s.std_errors();
  return j;
}

Json to_json(const NoiseBound& b) {
  return {{"epsilon", b.epsilon}, {"purity_used", b.purity_used}, {"num_qubits", b.num_qubits}};
}

Json to_json(const Verdict& v) {
  Json margins = Json::object();
  for (const Margin& m : v.margins) margins[m.name] = m.value;
  Json j = {{"feasible", v.feasible},
            {"violated", v.violated},
            {"certified_statement", to_string(v.statement)},
            {"label", v.label()},
            {"parties", v.parties},
            {"product_qubits", v.product_qubits},
            {"excluded_classes", v.excluded_classes},
            {"margins", margins},
            {"epsilon", to_json(v.epsilon)},
            {"within_epsilon_band", v.within_epsilon_band}};
  if (v.hull) {
    j["hull"] = {{"inside", v.hull->inside}, {"margin", v.hull->margin}, {"lp_iterations", v.hull->lp_iterations}};
  }
  return j;
}

Json to_json(const OverheadReport& r) {
  Json j = {{"method", to_string(r.method.method)},
            {"num_qubits", r.num_qubits},
            {"eta", r.eta},
            {"measurements", r.measurements},
            {"efficiency", r.efficiency},
            {"overhead", r.overhead}};
  if (r.method.method == Method::CSQST) j["rank"] = r.method.rank;
  return j;
}

Json to_json(const ErrorEstimate& e) {
  return {{"point", e.point}, {"mean", e.mean},   {"std_dev", e.std_dev},
          {"trials", e.trials}, {"aborted", e.aborted}, {"seed", e.seed}};
}

Json to_json(const ReconstructionResult& r) {
  return {{"density_matrix", to_json(r.rho)},
          {"log_likelihood", r.log_likelihood},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"purity", purity(r.rho)}};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0') throw InvalidArgument("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty number list");
  return out;
}

}  // namespace entpoly::io
