#include "entpoly/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "entpoly/error.hpp"
#include "entpoly/random.hpp"

namespace entpoly {

char projector_label(Projector p) {
  switch (p) {
    case Projector::Zero: return '0';
    case Projector::One: return '1';
    case Projector::Plus: return '+';
    case Projector::PlusI: return 'r';
  }
  return '?';
}

Projector projector_from_label(char c) {
  switch (c) {
    case '0': return Projector::Zero;
    case '1': return Projector::One;
    case '+': return Projector::Plus;
    case 'r': return Projector::PlusI;
    default: throw InvalidArgument(std::string("unknown projector label '") + c + "'");
  }
}

ProjectorPair ProjectorPair::from(Projector p) {
  const double h = 1.0 / std::numbers::sqrt2;
  const cplx i(0.0, 1.0);
  switch (p) {
    case Projector::Zero: return {Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    case Projector::One: return {Vec2(0.0, 1.0), Vec2(1.0, 0.0)};
    case Projector::Plus: return {Vec2(h, h), Vec2(h, -h)};
    case Projector::PlusI: return {Vec2(h, h * i), Vec2(h, -h * i)};
  }
  throw InvalidArgument("unknown projector");
}

void ProjectorPair::validate() const {
  const Mat2 sum = first * first.adjoint() + second * second.adjoint();
  if ((sum - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
      std::abs(first.dot(second)) > 1e-12) {
    throw InvalidArgument("projector pair is not an orthonormal basis");
  }
}

MeasurementSetting MeasurementSetting::local(int qubit, Projector p) {
  return product({qubit}, {p});
}

MeasurementSetting MeasurementSetting::product(std::vector<int> scope, std::vector<Projector> projectors) {
  if (scope.size() != projectors.size()) throw InvalidArgument("scope and projector list differ in size");
  MeasurementSetting s;
  s.scope = std::move(scope);
  s.labels = std::move(projectors);
  for (Projector p : s.labels) s.bases.push_back(ProjectorPair::from(p));
  s.validate();
  return s;
}

void MeasurementSetting::validate() const {
  if (scope.empty()) throw InvalidArgument("measurement scope is empty");
  if (bases.size() != scope.size()) throw InvalidArgument("one projector pair per scope qubit required");
  if (!std::is_sorted(scope.begin(), scope.end()) ||
      std::adjacent_find(scope.begin(), scope.end()) != scope.end() || scope.front() < 0) {
    throw InvalidArgument("measurement scope must be ascending, unique and non-negative");
  }
  for (const ProjectorPair& pair : bases) pair.validate();
}

CVector MeasurementSetting::outcome_vector(std::size_t k) const {
  const std::size_t m = scope.size();
  CVector v = CVector::Ones(1);
  for (std::size_t j = 0; j < m; ++j) {
    const bool second = (k >> (m - 1 - j)) & 1U;
    const Vec2& f = second ? bases[j].second : bases[j].first;
    CVector next(v.size() * 2);
    for (Eigen::Index a = 0; a < v.size(); ++a) {
      next[2 * a] = v[a] * f[0];
      next[2 * a + 1] = v[a] * f[1];
    }
    v = std::move(next);
  }
  return v;
}

std::string MeasurementSetting::id(int num_qubits) const {
  if (labels.size() != scope.size()) throw InvalidArgument("setting has no projector labels");
  std::string out(static_cast<std::size_t>(num_qubits), '_');
  for (std::size_t j = 0; j < scope.size(); ++j) {
    if (scope[j] >= num_qubits) throw InvalidArgument("setting scope exceeds qubit count");
    out[static_cast<std::size_t>(scope[j])] = projector_label(labels[j]);
  }
  return out;
}

MeasurementSetting MeasurementSetting::from_id(const std::string& id) {
  std::vector<int> scope;
  std::vector<Projector> projectors;
  for (std::size_t q = 0; q < id.size(); ++q) {
    if (id[q] == '_') continue;
    scope.push_back(static_cast<int>(q));
    projectors.push_back(projector_from_label(id[q]));
  }
  return product(std::move(scope), std::move(projectors));
}

std::string MeasurementSetting::outcome_label(std::size_t k) const {
  const std::size_t m = scope.size();
  std::string out(m, '0');
  for (std::size_t j = 0; j < m; ++j) {
    if ((k >> (m - 1 - j)) & 1U) out[j] = '1';
  }
  return out;
}

void DetectorModel::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw InvalidArgument("detector efficiency must lie in (0, 1]");
  if (!(source_rate > 0.0)) throw InvalidArgument("source rate must be positive");
  if (!(integration_time > 0.0)) throw InvalidArgument("integration time must be positive");
}

double DetectorModel::expected_events(int m) const {
  return std::pow(efficiency, m) * source_rate * integration_time;
}

std::uint64_t CountRecord::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const MeasurementSetting& setting) {
  setting.validate();
  if (setting.scope.back() >= rho.num_qubits()) {
    throw InvalidArgument("measurement scope exceeds the state's qubits");
  }
  const DensityMatrix reduced = setting.size() == rho.num_qubits()
                                    ? rho
                                    : partial_trace(rho, std::span<const int>(setting.scope));
  std::vector<double> probs(setting.num_outcomes());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const CVector v = setting.outcome_vector(k);
    probs[k] = (v.adjoint() * reduced.entries() * v)(0, 0).real();
  }
  return probs;
}

CountRecord simulate_counts(const DensityMatrix& rho, const MeasurementSetting& setting,
                            const DetectorModel& detector, std::uint64_t seed) {
  detector.validate();
  const std::vector<double> probs = outcome_probabilities(rho, setting);
  const double scale = detector.expected_events(setting.size());
  Rng rng = make_rng(seed);
  CountRecord rec;
  rec.setting = setting;
  rec.seed = seed;
  rec.detector = detector;
  rec.counts.reserve(probs.size());
  for (double p : probs) {
    const double mean = scale * std::max(p, 0.0);
    if (mean <= 0.0) {
      rec.counts.push_back(0);
      continue;
    }
    std::poisson_distribution<std::uint64_t> poisson(mean);
    rec.counts.push_back(poisson(rng));
  }
  return rec;
}

std::vector<CountRecord> simulate_plan(const DensityMatrix& rho, std::span<const MeasurementSetting> plan,
                                       const DetectorModel& detector, std::uint64_t seed) {
  std::vector<CountRecord> records;
  records.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    CountRecord rec = simulate_counts(rho, plan[i], detector, derive_seed(seed, i));
    rec.setting_index = static_cast<int>(i);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<MeasurementSetting> local_tomography_plan(int num_qubits) {
  if (num_qubits < 1) throw InvalidArgument("local plan needs at least one qubit");
  std::vector<MeasurementSetting> plan;
  for (int q = 0; q < num_qubits; ++q) {
    for (Projector p : kTomographyProjectors) plan.push_back(MeasurementSetting::local(q, p));
  }
  return plan;
}

std::vector<MeasurementSetting> full_tomography_plan(int num_qubits) {
  if (num_qubits < 1) throw InvalidArgument("full plan needs at least one qubit");
  if (num_qubits > kMaxQubits) {
    throw ResourceLimit("full tomography plan limited to " + std::to_string(kMaxQubits) + " qubits");
  }
  std::vector<int> scope(static_cast<std::size_t>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) scope[static_cast<std::size_t>(q)] = q;
  const std::size_t total = std::size_t{1} << (2 * num_qubits);
  std::vector<MeasurementSetting> plan;
  plan.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<Projector> projectors(static_cast<std::size_t>(num_qubits));
    for (int q = 0; q < num_qubits; ++q) {
      const std::size_t digit = (k >> (2 * (num_qubits - 1 - q))) & 3U;
      projectors[static_cast<std::size_t>(q)] = kTomographyProjectors[digit];
    }
    plan.push_back(MeasurementSetting::product(scope, std::move(projectors)));
  }
  return plan;
}

}  // namespace entpoly
