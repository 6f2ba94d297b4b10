#include "entpoly/resources.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "entpoly/error.hpp"
#include "entpoly/random.hpp"
#include "entpoly/tomo.hpp"

namespace entpoly {
namespace {

void check_qubits(int n) {
  if (n < 1) throw InvalidArgument("qubit count must be positive");
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("efficiency must lie in (0, 1]");
}

std::vector<CountRecord> resample(std::span<const CountRecord> records, Rng& rng) {
  std::vector<CountRecord> out(records.begin(), records.end());
  for (CountRecord& rec : out) {
    for (auto& c : rec.counts) {
      if (c == 0) continue;
      std::poisson_distribution<std::uint64_t> poisson(static_cast<double>(c));
      c = poisson(rng);
    }
  }
  return out;
}

// Runs `estimate` on the observed records and on `trials` resamplings.
ErrorEstimate propagate(std::span<const CountRecord> records, int trials, std::uint64_t seed,
                        const std::function<std::vector<double>(std::span<const CountRecord>)>& estimate) {
  if (trials < 2) throw InvalidArgument("Monte Carlo needs at least two trials");
  if (records.empty()) throw InvalidArgument("no count records");
  ErrorEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.point = estimate(records);
  const std::size_t width = est.point.size();

  std::vector<std::vector<double>> samples(width);
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    const std::vector<CountRecord> trial = resample(records, rng);
    try {
      const std::vector<double> values = estimate(trial);
      for (std::size_t i = 0; i < width; ++i) samples[i].push_back(values[i]);
    } catch (const Error&) {
      ++est.aborted;
    }
  }
  if (est.aborted * 10 > trials) {
    throw UnreliableEstimate(std::to_string(est.aborted) + " of " + std::to_string(trials) +
                             " Monte Carlo trials aborted");
  }
  const int ok = trials - est.aborted;
  if (ok < 2) throw UnreliableEstimate("fewer than two successful Monte Carlo trials");
  for (auto& column : samples) {
    std::sort(column.begin(), column.end());
    const double mean = std::accumulate(column.begin(), column.end(), 0.0) / ok;
    double ss = 0.0;
    for (double x : column) ss += (x - mean) * (x - mean);
    est.mean.push_back(mean);
    est.std_dev.push_back(std::sqrt(ss / (ok - 1)));
  }
  return est;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::LPM: return "LPM";
    case Method::FQST: return "FQST";
    case Method::CSQST: return "CSQST";
    case Method::WITNESS_A: return "WITNESS_A";
    case Method::WITNESS_B: return "WITNESS_B";
  }
  return "UNKNOWN";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::LPM, Method::FQST, Method::CSQST, Method::WITNESS_A, Method::WITNESS_B}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown method '" + name + "'");
}

void MethodSpec::validate() const {
  if (method == Method::CSQST && rank < 1) throw InvalidArgument("compressed-sensing rank must be >= 1");
}

std::uint64_t measurement_count(const MethodSpec& method, int num_qubits) {
  method.validate();
  check_qubits(num_qubits);
  const auto n = static_cast<std::uint64_t>(num_qubits);
  switch (method.method) {
    case Method::LPM: return 4 * n;
    case Method::FQST:
      if (num_qubits > 31) throw ResourceLimit("4^N overflows for N > 31");
      return std::uint64_t{1} << (2 * n);
    case Method::CSQST:
      if (num_qubits > 48) throw ResourceLimit("r N^2 2^N overflows for N > 48");
      return static_cast<std::uint64_t>(method.rank) * n * n * (std::uint64_t{1} << n);
    case Method::WITNESS_A: return 2;
    case Method::WITNESS_B: return n * (n - 1);
  }
  throw InvalidArgument("unknown method");
}

int measurement_scope(Method method, int num_qubits) {
  check_qubits(num_qubits);
  switch (method) {
    case Method::LPM: return 1;
    case Method::WITNESS_B: return 2;
    default: return num_qubits;
  }
}

double count_rate(double eta, double source_rate, int m) {
  check_eta(eta);
  if (!(source_rate > 0.0)) throw InvalidArgument("source rate must be positive");
  if (m < 1) throw InvalidArgument("coincidence order must be positive");
  return std::pow(eta, m) * source_rate;
}

OverheadReport overhead(const MethodSpec& method, int num_qubits, double eta) {
  check_eta(eta);
  OverheadReport r;
  r.method = method;
  r.num_qubits = num_qubits;
  r.eta = eta;
  r.measurements = measurement_count(method, num_qubits);
  r.efficiency = std::pow(eta, measurement_scope(method.method, num_qubits));
  r.overhead = static_cast<double>(r.measurements) / r.efficiency;
  return r;
}

double crossing_efficiency(int num_qubits, WitnessType witness) {
  if (num_qubits < 2) throw InvalidArgument("crossing efficiency needs at least two qubits");
  const double n = num_qubits;
  if (witness == WitnessType::A) return std::pow(2.0 * n, -1.0 / (n - 1.0));
  return std::min((n - 1.0) / 4.0, 1.0);
}

ErrorEstimate monte_carlo_spectrum(std::span<const CountRecord> records, int trials, std::uint64_t seed) {
  return propagate(records, trials, seed, [](std::span<const CountRecord> recs) {
    return local_spectrum_from_counts(recs).lambdas();
  });
}

ErrorEstimate monte_carlo_purity(std::span<const CountRecord> records, int trials, std::uint64_t seed) {
  if (records.empty()) throw InvalidArgument("no count records");
  const Eigen::Index dim = Eigen::Index{1} << records.front().setting.scope.size();
  return propagate(records, trials, seed, [dim](std::span<const CountRecord> recs) {
    return std::vector<double>{purity(mle_reconstruct(recs, dim).rho)};
  });
}

}  // namespace entpoly
