#include "entpoly/spectrum.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "entpoly/error.hpp"

namespace entpoly {

LocalSpectrum::LocalSpectrum(std::vector<double> lambdas, std::optional<std::vector<double>> std_errors)
    : lambdas_(std::move(lambdas)), std_errors_(std::move(std_errors)) {
  if (lambdas_.empty()) throw InvalidArgument("local spectrum is empty");
  for (double l : lambdas_) {
    if (!std::isfinite(l) || l < 0.5 - kSpectrumTol || l > 1.0 + kSpectrumTol) {
      throw InvalidArgument("local eigenvalue " + std::to_string(l) + " outside [1/2, 1]");
    }
  }
  if (std_errors_) {
    if (std_errors_->size() != lambdas_.size()) throw InvalidArgument("one standard error per eigenvalue required");
    for (double s : *std_errors_) {
      if (!(s >= 0.0)) throw InvalidArgument("standard errors must be non-negative");
    }
  }
}

double LocalSpectrum::sum() const { return std::accumulate(lambdas_.begin(), lambdas_.end(), 0.0); }

double l1_distance(const LocalSpectrum& a, const LocalSpectrum& b) {
  if (a.size() != b.size()) throw InvalidArgument("spectra differ in length");
  double d = 0.0;
  for (int i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace entpoly
