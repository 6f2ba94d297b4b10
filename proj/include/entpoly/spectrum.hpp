#pragma once

#include <optional>
#include <vector>

namespace entpoly {

inline constexpr double kSpectrumTol = 1e-9;

// Maximal eigenvalue of every single-qubit marginal, each in [1/2, 1].
class LocalSpectrum {
 public:
  explicit LocalSpectrum(std::vector<double> lambdas,
                         std::optional<std::vector<double>> std_errors = std::nullopt);

  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::optional<std::vector<double>>& std_errors() const { return std_errors_; }
  int size() const { return static_cast<int>(lambdas_.size()); }
  double operator[](int i) const { return lambdas_[static_cast<std::size_t>(i)]; }
  double sum() const;

 private:
  std::vector<double> lambdas_;
  std::optional<std::vector<double>> std_errors_;
};

double l1_distance(const LocalSpectrum& a, const LocalSpectrum& b);

}  // namespace entpoly
