#include "entpoly/simplex.hpp"

#include <cmath>

#include "entpoly/error.hpp"

namespace entpoly {
namespace {

// Tableau rows 0..m-1 hold constraints, row m the reduced costs; last column is the rhs.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Runs simplex iterations over columns [0, allowed). Returns false when unbounded.
  LpStatus optimize(int allowed, int max_iterations, int& iterations) {
    const int m = rows();
    while (iterations < max_iterations) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t_(m, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t_(i, enter) > tol_) {
          const double ratio = t_(i, cols()) / t_(i, enter);
          if (leave < 0 || ratio < best - tol_ ||
              (std::abs(ratio - best) <= tol_ && basis_[static_cast<std::size_t>(i)] <
                                                     basis_[static_cast<std::size_t>(leave)])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
      ++iterations;
    }
    return LpStatus::IterationLimit;
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double tol_;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  int max_iterations, double tol) {
  const auto m = static_cast<int>(a.rows());
  const auto n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw InvalidArgument("linear program dimensions disagree");

  // Phase one: artificial variables n..n+m-1 with objective sum of artificials.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b[i];
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + i) = 0.0;

  Tableau tab(std::move(t), std::move(basis), tol);
  LpResult result;
  LpStatus status = tab.optimize(n + m, max_iterations, result.iterations);
  if (status == LpStatus::IterationLimit) {
    result.status = status;
    return result;
  }
  result.infeasibility = -tab.data()(m, n + m);
  if (result.infeasibility > 1e-9 * std::max(1.0, b.cwiseAbs().sum())) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis where a real column can replace them.
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.data()(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase two: reduced costs of the original objective over the current basis.
  Eigen::MatrixXd& data = tab.data();
  data.row(m).setZero();
  data.row(m).head(n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bi = tab.basis()[static_cast<std::size_t>(i)];
    if (bi < n && c[bi] != 0.0) data.row(m) -= c[bi] * data.row(i);
  }
  status = tab.optimize(n, max_iterations, result.iterations);
  result.status = status;
  result.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bi = tab.basis()[static_cast<std::size_t>(i)];
    if (bi < n) result.x[bi] = data(i, n + m);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace entpoly
