#pragma once

// Dense two-phase simplex for small linear programs in standard form.

#include <vector>

#include <Eigen/Dense>

namespace entpoly {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  double infeasibility = 0.0;  // phase-one optimum, sum of artificial variables
  int iterations = 0;
};

// Minimizes c^T x subject to A x = b, x >= 0. Bland's rule prevents cycling.
LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  int max_iterations = 10000, double tol = 1e-11);

}  // namespace entpoly
