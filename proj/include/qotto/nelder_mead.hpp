#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qotto {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double f_tolerance = 1e-12;  // spread of simplex values
  double x_tolerance = 1e-10;  // simplex diameter
  int max_evaluations = 4000;
  int restarts = 2;  // fresh simplex around the best point after convergence
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> best_history;  // best value after each iteration
};

// Minimizes f with the standard coefficients (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2). Non-finite values are treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace qotto
