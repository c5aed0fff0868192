#include "qotto/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qotto {

namespace {

struct Simplex {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> values;

  void order() {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> p;
    std::vector<double> v;
    for (std::size_t i : idx) {
      p.push_back(points[i]);
      v.push_back(values[i]);
    }
    points = std::move(p);
    values = std::move(v);
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) d = std::max(d, (points[i] - points[0]).lpNorm<Eigen::Infinity>());
    return d;
  }
};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options) {
  const Eigen::Index n = x0.size();
  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  Eigen::VectorXd start = x0;
  double start_value = eval(start);

  for (int round = 0; round <= options.restarts; ++round) {
    Simplex s;
    s.points.push_back(start);
    s.values.push_back(start_value);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd p = start;
      p[i] += options.initial_step;
      s.points.push_back(p);
      s.values.push_back(eval(p));
    }

    bool converged = false;
    while (result.evaluations < options.max_evaluations) {
      s.order();
      result.best_history.push_back(s.values.front());
      ++result.iterations;
      if (std::abs(s.values.back() - s.values.front()) <= options.f_tolerance && s.diameter() <= options.x_tolerance) {
        converged = true;
        break;
      }
      if (s.diameter() <= options.x_tolerance * 1e-3) {
        converged = true;
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) centroid += s.points[i];
      centroid /= static_cast<double>(n);
      const Eigen::VectorXd& worst = s.points[n];

      const Eigen::VectorXd reflected = centroid + (centroid - worst);
      const double fr = eval(reflected);
      if (fr < s.values.front()) {
        const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
        const double fe = eval(expanded);
        if (fe < fr) {
          s.points[n] = expanded;
          s.values[n] = fe;
        } else {
          s.points[n] = reflected;
          s.values[n] = fr;
        }
        continue;
      }
      if (fr < s.values[n - 1]) {
        s.points[n] = reflected;
        s.values[n] = fr;
        continue;
      }
      const bool outside = fr < s.values[n];
      const Eigen::VectorXd contracted =
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                  : Eigen::VectorXd(centroid + 0.5 * (worst - centroid));
      const double fc = eval(contracted);
      if (fc < (outside ? fr : s.values[n])) {
        s.points[n] = contracted;
        s.values[n] = fc;
        continue;
      }
      for (Eigen::Index i = 1; i <= n; ++i) {
        s.points[i] = s.points[0] + 0.5 * (s.points[i] - s.points[0]);
        s.values[i] = eval(s.points[i]);
      }
    }
    s.order();
    const bool improved = s.values.front() < start_value - options.f_tolerance;
    start = s.points.front();
    start_value = s.values.front();
    result.converged = converged;
    if (!converged || (round > 0 && !improved)) break;
  }
  result.x = start;
  result.value = start_value;
  return result;
}

}  // namespace qotto
