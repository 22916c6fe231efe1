#include "cusplab/numeric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "cusplab/error.hpp"

namespace cusplab {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

std::vector<double> least_squares(std::span<const std::vector<double>> rows, std::span<const double> y) {
  if (rows.empty() || rows.size() != y.size()) throw ValidationError("least_squares: shape mismatch");
  const auto cols = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), cols);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != cols) throw ValidationError("least_squares: ragged rows");
    for (Eigen::Index j = 0; j < cols; ++j) X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) throw ValidationError("least_squares: degenerate design matrix");
  const Eigen::VectorXd beta = qr.solve(b);
  return {beta.data(), beta.data() + beta.size()};
}

}  // namespace cusplab
