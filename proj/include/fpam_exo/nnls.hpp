#pragma once

// Nonnegative least squares with a ridge term:
//
//   min_x || [A; omega I] x - [b; 0] ||^2   subject to x >= 0
//
// solved with the Lawson-Hanson active-set method.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace fpam_exo::nnls {

struct Problem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double omega = 0.06;
  std::optional<Eigen::VectorXd> upper_bounds;
  /// 0 selects the default cap of 3 n (n + m).
  int max_iterations = 0;
};

struct Solution {
  Eigen::VectorXd x;
  /// A x - b over the data rows only.
  Eigen::VectorXd residual;
  /// Norm of the full augmented residual (data rows plus ridge rows).
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline Eigen::MatrixXd augmented_matrix(const Problem& p) {
  const auto m = p.A.rows(), n = p.A.cols();
  Eigen::MatrixXd At(m + n, n);
  At.topRows(m) = p.A;
  At.bottomRows(n) = p.omega * Eigen::MatrixXd::Identity(n, n);
  return At;
}

inline Eigen::VectorXd augmented_rhs(const Problem& p) {
  Eigen::VectorXd bt = Eigen::VectorXd::Zero(p.A.rows() + p.A.cols());
  bt.head(p.A.rows()) = p.b;
  return bt;
}

/// KKT tolerance 1e-10 (1 + ||A~^T A~||_inf).
inline double kkt_tolerance(const Problem& p) {
  const Eigen::MatrixXd At = augmented_matrix(p);
  const Eigen::MatrixXd G = At.transpose() * At;
  return 1e-10 * (1.0 + G.cwiseAbs().rowwise().sum().maxCoeff());
}

/// Largest violation of the KKT conditions at x (<= 0 means satisfied):
/// gradient >= 0 on zero coordinates and == 0 on positive ones.
inline double kkt_violation(const Problem& p, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd At = augmented_matrix(p);
  const Eigen::VectorXd g = At.transpose() * (At * x - augmented_rhs(p));
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) < 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, x(j) == 0.0 ? -g(j) : std::abs(g(j)));
  }
  return worst;
}

namespace detail {

struct CoreResult {
  Eigen::VectorXd x;
  int iterations;
  bool converged;
};

// Lawson-Hanson on (E, f) restricted to the columns flagged in `eligible`.
inline CoreResult lawson_hanson(const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                                const std::vector<bool>& eligible, double tol, int max_iter) {
  const Eigen::Index n = E.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  int iter = 0;

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z.setZero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd Ep(E.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ep.col(static_cast<Eigen::Index>(k)) = E.col(idx[k]);
    const Eigen::VectorXd zp = Ep.colPivHouseholderQr().solve(f);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  while (true) {
    const Eigen::VectorXd w = E.transpose() * (f - E * x);
    Eigen::Index pick = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (!eligible[uj] || passive[uj] || blocked[uj]) continue;
      if (w(j) > best) {  // strict: smallest index wins exact ties
        best = w(j);
        pick = j;
      }
    }
    if (pick < 0) return {x, iter, true};
    if (++iter > max_iter) return {x, iter, false};

    passive[static_cast<std::size_t>(pick)] = true;
    Eigen::VectorXd z;
    solve_passive(z);
    if (z(pick) <= 0.0) {
      // Column is numerically dependent on the passive set; skip it until x moves.
      passive[static_cast<std::size_t>(pick)] = false;
      blocked[static_cast<std::size_t>(pick)] = true;
      continue;
    }

    while (true) {
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      if (feasible) break;
      if (++iter > max_iter) return {x, iter, false};

      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (passive[uj] && (x(j) <= 0.0 || (z(j) <= 0.0 && x(j) <= 1e-14 * (1.0 + x.cwiseAbs().maxCoeff())))) {
          passive[uj] = false;
          x(j) = 0.0;
        }
      }
      solve_passive(z);
    }
    x = z;
    std::fill(blocked.begin(), blocked.end(), false);
  }
}

}  // namespace detail

inline Solution solve(const Problem& problem) {
  const auto m = problem.A.rows(), n = problem.A.cols();
  if (m < 1 || n < 1 || problem.b.size() != m)
    throw std::invalid_argument("nnls: inconsistent problem dimensions");
  if (!(problem.omega >= 0.0)) throw std::invalid_argument("nnls: omega must be non-negative");
  if (!problem.A.allFinite() || !problem.b.allFinite())
    throw std::invalid_argument("nnls: non-finite entries");
  if (problem.upper_bounds && problem.upper_bounds->size() != n)
    throw std::invalid_argument("nnls: upper bound size mismatch");

  const Eigen::MatrixXd E = augmented_matrix(problem);
  const Eigen::VectorXd f = augmented_rhs(problem);
  const double tol = kkt_tolerance(problem);
  const int cap = problem.max_iterations > 0 ? problem.max_iterations
                                             : static_cast<int>(3 * n * (n + m));

  std::vector<bool> eligible(static_cast<std::size_t>(n), true);
  for (Eigen::Index j = 0; j < n; ++j)
    if (E.col(j).cwiseAbs().maxCoeff() == 0.0) eligible[static_cast<std::size_t>(j)] = false;

  auto core = detail::lawson_hanson(E, f, eligible, tol, cap);
  Eigen::VectorXd x = core.x;
  int iterations = core.iterations;
  bool converged = core.converged;

  if (problem.upper_bounds && converged) {
    // Clamp violators to their bound and refit the rest; repeat until clean.
    const Eigen::VectorXd& ub = *problem.upper_bounds;
    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(n);
    std::vector<bool> clamped(static_cast<std::size_t>(n), false);
    while (converged) {
      bool any = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (!clamped[uj] && x(j) > ub(j)) {
          clamped[uj] = true;
          eligible[uj] = false;
          fixed(j) = ub(j);
          any = true;
        }
      }
      if (!any) break;
      const Eigen::VectorXd f_reduced = f - E * fixed;
      auto refit = detail::lawson_hanson(E, f_reduced, eligible, tol, cap);
      iterations += refit.iterations;
      converged = refit.converged;
      x = refit.x + fixed;
    }
  }

  Solution s;
  s.x = x;
  s.residual = problem.A * x - problem.b;
  s.residual_norm = (E * x - f).norm();
  s.iterations = iterations;
  s.converged = converged;
  return s;
}

}  // namespace fpam_exo::nnls
