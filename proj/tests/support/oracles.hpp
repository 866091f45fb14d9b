#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fpam_exo/fpam_model.hpp"

namespace oracle {

/// Tensile samples generated straight from the force law, written out longhand
/// rather than through fpam_exo::force.
inline std::vector<fpam_exo::TensileSample> tensile_grid(const fpam_exo::FpamParams& p,
                                                         const std::vector<double>& levels_kpa,
                                                         int lengths, double eps_max = 0.35) {
  const double a = p.alpha0_deg * M_PI / 180.0;
  const double s2 = std::sin(a) * std::sin(a), t2 = std::tan(a) * std::tan(a);
  const double sign = p.sign_convention == fpam_exo::SignConvention::as_printed ? 1.0 : -1.0;
  std::vector<fpam_exo::TensileSample> out;
  for (double kpa : levels_kpa) {
    for (int i = 0; i < lengths; ++i) {
      const double eps = eps_max * i / (lengths - 1);
      const double gain = sign * M_PI * p.r0_m * p.r0_m * (1.0 / s2 - 3.0 * (eps - 1.0) * (eps - 1.0) / t2);
      const double f = gain * kpa * 1000.0 + p.p[0] + p.p[1] * eps + p.p[2] * eps * eps + p.p[3] * eps * eps * eps;
      out.push_back({kpa, p.L0_m * (1.0 - eps), f});
    }
  }
  return out;
}

/// Accelerated projected gradient (FISTA with restart) for
/// min ||E x - f||^2, x >= 0, iterated to a projected-gradient step below tol.
inline Eigen::VectorXd projected_gradient(const Eigen::MatrixXd& E, const Eigen::VectorXd& f, double tol = 1e-12,
                                          int max_iter = 2000000) {
  const Eigen::MatrixXd G = E.transpose() * E;
  const Eigen::VectorXd c = E.transpose() * f;
  const double L = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().maxCoeff();
  if (L <= 0.0) return Eigen::VectorXd::Zero(E.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(E.cols()), y = x;
  double t = 1.0;
  for (int k = 0; k < max_iter; ++k) {
    const Eigen::VectorXd xn = (y - (G * y - c) / L).cwiseMax(0.0);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    Eigen::VectorXd yn = xn + ((t - 1.0) / tn) * (xn - x);
    if ((xn - x).dot(G * xn - c) > 0.0) {  // restart when the objective goes up
      yn = xn;
      t = 1.0;
    } else {
      t = tn;
    }
    const double step = (xn - (xn - (G * xn - c) / L).cwiseMax(0.0)).norm();
    x = xn;
    y = yn;
    if (step <= tol) break;
  }
  return x;
}

inline double augmented_residual(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double omega,
                                 const Eigen::VectorXd& x) {
  return std::sqrt((A * x - b).squaredNorm() + omega * omega * x.squaredNorm());
}

/// Best residual over `count` random nonnegative candidates scaled around the
/// unconstrained solution.
inline double best_random_candidate(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double omega, int count,
                                    std::mt19937_64& rng) {
  Eigen::MatrixXd E(A.rows() + A.cols(), A.cols());
  E << A, omega * Eigen::MatrixXd::Identity(A.cols(), A.cols());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(E.rows());
  f.head(A.rows()) = b;
  const Eigen::VectorXd ls = E.completeOrthogonalDecomposition().solve(f);
  const double scale = 2.0 * (ls.cwiseAbs().maxCoeff() + 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double best = augmented_residual(A, b, omega, Eigen::VectorXd::Zero(A.cols()));
  Eigen::VectorXd x(A.cols());
  for (int k = 0; k < count; ++k) {
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = u(rng) < 0.3 ? 0.0 : scale * u(rng);
    best = std::min(best, augmented_residual(A, b, omega, x));
  }
  return best;
}

}  // namespace oracle
