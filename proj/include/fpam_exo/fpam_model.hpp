#pragma once

// Fabric pneumatic artificial muscle (fPAM) force law and its calibration
// from tensile-test data.
//
//   F(eps, P) = F_ideal(eps) * P + p3 eps^3 + p2 eps^2 + p1 eps + p0
//   F_ideal(eps) = pi r0^2 (1/sin^2(a0) - 3 (eps - 1)^2 / tan^2(a0))
//   eps = (L0 - L) / L0
//
// Pressures cross every interface in kPa and are converted to Pa only
// inside force().

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fpam_exo/core.hpp"

namespace fpam_exo {

/// How the pressure-gain term enters the force law. `as_printed` keeps the
/// published expression, which is negative at small contraction for weave
/// angles below the 54.7 degree root; `flipped_ideal_term` negates it, giving
/// the conventional McKibben behaviour (pressure increases tension).
enum class SignConvention { as_printed, flipped_ideal_term };

inline std::string_view to_string(SignConvention s) {
  return s == SignConvention::as_printed ? "as_printed" : "flipped_ideal_term";
}

inline SignConvention parse_sign_convention(std::string_view s) {
  if (s == "as_printed") return SignConvention::as_printed;
  if (s == "flipped_ideal_term") return SignConvention::flipped_ideal_term;
  throw ConfigError("unknown sign_convention '" + std::string(s) + "'");
}

struct FpamParams {
  double r0_m = 0.0136;
  double alpha0_deg = 37.0;
  /// Elastic polynomial coefficients p0..p3 in newtons.
  std::array<double, 4> p{12.3, -182.9, 791.3, -1121.4};
  double L0_m = 0.30;
  double P_max_kpa = 138.0;
  SignConvention sign_convention = SignConvention::as_printed;

  void validate() const {
    if (!(r0_m > 0.0)) throw DomainError("fpam r0 must be positive");
    if (!(L0_m > 0.0)) throw DomainError("fpam L0 must be positive");
    if (!(alpha0_deg > 0.0 && alpha0_deg < 90.0))
      throw DomainError("fpam alpha0 must lie in (0, 90) degrees");
    if (!(P_max_kpa > 0.0)) throw DomainError("fpam P_max must be positive");
    for (double c : p)
      if (!std::isfinite(c)) throw DomainError("fpam elastic coefficient is not finite");
  }
};

struct TensileSample {
  double pressure_kpa;
  double length_m;
  double force_n;
};

/// Contraction ratio (L0 - L) / L0. Negative when over-stretched.
inline double contraction(const FpamParams& params, double length_m) {
  if (!(length_m > 0.0) || !std::isfinite(length_m))
    throw DomainError("actuator length must be positive, got " + std::to_string(length_m));
  return (params.L0_m - length_m) / params.L0_m;
}

/// Pressure-to-force gain F_ideal(eps) in m^2 (newtons per pascal).
inline double ideal_force_coefficient(const FpamParams& params, double eps) {
  const double a = deg2rad(params.alpha0_deg);
  const double s = std::sin(a);
  const double t = std::tan(a);
  const double u = (eps - 1.0) * (eps - 1.0);
  const double gain = kPi * (1.0 / (s * s) - 3.0 * u / (t * t)) * params.r0_m * params.r0_m;
  return params.sign_convention == SignConvention::as_printed ? gain : -gain;
}

inline double elastic_force(const FpamParams& params, double eps) {
  const auto& p = params.p;
  return ((p[3] * eps + p[2]) * eps + p[1]) * eps + p[0];
}

/// Actuator tension in newtons for contraction `eps` at `pressure_kpa`.
inline double force(const FpamParams& params, double eps, double pressure_kpa) {
  if (!(pressure_kpa >= 0.0))
    throw DomainError("pressure must be non-negative, got " + std::to_string(pressure_kpa));
  return ideal_force_coefficient(params, eps) * (pressure_kpa * kPascalPerKilopascal) +
         elastic_force(params, eps);
}

struct PressureLevelRmse {
  double pressure_kpa;
  std::size_t samples;
  double rmse_n;
};

struct FitReport {
  FpamParams params;
  bool geometric_identified = false;
  std::vector<PressureLevelRmse> per_level;
  double rmse_n = 0.0;
  int stage2_iterations = 0;
  std::vector<std::string> notes;
};

struct FitOptions {
  SignConvention sign_convention = SignConvention::as_printed;
  double P_max_kpa = 138.0;
  double alpha_min_deg = 5.0;
  double alpha_max_deg = 85.0;
  double r0_min_m = 1e-3;
  double r0_max_m = 0.1;
  int seeds = 5;
  int max_iterations = 200;
};

namespace detail {

inline constexpr double kZeroPressureTol = 1e-9;

inline std::size_t count_distinct(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

struct GeometricFit {
  double r0;
  double alpha;  // radians
  double cost;
  int iterations;
};

// Bounded Levenberg-Marquardt on the pressurized residuals
// y_k = F_k - F_elastic(eps_k) against F_ideal(eps_k) * P_k.
inline GeometricFit fit_geometry_from(double r0, double alpha, std::span<const double> eps,
                                      std::span<const double> pressure_pa,
                                      std::span<const double> y, double sign,
                                      const FitOptions& opt) {
  const double a_lo = deg2rad(opt.alpha_min_deg), a_hi = deg2rad(opt.alpha_max_deg);
  const std::size_t n = y.size();

  auto residuals = [&](double r, double a, Eigen::VectorXd& res, Eigen::MatrixXd* jac) {
    const double s = std::sin(a), c = std::cos(a);
    const double csc2 = 1.0 / (s * s), cot = c / s;
    for (std::size_t k = 0; k < n; ++k) {
      const double u = (1.0 - eps[k]) * (1.0 - eps[k]);
      const double h = csc2 - 3.0 * u * cot * cot;
      const double model = sign * kPi * r * r * h * pressure_pa[k];
      res(k) = y[k] - model;
      if (jac) {
        (*jac)(k, 0) = -sign * 2.0 * kPi * r * h * pressure_pa[k];
        (*jac)(k, 1) = -sign * kPi * r * r * 2.0 * cot * csc2 * (3.0 * u - 1.0) * pressure_pa[k];
      }
    }
    return res.squaredNorm();
  };

  Eigen::VectorXd res(n), trial(n);
  Eigen::MatrixXd jac(n, 2);
  double cost = residuals(r0, alpha, res, &jac);
  double lambda = 1e-3;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    const Eigen::Vector2d grad = jac.transpose() * res;
    bool improved = false;
    for (int inner = 0; inner < 30; ++inner) {
      Eigen::Matrix2d lhs = jtj;
      lhs.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
      const Eigen::Vector2d step = lhs.ldlt().solve(-grad);
      const double r_new = std::clamp(r0 + step(0), opt.r0_min_m, opt.r0_max_m);
      const double a_new = std::clamp(alpha + step(1), a_lo, a_hi);
      const double c_new = residuals(r_new, a_new, trial, nullptr);
      if (c_new < cost) {
        const double rel_step = std::abs(r_new - r0) / r0 + std::abs(a_new - alpha) / alpha;
        r0 = r_new;
        alpha = a_new;
        cost = residuals(r0, alpha, res, &jac);
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (rel_step < 1e-14) return {r0, alpha, cost, it + 1};
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return {r0, alpha, cost, it};
}

}  // namespace detail

/// Two-stage calibration: elastic polynomial from the zero-pressure samples,
/// then radius and weave angle from the pressurized residuals by bounded
/// multi-start Levenberg-Marquardt.
inline FitReport fit_params(std::span<const TensileSample> samples, double L0_m,
                            const FitOptions& opt = {}) {
  if (samples.empty()) throw FitError("no samples");
  if (!(L0_m > 0.0)) throw FitError("L0 must be positive");
  for (const auto& s : samples) {
    if (!(s.length_m > 0.0)) throw FitError("sample length must be positive");
    if (!(s.pressure_kpa >= 0.0)) throw FitError("sample pressure must be non-negative");
    if (!std::isfinite(s.force_n)) throw FitError("sample force is not finite");
  }

  FitReport report;
  report.params.L0_m = L0_m;
  report.params.P_max_kpa = opt.P_max_kpa;
  report.params.sign_convention = opt.sign_convention;

  auto eps_of = [&](const TensileSample& s) { return (L0_m - s.length_m) / L0_m; };

  // Stage 1: elastic polynomial.
  std::vector<double> eps0, f0;
  for (const auto& s : samples) {
    if (s.pressure_kpa <= detail::kZeroPressureTol) {
      eps0.push_back(eps_of(s));
      f0.push_back(s.force_n);
    }
  }
  if (eps0.empty()) throw FitError("no zero-pressure samples; elastic polynomial cannot be fitted");
  if (detail::count_distinct(eps0) < 4)
    throw FitError("rank-deficient elastic design matrix: need at least 4 distinct lengths at 0 kPa");
  {
    Eigen::MatrixXd V(eps0.size(), 4);
    Eigen::VectorXd rhs(eps0.size());
    for (std::size_t k = 0; k < eps0.size(); ++k) {
      V(k, 0) = 1.0;
      V(k, 1) = eps0[k];
      V(k, 2) = eps0[k] * eps0[k];
      V(k, 3) = eps0[k] * eps0[k] * eps0[k];
      rhs(k) = f0[k];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    if (qr.rank() < 4) throw FitError("rank-deficient elastic design matrix");
    const Eigen::Vector4d c = qr.solve(rhs);
    for (int i = 0; i < 4; ++i) report.params.p[i] = c(i);
  }

  // Stage 2: geometric parameters.
  std::map<double, std::vector<double>> lengths_by_level;
  std::vector<double> eps1, p_pa, y;
  for (const auto& s : samples) {
    if (s.pressure_kpa <= detail::kZeroPressureTol) continue;
    lengths_by_level[s.pressure_kpa].push_back(s.length_m);
    const double e = eps_of(s);
    eps1.push_back(e);
    p_pa.push_back(s.pressure_kpa * kPascalPerKilopascal);
    y.push_back(s.force_n - elastic_force(report.params, e));
  }
  if (y.empty()) {
    report.geometric_identified = false;
    report.notes.push_back("geometric parameters not identifiable: no pressurized samples");
  } else {
    for (const auto& [level, lens] : lengths_by_level) {
      if (detail::count_distinct(lens) < 4)
        throw FitError("pressure level " + std::to_string(level) +
                       " kPa has fewer than 4 distinct lengths");
    }
    const double sign = opt.sign_convention == SignConvention::as_printed ? 1.0 : -1.0;
    detail::GeometricFit best{0.0, 0.0, std::numeric_limits<double>::infinity(), 0};
    int total_iterations = 0;
    for (int i = 1; i <= opt.seeds; ++i) {
      const double frac = static_cast<double>(i) / (opt.seeds + 1);
      const double r_seed = opt.r0_min_m + frac * (opt.r0_max_m - opt.r0_min_m);
      const double a_seed = deg2rad(opt.alpha_min_deg + frac * (opt.alpha_max_deg - opt.alpha_min_deg));
      auto fit = detail::fit_geometry_from(r_seed, a_seed, eps1, p_pa, y, sign, opt);
      total_iterations += fit.iterations;
      if (fit.cost < best.cost) best = fit;
    }
    report.params.r0_m = best.r0;
    report.params.alpha0_deg = rad2deg(best.alpha);
    report.stage2_iterations = total_iterations;
    report.geometric_identified = true;
    if (lengths_by_level.size() < 2)
      report.notes.push_back("only one pressurized level; geometric fit is weakly constrained");
  }

  // Diagnostics.
  std::map<double, std::pair<double, std::size_t>> acc;
  double total = 0.0;
  for (const auto& s : samples) {
    const double model = force(report.params, eps_of(s), s.pressure_kpa);
    const double r = s.force_n - model;
    auto& [sum, count] = acc[s.pressure_kpa];
    sum += r * r;
    ++count;
    total += r * r;
  }
  for (const auto& [level, sc] : acc)
    report.per_level.push_back({level, sc.second, std::sqrt(sc.first / sc.second)});
  report.rmse_n = std::sqrt(total / samples.size());
  return report;
}

}  // namespace fpam_exo
