#pragma once

// Tracking metrics: delay from the peak of the normalised cross-correlation
// and RMSE after aligning the measured series by that delay.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "fpam_exo/core.hpp"

namespace fpam_exo {

struct TrackingMetrics {
  /// Seconds the measured series lags the reference; absent when either
  /// series has zero variance.
  std::optional<double> delay_s;
  long lag_samples = 0;
  double rmse_deg = 0.0;
  std::string note;
};

namespace detail {

inline double variance(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s / static_cast<double>(x.size());
}

// Pearson correlation of ref[i] against meas[i + lag] over the overlap.
inline double lagged_correlation(std::span<const double> ref, std::span<const double> meas, long lag) {
  const long n = static_cast<long>(ref.size());
  const long i0 = std::max(0L, -lag), i1 = std::min(n, n - lag);
  const double cnt = static_cast<double>(i1 - i0);
  double ma = 0.0, mb = 0.0;
  for (long i = i0; i < i1; ++i) {
    ma += ref[static_cast<std::size_t>(i)];
    mb += meas[static_cast<std::size_t>(i + lag)];
  }
  ma /= cnt;
  mb /= cnt;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (long i = i0; i < i1; ++i) {
    const double a = ref[static_cast<std::size_t>(i)] - ma;
    const double b = meas[static_cast<std::size_t>(i + lag)] - mb;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  if (saa <= 0.0 || sbb <= 0.0) return -std::numeric_limits<double>::infinity();
  return sab / std::sqrt(saa * sbb);
}

inline double shifted_rmse(std::span<const double> ref, std::span<const double> meas, long lag) {
  const long n = static_cast<long>(ref.size());
  const long i0 = std::max(0L, -lag), i1 = std::min(n, n - lag);
  double s = 0.0;
  for (long i = i0; i < i1; ++i) {
    const double d = meas[static_cast<std::size_t>(i + lag)] - ref[static_cast<std::size_t>(i)];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(i1 - i0));
}

}  // namespace detail

/// Lag (in samples) that maximises the normalised cross-correlation, searched
/// over |lag| <= max_lag_samples and limited so the overlap keeps at least
/// half of the series. Correlations within 1e-9 of each other count as ties and
/// go to the smaller |lag|, so a periodic signal does not alias to a far lag
/// through rounding.
inline long estimate_lag(std::span<const double> ref, std::span<const double> meas, long max_lag_samples) {
  if (ref.size() != meas.size()) throw DomainError("metrics: series lengths differ");
  if (ref.size() < 2) throw DomainError("metrics: need at least 2 samples");
  if (detail::variance(ref) <= 0.0 || detail::variance(meas) <= 0.0)
    throw DomainError("metrics: zero-variance series, delay undefined");
  const long n = static_cast<long>(ref.size());
  const long k = std::min(max_lag_samples, n / 2);
  long best_lag = 0;
  double best = detail::lagged_correlation(ref, meas, 0);
  for (long d = 1; d <= k; ++d) {
    for (long lag : {d, -d}) {
      const double c = detail::lagged_correlation(ref, meas, lag);
      if (c > best + 1e-9) {
        best = c;
        best_lag = lag;
      }
    }
  }
  return best_lag;
}

/// `dt_s` is the uniform sample interval; `max_lag_s` bounds the delay search
/// (one reference period when tracking a periodic signal).
inline TrackingMetrics metrics(std::span<const double> ref, std::span<const double> meas, double dt_s,
                               double max_lag_s) {
  if (ref.size() != meas.size()) throw DomainError("metrics: series lengths differ");
  if (ref.size() < 2) throw DomainError("metrics: need at least 2 samples");
  if (!(dt_s > 0.0)) throw DomainError("metrics: sample interval must be positive");
  TrackingMetrics m;
  try {
    m.lag_samples = estimate_lag(ref, meas, static_cast<long>(std::floor(max_lag_s / dt_s + 1e-9)));
    m.delay_s = static_cast<double>(m.lag_samples) * dt_s;
  } catch (const DomainError& e) {
    m.lag_samples = 0;
    m.note = e.what();
  }
  m.rmse_deg = detail::shifted_rmse(ref, meas, m.lag_samples);
  return m;
}

}  // namespace fpam_exo
