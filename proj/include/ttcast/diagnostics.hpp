#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ttcast/timeseries.hpp"

namespace ttcast {

// Autocorrelation with biased (full-series variance) normalization:
// out[0] = 1, out[k] = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2.
// Throws DomainError for constant series.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

// Partial autocorrelation via the Durbin-Levinson recursion on acf;
// out[0] = 1 and out[1] == acf[1].
std::vector<double> pacf(std::span<const double> series, std::size_t max_lag);

struct LagPolicy {
  enum class Kind { SchwertDefault, Fixed, AicMax };
  Kind kind = Kind::SchwertDefault;
  std::size_t k = 0;

  static LagPolicy schwert() { return {}; }
  static LagPolicy fixed(std::size_t k) { return {Kind::Fixed, k}; }
  static LagPolicy aic_max(std::size_t k) { return {Kind::AicMax, k}; }
};

// floor(12 * (n/100)^0.25), the usual deterministic lag rule.
std::size_t schwert_lag(std::size_t n);

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double critical_1 = 0.0;
  double critical_5 = 0.0;
  double critical_10 = 0.0;
  std::size_t n_obs = 0;      // observations used in the regression
  std::size_t lags_used = 0;
};

// Augmented Dickey-Fuller unit-root test, constant-only regression:
//   dx_t = a + rho * x_{t-1} + sum_i g_i dx_{t-i} + e_t
// statistic = t-ratio of rho. Critical values come from the MacKinnon (2010)
// response surface for the constant case; the p-value from the MacKinnon
// (1994) approximation. Null hypothesis: the series has a unit root (is not
// stationary).
AdfResult adf_test(std::span<const double> series, LagPolicy policy = LagPolicy::schwert());

// Response-surface critical values at the 1/5/10% levels for a given
// regression sample size (exposed for direct checking).
std::array<double, 3> adf_critical_values(std::size_t n_obs);
double adf_pvalue(double statistic);

enum class TransformKind { Raw, Log, LogMinusMovingAverage };

struct SeriesTransform {
  TransformKind kind = TransformKind::Raw;
  std::size_t ma_window = 288;  // one day at 5-minute resolution

  static SeriesTransform raw() { return {TransformKind::Raw, 0}; }
  static SeriesTransform log() { return {TransformKind::Log, 0}; }
  static SeriesTransform log_minus_ma(std::size_t window = 288) {
    return {TransformKind::LogMinusMovingAverage, window};
  }
};

std::string_view transform_name(TransformKind kind);

// raw -> identity; log -> ln(x); log_minus_moving_average -> ln(x) minus the
// trailing moving average of ln(x), dropping the first ma_window-1 points.
// Log kinds require a strictly positive series.
std::vector<double> transform(std::span<const double> series, SeriesTransform t);

struct ProfileRow {
  std::string period;    // "YYYY-MM-DD" or "YYYY-MM"
  std::string corridor;  // corridor id
  double mean_minutes = 0.0;
  std::size_t count = 0;
};

struct SeasonalProfiles {
  std::vector<ProfileRow> daily;
  std::vector<ProfileRow> monthly;
};

// Calendar-day and calendar-month mean travel time per corridor.
SeasonalProfiles seasonal_profiles(const TravelTimeMatrix& matrix);

}  // namespace ttcast
