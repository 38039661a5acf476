// SPDX-License-Identifier: Apache-2.0
//
// Dynamic allocation ratio for informed mixing. The ratio is the fraction of
// the class set taken from the selecting (donor) domain; the follower domain
// receives the mask complement.
#pragma once

#include <cstddef>

namespace ida {

/// Kumaraswamy CDF 1 - (1 - x^a)^b. Throws RangeError unless x in [0, 1] and a, b > 0.
double kcdf(double x, double a, double b);

/// Reversed Kumaraswamy CDF (1 - x^a)^b, equal to 1 - kcdf(x, a, b).
double rkcdf(double x, double a, double b);

/// Truncated three-phase schedule over K iterations.
///
/// With `reversed` set (the default, source-dominant schedule) the ratio
/// holds at eta_max until phase1_end*K, follows eta_min + (eta_max -
/// eta_min) * rkcdf over the middle phase (input renormalised to [0, 1]) and
/// holds at eta_min from phase3_start*K onward. With `reversed` cleared the
/// schedule mirrors this: eta_min, then the rising kcdf branch, then eta_max.
struct ScheduleConfig {
  double a = 2.0;
  double b = 2.0;
  bool reversed = true;
  double eta_min = 0.3;
  double eta_max = 0.7;
  std::size_t total_iters = 2000;
  double phase1_end = 0.2;
  double phase3_start = 0.8;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;

  /// Constant schedule (eta_min == eta_max == eta), used for fixed-ratio ablations.
  static ScheduleConfig fixed(double eta, std::size_t total_iters);
};

/// Ratio at iteration `iter` in [0, K]. Throws RangeError when iter > K.
double eta_at(const ScheduleConfig& cfg, std::size_t iter);

}  // namespace ida
