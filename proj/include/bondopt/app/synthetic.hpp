#pragma once

// Deterministic synthetic zero-coupon curves.
//
// The log price of a t-month bond is the base curve plus a deviation d(t).
// One-month returns are
//   R(t, s) = mu(t) - kappa d(t, s) + sigma(t) eps(t, s),   t >= 2,
// where mu is the base-curve roll-down, sigma(t) = vol (t - 1) / 12 and eps is
// a stationary Gaussian field over maturity with correlation decay^|tau|.
// The one-month bond matures at par, so its return is known at the start of
// the period. Deviations update as d(t - 1, s + 1) = (1 - kappa) d(t, s) + sigma(t) eps(t, s).

#include <string>
#include <vector>

#include "bondopt/app/config.hpp"
#include "bondopt/marketdata.hpp"

namespace bondopt::app {

/// Base yield (continuously compounded) at `years`.
double base_yield(double years);

/// Curves on tenors 1/12 .. max_months/12 years, one per month from the start date.
std::vector<YieldCurve> generate_curves(const GeneratorSettings& settings, int max_months);

/// YYYY-MM-DD advanced by `months`; the day is clamped to 28.
std::string add_months(const std::string& iso_date, int months);

}  // namespace bondopt::app
