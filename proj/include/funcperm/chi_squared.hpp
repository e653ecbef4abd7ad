#pragma once

#include <cmath>
#include <limits>

#include "funcperm/error.hpp"

namespace funcperm {

namespace detail {

// Series for the lower regularized gamma P(a, x); converges fast for x < a + 1.
inline double gamma_p_series(double a, double x, double log_prefactor) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(log_prefactor);
}

// Continued fraction for the upper regularized gamma Q(a, x), modified Lentz.
inline double gamma_q_fraction(double a, double x, double log_prefactor) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefactor) * h;
}

}  // namespace detail

/// Upper regularized incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("gamma_q needs a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x, log_prefactor);
  return detail::gamma_q_fraction(a, x, log_prefactor);
}

/// Pr(chi^2_dof > x).
inline double chi_squared_upper_tail(double x, double dof) {
  if (!(dof > 0.0)) throw DomainError("degrees of freedom must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace funcperm
