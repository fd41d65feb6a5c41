#pragma once

// Difference equations on an integer lattice in exact rational arithmetic,
// plus the continuum objects they converge to.
//
// A LatticeField holds coefficients y_{x,x'} over integer sites x at one
// value of the evolution index x'. The forward second difference and the
// recursion built on it amplify generic data, so everything is kept in exact
// rationals; the stable centered variant scaled_heat_step carries the random
// walk toward the heat kernel.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "fluxion/errors.hpp"

namespace fluxion {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3/7", "42", "-0.125" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  using Int = boost::multiprecision::cpp_int;
  // Validates by hand and strips leading zeros: cpp_int's string constructor
  // follows C literal rules, so "0125" would otherwise come back as octal.
  auto parse_int = [](const std::string& part, const char* what) -> Int {
    std::string digits = part;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
      negative = digits.front() == '-';
      digits.erase(0, 1);
    }
    const bool all_digits =
        !digits.empty() &&
        std::all_of(digits.begin(), digits.end(),
                    [](unsigned char c) { return std::isdigit(c) != 0; });
    if (!all_digits) {
      throw std::invalid_argument(std::string("parse_rational: bad ") + what +
                                  " '" + part + "'");
    }
    digits.erase(0, std::min(digits.find_first_not_of('0'),
                             digits.size() - 1));
    const Int value(digits);
    return negative ? -value : value;
  };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Int den = parse_int(text.substr(slash + 1), "denominator");
    if (den == 0) {
      throw std::invalid_argument("parse_rational: denominator is zero");
    }
    return Rational(parse_int(text.substr(0, slash), "numerator"), den);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto places = text.size() - dot - 1;
    return Rational(parse_int(digits, "decimal"),
                    boost::multiprecision::pow(Int(10),
                                               static_cast<unsigned>(places)));
  }
  return Rational(parse_int(text, "integer"));
}

/// Coefficients y_{x,x'} with finite support at one evolution index x'.
class LatticeField {
 public:
  using Map = std::map<long long, Rational>;

  explicit LatticeField(long long x_prime = 0) : x_prime_(x_prime) {
    detail::require(x_prime >= 0,
                    "LatticeField: evolution index must be nonnegative");
  }

  /// Unit impulse at one site.
  static LatticeField delta(long long site = 0, long long x_prime = 0) {
    LatticeField field(x_prime);
    field.values_[site] = 1;
    return field;
  }

  long long x_prime() const { return x_prime_; }
  const Map& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  Rational value(long long site) const {
    const auto it = values_.find(site);
    return it == values_.end() ? Rational(0) : it->second;
  }

  void set(long long site, Rational v) {
    if (v == 0) {
      values_.erase(site);
    } else {
      values_[site] = std::move(v);
    }
  }

  void add(long long site, const Rational& v) {
    if (v == 0) return;
    auto [it, inserted] = values_.try_emplace(site, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) values_.erase(it);
    }
  }

  Rational sum() const {
    Rational total = 0;
    for (const auto& [site, v] : values_) total += v;
    return total;
  }

  bool operator==(const LatticeField&) const = default;

  friend LatticeField operator+(const LatticeField& a, const LatticeField& b) {
    detail::require(a.x_prime_ == b.x_prime_,
                    "LatticeField: cannot add fields at different evolution "
                    "indices");
    LatticeField out = a;
    for (const auto& [site, v] : b.values_) out.add(site, v);
    return out;
  }

  friend LatticeField operator*(const Rational& scale,
                                const LatticeField& field) {
    LatticeField out(field.x_prime_);
    if (scale == 0) return out;
    for (const auto& [site, v] : field.values_) {
      out.values_[site] = scale * v;
    }
    return out;
  }

 private:
  long long x_prime_ = 0;
  Map values_;
};

namespace detail {

inline boost::multiprecision::cpp_int binomial_coefficient(long long total,
                                                           long long k) {
  // Multiply up and divide down in lockstep; every intermediate quotient is
  // itself a binomial coefficient, so the division is exact.
  boost::multiprecision::cpp_int coeff = 1;
  for (long long i = 1; i <= k; ++i) {
    coeff *= (total - k + i);
    coeff /= i;
  }
  return coeff;
}

inline Rational rational_pow(const Rational& base, long long exponent) {
  using boost::multiprecision::pow;
  return Rational(pow(numerator(base), static_cast<unsigned>(exponent)),
                  pow(denominator(base), static_cast<unsigned>(exponent)));
}

}  // namespace detail

/// Probability that an event with per-trial probability p occurs m times and
/// fails n times in m+n trials: (m+n)!/(m!n!) * p^m * (1-p)^n, computed
/// exactly. Underflow and overflow cannot occur at any trial count.
inline Rational binomial_term(long long m, long long n, const Rational& p) {
  detail::require(m >= 0 && n >= 0,
                  "binomial_term: counts must be nonnegative");
  detail::require(p >= 0 && p <= 1, "binomial_term: p must lie in [0, 1]");
  return Rational(detail::binomial_coefficient(m + n, std::min(m, n))) *
         detail::rational_pow(p, m) * detail::rational_pow(1 - p, n);
}

/// Same, for a floating-point probability. The given p is taken at face
/// value as the dyadic rational it is, the term is computed exactly, and only
/// the final result is rounded once back to double.
inline double binomial_term(long long m, long long n, double p) {
  detail::require(std::isfinite(p), "binomial_term: p must be finite");
  return binomial_term(m, n, Rational(p)).convert_to<double>();
}

/// One Bernoulli experiment: p, its exact complement, and the trial count.
struct BernoulliSpec {
  Rational p;
  long long trials = 1;

  Rational q() const { return 1 - p; }

  /// Probability of exactly m successes.
  Rational term(long long m) const {
    detail::require(m >= 0 && m <= trials,
                    "BernoulliSpec: m must lie in [0, trials]");
    return binomial_term(m, trials - m, p);
  }
};

/// Forward second difference in x: out_x = y_{x+2} - 2*y_{x+1} + y_x.
/// The evolution index is unchanged; support shifts left by up to two sites.
inline LatticeField delta2(const LatticeField& field) {
  LatticeField out(field.x_prime());
  for (const auto& [site, v] : field.values()) {
    out.add(site - 2, v);
    out.add(site - 1, -2 * v);
    out.add(site, v);
  }
  return out;
}

/// One step of the recursion equating the forward second difference in x
/// with the forward first difference in x': y_{x,x'+1} = y_{x,x'} + delta2.
/// A faithful transcription; its amplitudes diverge for generic data, which
/// is why the exact arithmetic matters. See scaled_heat_step for the stable
/// bridge to the continuum.
inline LatticeField laplace_step(const LatticeField& field) {
  LatticeField out(field.x_prime() + 1);
  for (const auto& [site, v] : field.values()) {
    out.add(site - 2, v);
    out.add(site - 1, -2 * v);
    out.add(site, 2 * v);
  }
  return out;
}

/// Centered, mass-preserving step y'_x = y_x + lambda*(y_{x+1} - 2y_x +
/// y_{x-1}) with lambda in (0, 1/2]. At lambda = 1/2 it is one fair-coin
/// step of a random walk.
inline LatticeField scaled_heat_step(const LatticeField& field,
                                     const Rational& lambda) {
  detail::require(lambda > 0 && 2 * lambda <= 1,
                  "scaled_heat_step: lambda must lie in (0, 1/2]");
  LatticeField out(field.x_prime() + 1);
  const Rational stay = 1 - 2 * lambda;
  for (const auto& [site, v] : field.values()) {
    out.add(site - 1, lambda * v);
    out.add(site, stay * v);
    out.add(site + 1, lambda * v);
  }
  return out;
}

/// Fundamental solution of d2y/dx2 = dy/dx': the normal density with mean 0
/// and variance 2x', exp(-x^2/(4x'))/sqrt(4*pi*x').
inline double heat_kernel(double x, double x_prime) {
  detail::require(x_prime > 0.0, "heat_kernel: x_prime must be positive");
  return std::exp(-x * x / (4.0 * x_prime)) /
         std::sqrt(4.0 * std::numbers::pi * x_prime);
}

/// Centered-difference residual of the continuum equation applied to
/// heat_kernel at (x, x') with step h in both variables. Vanishes at second
/// order in h.
inline double pde_residual(double x, double x_prime, double h) {
  detail::require(h > 0.0, "pde_residual: h must be positive");
  detail::require(x_prime - h > 0.0,
                  "pde_residual: x_prime - h must stay positive");
  const double d2x = (heat_kernel(x - h, x_prime) -
                      2.0 * heat_kernel(x, x_prime) +
                      heat_kernel(x + h, x_prime)) /
                     (h * h);
  const double dxp = (heat_kernel(x, x_prime + h) -
                      heat_kernel(x, x_prime - h)) /
                     (2.0 * h);
  return d2x - dxp;
}

/// Largest pointwise gap between the exact binomial distribution and its
/// limiting normal density with matched mean and variance, over all m.
inline double demoivre_compare(long long trials, double p) {
  detail::require(trials >= 1, "demoivre_compare: need at least one trial");
  detail::require(std::isfinite(p) && p > 0.0 && p < 1.0,
                  "demoivre_compare: p must lie strictly inside (0, 1)");
  const double mean = static_cast<double>(trials) * p;
  const double variance = mean * (1.0 - p);
  double worst = 0.0;
  for (long long m = 0; m <= trials; ++m) {
    const double exact = binomial_term(m, trials - m, p);
    const double offset = static_cast<double>(m) - mean;
    const double normal = std::exp(-offset * offset / (2.0 * variance)) /
                          std::sqrt(2.0 * std::numbers::pi * variance);
    worst = std::max(worst, std::abs(exact - normal));
  }
  return worst;
}

}  // namespace fluxion
