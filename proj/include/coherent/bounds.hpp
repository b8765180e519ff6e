#pragma once

// Closed-form evaluations and bounds for coherent pairs and families.

#include "coherent/rational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coherent::bounds {

enum class BoundId {
  Eps1xN,           // sup P(|X-Y| >= 1-d) over 1 x n laws
  Eps2x2,           // same over 2 x 2 laws
  Upper2Delta,      // (2d) ∧ 1
  DaisyLevel,       // p_n = np / (np - p + 1)
  Dp80Max,          // sup E max_i X_i = p(n-p) / (1 + p(n-2))
  AbsDiffMean,      // sup E|X-Y| at mean p: 2p(1-p)
  Markov,           // 2p(1-p) / (1-d)
  MomentIntegral,   // (2 - 2^-r) / (1 + r)
  ConjIndependent,  // 2d(1-d)
};

struct BoundInfo {
  BoundId id;
  std::string_view name;
  std::string_view args;
};

inline constexpr BoundInfo kBounds[] = {
    {BoundId::Eps1xN, "eps_1xn", "delta"},
    {BoundId::Eps2x2, "eps_2x2", "delta"},
    {BoundId::Upper2Delta, "upper_2delta", "delta"},
    {BoundId::DaisyLevel, "daisy_pn", "n p"},
    {BoundId::Dp80Max, "dp80_max", "n p"},
    {BoundId::AbsDiffMean, "abs_diff_mean", "p"},
    {BoundId::Markov, "markov", "delta p"},
    {BoundId::MomentIntegral, "moment_integral", "r"},
    {BoundId::ConjIndependent, "conj_independent", "delta"},
};

inline std::optional<BoundId> parse_bound_id(std::string_view name) {
  for (const auto& b : kBounds)
    if (b.name == name) return b.id;
  return std::nullopt;
}

inline std::string_view name_of(BoundId id) {
  for (const auto& b : kBounds)
    if (b.id == id) return b.name;
  return "?";
}

namespace detail {

inline void require_unit(const Rational& v, const char* what) {
  if (v.sign() < 0 || v > Rational(1))
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " + v.to_short_string());
}

inline long require_int(const Rational& v, long min, const char* what) {
  if (!v.is_integer() || v < Rational(min))
    throw std::domain_error(std::string(what) + " must be an integer >= " + std::to_string(min));
  return v.numerator().get_si();
}

}  // namespace detail

inline Rational eps_1xn(const Rational& delta) {
  detail::require_unit(delta, "delta");
  return delta < Rational(1, 2) ? delta : Rational(1);
}

inline Rational eps_2x2(const Rational& delta) {
  detail::require_unit(delta, "delta");
  return delta < Rational(1, 2) ? Rational(2) * delta / (Rational(1) + delta) : Rational(1);
}

inline Rational upper_2delta(const Rational& delta) {
  detail::require_unit(delta, "delta");
  return min(Rational(2) * delta, Rational(1));
}

inline Rational daisy_pn(long n, const Rational& p) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  detail::require_unit(p, "p");
  const Rational nn(n);
  return nn * p / (nn * p - p + Rational(1));
}

inline Rational dp80_max(long n, const Rational& p) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  detail::require_unit(p, "p");
  const Rational nn(n);
  return p * (nn - p) / (Rational(1) + p * (nn - Rational(2)));
}

inline Rational abs_diff_mean(const Rational& p) {
  detail::require_unit(p, "p");
  return Rational(2) * p * (Rational(1) - p);
}

inline Rational markov(const Rational& delta, const Rational& p) {
  detail::require_unit(delta, "delta");
  detail::require_unit(p, "p");
  if (delta == Rational(1)) throw std::domain_error("markov: delta must be < 1");
  return abs_diff_mean(p) / (Rational(1) - delta);
}

inline Rational moment_integral(long r) {
  if (r < 1) throw std::domain_error("r must be an integer >= 1");
  return (Rational(2) - pow(Rational(2), -r)) / Rational(1 + r);
}

inline Rational conj_independent(const Rational& delta) {
  if (delta.sign() < 0 || delta >= Rational(1, 2)) throw std::domain_error("delta must lie in [0,1/2)");
  return Rational(2) * delta * (Rational(1) - delta);
}

inline Rational evaluate(BoundId id, std::span<const Rational> args) {
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument(std::string(name_of(id)) + ": expected " + std::to_string(n) + " argument(s)");
  };
  switch (id) {
    case BoundId::Eps1xN: need(1); return eps_1xn(args[0]);
    case BoundId::Eps2x2: need(1); return eps_2x2(args[0]);
    case BoundId::Upper2Delta: need(1); return upper_2delta(args[0]);
    case BoundId::DaisyLevel: need(2); return daisy_pn(detail::require_int(args[0], 1, "n"), args[1]);
    case BoundId::Dp80Max: need(2); return dp80_max(detail::require_int(args[0], 1, "n"), args[1]);
    case BoundId::AbsDiffMean: need(1); return abs_diff_mean(args[0]);
    case BoundId::Markov: need(2); return markov(args[0], args[1]);
    case BoundId::MomentIntegral: need(1); return moment_integral(detail::require_int(args[0], 1, "r"));
    case BoundId::ConjIndependent: need(1); return conj_independent(args[0]);
  }
  throw std::invalid_argument("unknown bound");
}

// ---------------------------------------------------------------------------
// Floating-point integrals of tail bounds against r u^{r-1} du.

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a,b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// ∫_0^1 r u^{r-1} eps(1-u) du for a tail function eps(delta) that is
/// smooth on [0,1/2) and on [1/2,1].
inline double moment_tail_integral(double r, const std::function<double(double)>& eps) {
  auto f = [&](double u) { return r * std::pow(u, r - 1) * eps(1 - u); };
  return integrate(f, 0.0, 0.5) + integrate(f, 0.5, 1.0);
}

/// The integral with eps = (2d) ∧ 1; equals (2 - 2^-r)/(1 + r).
inline double moment_integral_float(double r) {
  return moment_tail_integral(r, [](double d) { return std::min(2 * d, 1.0); });
}

/// The integral with eps = 2d/(1+d) below 1/2 and 1 above.
inline double moment_integral_2x2(double r) {
  return moment_tail_integral(r, [](double d) { return d < 0.5 ? 2 * d / (1 + d) : 1.0; });
}

/// Closed form of moment_integral_2x2(1): 3/2 + log 4 - log 9.
inline double moment_integral_2x2_r1_closed() { return 1.5 + std::log(4.0) - std::log(9.0); }

}  // namespace coherent::bounds
