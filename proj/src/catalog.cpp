#include "thetaver/catalog.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace thetaver {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::complex<double> ExactConstant::to_complex() const {
  const double mag = static_cast<double>(r) * std::pow(kPi, t);
  switch (((s % 4) + 4) % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

std::string ExactConstant::str() const {
  std::string out = r.str();
  const int sm = ((s % 4) + 4) % 4;
  if (sm) out += " * i^" + std::to_string(sm);
  if (t) out += " * pi^" + std::to_string(t);
  return out;
}

namespace {

// Best rational p/q with q <= qmax and p <= pmax via continued fractions;
// nullopt if the approximation error stays above rel_tol * v. The numerator
// cap matters: for large v any small-q fraction lands within relative
// tolerance, so unbounded numerators would match noise.
std::optional<Rational> approx_rational(double v, std::int64_t qmax, std::int64_t pmax,
                                        double rel_tol) {
  if (!(v > 0.0) || v > 1e18) return std::nullopt;
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p_cur = static_cast<std::int64_t>(std::floor(v));
  std::int64_t q_cur = 1;
  double x = v - std::floor(v);
  for (int it = 0; it < 40; ++it) {
    if (p_cur > pmax || q_cur > qmax) break;
    const double approx = static_cast<double>(p_cur) / static_cast<double>(q_cur);
    if (std::abs(approx - v) <= rel_tol * v && p_cur >= 0) return Rational(p_cur, q_cur);
    if (x < 1e-15) break;
    x = 1.0 / x;
    const double a = std::floor(x);
    if (a > 4e18) break;
    const std::int64_t ai = static_cast<std::int64_t>(a);
    const std::int64_t p_next = ai * p_cur + p_prev;
    const std::int64_t q_next = ai * q_cur + q_prev;
    if (q_next <= 0 || p_next < 0) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    x -= a;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ExactConstant> detect_exact_constant(std::complex<double> c, double rel_tol) {
  const double mag = std::abs(c);
  if (!(mag > 0.0)) return std::nullopt;
  std::optional<ExactConstant> best;
  std::int64_t best_den = 0, best_num = 0;
  int best_abs_t = 0;
  for (int t = -8; t <= 8; ++t) {
    for (int s = 0; s < 4; ++s) {
      std::complex<double> unit;
      switch (s) {
        case 0: unit = {1.0, 0.0}; break;
        case 1: unit = {0.0, 1.0}; break;
        case 2: unit = {-1.0, 0.0}; break;
        default: unit = {0.0, -1.0}; break;
      }
      const std::complex<double> x = c / (unit * std::pow(kPi, t));
      if (std::abs(x.imag()) > rel_tol * std::abs(x)) continue;
      if (!(x.real() > 0.0)) continue;
      const auto rat = approx_rational(x.real(), 256, 65536, rel_tol);
      if (!rat) continue;
      const auto den = static_cast<std::int64_t>(denominator(*rat));
      const auto num = static_cast<std::int64_t>(numerator(*rat));
      if (!best || den < best_den || (den == best_den && num < best_num) ||
          (den == best_den && num == best_num && std::abs(t) < best_abs_t)) {
        best = ExactConstant{*rat, s, t};
        best_den = den;
        best_num = num;
        best_abs_t = std::abs(t);
      }
    }
  }
  return best;
}

Catalog Catalog::builtin() {
  // Regression values from ratio fitting across tau samples and
  // characteristic choices (see the `constant` subcommand).
  Catalog cat;
  cat.set("Eq", 1, ExactConstant{Rational(4), 3, -1});
  cat.set("Eq", 2, ExactConstant{Rational(64), 2, -2});
  cat.set("Eq", 3, ExactConstant{Rational(4096), 1, -3});
  cat.set("secondgen", 1, ExactConstant{Rational(8), 1, 1});
  cat.set("secondgen", 2, ExactConstant{Rational(2048), 3, 3});
  cat.set("gen2", 2, ExactConstant{Rational(1, 64), 2, 2});
  return cat;
}

std::optional<ExactConstant> Catalog::find(const std::string& id, int genus) const {
  const auto it = entries_.find({id, genus});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Catalog::set(const std::string& id, int genus, ExactConstant c) {
  entries_[{id, genus}] = std::move(c);
}

}  // namespace thetaver
