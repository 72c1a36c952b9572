#pragma once
// Exact Gaussian-rational scalar used by the formal series engine and the
// multilinear lemma checks.

#include <complex>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace thetaver {

using Rational = boost::multiprecision::cpp_rational;

struct GaussRat {
  Rational re{0};
  Rational im{0};

  GaussRat() = default;
  GaussRat(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
  static GaussRat from_int(long long v) { return GaussRat(Rational(v)); }
  // i^s for s mod 4
  static GaussRat i_pow(long s) {
    switch (((s % 4) + 4) % 4) {
      case 0: return GaussRat(Rational(1));
      case 1: return GaussRat(Rational(0), Rational(1));
      case 2: return GaussRat(Rational(-1));
      default: return GaussRat(Rational(0), Rational(-1));
    }
  }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussRat operator-() const { return GaussRat(-re, -im); }
  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
  std::string str() const {
    return "(" + re.str() + (im >= 0 ? "+" : "") + im.str() + "i)";
  }
};

}  // namespace thetaver
