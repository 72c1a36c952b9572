#pragma once
// Proportionality constants for the generalized derivative formulas, kept in
// the exact form r * i^s * pi^t. Values are determined empirically by ratio
// fitting (the `constant` subcommand) and frozen here as regression values;
// a JSON catalog file can override the built-ins.

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "thetaver/rational.hpp"

namespace thetaver {

struct ExactConstant {
  Rational r;  // positive rational
  int s = 0;   // power of i, reduced mod 4
  int t = 0;   // power of pi

  std::complex<double> to_complex() const;
  std::string str() const;
};

class ConstantNotRational : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matches c against r * i^s * pi^t with |t| <= 8 and denominator <= 256.
// Returns nullopt when nothing fits within rel_tol.
std::optional<ExactConstant> detect_exact_constant(std::complex<double> c, double rel_tol = 1e-7);

class Catalog {
 public:
  static Catalog builtin();
  std::optional<ExactConstant> find(const std::string& id, int genus) const;
  void set(const std::string& id, int genus, ExactConstant c);
  const std::map<std::pair<std::string, int>, ExactConstant>& entries() const { return entries_; }

 private:
  std::map<std::pair<std::string, int>, ExactConstant> entries_;
};

}  // namespace thetaver
