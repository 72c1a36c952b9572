#pragma once
// Exact formal Fourier series in q_{jk} = exp(pi i tau_{jk}): sparse monomial
// maps with Gaussian-rational coefficients, exponents stored x4 as integers
// so quarter-integer powers stay exact, and a global pi grading per series.
// Truncation is by the diagonal trace weight (sum of diagonal stored
// exponents); all series built from theta expansions are supported on the
// positive semidefinite cone, where that weight bounds every entry.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thetaver/catalog.hpp"
#include "thetaver/charspace.hpp"
#include "thetaver/rational.hpp"
#include "thetaver/thetanum.hpp"

namespace thetaver::qf {

// Variables indexed by pairs (j,k), j <= k, in lexicographic order.
int var_count(int g);
int var_index(int g, int j, int k);
std::pair<int, int> var_pair(int g, int idx);

using Expo = std::vector<int>;  // stored exponents, 4x the true ones

class FormalSeries {
 public:
  FormalSeries() = default;
  FormalSeries(int genus, int pi_weight, int order_bound);

  int genus() const { return genus_; }
  int pi_weight() const { return pi_weight_; }
  int order_bound() const { return order_bound_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Expo, GaussRat>& terms() const { return terms_; }

  static int trace_weight(int g, const Expo& e);
  void add_term(const Expo& e, const GaussRat& c);
  GaussRat coefficient(const Expo& e) const;

  FormalSeries operator+(const FormalSeries& o) const;
  FormalSeries operator-(const FormalSeries& o) const;
  FormalSeries operator*(const FormalSeries& o) const;
  FormalSeries operator-() const;
  FormalSeries scaled(const GaussRat& c) const;
  FormalSeries with_pi_shift(int dt) const;          // multiply by pi^dt
  FormalSeries scaled_exact(const ExactConstant& c) const;

  FormalSeries tau_derivative(int j, int k) const;   // full d/dtau_{jk}
  FormalSeries heat_entry(int j, int k) const;       // off-diagonal halved

  std::complex<double> evaluate(const PeriodMatrix& tau) const;

 private:
  int genus_ = 0;
  int pi_weight_ = 0;
  int order_bound_ = 0;
  std::map<Expo, GaussRat> terms_;
};

FormalSeries theta_series(const HalfChar& eps, const HalfChar& delta, int order);
FormalSeries theta2_series(const HalfChar& eps, int order);
FormalSeries theta_grad_series(const HalfChar& eps, const HalfChar& delta, int i, int order);
FormalSeries theta_hess_series(const HalfChar& eps, const HalfChar& delta, int i, int j,
                               int order);
FormalSeries theta2_grad_series(const HalfChar& eps, int i, int order);
FormalSeries theta2_hess_series(const HalfChar& eps, int i, int j, int order);

FormalSeries det(const std::vector<std::vector<FormalSeries>>& m);
FormalSeries jacobian_det_series(const std::vector<Characteristic>& chars, int order);

struct CompareResult {
  bool equal = true;
  bool pi_weight_mismatch = false;
  std::optional<Expo> first_mismatch;
  GaussRat lhs_coeff, rhs_coeff;
  int compared_order = 0;
  std::size_t lhs_terms = 0, rhs_terms = 0;
  std::string note;
};
CompareResult compare(const FormalSeries& a, const FormalSeries& b);

struct FormalCheckResult {
  std::string identity_id;
  int genus = 0;
  int order = 0;
  bool pass = false;
  std::string detail;  // first mismatch location when failing
  std::vector<CompareResult> comparisons;
};

// Coefficientwise verification. Supported ids: jac0, jac1 (g=2), tT, tT2
// (z=0), Eq, cor (g=2), gen2, secondgen (g=1). Constants come from the
// catalog and must be exact (ConstantNotRational otherwise).
FormalCheckResult formal_identity_check(const std::string& id, int genus, int order,
                                        const Catalog& catalog);

// Graded-lex ordering (grade = trace weight) for dumps.
std::vector<std::pair<Expo, GaussRat>> sorted_terms(const FormalSeries& s);

}  // namespace thetaver::qf
