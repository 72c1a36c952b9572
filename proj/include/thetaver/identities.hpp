#pragma once
// Numerical checks for the theta-constant identities: the classical
// derivative formula and its special-fundamental-system form, Riemann
// addition, the gradient/Hessian matrix lemmas, both generalized derivative
// formulas (with empirically determined constants), the genus-2 relations,
// the transformation law spot checks, and the reducibility criterion.

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thetaver/catalog.hpp"
#include "thetaver/charspace.hpp"
#include "thetaver/thetanum.hpp"

namespace thetaver {

struct IdentityReport {
  std::string identity_id;
  int genus = 0;
  Complex lhs{};
  Complex rhs{};
  double residual = 0.0;  // absolute |lhs - rhs| (or the stated variant, see note)
  double scale = 0.0;     // max(|lhs|, |rhs|) or max entry magnitude
  double tol = 0.0;
  bool pass = false;      // residual <= tol * max(scale, 1), unless noted
  std::string note;
  Eigen::MatrixXcd tau;   // evaluation point; empty for aggregate reports
};

class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DispersionTooHigh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// pi^{-g} det of the matrix whose columns are grad theta[eps_i,delta_i](tau,0).
// Requires exactly g characteristics, all odd.
Complex jacobian_determinant(const std::vector<Characteristic>& chars, const PeriodMatrix& tau,
                             const EvalConfig& cfg);

// D(odd part)^2 = (product of the g+2 even theta constants)^2 for a 2g+2
// system (squared to absorb the sign). The system must have g odd then g+2
// even characteristics; azygeticity is what the identity itself detects.
IdentityReport check_jacobi_classical(const FundamentalSystem& system, const PeriodMatrix& tau,
                                      const EvalConfig& cfg, double tol);

// Riemann bilinear addition and its signed-sum corollary.
IdentityReport riemann_addition_residual(const HalfChar& alpha, const HalfChar& eps,
                                         const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                                         const EvalConfig& cfg, double tol);
IdentityReport riemann_addition_signed_residual(const HalfChar& eps, const HalfChar& delta,
                                                const PeriodMatrix& tau,
                                                const Eigen::VectorXcd& z, const EvalConfig& cfg,
                                                double tol);

struct GradMatrixC {
  Characteristic ch;
  Eigen::MatrixXcd mat;  // 2 grad tgrad; rank <= 1
};
struct HessMatrixA {
  HalfChar eps, delta;
  Eigen::MatrixXcd mat;  // (hess Theta[delta]) Theta[eps] - (hess Theta[eps]) Theta[delta]
};

GradMatrixC matrix_C(const Characteristic& ch, const PeriodMatrix& tau, const EvalConfig& cfg);
HessMatrixA matrix_A(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                     const EvalConfig& cfg);

struct LemmaACReports {
  IdentityReport lemma3;  // C = 1/2 sum_alpha (-1)^{alpha.delta} A_{eps+alpha,alpha}
  IdentityReport lemma4;  // A_{eps+delta,delta} = 2^{1-g} sum_beta (-1)^{delta.beta} C_{eps,beta}
};
LemmaACReports lemma_AC_residual(const HalfChar& eps, const HalfChar& delta,
                                 const PeriodMatrix& tau, const EvalConfig& cfg, double tol);

struct RatioResult {
  IdentityReport report;  // meaningful when a constant was supplied
  Complex lhs{};          // determinant side
  Complex rhs{};          // jacobian-determinant side
  Complex ratio{};        // rhs / lhs
};

// First generalization: c Theta[delta]^{2g} det(D(Theta[eps]/Theta[delta]))
// equals the signed sum of squared jacobian determinants over g-subsets of
// the odd-making alphas. Without c the ratio is reported.
RatioResult first_generalization(const HalfChar& eps, const HalfChar& delta,
                                 const PeriodMatrix& tau, const EvalConfig& cfg,
                                 std::optional<Complex> c, double tol);

// Second generalization: c Theta[eps0]^{N-1} det M(eps0..epsN) equals the
// signed sum over beta tuples of determinants of flattened C vectors.
RatioResult second_generalization(const std::vector<HalfChar>& eps_list, const PeriodMatrix& tau,
                                  const EvalConfig& cfg, std::optional<Complex> c, double tol);

// det(sum_alpha (-1)^{alpha.delta} A_{eps+alpha,alpha}) = 0 for g >= 2.
// pass uses |det| <= tol * max(entry scale, 1)^g.
IdentityReport cor_vanishing(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                             const EvalConfig& cfg, double tol);

// Genus-2 bundle: the main relation with its frozen constant, the four-term
// second-order-theta relation, and the three equivalent forms.
std::vector<IdentityReport> genus2_relations(const PeriodMatrix& tau, const EvalConfig& cfg,
                                             const Catalog& catalog, double tol);

// r = theta[M(eps,delta)](M.tau) / (det(C tau + D)^{1/2} theta[eps,delta](tau))
// for even characteristics (for odd ones the gradient law with the matrix
// C tau + D is used). Asserts |r| = 1, and r^8 = 1 when requested.
IdentityReport transformation_check(const SymplecticElement& M, const Characteristic& ch,
                                    const PeriodMatrix& tau, const EvalConfig& cfg, double tol,
                                    bool assert_eighth_root);

Eigen::MatrixXcd symplectic_apply(const SymplecticElement& M, const PeriodMatrix& tau);

// |D(M.tau)| = |det(C tau + D)|^{g/2+1} |D(tau)| for the jacobian determinant
// of the given odd characteristics (fixed by M when M is in Gamma_g(4,8)).
IdentityReport jacobian_weight_check(const SymplecticElement& M,
                                     const std::vector<Characteristic>& odd_chars,
                                     const PeriodMatrix& tau, const EvalConfig& cfg, double tol);

// Elements of Gamma_g(4,8) built from the translation generators: upper and
// lower symmetric blocks that are 0 mod 4 with diagonals 0 mod 8, multiplied
// in seeded random order.
std::vector<SymplecticElement> sample_gamma48_elements(int g, int count, std::uint64_t seed);

struct ReducibilityProfile {
  int k = 0;
  struct Entry {
    Characteristic ch;
    bool head_even = false;      // parity of the k-dimensional head [eps1,delta1]
    double designated_max = 0.0; // max |grad_i| over the indices forced to vanish
    double other_max = 0.0;
  };
  std::vector<Entry> entries;
  std::vector<double> singular_values;  // of P(tau), descending
  std::string verdict;  // "consistent-with-reducible" or "irreducible-at-this-basis"
};

ReducibilityProfile reducibility_profile(const PeriodMatrix& tau, int k, const EvalConfig& cfg);

// (N+1) x 2^g matrix with rows (Theta[eps], d/dtau_{ij} Theta[eps]),
// one column per half characteristic in canonical order.
Eigen::MatrixXcd p_matrix(const PeriodMatrix& tau, const EvalConfig& cfg);

struct ConstantSample {
  Eigen::MatrixXcd tau;
  Complex ratio{};
  std::string pair_note;
};
struct ConstantEstimate {
  std::string identity_id;
  int genus = 0;
  Complex value{};
  std::vector<ConstantSample> samples;
  double dispersion = 0.0;  // max pairwise deviation / |mean|
  std::optional<ExactConstant> exact;
};

// Ratio fitting across >= 3 tau samples and all characteristic choices.
// Throws DispersionTooHigh past dispersion_tol.
ConstantEstimate estimate_constant(const std::string& identity_id, int genus, int n_taus,
                                   std::uint64_t seed, const EvalConfig& cfg,
                                   double dispersion_tol);

}  // namespace thetaver
