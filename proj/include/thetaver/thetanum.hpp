#pragma once
// Numerical evaluation of theta functions with characteristics on the Siegel
// upper half-space: values, z-gradients, z-Hessians at z=0 and tau-derivatives,
// via truncated lattice sums with conservative tail bounds.
//
// The production kernel sums the box in fixed-size slices whose partial sums
// are combined in index order, so results are identical no matter how many
// OpenMP threads run the slices. A plain serial reference kernel is kept for
// testing and benchmarking.

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "thetaver/charspace.hpp"

namespace thetaver {

using Complex = std::complex<double>;

struct EvalConfig {
  double tol = 1e-9;    // target absolute tail for the lattice sum
  int max_radius = 60;  // safety cap on the truncation radius
};

class TailNotAchievable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Siegel point tau: symmetric complex g x g with positive definite
// imaginary part. The constructor symmetrizes exactly and throws
// std::invalid_argument outside the domain.
class PeriodMatrix {
 public:
  explicit PeriodMatrix(Eigen::MatrixXcd tau);
  const Eigen::MatrixXcd& tau() const { return tau_; }
  int genus() const { return static_cast<int>(tau_.rows()); }
  double lambda_min() const { return lambda_min_; }
  PeriodMatrix doubled() const { return PeriodMatrix(2.0 * tau_); }
  static PeriodMatrix diag_join(const PeriodMatrix& a, const PeriodMatrix& b);

 private:
  Eigen::MatrixXcd tau_;
  double lambda_min_;
};

struct ThetaJet {
  Complex value{};
  Eigen::VectorXcd grad;   // d/dz_i at z = 0
  Eigen::MatrixXcd hess;   // d2/dz_i dz_j at z = 0, symmetric
  int radius = 0;
  double tail_bound = 0.0;
};

// Raw lattice sums over the box [-R-1, R]^g with p = m + eps/2 and
// term(m) = exp(pi i [tp tau p + 2 tp (z + delta/2)]):
//   value  = sum term, first_i = sum p_i term, second_ij = sum p_i p_j term.
struct LatticeSums {
  Complex value{};
  Eigen::VectorXcd first;
  Eigen::MatrixXcd second;
  int radius = 0;
  double tail_bound = 0.0;
};

// Smallest R making the bare Gaussian tail bound
//   sum_{|m|_inf > R} exp(-pi lambda_min |m+eps/2|^2 + 2 pi |Im z| |m+eps/2|)
// smaller than cfg.tol. Throws TailNotAchievable past cfg.max_radius.
int truncation_radius(const PeriodMatrix& tau, double z_imag_norm, const EvalConfig& cfg);

// Production kernel (chunked; OpenMP across slices when enabled) and the
// serial reference. Both are deterministic; they differ only in rounding.
LatticeSums lattice_sums(const PeriodMatrix& tau, const HalfChar& eps, const HalfChar& delta,
                         const Eigen::VectorXcd& z, const EvalConfig& cfg);
LatticeSums lattice_sums_serial(const PeriodMatrix& tau, const HalfChar& eps,
                                const HalfChar& delta, const Eigen::VectorXcd& z,
                                const EvalConfig& cfg);

enum class ThetaKind { First, Second };

// Jet of theta[eps,delta](tau, .) at z = 0.
ThetaJet theta_jet(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                   const EvalConfig& cfg);
// Jet of the second order theta: Theta[eps](tau,z) = theta[eps,0](2 tau, 2z).
ThetaJet theta2_jet(const HalfChar& eps, const PeriodMatrix& tau, const EvalConfig& cfg);

Complex theta_value(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                    const Eigen::VectorXcd& z, const EvalConfig& cfg);
Complex theta2_value(const HalfChar& eps, const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                     const EvalConfig& cfg);

// Full symmetric-variable derivative d/dtau_{jk} at z = 0 (tau treated as
// symmetric with independent entries j <= k, so off-diagonal entries carry
// the factor 2). Entries for j > k mirror j < k.
Eigen::MatrixXcd tau_derivative(ThetaKind kind, const HalfChar& eps, const HalfChar& delta,
                                const PeriodMatrix& tau, const EvalConfig& cfg);

// Everything one evaluation yields: the jet plus both tau-derivative forms.
// `dtau` is the full derivative above; `heat` halves the off-diagonal entries
// (the matrix differential operator intertwined with the z-Hessian).
struct ThetaData {
  ThetaJet jet;
  Eigen::MatrixXcd dtau;
  Eigen::MatrixXcd heat;
};

ThetaData theta_full(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                     const EvalConfig& cfg);
ThetaData theta2_full(const HalfChar& eps, const PeriodMatrix& tau, const EvalConfig& cfg);

}  // namespace thetaver
