#include "thetaver/thetanum.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thetaver {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct KahanC {
  Complex s{0.0, 0.0};
  Complex c{0.0, 0.0};
  void add(const Complex& x) {
    const Complex y = x - c;
    const Complex t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// One accumulator bundle: value, first moments, upper-triangle second moments.
struct Accum {
  KahanC value;
  std::vector<KahanC> first;
  std::vector<KahanC> second;
  explicit Accum(int g) : first(g), second(g * (g + 1) / 2) {}
  void add_term(const Complex& term, const double* p, int g) {
    value.add(term);
    for (int i = 0; i < g; ++i) first[static_cast<std::size_t>(i)].add(p[i] * term);
    int k = 0;
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j, ++k) second[static_cast<std::size_t>(k)].add(p[i] * p[j] * term);
  }
};

// Conservative shell bound for the tail beyond |m|_inf = R. The Gaussian part
// uses |p| >= r - 1/2, the z part |p| <= sqrt(g) (r + 1/2); the shell holds
// (2r+1)^g - (2r-1)^g points. With jet weights the polynomial gradient and
// Hessian prefactors are covered by (1 + 2 pi sqrt(g) (r+1))^2.
double shell_tail_bound(int R, int g, double lambda_min, double z_imag_norm, bool jet_weighted) {
  double total = 0.0;
  const double sg = std::sqrt(static_cast<double>(g));
  for (int r = R + 1; r <= R + 400; ++r) {
    const double shell = std::pow(2.0 * r + 1.0, g) - std::pow(2.0 * r - 1.0, g);
    double w = 1.0;
    if (jet_weighted) {
      const double u = 1.0 + 2.0 * kPi * sg * (r + 1.0);
      w = u * u;
    }
    const double e =
        std::exp(-kPi * lambda_min * (r - 0.5) * (r - 0.5) + 2.0 * kPi * z_imag_norm * sg * (r + 0.5));
    const double t = shell * w * e;
    total += t;
    if (t < 1e-300 || t < 1e-16 * total) break;
  }
  return total;
}

int pick_radius(int g, double lambda_min, double z_imag_norm, const EvalConfig& cfg,
                bool jet_weighted, double* bound_out) {
  for (int R = 1; R <= cfg.max_radius; ++R) {
    const double b = shell_tail_bound(R, g, lambda_min, z_imag_norm, jet_weighted);
    if (b < cfg.tol) {
      if (bound_out) *bound_out = b;
      return R;
    }
  }
  throw TailNotAchievable("lattice tail bound not achievable within max_radius");
}

// Sum one slice m_0 = m0 of the box [-R-1, R]^g in lexicographic order.
void sum_slice(const Eigen::MatrixXcd& tau, const HalfChar& eps, const HalfChar& delta,
               const Eigen::VectorXcd& z, int R, int m0, Accum& acc) {
  const int g = static_cast<int>(tau.rows());
  std::vector<int> m(static_cast<std::size_t>(g), -R - 1);
  m[0] = m0;
  std::vector<double> p(static_cast<std::size_t>(g));
  std::vector<Complex> zd(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) zd[static_cast<std::size_t>(i)] = z(i) + 0.5 * delta[i];
  for (;;) {
    for (int i = 0; i < g; ++i) p[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i)] + 0.5 * eps[i];
    Complex quad{0.0, 0.0};
    Complex lin{0.0, 0.0};
    for (int i = 0; i < g; ++i) {
      quad += tau(i, i) * (p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)]);
      lin += 2.0 * p[static_cast<std::size_t>(i)] * zd[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < g; ++j)
        quad += 2.0 * tau(i, j) * p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)];
    }
    const Complex term = std::exp(kPi * kI * (quad + lin));
    acc.add_term(term, p.data(), g);
    // advance the odometer over coordinates 1..g-1
    int k = g - 1;
    for (; k >= 1; --k) {
      if (m[static_cast<std::size_t>(k)] < R) {
        ++m[static_cast<std::size_t>(k)];
        break;
      }
      m[static_cast<std::size_t>(k)] = -R - 1;
    }
    if (k < 1) break;
  }
}

LatticeSums finalize(const Accum& acc, int g, int R, double bound) {
  LatticeSums out;
  out.value = acc.value.s;
  out.first = Eigen::VectorXcd(g);
  out.second = Eigen::MatrixXcd(g, g);
  for (int i = 0; i < g; ++i) out.first(i) = acc.first[static_cast<std::size_t>(i)].s;
  int k = 0;
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j, ++k) {
      out.second(i, j) = acc.second[static_cast<std::size_t>(k)].s;
      out.second(j, i) = out.second(i, j);
    }
  out.radius = R;
  out.tail_bound = bound;
  return out;
}

void check_args(const PeriodMatrix& tau, const HalfChar& eps, const HalfChar& delta,
                const Eigen::VectorXcd& z) {
  if (eps.genus() != tau.genus() || delta.genus() != tau.genus() || z.size() != tau.genus())
    throw std::invalid_argument("lattice_sums: genus mismatch");
}

}  // namespace

PeriodMatrix::PeriodMatrix(Eigen::MatrixXcd tau) : tau_(std::move(tau)) {
  if (tau_.rows() != tau_.cols() || tau_.rows() < 1)
    throw std::invalid_argument("PeriodMatrix: square matrix of size g >= 1 required");
  const double scale = std::max(1.0, tau_.cwiseAbs().maxCoeff());
  if ((tau_ - tau_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("PeriodMatrix: tau must be symmetric");
  const Eigen::MatrixXcd sym = 0.5 * (tau_ + tau_.transpose().eval());
  tau_ = sym;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tau_.imag());
  lambda_min_ = es.eigenvalues().minCoeff();
  if (!(lambda_min_ > 0.0))
    throw std::invalid_argument("PeriodMatrix: Im(tau) must be positive definite");
}

PeriodMatrix PeriodMatrix::diag_join(const PeriodMatrix& a, const PeriodMatrix& b) {
  const int ga = a.genus(), gb = b.genus();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(ga + gb, ga + gb);
  t.block(0, 0, ga, ga) = a.tau();
  t.block(ga, ga, gb, gb) = b.tau();
  return PeriodMatrix(t);
}

int truncation_radius(const PeriodMatrix& tau, double z_imag_norm, const EvalConfig& cfg) {
  if (!(cfg.tol > 0.0) || cfg.max_radius < 1)
    throw std::invalid_argument("truncation_radius: tol > 0 and max_radius >= 1 required");
  return pick_radius(tau.genus(), tau.lambda_min(), z_imag_norm, cfg, /*jet_weighted=*/false,
                     nullptr);
}

LatticeSums lattice_sums(const PeriodMatrix& tau, const HalfChar& eps, const HalfChar& delta,
                         const Eigen::VectorXcd& z, const EvalConfig& cfg) {
  check_args(tau, eps, delta, z);
  const int g = tau.genus();
  const double zn = z.imag().norm();
  double bound = 0.0;
  const int R = pick_radius(g, tau.lambda_min(), zn, cfg, /*jet_weighted=*/true, &bound);
  const int n_slices = 2 * R + 2;
  std::vector<Accum> parts(static_cast<std::size_t>(n_slices), Accum(g));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int s = 0; s < n_slices; ++s)
    sum_slice(tau.tau(), eps, delta, z, R, -R - 1 + s, parts[static_cast<std::size_t>(s)]);
  // combine slice partials in index order; independent of the thread count
  Accum total(g);
  for (int s = 0; s < n_slices; ++s) {
    const Accum& a = parts[static_cast<std::size_t>(s)];
    total.value.add(a.value.s);
    for (std::size_t i = 0; i < total.first.size(); ++i) total.first[i].add(a.first[i].s);
    for (std::size_t i = 0; i < total.second.size(); ++i) total.second[i].add(a.second[i].s);
  }
  return finalize(total, g, R, bound);
}

LatticeSums lattice_sums_serial(const PeriodMatrix& tau, const HalfChar& eps,
                                const HalfChar& delta, const Eigen::VectorXcd& z,
                                const EvalConfig& cfg) {
  check_args(tau, eps, delta, z);
  const int g = tau.genus();
  const double zn = z.imag().norm();
  double bound = 0.0;
  const int R = pick_radius(g, tau.lambda_min(), zn, cfg, /*jet_weighted=*/true, &bound);
  Accum total(g);
  for (int m0 = -R - 1; m0 <= R; ++m0) sum_slice(tau.tau(), eps, delta, z, R, m0, total);
  return finalize(total, g, R, bound);
}

namespace {

ThetaData assemble(const LatticeSums& s, int g, double grad_factor_im, double hess_factor,
                   double dtau_factor_im) {
  // grad = (i grad_factor_im) * first, hess = hess_factor * second,
  // dtau_{jk} = (i dtau_factor_im) (2 - delta_jk) second_{jk}, heat drops the 2.
  ThetaData out;
  out.jet.value = s.value;
  out.jet.grad = (kI * grad_factor_im) * s.first;
  out.jet.hess = hess_factor * s.second;
  out.jet.radius = s.radius;
  out.jet.tail_bound = s.tail_bound;
  out.dtau = Eigen::MatrixXcd(g, g);
  out.heat = Eigen::MatrixXcd(g, g);
  for (int j = 0; j < g; ++j)
    for (int k = 0; k < g; ++k) {
      const double mult = (j == k) ? 1.0 : 2.0;
      out.dtau(j, k) = kI * dtau_factor_im * mult * s.second(j, k);
      out.heat(j, k) = kI * dtau_factor_im * s.second(j, k);
    }
  return out;
}

}  // namespace

ThetaData theta_full(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                     const EvalConfig& cfg) {
  const int g = tau.genus();
  const LatticeSums s = lattice_sums(tau, eps, delta, Eigen::VectorXcd::Zero(g), cfg);
  return assemble(s, g, 2.0 * kPi, -4.0 * kPi * kPi, kPi);
}

ThetaData theta2_full(const HalfChar& eps, const PeriodMatrix& tau, const EvalConfig& cfg) {
  const int g = tau.genus();
  const PeriodMatrix tau2 = tau.doubled();
  const LatticeSums s = lattice_sums(tau2, eps, HalfChar::zero(g), Eigen::VectorXcd::Zero(g), cfg);
  return assemble(s, g, 4.0 * kPi, -16.0 * kPi * kPi, 2.0 * kPi);
}

ThetaJet theta_jet(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                   const EvalConfig& cfg) {
  return theta_full(eps, delta, tau, cfg).jet;
}

ThetaJet theta2_jet(const HalfChar& eps, const PeriodMatrix& tau, const EvalConfig& cfg) {
  return theta2_full(eps, tau, cfg).jet;
}

Complex theta_value(const HalfChar& eps, const HalfChar& delta, const PeriodMatrix& tau,
                    const Eigen::VectorXcd& z, const EvalConfig& cfg) {
  return lattice_sums(tau, eps, delta, z, cfg).value;
}

Complex theta2_value(const HalfChar& eps, const PeriodMatrix& tau, const Eigen::VectorXcd& z,
                     const EvalConfig& cfg) {
  return lattice_sums(tau.doubled(), eps, HalfChar::zero(tau.genus()), 2.0 * z, cfg).value;
}

Eigen::MatrixXcd tau_derivative(ThetaKind kind, const HalfChar& eps, const HalfChar& delta,
                                const PeriodMatrix& tau, const EvalConfig& cfg) {
  return kind == ThetaKind::First ? theta_full(eps, delta, tau, cfg).dtau
                                  : theta2_full(eps, tau, cfg).dtau;
}

}  // namespace thetaver
