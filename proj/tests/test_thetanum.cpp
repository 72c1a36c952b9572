#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "thetaver/sampling.hpp"
#include "thetaver/thetanum.hpp"

using namespace thetaver;
namespace {

constexpr double PI = std::numbers::pi;
const Complex I1{0.0, 1.0};

// Brute-force oracle: plain lexicographic sum over the box |m|_inf <= R,
// no compensation, independent of the production kernel.
Complex brute_theta(const HalfChar& eps, const HalfChar& delta, const Eigen::MatrixXcd& tau,
                    const Eigen::VectorXcd& z, int R) {
  const int g = static_cast<int>(tau.rows());
  std::vector<int> m(g, -R);
  Complex total{0, 0};
  for (;;) {
    Complex arg{0, 0};
    for (int i = 0; i < g; ++i) {
      const double pi_ = m[i] + 0.5 * eps[i];
      arg += tau(i, i) * pi_ * pi_;
      arg += 2.0 * pi_ * (z(i) + 0.5 * delta[i]);
      for (int j = i + 1; j < g; ++j) arg += 2.0 * tau(i, j) * pi_ * (m[j] + 0.5 * eps[j]);
    }
    total += std::exp(PI * I1 * arg);
    int k = g - 1;
    for (; k >= 0; --k) {
      if (m[k] < R) {
        ++m[k];
        break;
      }
      m[k] = -R;
    }
    if (k < 0) break;
  }
  return total;
}

PeriodMatrix tau_iI(int g, double scale = 1.0) {
  return PeriodMatrix(Eigen::MatrixXcd::Identity(g, g) * Complex(0, scale));
}

}  // namespace

TEST_CASE("truncation radius bounds") {
  EvalConfig cfg;
  cfg.tol = 1e-12;
  CHECK(truncation_radius(tau_iI(1), 0.0, cfg) <= 4);
  // doubling lambda_min never increases the radius
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    EvalConfig c;
    c.tol = tol;
    const int r1 = truncation_radius(tau_iI(2, 1.0), 0.0, c);
    const int r2 = truncation_radius(tau_iI(2, 2.0), 0.0, c);
    CHECK(r2 <= r1);
  }
  EvalConfig tight;
  tight.tol = 1e-30;
  tight.max_radius = 2;
  CHECK_THROWS_AS(truncation_radius(tau_iI(1), 0.0, tight), TailNotAchievable);
  EvalConfig bad;
  bad.tol = -1.0;
  CHECK_THROWS_AS(truncation_radius(tau_iI(1), 0.0, bad), std::invalid_argument);
}

TEST_CASE("period matrix domain checks") {
  Eigen::MatrixXcd asym(2, 2);
  asym << Complex(0, 1), Complex(0.5, 0), Complex(-0.5, 0), Complex(0, 1);
  CHECK_THROWS_AS(PeriodMatrix{asym}, std::invalid_argument);
  Eigen::MatrixXcd neg(1, 1);
  neg << Complex(0, -1);
  CHECK_THROWS_AS(PeriodMatrix{neg}, std::invalid_argument);
}

TEST_CASE("value against brute force and the classical constant") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  const auto tau = tau_iI(1);
  const auto jet = theta_jet(HalfChar::from_string("0"), HalfChar::from_string("0"), tau, cfg);
  CHECK(std::abs(jet.value - brute_theta(HalfChar::from_string("0"), HalfChar::from_string("0"),
                                         tau.tau(), Eigen::VectorXcd::Zero(1), 10)) < 1e-12);
  // theta_3(e^{-pi}) = pi^{1/4} / Gamma(3/4)
  CHECK(jet.value.real() == doctest::Approx(1.0864348112133080).epsilon(1e-13));
  CHECK(std::abs(jet.value.imag()) < 1e-13);

  TauSampler sampler(3, 2);
  const auto tau2 = sampler.next();
  for (unsigned e = 0; e < 4; ++e)
    for (unsigned d = 0; d < 4; ++d) {
      const HalfChar eps = HalfChar::from_index(2, e), delta = HalfChar::from_index(2, d);
      const Complex v = theta_value(eps, delta, tau2, Eigen::VectorXcd::Zero(2), cfg);
      const Complex o = brute_theta(eps, delta, tau2.tau(), Eigen::VectorXcd::Zero(2), 9);
      CHECK(std::abs(v - o) < 1e-12);
    }
}

TEST_CASE("parity structure of jets") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  TauSampler sampler(17, 2);
  const auto tau = sampler.next();
  for (const auto& ch : all_characteristics(2)) {
    const auto jet = theta_jet(ch.eps, ch.delta, tau, cfg);
    const double tail = std::max(jet.tail_bound, 1e-12);
    if (is_odd(ch)) {
      CHECK(std::abs(jet.value) < tail);
      CHECK(jet.hess.cwiseAbs().maxCoeff() < tail);
      CHECK(jet.grad.cwiseAbs().maxCoeff() > 1e-3);  // generic nonvanishing
    } else {
      CHECK(jet.grad.cwiseAbs().maxCoeff() < tail);
      CHECK(std::abs(jet.value) > 1e-3);
    }
  }
}

TEST_CASE("parity and quasi-periodicity in z") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  TauSampler sampler(23, 2);
  const auto tau = sampler.next();
  Eigen::VectorXcd z(2);
  z << Complex(0.13, 0.04), Complex(-0.07, 0.09);
  for (const auto& ch : all_characteristics(2)) {
    const Complex plus = theta_value(ch.eps, ch.delta, tau, z, cfg);
    const Complex minus = theta_value(ch.eps, ch.delta, tau, -z, cfg);
    const double sign = is_odd(ch) ? -1.0 : 1.0;
    CHECK(std::abs(minus - sign * plus) < 1e-11);
  }
  // theta(tau, z + n) = exp(pi i eps . n) theta(tau, z) for integer n
  const HalfChar eps = HalfChar::from_string("10"), delta = HalfChar::from_string("11");
  Eigen::VectorXcd n1(2);
  n1 << Complex(1, 0), Complex(0, 0);
  const Complex shifted = theta_value(eps, delta, tau, z + n1, cfg);
  const Complex phase = std::exp(PI * I1 * Complex(1.0, 0.0));  // eps . n = 1
  CHECK(std::abs(shifted - phase * theta_value(eps, delta, tau, z, cfg)) < 1e-11);
}

TEST_CASE("block-diagonal factorization with the product rule") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  const PeriodMatrix t1(Eigen::MatrixXcd::Identity(1, 1) * Complex(0.1, 1.0));
  const PeriodMatrix t2(Eigen::MatrixXcd::Identity(1, 1) * Complex(-0.2, 2.0));
  const PeriodMatrix tau = PeriodMatrix::diag_join(t1, t2);
  for (const auto& ch : all_characteristics(2)) {
    const HalfChar e1 = HalfChar::from_index(1, ch.eps[0]), e2 = HalfChar::from_index(1, ch.eps[1]);
    const HalfChar d1 = HalfChar::from_index(1, ch.delta[0]),
                   d2 = HalfChar::from_index(1, ch.delta[1]);
    const auto full = theta_jet(ch.eps, ch.delta, tau, cfg);
    const auto a = theta_jet(e1, d1, t1, cfg);
    const auto b = theta_jet(e2, d2, t2, cfg);
    CHECK(std::abs(full.value - a.value * b.value) < 1e-11);
    CHECK(std::abs(full.grad(0) - a.grad(0) * b.value) < 1e-10);
    CHECK(std::abs(full.grad(1) - a.value * b.grad(0)) < 1e-10);
    CHECK(std::abs(full.hess(0, 0) - a.hess(0, 0) * b.value) < 1e-9);
    CHECK(std::abs(full.hess(1, 1) - a.value * b.hess(0, 0)) < 1e-9);
    CHECK(std::abs(full.hess(0, 1) - a.grad(0) * b.grad(0)) < 1e-9);
  }
}

TEST_CASE("second order theta against doubled arguments") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  TauSampler sampler(31, 2);
  const auto tau = sampler.next();
  for (const auto& eps : all_half_chars(2)) {
    const auto j2 = theta2_jet(eps, tau, cfg);
    const auto j1 = theta_jet(eps, HalfChar::zero(2), tau.doubled(), cfg);
    CHECK(std::abs(j2.value - j1.value) < 1e-12);
    CHECK(j2.grad.cwiseAbs().maxCoeff() < std::max(j2.tail_bound, 1e-12));  // even in z
  }
  const auto g1 = theta2_jet(HalfChar::from_string("0"), tau_iI(1), cfg);
  const auto o = brute_theta(HalfChar::from_string("0"), HalfChar::from_string("0"),
                             Eigen::MatrixXcd::Identity(1, 1) * Complex(0, 2),
                             Eigen::VectorXcd::Zero(1), 10);
  CHECK(std::abs(g1.value - o) < 1e-12);
}

TEST_CASE("tau derivatives: finite differences and the heat constants") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  const double h = 1e-5;
  for (int g = 1; g <= 3; ++g) {
    TauSampler sampler(100 + static_cast<unsigned>(g), g);
    const auto tau = sampler.next();
    const HalfChar eps = HalfChar::from_index(g, 1 % (1 << g));
    const HalfChar delta = HalfChar::from_index(g, (1 << g) - 1);

    const ThetaData data = theta_full(eps, delta, tau, cfg);
    for (int a = 0; a < g; ++a)
      for (int b = a; b < g; ++b) {
        Eigen::MatrixXcd dm = Eigen::MatrixXcd::Zero(g, g);
        dm(a, b) = dm(b, a) = h;  // perturb the symmetric variable
        const PeriodMatrix tp(tau.tau() + dm), tm(tau.tau() - dm);
        const Complex fd =
            (theta_value(eps, delta, tp, Eigen::VectorXcd::Zero(g), cfg) -
             theta_value(eps, delta, tm, Eigen::VectorXcd::Zero(g), cfg)) /
            (2 * h);
        CHECK(std::abs(fd - data.dtau(a, b)) < 1e-6 * std::max(1.0, std::abs(fd)));
        // heat constant 4 pi i for first order theta
        CHECK(std::abs(data.jet.hess(a, b) - 4.0 * PI * I1 * data.heat(a, b)) <
              1e-9 * std::max(1.0, std::abs(data.jet.hess(a, b))));
      }

    const ThetaData d2 = theta2_full(eps, tau, cfg);
    for (int a = 0; a < g; ++a)
      for (int b = a; b < g; ++b)
        CHECK(std::abs(d2.jet.hess(a, b) - 8.0 * PI * I1 * d2.heat(a, b)) <
              1e-9 * std::max(1.0, std::abs(d2.jet.hess(a, b))));
  }
}

TEST_CASE("z gradient against finite differences for odd characteristics") {
  EvalConfig cfg;
  cfg.tol = 1e-13;
  const double h = 1e-5;
  for (int g = 1; g <= 3; ++g) {
    TauSampler sampler(200 + static_cast<unsigned>(g), g);
    const auto tau = sampler.next();
    const auto odd = odd_characteristics(g);
    const auto& ch = odd[odd.size() / 2];
    const auto jet = theta_jet(ch.eps, ch.delta, tau, cfg);
    for (int i = 0; i < g; ++i) {
      Eigen::VectorXcd zp = Eigen::VectorXcd::Zero(g);
      zp(i) = h;
      const Complex fd = (theta_value(ch.eps, ch.delta, tau, zp, cfg) -
                          theta_value(ch.eps, ch.delta, tau, -zp, cfg)) /
                         (2 * h);
      CHECK(std::abs(fd - jet.grad(i)) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("tail honesty") {
  TauSampler sampler(7, 2);
  const auto tau = sampler.next();
  EvalConfig loose;
  loose.tol = 1e-4;
  EvalConfig tight;
  tight.tol = 1e-15;
  // radii must actually separate for the recomputation to mean anything
  CHECK(truncation_radius(tau, 0.0, tight) > truncation_radius(tau, 0.0, loose));
  for (const auto& ch : all_characteristics(2)) {
    const auto a = theta_jet(ch.eps, ch.delta, tau, loose);
    const auto b = theta_jet(ch.eps, ch.delta, tau, tight);
    CHECK(b.radius >= a.radius + 1);
    CHECK(std::abs(a.value - b.value) < a.tail_bound);
    CHECK((a.hess - b.hess).cwiseAbs().maxCoeff() < a.tail_bound);
  }
}

TEST_CASE("chunked kernel agrees with the serial reference and is deterministic") {
  EvalConfig cfg;
  cfg.tol = 1e-12;
  TauSampler sampler(77, 3);
  const auto tau = sampler.next();
  Eigen::VectorXcd z(3);
  z << Complex(0.05, 0.02), Complex(-0.03, 0.01), Complex(0.01, -0.04);
  const HalfChar eps = HalfChar::from_string("101"), delta = HalfChar::from_string("011");
  const auto a = lattice_sums(tau, eps, delta, z, cfg);
  const auto b = lattice_sums_serial(tau, eps, delta, z, cfg);
  CHECK(a.radius == b.radius);
  CHECK(std::abs(a.value - b.value) <= 1e-13 * std::max(1.0, std::abs(b.value)));
  CHECK((a.second - b.second).cwiseAbs().maxCoeff() <= 1e-13);

  const auto c = lattice_sums(tau, eps, delta, z, cfg);
  CHECK(a.value == c.value);  // bitwise reproducible
  CHECK((a.first - c.first).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.second - c.second).cwiseAbs().maxCoeff() == 0.0);
}
