#include "thetaver/sampling.hpp"

namespace thetaver {

TauSampler::TauSampler(std::uint64_t seed, int g) : rng_(seed), g_(g) {
  if (g < 1) throw std::invalid_argument("TauSampler: genus >= 1 required");
}

double TauSampler::uniform(double a, double b) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

PeriodMatrix TauSampler::next() {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(g_, g_);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(g_, g_);
  for (int i = 0; i < g_; ++i)
    for (int j = i; j < g_; ++j) {
      E(i, j) = E(j, i) = uniform(-0.2, 0.2);
      S(i, j) = S(j, i) = uniform(-0.2, 0.2);
    }
  Eigen::MatrixXcd tau(g_, g_);
  tau.real() = S;
  tau.imag() = Eigen::MatrixXd::Identity(g_, g_) + E;
  return PeriodMatrix(tau);
}

}  // namespace thetaver
