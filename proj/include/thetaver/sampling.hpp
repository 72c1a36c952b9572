#pragma once
// Seeded tau sampling: tau = i(I + E) + S with E, S small random symmetric
// matrices, keeping Im(tau) well conditioned. Bits are mapped to doubles
// explicitly so identical seeds give identical samples everywhere.

#include <cstdint>
#include <random>

#include "thetaver/thetanum.hpp"

namespace thetaver {

class TauSampler {
 public:
  TauSampler(std::uint64_t seed, int g);
  PeriodMatrix next();
  double uniform(double a, double b);

 private:
  std::mt19937_64 rng_;
  int g_;
};

}  // namespace thetaver
