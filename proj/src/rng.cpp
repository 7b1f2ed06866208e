#include "evgrip/rng.hpp"

#include <cmath>

namespace evgrip {

namespace {

// Knuth's product method; callers keep lambda small enough that exp(-lambda)
// stays representable.
std::uint64_t poisson_knuth(Rng& rng, double lambda) {
  const double limit = std::exp(-lambda);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform();
  } while (p > limit);
  return k - 1;
}

}  // namespace

std::uint64_t Rng::poisson(double lambda) {
  if (!(lambda > 0.0)) return 0;
  std::uint64_t total = 0;
  while (lambda > 500.0) {
    total += poisson_knuth(*this, 500.0);
    lambda -= 500.0;
  }
  return total + poisson_knuth(*this, lambda);
}

}  // namespace evgrip
