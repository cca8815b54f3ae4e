#pragma once

#include <random>

#include "crsing/matcore.hpp"

namespace crsing::testing {

inline cplx random_cplx(std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

inline CMat random_cmat(std::mt19937_64 &rng, std::size_t r, std::size_t c) {
  CMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_cplx(rng);
  return m;
}

inline CMat random_symmetric(std::mt19937_64 &rng, std::size_t n) {
  CMat m = random_cmat(rng, n, n);
  return cplx(0.5) * (m + m.transpose());
}

// Group element with |det A| in [0.1, 10] and |c| in [0.2, 5].
inline std::pair<cplx, CMat> random_group_element(std::mt19937_64 &rng, std::size_t n = 2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    CMat a = random_cmat(rng, n, n);
    const double d = std::abs(a.det());
    if (d < 1e-3) continue;
    const double target = std::pow(10.0, -1.0 + 2.0 * u(rng));
    a = cplx(std::pow(target / d, 1.0 / double(n))) * a;
    const cplx c = std::polar(std::pow(5.0, 2.0 * u(rng) - 1.0), 2.0 * 3.141592653589793 * u(rng));
    return {c, a};
  }
}

} // namespace crsing::testing
