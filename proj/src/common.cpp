#include "tnc/common.hpp"

#include <cmath>
#include <numbers>

namespace tnc {

namespace flops {

namespace {
thread_local std::uint64_t g_counter = 0;
}

std::uint64_t count() { return g_counter; }
void add(std::uint64_t n) { g_counter += n; }
void reset() { g_counter = 0; }

}  // namespace flops

namespace rng {

std::pair<double, double> Stream::normal_pair() {
  // Box-Muller; u1 in (0,1] so the log is finite.
  double u1 = 1.0 - unit();
  double u2 = unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

cplx Stream::complex_normal() {
  auto [a, b] = normal_pair();
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  return {a * inv_sqrt2, b * inv_sqrt2};
}

}  // namespace rng
}  // namespace tnc
