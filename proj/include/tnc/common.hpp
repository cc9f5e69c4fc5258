#ifndef TNC_COMMON_HPP
#define TNC_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace tnc {

using cplx = std::complex<double>;
using Index = std::int64_t;

// Error hierarchy; the C API maps these to status codes.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ChecksumError : IoError {
  using IoError::IoError;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace flops {

// Thread-local multiply-add counter fed by the contraction and
// factorization kernels. Method reports record deltas around a run.
std::uint64_t count();
void add(std::uint64_t n);
void reset();

struct Meter {
  std::uint64_t start;
  Meter() : start(count()) {}
  std::uint64_t elapsed() const { return count() - start; }
};

}  // namespace flops

namespace rng {

// SplitMix64 step.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key derivation for independent substreams.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 1));
  std::uint64_t x = splitmix64(s);
  s ^= b;
  return x ^ splitmix64(s);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

// Deterministic scalar stream (uniforms via 53-bit mantissa draws,
// normals via Box-Muller). Stdlib distributions are avoided so results
// are identical across standard library implementations.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform on [0, 1)
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    auto [a, b] = normal_pair();
    spare_ = b;
    have_spare_ = true;
    return a;
  }

  std::pair<double, double> normal_pair();

  // unit-variance complex normal: re and im each N(0, 1/2)
  cplx complex_normal();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rng
}  // namespace tnc

#endif  // TNC_COMMON_HPP
