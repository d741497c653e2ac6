#pragma once

#include "hamnet/types.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace hamnet {

// Seedable random stream built on mt19937_64 with hand-rolled variate
// derivations. The standard engine is fully specified, the standard
// distributions are not; deriving uniforms from the raw bit stream keeps
// identical seeds producing identical runs on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform over {0, ..., n-1}, rejection sampled to kill modulo bias.
  int uniform_int(int n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % un;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<int>(x % un);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform direction on the unit circle / sphere.
  Vec unit_vector(int dim) {
    Vec v(dim);
    if (dim == 2) {
      const double theta = 2.0 * pi() * uniform();
      v << std::cos(theta), std::sin(theta);
    } else {
      // Marsaglia (1972) rejection on the disk.
      double a = 0.0, b = 0.0, s = 1.0;
      while (s >= 1.0 || s == 0.0) {
        a = uniform(-1.0, 1.0);
        b = uniform(-1.0, 1.0);
        s = a * a + b * b;
      }
      const double root = std::sqrt(1.0 - s);
      v << 2.0 * a * root, 2.0 * b * root, 1.0 - 2.0 * s;
    }
    return v;
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
      std::swap(items[static_cast<std::size_t>(i)],
                items[static_cast<std::size_t>(uniform_int(i + 1))]);
    }
  }

  static constexpr double pi() { return 3.141592653589793238462643383279502884; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hamnet
