#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace parest {

// Seeded random stream with platform-independent output.  std::mt19937_64 has a
// standard-defined sequence, but the std distributions do not, so uniform/normal
// draws are derived from the raw bits directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(static_cast<double>(hi - lo + 1) * uniform());
  }

  // Marsaglia polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  // Independent substream, e.g. one per campaign instance.
  Rng fork(std::uint64_t index) const {
    std::uint64_t z = seed_mix_ + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

  static Rng forked(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed);
    return r.fork(index);
  }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_mix_ = eng_();  // consumed once; decorrelates fork() from bits()
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace parest
