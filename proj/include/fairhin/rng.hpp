#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace fairhin {

// 64-bit FNV-1a over a label string.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Every random stream in the library is derived from one top-level seed via
// (stage label, indices). Streams are independent of execution order, so any
// stage can be re-run in isolation and worker count never changes results.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                 std::initializer_list<std::uint64_t> idx = {}) {
  std::uint64_t s = mix64(base ^ fnv1a64(label));
  for (std::uint64_t i : idx) s = mix64(s ^ (i + 0x9e3779b97f4a7c15ull));
  return s;
}

// mt19937_64 with hand-rolled draw helpers. std::*_distribution is not used
// anywhere: its output is implementation-defined, the raw engine is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform double in [0, 1), 53 random bits.
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Unbiased integer in [0, n), n > 0.
  std::size_t index(std::size_t n) {
    const std::uint64_t m = static_cast<std::uint64_t>(n);
    std::uint64_t x, r;
    do {
      x = eng_();
      r = x % m;
    } while (x - r > std::uint64_t(0) - m);
    return static_cast<std::size_t>(r);
  }

  // Fisher-Yates with the unbiased index draw above.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fairhin
