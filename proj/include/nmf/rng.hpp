#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace nmf {

// splitmix64 finalizer; used to expand seeds and to mix hash values.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** generator. Deterministic and identical on every platform;
// all randomized code in the library draws from this, never from std::random.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0, 1]: 53-bit mantissa, never returns 0 so log() is safe.
  double uniform01() {
    return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased-enough index draw via 128-bit multiply (Lemire reduction).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; uniform01 > 0 keeps the log finite.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // k distinct indices from [0, n) by partial Fisher-Yates, order random.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
      std::size_t j = i + index(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k < n ? k : n);
    return idx;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// FNV-1a over a byte string; stable across platforms and releases.
constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Cell seed derivation: hash(master, labels..., replicate). Stable by
// construction; benchmark reproducibility depends on this never changing.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::string_view> labels,
                                 std::uint64_t replicate = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ master;
  for (auto label : labels) {
    h = fnv1a(label, h);
    h = fnv1a("\x1f", h);  // separator so ("ab","c") != ("a","bc")
  }
  std::uint64_t sm = h ^ (replicate * 0x9e3779b97f4a7c15ULL + replicate);
  return splitmix64(sm);
}

}  // namespace nmf
