#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace cmtsim {

// Full-avalanche 64-bit mixer (SplitMix64 finalizer).
constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Counter-based random stream. A stream is a pure function of its key
// (master_seed, purpose, index): word(k) is the k-th 64-bit output and can be
// queried in any order from any thread. Distinct keys give streams that are
// independent for every statistical purpose in this project.
class Stream {
 public:
  Stream(uint64_t master_seed, std::string_view purpose, uint64_t index) {
    uint64_t h = 0xcbf29ce484222325ULL ^ mix64(master_seed);
    for (unsigned char c : purpose) h = (h ^ c) * 0x100000001b3ULL;
    key_ = mix64(mix64(h) ^ mix64(index + 0x9e3779b97f4a7c15ULL));
  }

  uint64_t word(uint64_t k) const {
    return mix64(key_ + (k + 1) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform(uint64_t k) const {
    return double(word(k) >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos(uint64_t k) const {
    return double((word(k) >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on (0, 1), suitable when exact endpoint values must not occur.
  double uniform_open(uint64_t k) const {
    return (double(word(k) >> 12) + 0.5) * 0x1.0p-52;
  }

  // k-th standard normal draw (Box-Muller on words 2k and 2k+1).
  double gaussian(uint64_t k) const {
    const double u1 = uniform_pos(2 * k);
    const double u2 = uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Uniform integer in [lo, hi] (inclusive); hi - lo must fit in int64.
  int64_t uniform_int(uint64_t k, int64_t lo, int64_t hi) const {
    const uint64_t span = uint64_t(hi - lo) + 1;
    return lo + int64_t(word(k) % span);
  }

 private:
  uint64_t key_;
};

// The association map: one uniform random variable attached to every grid
// index, evaluated on demand. The same assignment instance is shared by every
// sub-construction on sub-intervals of one path replica.
class UniformAssignment {
 public:
  UniformAssignment(uint64_t master_seed, uint64_t replica)
      : s_(master_seed, "assoc", replica) {}

  // Deterministic per index; repeated queries agree.
  double at(int64_t grid_idx) const { return s_.uniform_open(uint64_t(grid_idx)); }

 private:
  Stream s_;
};

}  // namespace cmtsim
