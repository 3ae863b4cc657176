#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Counter-based randomness for the whole library.
//
// Every random decision is addressed by (seed, c0, c1, domain) and produced
// by one Philox4x32-10 invocation (Salmon et al., SC'11), so any single value
// can be regenerated without touching the rest of the stream. That is what
// makes column-addressable matrix sampling, reproducible parallel Monte Carlo
// loops, and scheduling-independent output possible.
//
// Serialized matrices carry the identifier "philox4x32-10" so another
// implementation can reproduce them bit for bit, provided it also adopts the
// index mapping documented at bounded() below.

namespace sparsejl::rng {

struct Philox4x32 {
  static constexpr uint32_t kWeyl0 = 0x9e3779b9u;
  static constexpr uint32_t kWeyl1 = 0xbb67ae85u;
  static constexpr uint32_t kMult0 = 0xd2511f53u;
  static constexpr uint32_t kMult1 = 0xcd9e8d57u;

  // 10-round keyed bijection on the 128-bit counter.
  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                       std::array<uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const uint64_t p0 = uint64_t{kMult0} * ctr[0];
      const uint64_t p1 = uint64_t{kMult1} * ctr[2];
      ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<uint32_t>(p1),
             static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<uint32_t>(p0)};
    }
    return ctr;
  }
};

// Distinct consumers of one user seed get distinct counter domains so their
// draws never collide.
enum class Domain : uint32_t {
  MatrixEntry = 0,
  Stream = 1,
  SeedDerivation = 2,
};

struct Words {
  uint64_t lo;
  uint64_t hi;
};

// One keyed invocation: seed is the Philox key, (c0, c1, domain) the counter.
inline Words words(uint64_t seed, uint64_t c0, uint32_t c1, Domain domain) noexcept {
  const std::array<uint32_t, 4> out = Philox4x32::block(
      {static_cast<uint32_t>(c0), static_cast<uint32_t>(c0 >> 32), c1,
       static_cast<uint32_t>(domain)},
      {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)});
  return {out[0] | (uint64_t{out[1]} << 32), out[2] | (uint64_t{out[3]} << 32)};
}

// Per-trial seeds for Monte Carlo loops, derived by counter from one seed.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) noexcept {
  return words(seed, stream, 0, Domain::SeedDerivation).lo;
}

// Maps a full 64-bit word onto [0, n) as floor(u * n / 2^64). Rejection-free,
// n need not be a power of two; the selection bias is at most n / 2^64.
inline uint64_t bounded(uint64_t u, uint64_t n) noexcept {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(u) * n) >> 64);
}

// Sequential stream view over the counter space, for sampling test data and
// Monte Carlo inputs. Streams with distinct (seed, stream_id) are independent.
class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream_id) noexcept : seed_(seed), id_(stream_id) {}

  uint64_t next_u64() noexcept {
    if (!has_hi_) {
      buf_ = words(seed_, id_, ctr_++, Domain::Stream);
      has_hi_ = true;
      return buf_.lo;
    }
    has_hi_ = false;
    return buf_.hi;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() noexcept {
    if (has_normal_) {
      has_normal_ = false;
      return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(a);
    has_normal_ = true;
    return r * std::cos(a);
  }

  uint64_t below(uint64_t n) noexcept { return bounded(next_u64(), n); }

 private:
  uint64_t seed_;
  uint64_t id_;
  uint32_t ctr_ = 0;
  Words buf_{0, 0};
  bool has_hi_ = false;
  bool has_normal_ = false;
  double cached_normal_ = 0.0;
};

inline constexpr const char* kPrngId = "philox4x32-10";

}  // namespace sparsejl::rng
