#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace wkt {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), so independent streams for
// (realization, mode) pairs can be opened anywhere without coordination and
// results do not depend on thread scheduling.
struct Philox4x32 {
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }
};

// Stream view over Philox: fixed (seed, stream, substream), sequential draws.
// The 128-bit counter is laid out as (stream lo, stream hi, substream, draw),
// so distinct (stream, substream) pairs never share counter blocks. substream
// must fit 32 bits.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        base_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
              static_cast<std::uint32_t>(substream ^ (substream >> 32) * 0x9E3779B9u), 0} {}

  std::uint32_t next_u32() {
    if (have_ == 0) {
      std::array<std::uint32_t, 4> ctr = base_;
      ctr[3] = static_cast<std::uint32_t>(draw_);
      std::array<std::uint32_t, 2> key = key_;
      key[1] ^= static_cast<std::uint32_t>(draw_ >> 32);
      buf_ = Philox4x32::block(ctr, key);
      ++draw_;
      have_ = 4;
    }
    return buf_[4 - have_--];
  }

  // uniform on (0,1), 53-bit resolution
  double uniform() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t x = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(x) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925 * u2;
    cached_normal_ = r * std::sin(th);
    have_normal_ = true;
    return r * std::cos(th);
  }

  // standard complex Gaussian: E eta = 0, E|eta|^2 = 1
  std::complex<double> complex_gaussian() {
    const double re = normal();
    const double im = normal();
    return {re * 0.7071067811865475244, im * 0.7071067811865475244};
  }

  std::complex<double> unit_phase() {
    const double th = 6.283185307179586476925 * uniform();
    return {std::cos(th), std::sin(th)};
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::array<std::uint32_t, 4> buf_{};
  std::uint64_t draw_ = 0;
  int have_ = 0;
  bool have_normal_ = false;
  double cached_normal_ = 0;
};

}  // namespace wkt
