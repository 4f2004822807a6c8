#include "ddfiber/rng.hpp"

#include <cmath>

namespace ddfiber {

namespace {
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream_index)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      stream_index_(stream_index) {}

std::uint32_t PhiloxStream::next_u32() {
  if (block_pos_ == 4) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_counter_),
        static_cast<std::uint32_t>(block_counter_ >> 32),
        static_cast<std::uint32_t>(stream_index_),
        static_cast<std::uint32_t>(stream_index_ >> 32)};
    block_ = philox4x32(ctr, key_);
    ++block_counter_;
    block_pos_ = 0;
  }
  return block_[block_pos_++];
}

double PhiloxStream::uniform() {
  // (x + 0.5) * 2^-32 lies strictly inside (0, 1).
  return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
}

double PhiloxStream::gaussian(double mean, double stddev) {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return mean + stddev * cached_gaussian_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double z0 = r * std::cos(2.0 * M_PI * u2);
  cached_gaussian_ = r * std::sin(2.0 * M_PI * u2);
  has_cached_gaussian_ = true;
  return mean + stddev * z0;
}

double PhiloxStream::positive_gaussian(double mean, double stddev) {
  double x = gaussian(mean, stddev);
  while (x <= 0.0) x = gaussian(mean, stddev);
  return x;
}

}  // namespace ddfiber
