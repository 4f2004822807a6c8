// Counter-based random stream (Philox4x32-10). A stream is keyed by
// (seed, stream_index): realization i draws the same values no matter which
// thread evaluates it or in what order.
#ifndef DDFIBER_RNG_HPP
#define DDFIBER_RNG_HPP

#include <array>
#include <cstdint>

namespace ddfiber {

// Raw Philox4x32-10 block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream_index);

  // Uniform in (0, 1), never exactly 0 or 1.
  double uniform();

  // Box-Muller normal deviate; consumes two uniforms per pair, the second
  // deviate is cached.
  double gaussian(double mean, double stddev);

  // Gaussian resampled until strictly positive.
  double positive_gaussian(double mean, double stddev);

 private:
  std::uint32_t next_u32();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_counter_ = 0;
  std::uint64_t stream_index_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;  // forces generation on first draw
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace ddfiber

#endif
