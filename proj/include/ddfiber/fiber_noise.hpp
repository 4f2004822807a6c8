// Random piecewise-constant birefringence profiles in dimensionless units and
// phase integration over arbitrary intervals.
#ifndef DDFIBER_FIBER_NOISE_HPP
#define DDFIBER_FIBER_NOISE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ddfiber {

struct NoiseParams {
  double mean_seg_len = 1.0;   // <dL> > 0
  double sigma_seg_len = 0.0;  // sigma_dL >= 0
  double sigma_phase = 0.0;    // std of per-segment accumulated phase, radians
  double mean_phase = 0.0;     // radians
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument

  bool operator==(const NoiseParams&) const = default;
};

struct Segment {
  double length;      // > 0
  double phase_rate;  // radians per unit length
};

// Ordered segments covering at least [0, total_length]; the last segment may
// overhang, integration stops at total_length.
class FiberProfile {
 public:
  FiberProfile(std::vector<Segment> segments, double total_length);

  double total_length() const { return total_length_; }
  std::span<const Segment> segments() const { return segments_; }

  // Integral of the piecewise-constant rate over [a, b].
  // Throws std::invalid_argument on a reversed or out-of-range interval.
  double accumulated_phase(double a, double b) const;

  // Net relative phase across sign-alternating intervals delimited by
  // `boundaries` (sorted positions within [0, total_length], normally
  // {0, x_1, ..., x_n, L}): sum_m (-1)^m * phase(x_m, x_{m+1}).
  double signed_phase(std::span<const double> boundaries) const;

  // JSON debug format, {"total_length":..., "segments":[[len,rate],...]}.
  std::string to_json() const;
  static FiberProfile from_json(const std::string& text);

 private:
  std::vector<Segment> segments_;
  std::vector<double> cum_;  // cum_[0] = 0, cum_[i] = sum of first i lengths
  double total_length_;
};

// Draws segment lengths from a Gaussian(mean_seg_len, sigma_seg_len)
// resampled until positive and per-segment phases from
// Gaussian(mean_phase, sigma_phase); phase_rate = phase/length. Segments are
// appended until they cover fiber_length. Deterministic in
// (p.seed, stream_index).
FiberProfile sample_profile(const NoiseParams& p, double fiber_length,
                            std::uint64_t stream_index);

}  // namespace ddfiber

#endif
