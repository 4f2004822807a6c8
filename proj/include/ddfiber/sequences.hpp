// Pulse-position generators for standard dynamical-decoupling sequences and
// assembly of the spatially ordered sequence propagator.
#ifndef DDFIBER_SEQUENCES_HPP
#define DDFIBER_SEQUENCES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ddfiber/core.hpp"
#include "ddfiber/fiber_noise.hpp"

namespace ddfiber {

enum class SequenceKind { None, Cpmg, Cp, Pdd, Udd, Custom };

std::string to_string(SequenceKind k);

struct PulseSequence {
  std::vector<double> positions;  // strictly increasing, inside (0, fiber_length)
  double fiber_length = 1.0;
  SequenceKind kind = SequenceKind::None;

  static PulseSequence none(double fiber_length);

  void validate() const;  // throws std::invalid_argument

  // {0, x_1, ..., x_n, L}: the sign-alternation boundaries.
  std::vector<double> boundaries() const;
  // positions / fiber_length, in (0, 1).
  std::vector<double> fractions() const;
};

// CPMG: x_k = (k - 1/2) L / n.
PulseSequence cpmg_positions(std::size_t n_pulses, double fiber_length);
// CP and PDD: uniform interior grid x_k = k L / (n + 1).
PulseSequence cp_positions(std::size_t n_pulses, double fiber_length);
PulseSequence pdd_positions(std::size_t n_pulses, double fiber_length);
// UDD: x_j = L sin^2(j pi / (2n + 2)).
PulseSequence udd_positions(std::size_t n_pulses, double fiber_length);

PulseSequence custom_positions(std::vector<double> positions, double fiber_length);

// Concatenates n_cycles shifted copies of base over length n_cycles * base L.
PulseSequence repeated_cycles(const PulseSequence& base, std::size_t n_cycles);

// Optional per-pulse imperfection; both zero means exact -i sigma_x pulses.
struct PulseError {
  double angle_error = 0.0;  // radians added to the pi rotation
  double axis_tilt = 0.0;    // radians, axis tilted from x toward y

  bool operator==(const PulseError&) const = default;
};

// Ordered product of free dephasing propagators interleaved with pi pulses,
// applied in propagation order. A pulse landing exactly on a segment boundary
// is applied after integrating up to that boundary.
// Throws if the sequence is longer than the profile.
Unitary2 build_propagator(const FiberProfile& profile, const PulseSequence& seq,
                          const PulseError& err = {});

}  // namespace ddfiber

#endif
