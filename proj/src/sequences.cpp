#include "ddfiber/sequences.hpp"

#include <cmath>
#include <stdexcept>

namespace ddfiber {

std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::None: return "none";
    case SequenceKind::Cpmg: return "cpmg";
    case SequenceKind::Cp: return "cp";
    case SequenceKind::Pdd: return "pdd";
    case SequenceKind::Udd: return "udd";
    case SequenceKind::Custom: return "custom";
  }
  return "?";
}

PulseSequence PulseSequence::none(double fiber_length) {
  PulseSequence s;
  s.fiber_length = fiber_length;
  s.validate();
  return s;
}

void PulseSequence::validate() const {
  if (!(fiber_length > 0.0) || !std::isfinite(fiber_length))
    throw std::invalid_argument("PulseSequence: fiber_length must be > 0");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!(positions[i] > 0.0) || !(positions[i] < fiber_length))
      throw std::invalid_argument("PulseSequence: pulse outside (0, L)");
    if (i > 0 && !(positions[i] > positions[i - 1]))
      throw std::invalid_argument("PulseSequence: positions not strictly increasing");
  }
}

std::vector<double> PulseSequence::boundaries() const {
  std::vector<double> b;
  b.reserve(positions.size() + 2);
  b.push_back(0.0);
  b.insert(b.end(), positions.begin(), positions.end());
  b.push_back(fiber_length);
  return b;
}

std::vector<double> PulseSequence::fractions() const {
  std::vector<double> f;
  f.reserve(positions.size());
  for (double x : positions) f.push_back(x / fiber_length);
  return f;
}

namespace {
PulseSequence make(std::size_t n_pulses, double fiber_length, SequenceKind kind,
                   double (*pos)(std::size_t, std::size_t, double)) {
  if (n_pulses == 0)
    throw std::invalid_argument("pulse sequence: n_pulses must be >= 1");
  PulseSequence s;
  s.fiber_length = fiber_length;
  s.kind = kind;
  s.positions.reserve(n_pulses);
  for (std::size_t k = 1; k <= n_pulses; ++k)
    s.positions.push_back(pos(k, n_pulses, fiber_length));
  s.validate();
  return s;
}

double cpmg_pos(std::size_t k, std::size_t n, double l) {
  return (static_cast<double>(k) - 0.5) * l / static_cast<double>(n);
}
double uniform_pos(std::size_t k, std::size_t n, double l) {
  return static_cast<double>(k) * l / static_cast<double>(n + 1);
}
double udd_pos(std::size_t k, std::size_t n, double l) {
  const double s = std::sin(static_cast<double>(k) * M_PI /
                            (2.0 * static_cast<double>(n) + 2.0));
  return l * s * s;
}
}  // namespace

PulseSequence cpmg_positions(std::size_t n_pulses, double fiber_length) {
  return make(n_pulses, fiber_length, SequenceKind::Cpmg, cpmg_pos);
}

PulseSequence cp_positions(std::size_t n_pulses, double fiber_length) {
  return make(n_pulses, fiber_length, SequenceKind::Cp, uniform_pos);
}

PulseSequence pdd_positions(std::size_t n_pulses, double fiber_length) {
  return make(n_pulses, fiber_length, SequenceKind::Pdd, uniform_pos);
}

PulseSequence udd_positions(std::size_t n_pulses, double fiber_length) {
  return make(n_pulses, fiber_length, SequenceKind::Udd, udd_pos);
}

PulseSequence custom_positions(std::vector<double> positions, double fiber_length) {
  PulseSequence s;
  s.positions = std::move(positions);
  s.fiber_length = fiber_length;
  s.kind = SequenceKind::Custom;
  s.validate();
  return s;
}

PulseSequence repeated_cycles(const PulseSequence& base, std::size_t n_cycles) {
  if (n_cycles == 0)
    throw std::invalid_argument("repeated_cycles: n_cycles must be >= 1");
  base.validate();
  if (n_cycles == 1) return base;
  PulseSequence s;
  s.kind = base.kind;
  s.fiber_length = base.fiber_length * static_cast<double>(n_cycles);
  s.positions.reserve(base.positions.size() * n_cycles);
  for (std::size_t c = 0; c < n_cycles; ++c) {
    const double shift = base.fiber_length * static_cast<double>(c);
    for (double x : base.positions) s.positions.push_back(x + shift);
  }
  s.validate();
  return s;
}

Unitary2 build_propagator(const FiberProfile& profile, const PulseSequence& seq,
                          const PulseError& err) {
  seq.validate();
  if (seq.fiber_length > profile.total_length())
    throw std::invalid_argument("build_propagator: sequence longer than profile");
  const Unitary2 pulse = imperfect_x_pulse(err.angle_error, err.axis_tilt);
  Unitary2 u = Unitary2::identity();
  double x = 0.0;
  for (double xp : seq.positions) {
    u = pulse * (dephasing_propagator(profile.accumulated_phase(x, xp)) * u);
    x = xp;
  }
  return dephasing_propagator(profile.accumulated_phase(x, seq.fiber_length)) * u;
}

}  // namespace ddfiber
