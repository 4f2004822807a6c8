#include "ddfiber/core.hpp"

#include <cmath>
#include <stdexcept>

namespace ddfiber {

namespace {
constexpr complexd kI{0.0, 1.0};

bool finite(complexd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
}  // namespace

JonesState JonesState::horizontal() { return {complexd{1, 0}, complexd{0, 0}}; }
JonesState JonesState::vertical() { return {complexd{0, 0}, complexd{1, 0}}; }

JonesState JonesState::plus45() {
  const double r = 1.0 / std::sqrt(2.0);
  return {complexd{r, 0}, complexd{r, 0}};
}

JonesState JonesState::minus45() {
  const double r = 1.0 / std::sqrt(2.0);
  return {complexd{r, 0}, complexd{-r, 0}};
}

JonesState JonesState::normalized(complexd h, complexd v) {
  if (!finite(h) || !finite(v))
    throw std::invalid_argument("JonesState: non-finite amplitude");
  const double n = std::sqrt(std::norm(h) + std::norm(v));
  if (n == 0.0) throw std::invalid_argument("JonesState: zero vector");
  return {h / n, v / n};
}

double JonesState::norm() const {
  return std::sqrt(std::norm(amp_h) + std::norm(amp_v));
}

Unitary2 Unitary2::identity() { return {}; }

Unitary2 Unitary2::adjoint() const {
  return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

complexd Unitary2::det() const { return m[0] * m[3] - m[1] * m[2]; }

double Unitary2::unitarity_defect() const {
  const Unitary2 p = adjoint() * (*this);
  double d = 0.0;
  d = std::max(d, std::abs(p.m[0] - complexd{1, 0}));
  d = std::max(d, std::abs(p.m[1]));
  d = std::max(d, std::abs(p.m[2]));
  d = std::max(d, std::abs(p.m[3] - complexd{1, 0}));
  return d;
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
           a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
}

DensityMatrix2 DensityMatrix2::zero() { return {}; }

DensityMatrix2 DensityMatrix2::pure(const JonesState& psi) {
  return {{psi.amp_h * std::conj(psi.amp_h), psi.amp_h * std::conj(psi.amp_v),
           psi.amp_v * std::conj(psi.amp_h), psi.amp_v * std::conj(psi.amp_v)}};
}

double DensityMatrix2::trace_real() const { return m[0].real() + m[3].real(); }

double DensityMatrix2::hermiticity_defect() const {
  double d = std::abs(m[1] - std::conj(m[2]));
  d = std::max(d, std::abs(m[0].imag()));
  d = std::max(d, std::abs(m[3].imag()));
  return d;
}

double DensityMatrix2::min_eigenvalue() const {
  // Hermitian 2x2: eigenvalues (tr +- sqrt(tr^2 - 4 det))/2.
  const double tr = trace_real();
  const double det =
      m[0].real() * m[3].real() - std::norm(complexd{0.5, 0} * (m[1] + std::conj(m[2])));
  const double disc = std::max(0.0, tr * tr - 4.0 * det);
  return 0.5 * (tr - std::sqrt(disc));
}

Unitary2 dephasing_propagator(double delta_phi) {
  if (!std::isfinite(delta_phi))
    throw std::invalid_argument("dephasing_propagator: non-finite phase");
  const complexd e = std::polar(1.0, 0.5 * delta_phi);
  return {{e, complexd{0, 0}, complexd{0, 0}, std::conj(e)}};
}

Unitary2 pauli_x_pulse() {
  return {{complexd{0, 0}, -kI, -kI, complexd{0, 0}}};
}

Unitary2 imperfect_x_pulse(double angle_error, double axis_tilt) {
  if (angle_error == 0.0 && axis_tilt == 0.0) return pauli_x_pulse();
  const double half = 0.5 * (M_PI + angle_error);
  const double c = std::cos(half);
  const double s = std::sin(half);
  const double ax = std::cos(axis_tilt);
  const double ay = std::sin(axis_tilt);
  // cos(h) I - i sin(h) (ax sx + ay sy)
  return {{complexd{c, 0}, complexd{-s * ay, -s * ax},
           complexd{s * ay, -s * ax}, complexd{c, 0}}};
}

JonesState apply(const Unitary2& u, const JonesState& s) {
  const complexd h = u.m[0] * s.amp_h + u.m[1] * s.amp_v;
  const complexd v = u.m[2] * s.amp_h + u.m[3] * s.amp_v;
  const double n = std::sqrt(std::norm(h) + std::norm(v));
  return {h / n, v / n};
}

complexd inner(const JonesState& a, const JonesState& b) {
  return std::conj(a.amp_h) * b.amp_h + std::conj(a.amp_v) * b.amp_v;
}

double overlap_fidelity(const JonesState& a, const JonesState& b) {
  return std::norm(inner(a, b));
}

double fidelity(const JonesState& psi_in, const DensityMatrix2& rho) {
  const complexd h = std::conj(psi_in.amp_h);
  const complexd v = std::conj(psi_in.amp_v);
  const complexd q = h * (rho.m[0] * psi_in.amp_h + rho.m[1] * psi_in.amp_v) +
                     v * (rho.m[2] * psi_in.amp_h + rho.m[3] * psi_in.amp_v);
  return std::abs(q);
}

DensityMatrix2 accumulate(const DensityMatrix2& rho_acc, const JonesState& psi,
                          std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("accumulate: sample index must be >= 1");
  const DensityMatrix2 p = DensityMatrix2::pure(psi);
  DensityMatrix2 out;
  const double w = 1.0 / static_cast<double>(n);
  for (int i = 0; i < 4; ++i) out.m[i] = rho_acc.m[i] + (p.m[i] - rho_acc.m[i]) * w;
  return out;
}

}  // namespace ddfiber
