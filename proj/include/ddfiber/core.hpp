// Exact 2x2 complex linear algebra for polarization qubits: Jones states,
// unitary propagators, density matrices, and fidelity.
#ifndef DDFIBER_CORE_HPP
#define DDFIBER_CORE_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace ddfiber {

using complexd = std::complex<double>;

// Normalized two-component polarization state in the (H, V) basis.
// |amp_h|^2 + |amp_v|^2 = 1 within 1e-12 after every operation.
struct JonesState {
  complexd amp_h{1.0, 0.0};
  complexd amp_v{0.0, 0.0};

  static JonesState horizontal();
  static JonesState vertical();
  static JonesState plus45();   // (|H> + |V>)/sqrt(2)
  static JonesState minus45();  // (|H> - |V>)/sqrt(2)

  // Builds a state from arbitrary finite amplitudes, rescaling to unit norm.
  // Throws std::invalid_argument on non-finite input or zero vector.
  static JonesState normalized(complexd h, complexd v);

  double norm() const;
};

// 2x2 complex unitary, row-major entries {m00, m01, m10, m11}.
struct Unitary2 {
  std::array<complexd, 4> m{complexd{1, 0}, complexd{0, 0}, complexd{0, 0},
                            complexd{1, 0}};

  static Unitary2 identity();

  Unitary2 adjoint() const;
  complexd det() const;
  // Max entrywise deviation of U^dag U from the identity.
  double unitarity_defect() const;
};

// a*b in matrix order: (a*b) acts as "apply b first, then a".
Unitary2 operator*(const Unitary2& a, const Unitary2& b);

// 2x2 Hermitian density matrix, row-major.
struct DensityMatrix2 {
  std::array<complexd, 4> m{complexd{0, 0}, complexd{0, 0}, complexd{0, 0},
                            complexd{0, 0}};

  static DensityMatrix2 zero();
  static DensityMatrix2 pure(const JonesState& psi);  // |psi><psi|

  double trace_real() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

// diag(e^{+i dphi/2}, e^{-i dphi/2}); only the relative phase dphi is
// physical, the symmetric split is a fixed convention.
// Throws std::invalid_argument on non-finite input.
Unitary2 dephasing_propagator(double delta_phi);

// The instantaneous pi rotation about x: exp(-i pi/2 sigma_x) = -i sigma_x.
Unitary2 pauli_x_pulse();

// Pulse with small rotation-angle error and axis tilted from x toward y in
// the equatorial plane: exp(-i (pi+angle_error)/2 (cos(tilt) sx + sin(tilt) sy)).
// Both zero reproduces pauli_x_pulse() exactly.
Unitary2 imperfect_x_pulse(double angle_error, double axis_tilt);

// Matrix-vector product, renormalized only to absorb rounding drift.
JonesState apply(const Unitary2& u, const JonesState& s);

// <a|b> inner product (a conjugated).
complexd inner(const JonesState& a, const JonesState& b);

// Pure-state overlap fidelity |<a|b>|^2.
double overlap_fidelity(const JonesState& a, const JonesState& b);

// |<psi_in| rho |psi_in>|; the quadratic form is real nonnegative for a
// valid rho, the absolute value guards rounding.
double fidelity(const JonesState& psi_in, const DensityMatrix2& rho);

// Running mean of outer products: rho_acc + (|psi><psi| - rho_acc)/n where
// n is the 1-based index of the new sample. Throws on n = 0.
DensityMatrix2 accumulate(const DensityMatrix2& rho_acc, const JonesState& psi,
                          std::uint64_t n);

}  // namespace ddfiber

#endif
