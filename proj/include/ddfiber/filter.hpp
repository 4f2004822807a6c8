// Spectral-domain predictions: sequence filter functions, parametric noise
// power spectra, and the decoherence function W by numerical quadrature.
#ifndef DDFIBER_FILTER_HPP
#define DDFIBER_FILTER_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddfiber/sequences.hpp"

namespace ddfiber {

enum class SpectrumKind { White, Lorentzian, GaussianCorr, OneOverK };

std::string to_string(SpectrumKind k);

// S(k) >= 0 for k >= 0. correlation_scale ell is unused for White; for
// OneOverK it sets the infrared floor k_floor = 1/ell. cutoff_k is the
// quadrature upper bound; 0 means automatic (scales with 1/L and the pulse
// count so the beyond-cutoff tail corrections stay valid).
struct SpectralModel {
  SpectrumKind kind = SpectrumKind::Lorentzian;
  double amplitude = 1.0;
  double correlation_scale = 1.0;
  double cutoff_k = 0.0;

  void validate() const;

  bool operator==(const SpectralModel&) const = default;
};

// White        -> A
// Lorentzian   -> A ell / (1 + (k ell)^2)
// GaussianCorr -> A ell exp(-(k ell)^2 / 2)
// OneOverK     -> A / max(k, 1/ell)
double spectral_density(const SpectralModel& m, double k);

// A pulse sequence reduced to normalized fractions in (0, 1); empty means
// free evolution.
struct FilterSpec {
  std::vector<double> fractions;

  static FilterSpec free();
  static FilterSpec cpmg(std::size_t n_pulses);
  static FilterSpec from_sequence(const PulseSequence& seq);

  void validate() const;
};

// F(kL) = 1/2 |sum_m (-1)^m (e^{i k x_{m+1}} - e^{i k x_m})|^2 with x_0 = 0,
// x_{n+1} = L and x_m = fraction_m * L; depends only on kL and the fractions.
double filter_general(std::span<const double> fractions, double kL);

// The four-pulse CPMG closed form 8 sin^4(kL/16) sin^2(kL/2) / cos^2(kL/4),
// with the removable singularities at kL = 2pi + 4pi m evaluated by local
// expansion. Note this expression does not coincide with filter_general over
// the CPMG-4 fractions away from kL = 0; see cpmg4_audit_table.
double filter_cpmg4_closed(double kL);

class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& what, double exponent, double error)
      : std::runtime_error(what), exponent_estimate(exponent),
        error_estimate(error) {}
  double exponent_estimate;
  double error_estimate;
};

// W(L) = exp(-(1/pi) Int_0^inf S(k) F(kL)/k^2 dk), evaluated by adaptive
// Gauss-Kronrod up to the cutoff plus analytic corrections for the
// beyond-cutoff tail. The k -> 0 limit is analytic (F = O(k^2)).
// Throws quadrature_error when the error estimate exceeds
// 1e-8 * max(1, |exponent|).
double decoherence_w(const SpectralModel& m, const FilterSpec& f, double L,
                     double rel_tol = 1e-10);

struct WPoint {
  double length;
  double w;
};

std::vector<WPoint> w_curve(const SpectralModel& m, const FilterSpec& f,
                            std::span<const double> lengths,
                            double rel_tol = 1e-10);

struct FilterAuditRow {
  double kl;
  double f_general;
  double f_closed;
  double abs_diff;
};

// Compares filter_general over the CPMG-4 fractions with the closed form at
// n_samples points in (0, kl_max], always including the removable-singularity
// centers that fall in range. Agreement is reported, not assumed.
std::vector<FilterAuditRow> cpmg4_audit_table(std::size_t n_samples,
                                              double kl_max);

}  // namespace ddfiber

#endif
