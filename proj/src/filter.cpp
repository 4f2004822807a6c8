#include "ddfiber/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ddfiber {

std::string to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::White: return "white";
    case SpectrumKind::Lorentzian: return "lorentzian";
    case SpectrumKind::GaussianCorr: return "gaussian_corr";
    case SpectrumKind::OneOverK: return "one_over_k";
  }
  return "?";
}

void SpectralModel::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("SpectralModel: amplitude must be >= 0");
  if (kind != SpectrumKind::White &&
      (!(correlation_scale > 0.0) || !std::isfinite(correlation_scale)))
    throw std::invalid_argument("SpectralModel: correlation_scale must be > 0");
  if (cutoff_k != 0.0 && (!(cutoff_k > 0.0) || !std::isfinite(cutoff_k)))
    throw std::invalid_argument("SpectralModel: cutoff_k must be > 0 (or 0 for auto)");
}

double spectral_density(const SpectralModel& m, double k) {
  if (!(k >= 0.0))
    throw std::invalid_argument("spectral_density: k must be >= 0");
  const double a = m.amplitude;
  const double ell = m.correlation_scale;
  switch (m.kind) {
    case SpectrumKind::White:
      return a;
    case SpectrumKind::Lorentzian: {
      const double kl = k * ell;
      return a * ell / (1.0 + kl * kl);
    }
    case SpectrumKind::GaussianCorr: {
      const double kl = k * ell;
      return a * ell * std::exp(-0.5 * kl * kl);
    }
    case SpectrumKind::OneOverK:
      return a / std::max(k, 1.0 / ell);
  }
  return 0.0;
}

FilterSpec FilterSpec::free() { return {}; }

FilterSpec FilterSpec::cpmg(std::size_t n_pulses) {
  return from_sequence(cpmg_positions(n_pulses, 1.0));
}

FilterSpec FilterSpec::from_sequence(const PulseSequence& seq) {
  FilterSpec f;
  f.fractions = seq.fractions();
  return f;
}

void FilterSpec::validate() const {
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0) || !(fractions[i] < 1.0))
      throw std::invalid_argument("FilterSpec: fractions must lie in (0, 1)");
    if (i > 0 && !(fractions[i] > fractions[i - 1]))
      throw std::invalid_argument("FilterSpec: fractions not strictly increasing");
  }
}

double filter_general(std::span<const double> fractions, double kL) {
  if (!(kL >= 0.0) || !std::isfinite(kL))
    throw std::invalid_argument("filter_general: kL must be finite and >= 0");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0) || !(fractions[i] < 1.0) ||
        (i > 0 && !(fractions[i] > fractions[i - 1])))
      throw std::invalid_argument("filter_general: fractions unsorted or outside (0,1)");
  }
  // Each difference written as 2i sin(kL df/2) e^{i kL (f0+f1)/2} to avoid
  // cancellation inside a term; cancellation across terms is physical.
  std::complex<double> v{0.0, 0.0};
  double prev = 0.0;
  double sign = 1.0;
  for (std::size_t m = 0; m <= fractions.size(); ++m) {
    const double next = (m < fractions.size()) ? fractions[m] : 1.0;
    const double s = std::sin(0.5 * kL * (next - prev));
    const double mid = 0.5 * kL * (next + prev);
    v += sign * 2.0 * s * std::complex<double>(-std::sin(mid), std::cos(mid));
    prev = next;
    sign = -sign;
  }
  return 0.5 * std::norm(v);
}

double filter_cpmg4_closed(double kL) {
  if (!(kL >= 0.0) || !std::isfinite(kL))
    throw std::invalid_argument("filter_cpmg4_closed: kL must be finite and >= 0");
  const double s16 = std::sin(kL / 16.0);
  const double s16_4 = s16 * s16 * s16 * s16;
  const double c4 = std::cos(kL / 4.0);
  if (std::abs(c4) > 1e-4) {
    const double s2 = std::sin(kL / 2.0);
    return 8.0 * s16_4 * s2 * s2 / (c4 * c4);
  }
  // Near kL0 = 2pi(2m+1) both sin(kL/2) and cos(kL/4) vanish; with
  // u = kL - kL0, sin^2(kL/2) = sin^2(u/2) and cos^2(kL/4) = sin^2(u/4).
  const double m = std::round((kL - 2.0 * M_PI) / (4.0 * M_PI));
  const double u = kL - (2.0 * M_PI + 4.0 * M_PI * m);
  double ratio = 4.0;  // the u -> 0 limit
  if (std::abs(u) > 1e-8) {
    const double r = std::sin(0.5 * u) / std::sin(0.25 * u);
    ratio = r * r;
  }
  return 8.0 * s16_4 * ratio;
}

namespace {

// The filter as a trig polynomial: F(kL) = -sum_{j<j'} c_j c_j' (1 - cos k d),
// with coefficients c at the boundary positions {0, x_1..x_n, L}.
struct BoundaryCoeffs {
  std::vector<double> pos;    // absolute positions, pos[0]=0, pos.back()=L
  std::vector<double> coeff;  // c_0=-1, c_j=2(-1)^{j-1}, c_{n+1}=(-1)^n
  double d_linear;            // sum_m (-1)^m (f_{m+1}-f_m), drives the k->0 limit
};

BoundaryCoeffs boundary_coeffs(std::span<const double> fractions, double L) {
  BoundaryCoeffs b;
  const std::size_t n = fractions.size();
  b.pos.reserve(n + 2);
  b.pos.push_back(0.0);
  for (double f : fractions) b.pos.push_back(f * L);
  b.pos.push_back(L);
  b.coeff.resize(n + 2);
  b.coeff[0] = -1.0;
  for (std::size_t j = 1; j <= n; ++j) b.coeff[j] = (j % 2 == 1) ? 2.0 : -2.0;
  b.coeff[n + 1] = (n % 2 == 0) ? 1.0 : -1.0;
  b.d_linear = 0.0;
  double prev = 0.0, sign = 1.0;
  for (std::size_t m = 0; m <= n; ++m) {
    const double next = (m < n) ? fractions[m] : 1.0;
    b.d_linear += sign * (next - prev);
    prev = next;
    sign = -sign;
  }
  return b;
}

// Int_K^inf S(k)/k^2 dk, closed form per model.
double tail_mass(const SpectralModel& m, double K) {
  const double a = m.amplitude;
  const double ell = m.correlation_scale;
  switch (m.kind) {
    case SpectrumKind::White:
      return a / K;
    case SpectrumKind::Lorentzian: {
      // A ell^2 (t - atan t), t = 1/(K ell); series below t = 1e-2 to avoid
      // cancellation.
      const double t = 1.0 / (K * ell);
      double f;
      if (t < 1e-2) {
        const double t2 = t * t;
        f = t * t2 * (1.0 / 3.0 + t2 * (-1.0 / 5.0 + t2 * (1.0 / 7.0 - t2 / 9.0)));
      } else {
        f = t - std::atan(t);
      }
      return a * ell * ell * f;
    }
    case SpectrumKind::GaussianCorr: {
      const double x = K * ell / std::sqrt(2.0);
      return a * ell * (std::exp(-x * x) / K -
                        ell * std::sqrt(M_PI / 2.0) * std::erfc(x));
    }
    case SpectrumKind::OneOverK: {
      const double kf = 1.0 / ell;
      if (K >= kf) return a / (2.0 * K * K);
      return a * ((1.0 / K - 1.0 / kf) / kf + 1.0 / (2.0 * kf * kf));
    }
  }
  return 0.0;
}

double spectral_density_deriv(const SpectralModel& m, double k) {
  const double a = m.amplitude;
  const double ell = m.correlation_scale;
  switch (m.kind) {
    case SpectrumKind::White:
      return 0.0;
    case SpectrumKind::Lorentzian: {
      const double d = 1.0 + k * ell * k * ell;
      return -2.0 * a * k * ell * ell * ell / (d * d);
    }
    case SpectrumKind::GaussianCorr:
      return -a * ell * ell * ell * k * std::exp(-0.5 * k * ell * k * ell);
    case SpectrumKind::OneOverK:
      return (k > 1.0 / ell) ? -a / (k * k) : 0.0;
  }
  return 0.0;
}

// Two-term asymptotic for Int_K^inf (S/k^2) cos(k d) dk; valid once K d is a
// few radians, remainder O(h''/d^2).
double oscillatory_tail(const SpectralModel& m, double K, double d) {
  const double s = spectral_density(m, K);
  const double h = s / (K * K);
  const double hp = spectral_density_deriv(m, K) / (K * K) - 2.0 * s / (K * K * K);
  return -h * std::sin(K * d) / d - hp * std::cos(K * d) / (d * d);
}

}  // namespace

double decoherence_w(const SpectralModel& m, const FilterSpec& f, double L,
                     double rel_tol) {
  m.validate();
  f.validate();
  if (!(L > 0.0) || !std::isfinite(L))
    throw std::invalid_argument("decoherence_w: L must be > 0");
  if (m.amplitude == 0.0) return 1.0;

  const std::size_t n = f.fractions.size();
  const double cutoff =
      (m.cutoff_k > 0.0) ? m.cutoff_k
                         : std::max(200.0, 16.0 * static_cast<double>(n)) / L;
  const BoundaryCoeffs bc = boundary_coeffs(f.fractions, L);
  const double limit0 =
      spectral_density(m, 0.0) * 0.5 * L * L * bc.d_linear * bc.d_linear;

  const auto integrand = [&](double k) -> double {
    if (k <= 0.0) return limit0;
    return spectral_density(m, k) * filter_general(f.fractions, k * L) / (k * k);
  };
  double gk_error = 0.0;
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double main = gk::integrate(integrand, 0.0, cutoff, 17, rel_tol, &gk_error);

  // Beyond-cutoff tail: mean part per pair plus oscillatory endpoint
  // corrections.
  double tail = 0.0;
  const double mass = tail_mass(m, cutoff);
  for (std::size_t j = 0; j + 1 < bc.pos.size(); ++j) {
    for (std::size_t j2 = j + 1; j2 < bc.pos.size(); ++j2) {
      const double w = -bc.coeff[j] * bc.coeff[j2];
      const double d = bc.pos[j2] - bc.pos[j];
      tail += w * (mass - oscillatory_tail(m, cutoff, d));
    }
  }

  double exponent = (main + tail) / M_PI;
  const double err = gk_error / M_PI;
  if (!std::isfinite(exponent) ||
      err > 1e-8 * std::max(1.0, std::abs(exponent)))
    throw quadrature_error(
        "decoherence_w: quadrature failed to converge (error " +
            std::to_string(err) + " for exponent " + std::to_string(exponent) +
            ", cutoff " + std::to_string(cutoff) + ")",
        exponent, err);
  if (exponent < 0.0) exponent = 0.0;  // rounding guard; exact value is >= 0
  return std::exp(-exponent);
}

std::vector<WPoint> w_curve(const SpectralModel& m, const FilterSpec& f,
                            std::span<const double> lengths, double rel_tol) {
  std::vector<WPoint> out;
  out.reserve(lengths.size());
  for (double l : lengths) out.push_back({l, decoherence_w(m, f, l, rel_tol)});
  return out;
}

std::vector<FilterAuditRow> cpmg4_audit_table(std::size_t n_samples,
                                              double kl_max) {
  if (n_samples == 0 || !(kl_max > 0.0))
    throw std::invalid_argument("cpmg4_audit_table: need n_samples >= 1, kl_max > 0");
  const FilterSpec spec = FilterSpec::cpmg(4);
  std::vector<double> samples;
  samples.reserve(n_samples + 8);
  for (std::size_t i = 1; i <= n_samples; ++i)
    samples.push_back(kl_max * static_cast<double>(i) /
                      static_cast<double>(n_samples));
  // Always audit the removable-singularity centers in range.
  for (double s = 2.0 * M_PI; s <= kl_max; s += 4.0 * M_PI) samples.push_back(s);
  std::sort(samples.begin(), samples.end());
  std::vector<FilterAuditRow> rows;
  rows.reserve(samples.size());
  for (double kl : samples) {
    const double fg = filter_general(spec.fractions, kl);
    const double fc = filter_cpmg4_closed(kl);
    rows.push_back({kl, fg, fc, std::abs(fg - fc)});
  }
  return rows;
}

}  // namespace ddfiber
