#include "ddfiber/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace ddfiber {

std::string to_string(InputStateKind k) {
  switch (k) {
    case InputStateKind::Plus45: return "plus45";
    case InputStateKind::Minus45: return "minus45";
    case InputStateKind::H: return "h";
    case InputStateKind::V: return "v";
    case InputStateKind::Custom: return "custom";
  }
  return "?";
}

PulseSequence SequenceSpec::instantiate(double fiber_length) const {
  switch (kind) {
    case SequenceKind::None:
      return PulseSequence::none(fiber_length);
    case SequenceKind::Cpmg:
      return cpmg_positions(n_pulses, fiber_length);
    case SequenceKind::Cp:
      return cp_positions(n_pulses, fiber_length);
    case SequenceKind::Pdd:
      return pdd_positions(n_pulses, fiber_length);
    case SequenceKind::Udd:
      return udd_positions(n_pulses, fiber_length);
    case SequenceKind::Custom:
      return ddfiber::custom_positions(custom_pulse_positions, fiber_length);
  }
  throw std::invalid_argument("SequenceSpec: unknown kind");
}

void ExperimentConfig::validate() const {
  noise.validate();
  if (!(fiber_length > 0.0) || !std::isfinite(fiber_length))
    throw std::invalid_argument("ExperimentConfig: fiber_length must be > 0");
  if (ensemble_size < 1)
    throw std::invalid_argument("ExperimentConfig: ensemble_size must be >= 1");
  if (input_state == InputStateKind::Custom)
    JonesState::normalized(custom_h, custom_v);
  sequence.instantiate(fiber_length);
}

JonesState ExperimentConfig::input() const {
  switch (input_state) {
    case InputStateKind::Plus45: return JonesState::plus45();
    case InputStateKind::Minus45: return JonesState::minus45();
    case InputStateKind::H: return JonesState::horizontal();
    case InputStateKind::V: return JonesState::vertical();
    case InputStateKind::Custom: return JonesState::normalized(custom_h, custom_v);
  }
  throw std::invalid_argument("ExperimentConfig: unknown input state");
}

namespace {

// Pairwise sum in index order: the result does not depend on how work was
// split across threads.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  std::size_t t = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (t == 0) t = 1;
  t = std::min(t, n);
  if (t <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

FidelityEstimate run_ensemble(const ExperimentConfig& c) {
  c.validate();
  NoiseParams noise = c.noise;
  noise.seed = c.base_seed;
  const JonesState psi_in = c.input();
  const PulseSequence seq = c.sequence.instantiate(c.fiber_length);
  const std::size_t n = c.ensemble_size;

  std::vector<double> fi(n);
  // projector entries, split by component for pairwise reduction
  std::vector<double> p00r(n), p01r(n), p01i(n), p11r(n);
  parallel_for(n, c.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const FiberProfile profile = sample_profile(noise, c.fiber_length, i + 1);
      const Unitary2 u = build_propagator(profile, seq, c.pulse_error);
      const JonesState psi = apply(u, psi_in);
      fi[i] = overlap_fidelity(psi_in, psi);
      const complexd ph = psi.amp_h, pv = psi.amp_v;
      p00r[i] = std::norm(ph);
      const complexd hv = ph * std::conj(pv);
      p01r[i] = hv.real();
      p01i[i] = hv.imag();
      p11r[i] = std::norm(pv);
    }
  });

  const double inv_n = 1.0 / static_cast<double>(n);
  DensityMatrix2 rho;
  rho.m[0] = complexd{pairwise_sum(p00r) * inv_n, 0.0};
  rho.m[1] = complexd{pairwise_sum(p01r) * inv_n, pairwise_sum(p01i) * inv_n};
  rho.m[2] = std::conj(rho.m[1]);
  rho.m[3] = complexd{pairwise_sum(p11r) * inv_n, 0.0};

  FidelityEstimate est;
  est.ensemble_size = n;
  est.mean = fidelity(psi_in, rho);
  if (n > 1) {
    const double mean_f = pairwise_sum(fi) * inv_n;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = fi[i] - mean_f;
      sq[i] = d * d;
    }
    est.std_error = std::sqrt(pairwise_sum(sq) /
                              (static_cast<double>(n) * static_cast<double>(n - 1)));
  }
  return est;
}

std::vector<CountFidelityRow> sweep_waveplates(const ExperimentConfig& c,
                                               std::span<const std::size_t> counts) {
  std::vector<CountFidelityRow> rows;
  rows.reserve(counts.size());
  for (std::size_t count : counts) {
    ExperimentConfig cc = c;
    cc.sequence.kind = count == 0 ? SequenceKind::None : SequenceKind::Cpmg;
    cc.sequence.n_pulses = count;
    rows.push_back({count, run_ensemble(cc)});
  }
  return rows;
}

std::vector<LengthFidelityRow> sweep_lengths(const ExperimentConfig& c,
                                             std::span<const double> lengths,
                                             double waveplates_per_unit_length) {
  if (!(waveplates_per_unit_length > 0.0))
    throw std::invalid_argument("sweep_lengths: density must be > 0");
  std::vector<LengthFidelityRow> rows;
  rows.reserve(lengths.size());
  for (double l : lengths) {
    std::size_t count = static_cast<std::size_t>(
        std::llround(waveplates_per_unit_length * l));
    count += count % 2;  // force even
    count = std::max<std::size_t>(count, 2);
    ExperimentConfig cc = c;
    cc.fiber_length = l;
    cc.sequence.kind = SequenceKind::Cpmg;
    cc.sequence.n_pulses = count;
    rows.push_back({l, count, run_ensemble(cc)});
  }
  return rows;
}

ContourResult contour_noise(const ExperimentConfig& c,
                            std::span<const double> sigma_len_grid,
                            std::span<const double> sigma_phase_grid) {
  ContourResult res;
  res.sigma_len_grid.assign(sigma_len_grid.begin(), sigma_len_grid.end());
  res.sigma_phase_grid.assign(sigma_phase_grid.begin(), sigma_phase_grid.end());
  res.cells.reserve(sigma_len_grid.size() * sigma_phase_grid.size());
  for (double sl : sigma_len_grid) {
    for (double sp : sigma_phase_grid) {
      ExperimentConfig cc = c;
      cc.noise.sigma_seg_len = sl;
      cc.noise.sigma_phase = sp;
      res.cells.push_back(run_ensemble(cc));
    }
  }
  return res;
}

std::optional<std::size_t> min_waveplates(const ExperimentConfig& c,
                                          double target_fidelity,
                                          std::size_t max_count) {
  if (!(target_fidelity > 0.0) || !(target_fidelity < 1.0))
    throw std::invalid_argument("min_waveplates: target must lie in (0, 1)");
  if (max_count < 2)
    throw std::invalid_argument("min_waveplates: max_count must be >= 2");

  const auto meets = [&](std::size_t count) {
    ExperimentConfig cc = c;
    cc.sequence.kind = SequenceKind::Cpmg;
    cc.sequence.n_pulses = count;
    const FidelityEstimate e = run_ensemble(cc);
    return e.mean - 2.0 * e.std_error >= target_fidelity;
  };

  // Doubling scan over even counts, then bisection on the bracketed range.
  std::size_t lo = 0;  // largest failing count (0 = nothing failed yet)
  std::size_t hi = 0;  // smallest known succeeding count
  for (std::size_t count = 2;; count *= 2) {
    if (count > max_count) {
      const std::size_t last = max_count - max_count % 2;
      if (last > lo && meets(last)) {
        hi = last;
        break;
      }
      return std::nullopt;
    }
    if (meets(count)) {
      hi = count;
      break;
    }
    lo = count;
  }
  while (hi - lo > 2) {
    const std::size_t mid = (lo + hi) / 2 / 2 * 2;  // even midpoint
    if (meets(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace ddfiber
