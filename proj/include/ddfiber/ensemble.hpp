// Monte Carlo fidelity estimation over random fiber profiles and the
// parameter sweeps built on top of it, including the minimum-waveplate scan.
#ifndef DDFIBER_ENSEMBLE_HPP
#define DDFIBER_ENSEMBLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddfiber/core.hpp"
#include "ddfiber/fiber_noise.hpp"
#include "ddfiber/sequences.hpp"

namespace ddfiber {

enum class InputStateKind { Plus45, Minus45, H, V, Custom };

std::string to_string(InputStateKind k);

// Sequence described independently of a concrete length, so sweeps can
// instantiate it per fiber length.
struct SequenceSpec {
  SequenceKind kind = SequenceKind::None;
  std::size_t n_pulses = 0;
  std::vector<double> custom_pulse_positions;  // absolute, for Custom

  PulseSequence instantiate(double fiber_length) const;

  bool operator==(const SequenceSpec&) const = default;
};

struct ExperimentConfig {
  InputStateKind input_state = InputStateKind::Plus45;
  complexd custom_h{1.0, 0.0};  // used when input_state == Custom
  complexd custom_v{0.0, 0.0};
  NoiseParams noise;
  double fiber_length = 8.0;
  SequenceSpec sequence;
  std::size_t ensemble_size = 4096;
  std::uint64_t base_seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency
  PulseError pulse_error;

  void validate() const;
  JonesState input() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct FidelityEstimate {
  double mean = 0.0;       // |<psi_in| rho_out |psi_in>|
  double std_error = 0.0;  // from the per-realization fidelity variance
  std::size_t ensemble_size = 0;
};

// Runs ensemble_size realizations: profile i = sample_profile(noise, L, i)
// with noise.seed taken from base_seed, propagates the input state, and
// averages projectors. Realizations may be evaluated concurrently; the
// result is bit-identical for any thread count (per-index seeding, pairwise
// reduction in index order).
FidelityEstimate run_ensemble(const ExperimentConfig& c);

struct CountFidelityRow {
  std::size_t count;
  FidelityEstimate estimate;
};

// CPMG count sweep with a shared base_seed (common random numbers), count 0
// meaning no pulses.
std::vector<CountFidelityRow> sweep_waveplates(const ExperimentConfig& c,
                                               std::span<const std::size_t> counts);

struct LengthFidelityRow {
  double length;
  std::size_t count;
  FidelityEstimate estimate;
};

// For each length, CPMG count = round(density * L) forced even and >= 2.
std::vector<LengthFidelityRow> sweep_lengths(const ExperimentConfig& c,
                                             std::span<const double> lengths,
                                             double waveplates_per_unit_length);

struct ContourResult {
  std::vector<double> sigma_len_grid;
  std::vector<double> sigma_phase_grid;
  // row-major: cells[i * sigma_phase_grid.size() + j] for
  // (sigma_len_grid[i], sigma_phase_grid[j])
  std::vector<FidelityEstimate> cells;
};

ContourResult contour_noise(const ExperimentConfig& c,
                            std::span<const double> sigma_len_grid,
                            std::span<const double> sigma_phase_grid);

// Smallest even CPMG count whose estimated fidelity - 2 std_error reaches
// target, scanned by doubling then bisecting; nullopt if none <= max_count.
// Throws if max_count < 2 or target outside (0, 1).
std::optional<std::size_t> min_waveplates(const ExperimentConfig& c,
                                          double target_fidelity,
                                          std::size_t max_count);

}  // namespace ddfiber

#endif
