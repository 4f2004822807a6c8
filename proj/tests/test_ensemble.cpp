#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ddfiber/ensemble.hpp"

using namespace ddfiber;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.input_state = InputStateKind::Plus45;
  c.noise.mean_seg_len = 1.0;
  c.noise.sigma_seg_len = 0.3;
  c.noise.sigma_phase = 2.0;
  c.fiber_length = 8.0;
  c.sequence.kind = SequenceKind::Cpmg;
  c.sequence.n_pulses = 8;
  c.ensemble_size = 1024;
  c.base_seed = 1;
  c.threads = 2;
  return c;
}

}  // namespace

TEST_CASE("no dephasing means fidelity one with zero error bar") {
  ExperimentConfig c = base_config();
  c.noise.sigma_phase = 0.0;
  c.ensemble_size = 256;
  const FidelityEstimate e = run_ensemble(c);
  CHECK(e.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.std_error == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e.ensemble_size == 256);
}

TEST_CASE("computational basis inputs are dephasing immune") {
  for (InputStateKind s : {InputStateKind::H, InputStateKind::V}) {
    ExperimentConfig c = base_config();
    c.input_state = s;
    c.noise.sigma_phase = 50.0;
    c.ensemble_size = 512;
    c.sequence.n_pulses = 8;  // CPMG-4k keeps even parity
    const FidelityEstimate e = run_ensemble(c);
    CHECK(e.mean == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gaussian characteristic-function oracle for free dephasing") {
  // sigma_len = 0 gives exactly L iid segments: total phase ~ N(0, L sigma^2)
  ExperimentConfig c = base_config();
  c.sequence.kind = SequenceKind::None;
  c.sequence.n_pulses = 0;
  c.noise.sigma_seg_len = 0.0;
  c.fiber_length = 4.0;
  c.noise.sigma_phase = 1.0;  // sigma_tot^2 = 4
  c.ensemble_size = 10000;
  c.base_seed = 17;
  const FidelityEstimate e = run_ensemble(c);
  const double oracle = 0.5 * (1.0 + std::exp(-4.0 / 2.0));
  CHECK(std::abs(e.mean - oracle) < 3.0 * e.std_error);
  CHECK(e.std_error > 0.0);
  CHECK(e.std_error < 0.02);
}

TEST_CASE("rho-route mean equals the per-realization fidelity mean") {
  ExperimentConfig c = base_config();
  c.ensemble_size = 2000;
  const FidelityEstimate e = run_ensemble(c);

  // independent route: accumulate per-realization pure-state fidelities
  NoiseParams noise = c.noise;
  noise.seed = c.base_seed;
  const JonesState psi_in = c.input();
  const PulseSequence seq = c.sequence.instantiate(c.fiber_length);
  double sum = 0.0;
  for (std::size_t i = 1; i <= c.ensemble_size; ++i) {
    const FiberProfile f = sample_profile(noise, c.fiber_length, i);
    sum += overlap_fidelity(psi_in, apply(build_propagator(f, seq), psi_in));
  }
  CHECK(std::abs(e.mean - sum / c.ensemble_size) < 1e-12);
}

TEST_CASE("runs are bit-identical across repeats and thread counts") {
  ExperimentConfig c = base_config();
  c.ensemble_size = 999;  // odd count to exercise uneven chunking
  c.threads = 1;
  const FidelityEstimate a = run_ensemble(c);
  const FidelityEstimate b = run_ensemble(c);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  for (std::size_t t : {2, 3, 5, 16}) {
    c.threads = t;
    const FidelityEstimate e = run_ensemble(c);
    CHECK(e.mean == a.mean);
    CHECK(e.std_error == a.std_error);
  }
}

TEST_CASE("waveplate sweep shares the seed and improves with pulse density") {
  ExperimentConfig c = base_config();
  c.ensemble_size = 2048;
  const std::vector<std::size_t> counts{0, 16};
  const auto rows = sweep_waveplates(c, counts);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].count == 0);

  // row 0 equals a plain no-pulse run with the same seed
  ExperimentConfig none = c;
  none.sequence.kind = SequenceKind::None;
  none.sequence.n_pulses = 0;
  const FidelityEstimate baseline = run_ensemble(none);
  CHECK(rows[0].estimate.mean == baseline.mean);

  // at sigma_phase = 2 and pulse spacing 0.5 the improvement is decisive
  const double se = std::hypot(rows[0].estimate.std_error, rows[1].estimate.std_error);
  CHECK(rows[1].estimate.mean > rows[0].estimate.mean + 5.0 * se);

  // deterministic rerun
  const auto again = sweep_waveplates(c, counts);
  CHECK(again[1].estimate.mean == rows[1].estimate.mean);
}

TEST_CASE("length sweep sets even counts from the density") {
  ExperimentConfig c = base_config();
  c.ensemble_size = 64;
  const std::vector<double> lengths{8.0, 16.0, 3.0};
  const auto rows = sweep_lengths(c, lengths, 0.5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].count == 4);   // 0.5 * 8
  CHECK(rows[1].count == 8);   // doubles with length
  CHECK(rows[2].count == 2);   // round(1.5) = 2 after forcing even, >= 2
  for (const auto& r : rows) {
    CHECK(r.estimate.mean >= 0.0);
    CHECK(r.estimate.mean <= 1.0);
  }
  CHECK_THROWS_AS(sweep_lengths(c, lengths, 0.0), std::invalid_argument);
}

TEST_CASE("contour grid") {
  ExperimentConfig c = base_config();
  c.ensemble_size = 512;
  const std::vector<double> sl{0.3};
  const std::vector<double> sp{0.0, 1.0, 4.0};
  const ContourResult res = contour_noise(c, sl, sp);
  REQUIRE(res.cells.size() == 3);

  // sigma_phase = 0 cell is exactly one
  CHECK(res.cells[0].mean == doctest::Approx(1.0).epsilon(1e-12));

  // 1x1 grid reduces to the scalar case
  const std::vector<double> one{0.3};
  const std::vector<double> onep{2.0};
  const ContourResult scalar = contour_noise(c, one, onep);
  ExperimentConfig direct = c;
  direct.noise.sigma_seg_len = 0.3;
  direct.noise.sigma_phase = 2.0;
  CHECK(scalar.cells[0].mean == run_ensemble(direct).mean);

  // more phase noise cannot help, within noise
  const double se01 = std::hypot(res.cells[1].std_error, res.cells[0].std_error);
  const double se12 = std::hypot(res.cells[2].std_error, res.cells[1].std_error);
  CHECK(res.cells[1].mean <= res.cells[0].mean + 3.0 * se01);
  CHECK(res.cells[2].mean <= res.cells[1].mean + 3.0 * se12);
}

TEST_CASE("minimum waveplates scan") {
  // zero noise: the smallest scanned count wins
  ExperimentConfig calm = base_config();
  calm.noise.sigma_phase = 0.0;
  calm.ensemble_size = 128;
  const auto trivial = min_waveplates(calm, 0.9, 64);
  REQUIRE(trivial.has_value());
  CHECK(*trivial == 2);

  // unreachable target under a tight count budget
  ExperimentConfig heavy = base_config();
  heavy.noise.sigma_phase = 50.0;
  heavy.ensemble_size = 512;
  CHECK_FALSE(min_waveplates(heavy, 0.999, 2).has_value());

  CHECK_THROWS_AS(min_waveplates(calm, 0.9, 1), std::invalid_argument);
  CHECK_THROWS_AS(min_waveplates(calm, 1.5, 8), std::invalid_argument);

  // raising the target never lowers the count (shared seed)
  ExperimentConfig c = base_config();
  c.noise.sigma_phase = 2.0;
  c.ensemble_size = 1024;
  const auto lo = min_waveplates(c, 0.9, 512);
  const auto hi = min_waveplates(c, 0.99, 512);
  REQUIRE(lo.has_value());
  REQUIRE(hi.has_value());
  CHECK(*lo <= *hi);
}

TEST_CASE("config validation") {
  ExperimentConfig c = base_config();
  c.ensemble_size = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_config();
  c.fiber_length = -2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_config();
  c.input_state = InputStateKind::Custom;
  c.custom_h = {0.0, 0.0};
  c.custom_v = {0.0, 0.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.custom_h = {1.0, 0.0};
  CHECK_NOTHROW(c.validate());
}
