// Strict experiment-configuration parsing: a single key = value format with
// [section] tables. Unknown keys are errors; every physical parameter is
// validated. Errors carry the process exit code they map to.
#ifndef DDFIBER_CONFIG_HPP
#define DDFIBER_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ddfiber/ensemble.hpp"
#include "ddfiber/filter.hpp"

namespace ddfiber {

// 2 missing file, 3 syntax, 4 unknown key, 5 invalid value
class config_error : public std::runtime_error {
 public:
  config_error(int exit_code, const std::string& what)
      : std::runtime_error(what), code(exit_code) {}
  int code;
};

// Sweep/analysis parameters consumed by specific subcommands.
struct SweepConfig {
  std::vector<std::size_t> waveplate_counts{0, 2, 4, 8, 16, 32};
  std::vector<double> lengths{8.0, 16.0, 32.0, 64.0};
  double waveplates_per_unit_length = 0.5;
  std::vector<double> sigma_len_grid{0.0, 0.125, 0.25, 0.375, 0.5};
  std::vector<double> sigma_phase_grid{0.0, 25.0, 50.0, 75.0, 100.0};
  double target_fidelity = 0.99;
  std::size_t max_count = 2048;
  std::vector<double> l_grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  double kl_max = 8.0 * M_PI;
  std::size_t kl_samples = 200;

  bool operator==(const SweepConfig&) const = default;
};

struct FullConfig {
  ExperimentConfig experiment;
  SpectralModel spectrum;
  SweepConfig sweep;
  // free-form [metadata] entries, echoed into the manifest and never used
  std::vector<std::pair<std::string, std::string>> metadata;

  bool operator==(const FullConfig&) const = default;
};

FullConfig parse_config_text(const std::string& text);
FullConfig parse_config_file(const std::string& path);

nlohmann::json config_to_json(const FullConfig& c);
FullConfig config_from_json(const nlohmann::json& j);

}  // namespace ddfiber

#endif
