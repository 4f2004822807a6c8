// ddfiber: declarative experiment runner. Parses a config file, dispatches to
// the Monte Carlo engine or the spectral analytics, and writes CSV tables
// plus a JSON run manifest.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddfiber/config.hpp"
#include "ddfiber/ensemble.hpp"
#include "ddfiber/filter.hpp"
#include "ddfiber/output.hpp"

namespace fs = std::filesystem;
using namespace ddfiber;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t ensemble = 0;
  bool ensemble_set = false;
  std::uint64_t threads = 0;
  bool threads_set = false;
  bool plot_script = false;
};

void add_common(CLI::App* sub, CliOptions& o) {
  sub->add_option("--config", o.config_path, "experiment config file")->required();
  sub->add_option("--out", o.out_dir, "output directory")->required();
  sub->add_option("--seed", o.seed, "override base_seed")
      ->each([&o](const std::string&) { o.seed_set = true; });
  sub->add_option("--ensemble", o.ensemble, "override ensemble_size")
      ->each([&o](const std::string&) { o.ensemble_set = true; });
  sub->add_option("--threads", o.threads, "worker threads (0 = hardware)")
      ->each([&o](const std::string&) { o.threads_set = true; });
  sub->add_flag("--plot-script", o.plot_script, "also emit a gnuplot script");
}

// Tracks files written during a run so partial outputs can be removed on
// failure.
class OutputSet {
 public:
  explicit OutputSet(const fs::path& dir) : dir_(dir) { fs::create_directories(dir); }
  fs::path path(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }
  const std::vector<std::string>& names() const { return names_; }
  void remove_all() {
    std::error_code ec;
    for (const auto& n : names_) fs::remove(dir_ / n, ec);
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

int run_subcommand(const std::string& name, const CliOptions& o) {
  FullConfig cfg = parse_config_file(o.config_path);
  if (o.seed_set) cfg.experiment.base_seed = o.seed;
  if (o.ensemble_set) cfg.experiment.ensemble_size = static_cast<std::size_t>(o.ensemble);
  if (o.threads_set) {
    cfg.experiment.threads = static_cast<std::size_t>(o.threads);
  } else if (const char* env = std::getenv("DDFIBER_THREADS")) {
    cfg.experiment.threads = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }
  try {
    cfg.experiment.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(5, e.what());
  }

  const auto t0 = std::chrono::steady_clock::now();
  OutputSet outputs(o.out_dir);
  RunManifest manifest;
  manifest.subcommand = name;
  manifest.base_seed = cfg.experiment.base_seed;
  manifest.config_echo = config_to_json(cfg);
  manifest.id = run_id(manifest.config_echo.dump(), cfg.experiment.base_seed);

  try {
    const std::string csv_name = name + ".csv";
    std::string plot_title, xlabel, ylabel;
    int plot_x = 1, plot_y = 2;

    if (name == "ensemble") {
      const FidelityEstimate e = run_ensemble(cfg.experiment);
      CsvTable t({"fidelity", "std_error", "ensemble_size"});
      t.add_row({e.mean, e.std_error, e.ensemble_size});
      t.write(outputs.path(csv_name).string());
      manifest.results = {{"fidelity", e.mean},
                          {"std_error", e.std_error},
                          {"ensemble_size", e.ensemble_size}};
    } else if (name == "sweep-waveplates") {
      const auto rows = sweep_waveplates(cfg.experiment, cfg.sweep.waveplate_counts);
      CsvTable t({"n_waveplates", "fidelity", "std_error", "ensemble_size"});
      manifest.results = nlohmann::json::array();
      for (const auto& r : rows) {
        t.add_row({r.count, r.estimate.mean, r.estimate.std_error,
                   r.estimate.ensemble_size});
        manifest.results.push_back({{"n_waveplates", r.count},
                                    {"fidelity", r.estimate.mean},
                                    {"std_error", r.estimate.std_error}});
      }
      t.write(outputs.path(csv_name).string());
      plot_title = "fidelity vs waveplate count";
      xlabel = "waveplates";
      ylabel = "fidelity";
    } else if (name == "sweep-lengths") {
      const auto rows = sweep_lengths(cfg.experiment, cfg.sweep.lengths,
                                      cfg.sweep.waveplates_per_unit_length);
      CsvTable t({"fiber_length", "n_waveplates", "fidelity", "std_error",
                  "ensemble_size"});
      manifest.results = nlohmann::json::array();
      for (const auto& r : rows) {
        t.add_row({r.length, r.count, r.estimate.mean, r.estimate.std_error,
                   r.estimate.ensemble_size});
        manifest.results.push_back({{"fiber_length", r.length},
                                    {"n_waveplates", r.count},
                                    {"fidelity", r.estimate.mean},
                                    {"std_error", r.estimate.std_error}});
      }
      t.write(outputs.path(csv_name).string());
      plot_title = "fidelity vs fiber length";
      xlabel = "fiber length";
      ylabel = "fidelity";
      plot_y = 3;
    } else if (name == "contour") {
      const auto res = contour_noise(cfg.experiment, cfg.sweep.sigma_len_grid,
                                     cfg.sweep.sigma_phase_grid);
      CsvTable t({"sigma_seg_len", "sigma_phase", "fidelity", "std_error",
                  "ensemble_size"});
      manifest.results = nlohmann::json::array();
      for (std::size_t i = 0; i < res.sigma_len_grid.size(); ++i)
        for (std::size_t j = 0; j < res.sigma_phase_grid.size(); ++j) {
          const auto& e = res.cells[i * res.sigma_phase_grid.size() + j];
          t.add_row({res.sigma_len_grid[i], res.sigma_phase_grid[j], e.mean,
                     e.std_error, e.ensemble_size});
          manifest.results.push_back({{"sigma_seg_len", res.sigma_len_grid[i]},
                                      {"sigma_phase", res.sigma_phase_grid[j]},
                                      {"fidelity", e.mean},
                                      {"std_error", e.std_error}});
        }
      t.write(outputs.path(csv_name).string());
    } else if (name == "min-waveplates") {
      CsvTable t({"fiber_length", "target_fidelity", "min_waveplates"});
      manifest.results = nlohmann::json::array();
      for (double l : cfg.sweep.lengths) {
        ExperimentConfig ec = cfg.experiment;
        ec.fiber_length = l;
        const auto r = min_waveplates(ec, cfg.sweep.target_fidelity,
                                      cfg.sweep.max_count);
        t.add_row({l, cfg.sweep.target_fidelity,
                   r ? CsvCell(*r) : CsvCell("NOT_ACHIEVABLE")});
        nlohmann::json row = {{"fiber_length", l},
                              {"target_fidelity", cfg.sweep.target_fidelity}};
        if (r)
          row["min_waveplates"] = *r;
        else
          row["min_waveplates"] = "NOT_ACHIEVABLE";
        manifest.results.push_back(std::move(row));
      }
      t.write(outputs.path(csv_name).string());
      plot_title = "minimum waveplates vs fiber length";
      xlabel = "fiber length";
      ylabel = "waveplates";
      plot_y = 3;
    } else if (name == "w-curve") {
      const FilterSpec f =
          FilterSpec::from_sequence(cfg.experiment.sequence.instantiate(1.0));
      const auto rows = w_curve(cfg.spectrum, f, cfg.sweep.l_grid);
      CsvTable t({"fiber_length", "w"});
      manifest.results = nlohmann::json::array();
      for (const auto& r : rows) {
        t.add_row({r.length, r.w});
        manifest.results.push_back({{"fiber_length", r.length}, {"w", r.w}});
      }
      t.write(outputs.path(csv_name).string());
      plot_title = "decoherence function";
      xlabel = "fiber length";
      ylabel = "W";
    } else {  // filter-table
      const auto rows = cpmg4_audit_table(cfg.sweep.kl_samples, cfg.sweep.kl_max);
      CsvTable t({"kL", "filter_general_cpmg4", "filter_closed_cpmg4", "abs_diff"});
      for (const auto& r : rows)
        t.add_row({r.kl, r.f_general, r.f_closed, r.abs_diff});
      t.write(outputs.path(csv_name).string());
      plot_title = "CPMG-4 filter functions";
      xlabel = "kL";
      ylabel = "F(kL)";
    }

    if (o.plot_script && !plot_title.empty()) {
      write_plot_script(outputs.path(name + ".gp").string(), csv_name, plot_title,
                        xlabel, ylabel, plot_x, plot_y);
    }

    manifest.outputs = outputs.names();
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.outputs.push_back("manifest.json");
    manifest.write((fs::path(o.out_dir) / "manifest.json").string());
  } catch (...) {
    outputs.remove_all();
    throw;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ddfiber: dynamical-decoupling waveplate simulator for "
               "polarization qubits in birefringent fiber"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {
      "ensemble",       "sweep-waveplates", "sweep-lengths", "contour",
      "min-waveplates", "w-curve",          "filter-table"};
  const std::vector<std::string> descriptions = {
      "Monte Carlo fidelity for one configuration",
      "fidelity vs CPMG waveplate count",
      "fidelity vs fiber length at fixed waveplate density",
      "fidelity grid over noise standard deviations",
      "minimum waveplates meeting a fidelity target per length",
      "decoherence function W over a length grid",
      "CPMG-4 closed-form vs general filter comparison table"};
  CliOptions opts;
  for (std::size_t i = 0; i < names.size(); ++i)
    add_common(app.add_subcommand(names[i], descriptions[i]), opts);

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return run_subcommand(sub, opts);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const quadrature_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 10;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 10;
  }
}
