// CSV tables, the JSON run manifest, and gnuplot script emission.
#ifndef DDFIBER_OUTPUT_HPP
#define DDFIBER_OUTPUT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ddfiber {

inline constexpr const char* kToolVersion = "ddfiber 0.1.0";

// Fixed 12-significant-digit formatting, identical across runs.
std::string format_number(double x);

// One cell: either a preformatted string or a number.
struct CsvCell {
  std::string text;
  CsvCell(const std::string& s) : text(s) {}
  CsvCell(const char* s) : text(s) {}
  CsvCell(double x) : text(format_number(x)) {}
  CsvCell(std::size_t n) : text(std::to_string(n)) {}
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<CsvCell> cells);  // throws on width mismatch
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// FNV-1a over the canonical config text and seed; stable across runs.
std::string run_id(const std::string& canonical_config, std::uint64_t seed);

struct RunManifest {
  nlohmann::json config_echo;
  nlohmann::json results;  // per-point means/std errors, mirrors the CSV
  std::string tool_version = kToolVersion;
  std::string id;
  std::string subcommand;
  std::uint64_t base_seed = 0;
  std::vector<std::string> outputs;
  double wall_time_seconds = 0.0;

  nlohmann::json to_json() const;
  void write(const std::string& path) const;
};

// Self-contained gnuplot script plotting selected columns of a CSV.
void write_plot_script(const std::string& path, const std::string& csv_name,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, int x_column, int y_column);

}  // namespace ddfiber

#endif
