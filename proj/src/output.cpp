#include "ddfiber/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ddfiber {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CsvTable: row width does not match header");
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (auto& c : cells) row.push_back(std::move(c.text));
  rows_.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_string();
}

std::string run_id(const std::string& canonical_config, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto mix = [&h](unsigned char b) {
    h ^= b;
    h *= 0x100000001b3ull;
  };
  for (unsigned char ch : canonical_config) mix(ch);
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool_version"] = tool_version;
  j["run_id"] = id;
  j["subcommand"] = subcommand;
  j["base_seed"] = base_seed;
  j["outputs"] = outputs;
  j["wall_time_seconds"] = wall_time_seconds;
  j["results"] = results;
  j["config_echo"] = config_echo;
  return j;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_json().dump(2) << '\n';
}

void write_plot_script(const std::string& path, const std::string& csv_name,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, int x_column, int y_column) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "# gnuplot script, run from the directory containing " << csv_name << "\n"
    << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set title '" << title << "'\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n"
    << "set grid\n"
    << "plot '" << csv_name << "' using " << x_column << ":" << y_column
    << " with linespoints\n";
}

}  // namespace ddfiber
