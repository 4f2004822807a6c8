#include "ddfiber/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ddfiber {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw config_error(5, "invalid value for '" + key + "': '" + v + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw config_error(5, "invalid value for '" + key + "': '" + v +
                              "' (want a nonnegative integer)");
  return x;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(key, tok));
  if (out.empty())
    throw config_error(5, "invalid value for '" + key + "': empty list");
  return out;
}

std::vector<std::size_t> parse_uint_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::istringstream ss(v);
  std::string tok;
  while (ss >> tok) out.push_back(static_cast<std::size_t>(parse_uint(key, tok)));
  if (out.empty())
    throw config_error(5, "invalid value for '" + key + "': empty list");
  return out;
}

complexd parse_complex(const std::string& key, const std::string& v) {
  const std::vector<double> parts = parse_double_list(key, v);
  if (parts.size() != 2)
    throw config_error(5, "invalid value for '" + key + "': want 're im'");
  return {parts[0], parts[1]};
}

InputStateKind parse_state(const std::string& v) {
  if (v == "plus45") return InputStateKind::Plus45;
  if (v == "minus45") return InputStateKind::Minus45;
  if (v == "h") return InputStateKind::H;
  if (v == "v") return InputStateKind::V;
  if (v == "custom") return InputStateKind::Custom;
  throw config_error(5, "invalid value for 'state': '" + v +
                            "' (want plus45|minus45|h|v|custom)");
}

SequenceKind parse_sequence_kind(const std::string& v) {
  if (v == "none") return SequenceKind::None;
  if (v == "cpmg") return SequenceKind::Cpmg;
  if (v == "cp") return SequenceKind::Cp;
  if (v == "pdd") return SequenceKind::Pdd;
  if (v == "udd") return SequenceKind::Udd;
  if (v == "custom") return SequenceKind::Custom;
  throw config_error(5, "invalid value for 'kind': '" + v +
                            "' (want none|cpmg|cp|pdd|udd|custom)");
}

SpectrumKind parse_spectrum_kind(const std::string& v) {
  if (v == "white") return SpectrumKind::White;
  if (v == "lorentzian") return SpectrumKind::Lorentzian;
  if (v == "gaussian_corr") return SpectrumKind::GaussianCorr;
  if (v == "one_over_k") return SpectrumKind::OneOverK;
  throw config_error(5, "invalid value for 'kind': '" + v +
                            "' (want white|lorentzian|gaussian_corr|one_over_k)");
}

}  // namespace

FullConfig parse_config_text(const std::string& text) {
  FullConfig c;
  std::string section;  // "" = top level
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(3, "line " + std::to_string(lineno) +
                                  ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "noise" && section != "sequence" && section != "pulse_error" &&
          section != "spectrum" && section != "sweep" && section != "metadata")
        throw config_error(4, "unknown section '[" + section + "]'");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(3, "line " + std::to_string(lineno) +
                                ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw config_error(3, "line " + std::to_string(lineno) +
                                ": empty key or value");

    if (section == "metadata") {
      c.metadata.emplace_back(key, value);
    } else if (section.empty()) {
      if (key == "state") c.experiment.input_state = parse_state(value);
      else if (key == "custom_h") c.experiment.custom_h = parse_complex(key, value);
      else if (key == "custom_v") c.experiment.custom_v = parse_complex(key, value);
      else if (key == "fiber_length") c.experiment.fiber_length = parse_double(key, value);
      else if (key == "ensemble_size")
        c.experiment.ensemble_size = static_cast<std::size_t>(parse_uint(key, value));
      else if (key == "base_seed") c.experiment.base_seed = parse_uint(key, value);
      else if (key == "threads")
        c.experiment.threads = static_cast<std::size_t>(parse_uint(key, value));
      else throw config_error(4, "unknown key '" + key + "'");
    } else if (section == "noise") {
      if (key == "mean_seg_len") c.experiment.noise.mean_seg_len = parse_double(key, value);
      else if (key == "sigma_seg_len") c.experiment.noise.sigma_seg_len = parse_double(key, value);
      else if (key == "sigma_phase") c.experiment.noise.sigma_phase = parse_double(key, value);
      else if (key == "mean_phase") c.experiment.noise.mean_phase = parse_double(key, value);
      else throw config_error(4, "unknown key 'noise." + key + "'");
    } else if (section == "sequence") {
      if (key == "kind") c.experiment.sequence.kind = parse_sequence_kind(value);
      else if (key == "n_pulses")
        c.experiment.sequence.n_pulses = static_cast<std::size_t>(parse_uint(key, value));
      else if (key == "positions")
        c.experiment.sequence.custom_pulse_positions = parse_double_list(key, value);
      else throw config_error(4, "unknown key 'sequence." + key + "'");
    } else if (section == "pulse_error") {
      if (key == "angle_error") c.experiment.pulse_error.angle_error = parse_double(key, value);
      else if (key == "axis_tilt") c.experiment.pulse_error.axis_tilt = parse_double(key, value);
      else throw config_error(4, "unknown key 'pulse_error." + key + "'");
    } else if (section == "spectrum") {
      if (key == "kind") c.spectrum.kind = parse_spectrum_kind(value);
      else if (key == "amplitude") c.spectrum.amplitude = parse_double(key, value);
      else if (key == "correlation_scale") c.spectrum.correlation_scale = parse_double(key, value);
      else if (key == "cutoff_k") c.spectrum.cutoff_k = parse_double(key, value);
      else throw config_error(4, "unknown key 'spectrum." + key + "'");
    } else {  // sweep
      if (key == "waveplate_counts") c.sweep.waveplate_counts = parse_uint_list(key, value);
      else if (key == "lengths") c.sweep.lengths = parse_double_list(key, value);
      else if (key == "waveplates_per_unit_length")
        c.sweep.waveplates_per_unit_length = parse_double(key, value);
      else if (key == "sigma_len_grid") c.sweep.sigma_len_grid = parse_double_list(key, value);
      else if (key == "sigma_phase_grid") c.sweep.sigma_phase_grid = parse_double_list(key, value);
      else if (key == "target_fidelity") c.sweep.target_fidelity = parse_double(key, value);
      else if (key == "max_count")
        c.sweep.max_count = static_cast<std::size_t>(parse_uint(key, value));
      else if (key == "l_grid") c.sweep.l_grid = parse_double_list(key, value);
      else if (key == "kl_max") c.sweep.kl_max = parse_double(key, value);
      else if (key == "kl_samples")
        c.sweep.kl_samples = static_cast<std::size_t>(parse_uint(key, value));
      else throw config_error(4, "unknown key 'sweep." + key + "'");
    }
  }

  try {
    c.experiment.validate();
    c.spectrum.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(5, e.what());
  }
  return c;
}

FullConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(2, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::json config_to_json(const FullConfig& c) {
  nlohmann::json j;
  j["state"] = to_string(c.experiment.input_state);
  j["custom_h"] = {c.experiment.custom_h.real(), c.experiment.custom_h.imag()};
  j["custom_v"] = {c.experiment.custom_v.real(), c.experiment.custom_v.imag()};
  j["fiber_length"] = c.experiment.fiber_length;
  j["ensemble_size"] = c.experiment.ensemble_size;
  j["base_seed"] = c.experiment.base_seed;
  j["threads"] = c.experiment.threads;
  j["noise"] = {{"mean_seg_len", c.experiment.noise.mean_seg_len},
                {"sigma_seg_len", c.experiment.noise.sigma_seg_len},
                {"sigma_phase", c.experiment.noise.sigma_phase},
                {"mean_phase", c.experiment.noise.mean_phase},
                {"seed", c.experiment.noise.seed}};
  j["sequence"] = {{"kind", to_string(c.experiment.sequence.kind)},
                   {"n_pulses", c.experiment.sequence.n_pulses},
                   {"positions", c.experiment.sequence.custom_pulse_positions}};
  j["pulse_error"] = {{"angle_error", c.experiment.pulse_error.angle_error},
                      {"axis_tilt", c.experiment.pulse_error.axis_tilt}};
  j["spectrum"] = {{"kind", to_string(c.spectrum.kind)},
                   {"amplitude", c.spectrum.amplitude},
                   {"correlation_scale", c.spectrum.correlation_scale},
                   {"cutoff_k", c.spectrum.cutoff_k}};
  j["sweep"] = {{"waveplate_counts", c.sweep.waveplate_counts},
                {"lengths", c.sweep.lengths},
                {"waveplates_per_unit_length", c.sweep.waveplates_per_unit_length},
                {"sigma_len_grid", c.sweep.sigma_len_grid},
                {"sigma_phase_grid", c.sweep.sigma_phase_grid},
                {"target_fidelity", c.sweep.target_fidelity},
                {"max_count", c.sweep.max_count},
                {"l_grid", c.sweep.l_grid},
                {"kl_max", c.sweep.kl_max},
                {"kl_samples", c.sweep.kl_samples}};
  nlohmann::json meta = nlohmann::json::array();
  for (const auto& [k, v] : c.metadata) meta.push_back({k, v});
  j["metadata"] = std::move(meta);
  return j;
}

namespace {
complexd complex_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}
}  // namespace

FullConfig config_from_json(const nlohmann::json& j) {
  FullConfig c;
  c.experiment.input_state = parse_state(j.at("state").get<std::string>());
  c.experiment.custom_h = complex_from_json(j.at("custom_h"));
  c.experiment.custom_v = complex_from_json(j.at("custom_v"));
  c.experiment.fiber_length = j.at("fiber_length").get<double>();
  c.experiment.ensemble_size = j.at("ensemble_size").get<std::size_t>();
  c.experiment.base_seed = j.at("base_seed").get<std::uint64_t>();
  c.experiment.threads = j.at("threads").get<std::size_t>();
  const auto& n = j.at("noise");
  c.experiment.noise.mean_seg_len = n.at("mean_seg_len").get<double>();
  c.experiment.noise.sigma_seg_len = n.at("sigma_seg_len").get<double>();
  c.experiment.noise.sigma_phase = n.at("sigma_phase").get<double>();
  c.experiment.noise.mean_phase = n.at("mean_phase").get<double>();
  c.experiment.noise.seed = n.at("seed").get<std::uint64_t>();
  const auto& s = j.at("sequence");
  c.experiment.sequence.kind = parse_sequence_kind(s.at("kind").get<std::string>());
  c.experiment.sequence.n_pulses = s.at("n_pulses").get<std::size_t>();
  c.experiment.sequence.custom_pulse_positions =
      s.at("positions").get<std::vector<double>>();
  const auto& pe = j.at("pulse_error");
  c.experiment.pulse_error.angle_error = pe.at("angle_error").get<double>();
  c.experiment.pulse_error.axis_tilt = pe.at("axis_tilt").get<double>();
  const auto& sp = j.at("spectrum");
  c.spectrum.kind = parse_spectrum_kind(sp.at("kind").get<std::string>());
  c.spectrum.amplitude = sp.at("amplitude").get<double>();
  c.spectrum.correlation_scale = sp.at("correlation_scale").get<double>();
  c.spectrum.cutoff_k = sp.at("cutoff_k").get<double>();
  const auto& sw = j.at("sweep");
  c.sweep.waveplate_counts = sw.at("waveplate_counts").get<std::vector<std::size_t>>();
  c.sweep.lengths = sw.at("lengths").get<std::vector<double>>();
  c.sweep.waveplates_per_unit_length =
      sw.at("waveplates_per_unit_length").get<double>();
  c.sweep.sigma_len_grid = sw.at("sigma_len_grid").get<std::vector<double>>();
  c.sweep.sigma_phase_grid = sw.at("sigma_phase_grid").get<std::vector<double>>();
  c.sweep.target_fidelity = sw.at("target_fidelity").get<double>();
  c.sweep.max_count = sw.at("max_count").get<std::size_t>();
  c.sweep.l_grid = sw.at("l_grid").get<std::vector<double>>();
  c.sweep.kl_max = sw.at("kl_max").get<double>();
  c.sweep.kl_samples = sw.at("kl_samples").get<std::size_t>();
  for (const auto& m : j.at("metadata"))
    c.metadata.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
  return c;
}

}  // namespace ddfiber
