#include "ddfiber/fiber_noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ddfiber/rng.hpp"

namespace ddfiber {

void NoiseParams::validate() const {
  if (!(mean_seg_len > 0.0) || !std::isfinite(mean_seg_len))
    throw std::invalid_argument("NoiseParams: mean_seg_len must be > 0");
  if (!(sigma_seg_len >= 0.0) || !std::isfinite(sigma_seg_len))
    throw std::invalid_argument("NoiseParams: sigma_seg_len must be >= 0");
  if (!(sigma_phase >= 0.0) || !std::isfinite(sigma_phase))
    throw std::invalid_argument("NoiseParams: sigma_phase must be >= 0");
  if (!std::isfinite(mean_phase))
    throw std::invalid_argument("NoiseParams: mean_phase must be finite");
}

FiberProfile::FiberProfile(std::vector<Segment> segments, double total_length)
    : segments_(std::move(segments)), total_length_(total_length) {
  if (!(total_length_ > 0.0) || !std::isfinite(total_length_))
    throw std::invalid_argument("FiberProfile: total_length must be > 0");
  if (segments_.empty())
    throw std::invalid_argument("FiberProfile: no segments");
  cum_.resize(segments_.size() + 1);
  cum_[0] = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!(segments_[i].length > 0.0))
      throw std::invalid_argument("FiberProfile: segment length must be > 0");
    if (!std::isfinite(segments_[i].phase_rate))
      throw std::invalid_argument("FiberProfile: non-finite phase rate");
    cum_[i + 1] = cum_[i] + segments_[i].length;
  }
  if (cum_.back() < total_length_)
    throw std::invalid_argument("FiberProfile: segments do not cover total_length");
}

double FiberProfile::accumulated_phase(double a, double b) const {
  if (!(a >= 0.0) || !(b >= a) || !(b <= total_length_))
    throw std::invalid_argument("accumulated_phase: interval outside [0, L] or reversed");
  if (a == b) return 0.0;
  // First segment whose right boundary exceeds a.
  std::size_t i =
      std::upper_bound(cum_.begin(), cum_.end(), a) - cum_.begin();
  if (i > 0) --i;
  if (i >= segments_.size()) i = segments_.size() - 1;
  double phase = 0.0;
  double lo = a;
  while (lo < b && i < segments_.size()) {
    const double hi = std::min(b, cum_[i + 1]);
    if (hi > lo) phase += segments_[i].phase_rate * (hi - lo);
    lo = hi;
    ++i;
  }
  return phase;
}

double FiberProfile::signed_phase(std::span<const double> boundaries) const {
  if (boundaries.size() < 2)
    throw std::invalid_argument("signed_phase: need at least two boundaries");
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
    if (!(boundaries[i] <= boundaries[i + 1]))
      throw std::invalid_argument("signed_phase: boundaries not sorted");
  if (!(boundaries.front() >= 0.0) || !(boundaries.back() <= total_length_))
    throw std::invalid_argument("signed_phase: boundaries outside [0, L]");
  double phase = 0.0;
  double sign = 1.0;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    phase += sign * accumulated_phase(boundaries[i], boundaries[i + 1]);
    sign = -sign;
  }
  return phase;
}

std::string FiberProfile::to_json() const {
  nlohmann::json j;
  j["total_length"] = total_length_;
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& s : segments_) segs.push_back({s.length, s.phase_rate});
  j["segments"] = std::move(segs);
  return j.dump();
}

FiberProfile FiberProfile::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Segment> segs;
  for (const auto& e : j.at("segments"))
    segs.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return FiberProfile(std::move(segs), j.at("total_length").get<double>());
}

FiberProfile sample_profile(const NoiseParams& p, double fiber_length,
                            std::uint64_t stream_index) {
  p.validate();
  if (!(fiber_length > 0.0) || !std::isfinite(fiber_length))
    throw std::invalid_argument("sample_profile: fiber_length must be > 0");
  PhiloxStream rng(p.seed, stream_index);
  std::vector<Segment> segs;
  segs.reserve(static_cast<std::size_t>(fiber_length / p.mean_seg_len) + 2);
  double covered = 0.0;
  while (covered < fiber_length) {
    const double len = rng.positive_gaussian(p.mean_seg_len, p.sigma_seg_len);
    const double phase = rng.gaussian(p.mean_phase, p.sigma_phase);
    segs.push_back({len, phase / len});
    covered += len;
  }
  return FiberProfile(std::move(segs), fiber_length);
}

}  // namespace ddfiber
