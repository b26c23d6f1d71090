// Copyright 2026 The pulsevqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pulsevqe/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

using nlohmann::json;

constexpr int kPulseSchemaVersion = 1;

void check_time(double t, double total_time) {
  if (!(t >= 0.0 && t <= total_time)) {
    throw ValidationError("time " + std::to_string(t) + " outside [0, " +
                          std::to_string(total_time) + "]");
  }
}

}  // namespace

double amplitude_at(const SquarePulse& pulse, double t, double total_time) {
  check_time(t, total_time);
  const auto it = std::upper_bound(pulse.switch_times.begin(), pulse.switch_times.end(), t);
  return pulse.amps[static_cast<std::size_t>(it - pulse.switch_times.begin())];
}

double amplitude_at(const GaussianPulse& pulse, double t, double total_time) {
  check_time(t, total_time);
  double sum = 0.0;
  for (const auto& c : pulse.components) {
    const double z = (t - c.center) / c.width;
    sum += c.amp * std::exp(-0.5 * z * z);
  }
  return std::clamp(sum, -pulse.clip, pulse.clip);
}

double PulseSet::frequency(std::size_t k) const {
  return kind == PulseKind::square ? square.at(k).freq : gaussian.at(k).freq;
}

double PulseSet::amplitude(std::size_t k, double t) const {
  return kind == PulseKind::square ? amplitude_at(square[k], t, total_time)
                                   : amplitude_at(gaussian[k], t, total_time);
}

std::vector<double> PulseSet::breakpoints() const {
  std::vector<double> out;
  if (kind == PulseKind::square) {
    for (const auto& p : square) out.insert(out.end(), p.switch_times.begin(), p.switch_times.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void PulseSet::validate() const {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw ValidationError("total_time must be positive");
  }
  if (kind == PulseKind::square) {
    if (!gaussian.empty()) throw ValidationError("square pulse set holds Gaussian pulses");
    for (std::size_t k = 0; k < square.size(); ++k) {
      const auto& p = square[k];
      const std::string tag = "pulse " + std::to_string(k);
      if (p.amps.empty()) throw ValidationError(tag + ": needs at least one segment");
      if (p.switch_times.size() + 1 != p.amps.size()) {
        throw ValidationError(tag + ": expected " + std::to_string(p.amps.size() - 1) +
                              " switch times");
      }
      double prev = 0.0;
      for (double t : p.switch_times) {
        if (!(t > prev) || !(t < total_time)) {
          throw ValidationError(tag + ": switch times must be strictly increasing inside (0, T)");
        }
        prev = t;
      }
      for (double a : p.amps) {
        if (!std::isfinite(a)) throw ValidationError(tag + ": amplitude not finite");
      }
      if (!std::isfinite(p.freq)) throw ValidationError(tag + ": frequency not finite");
    }
  } else {
    if (!square.empty()) throw ValidationError("Gaussian pulse set holds square pulses");
    for (std::size_t k = 0; k < gaussian.size(); ++k) {
      for (const auto& c : gaussian[k].components) {
        if (!(c.width > 0.0)) {
          throw ValidationError("pulse " + std::to_string(k) + ": Gaussian width must be positive");
        }
      }
    }
  }
}

PulseSet PulseSet::zero_square(std::size_t n, double total_time, const std::vector<double>& freqs,
                               std::size_t segments) {
  if (freqs.size() != n) throw DimensionError("one frequency per transmon required");
  PulseSet set;
  set.kind = PulseKind::square;
  set.total_time = total_time;
  for (std::size_t k = 0; k < n; ++k) {
    SquarePulse p;
    p.amps.assign(segments, 0.0);
    for (std::size_t j = 1; j < segments; ++j) {
      p.switch_times.push_back(total_time * static_cast<double>(j) / static_cast<double>(segments));
    }
    p.freq = freqs[k];
    set.square.push_back(std::move(p));
  }
  return set;
}

bool ParamVector::in_bounds() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= lower[i] && values[i] <= upper[i])) return false;
  }
  return true;
}

ParamVector ParamVector::with_values(std::vector<double> v) const {
  if (v.size() != values.size()) throw DimensionError("parameter vector length mismatch");
  ParamVector out = *this;
  out.values = std::move(v);
  return out;
}

ParamVector pack(const PulseSet& set, PackMode mode, const PulseBounds& bounds,
                 const std::vector<double>& omega) {
  set.validate();
  if (omega.size() != set.size()) throw DimensionError("one device frequency per pulse required");
  ParamVector pv;
  pv.mode = mode;
  const double T = set.total_time;
  auto push = [&](double v, int k, ParamRole role, int idx, double lo, double hi) {
    pv.values.push_back(v);
    pv.layout.push_back({k, role, idx});
    pv.lower.push_back(lo);
    pv.upper.push_back(hi);
  };
  for (std::size_t ku = 0; ku < set.size(); ++ku) {
    const int k = static_cast<int>(ku);
    if (set.kind == PulseKind::square) {
      const auto& p = set.square[ku];
      for (std::size_t j = 0; j < p.amps.size(); ++j) {
        push(p.amps[j], k, ParamRole::amp, static_cast<int>(j), -bounds.amp_bound, bounds.amp_bound);
      }
      if (mode == PackMode::full) {
        for (std::size_t j = 0; j < p.switch_times.size(); ++j) {
          push(p.switch_times[j], k, ParamRole::switch_time, static_cast<int>(j),
               bounds.switch_margin, T - bounds.switch_margin);
        }
      }
    } else {
      const auto& p = set.gaussian[ku];
      for (std::size_t i = 0; i < p.components.size(); ++i) {
        const auto& c = p.components[i];
        const int idx = static_cast<int>(i);
        push(c.amp, k, ParamRole::gauss_amp, idx, -bounds.amp_bound, bounds.amp_bound);
        push(c.center, k, ParamRole::gauss_center, idx, 0.0, T);
        push(c.width, k, ParamRole::gauss_width, idx, bounds.min_width, T);
      }
    }
    push(set.frequency(ku), k, ParamRole::freq, 0, omega[ku] - bounds.freq_window,
         omega[ku] + bounds.freq_window);
  }
  return pv;
}

PulseSet unpack(const ParamVector& params, const PulseSet& tmpl, RepairLog* log) {
  if (params.values.size() != params.layout.size()) throw DimensionError("layout length mismatch");
  PulseSet out = tmpl;
  RepairLog local;
  double amp_clip = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    double v = params.values[i];
    if (v < params.lower[i] || v > params.upper[i]) {
      v = std::clamp(v, params.lower[i], params.upper[i]);
      ++local.clamped;
    }
    const auto& slot = params.layout[i];
    const auto k = static_cast<std::size_t>(slot.transmon);
    const auto j = static_cast<std::size_t>(slot.index);
    if (k >= out.size()) throw DimensionError("layout references a missing transmon");
    switch (slot.role) {
      case ParamRole::amp: out.square[k].amps.at(j) = v; break;
      case ParamRole::switch_time: out.square[k].switch_times.at(j) = v; break;
      case ParamRole::freq:
        (out.kind == PulseKind::square ? out.square[k].freq : out.gaussian[k].freq) = v;
        break;
      case ParamRole::gauss_amp:
        out.gaussian[k].components.at(j).amp = v;
        amp_clip = std::max(std::abs(params.lower[i]), std::abs(params.upper[i]));
        break;
      case ParamRole::gauss_center: out.gaussian[k].components.at(j).center = v; break;
      case ParamRole::gauss_width: out.gaussian[k].components.at(j).width = v; break;
    }
  }
  if (out.kind == PulseKind::gaussian && std::isfinite(amp_clip)) {
    for (auto& p : out.gaussian) p.clip = amp_clip;
  }
  if (out.kind == PulseKind::square) {
    for (auto& p : out.square) {
      auto& ts = p.switch_times;
      if (!std::is_sorted(ts.begin(), ts.end())) {
        std::sort(ts.begin(), ts.end());
        ++local.reordered;
      }
      if (ts.empty()) continue;
      // Separate coincident times forward, then pull back inside (0, T).
      for (std::size_t j = 1; j < ts.size(); ++j) ts[j] = std::max(ts[j], ts[j - 1] + kMinSwitchGap);
      const double hi = out.total_time - kMinSwitchGap;
      if (ts.back() > hi) {
        ts.back() = hi;
        for (std::size_t j = ts.size() - 1; j-- > 0;) ts[j] = std::min(ts[j], ts[j + 1] - kMinSwitchGap);
      }
    }
  }
  out.validate();
  if (log) {
    log->clamped += local.clamped;
    log->reordered += local.reordered;
  }
  return out;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SquarePulse split_largest_segment_at(const SquarePulse& pulse, double total_time, double u) {
  std::vector<double> edges;
  edges.reserve(pulse.amps.size() + 1);
  edges.push_back(0.0);
  edges.insert(edges.end(), pulse.switch_times.begin(), pulse.switch_times.end());
  edges.push_back(total_time);
  std::size_t best = 0;
  for (std::size_t j = 1; j + 1 < edges.size(); ++j) {
    if (edges[j + 1] - edges[j] > edges[best + 1] - edges[best]) best = j;
  }
  const double a = edges[best];
  const double b = edges[best + 1];
  const double t = (b - a < 2.0 * kSplitMargin) ? 0.5 * (a + b)
                                                : a + kSplitMargin + u * (b - a - 2.0 * kSplitMargin);
  SquarePulse out = pulse;
  out.amps.insert(out.amps.begin() + static_cast<std::ptrdiff_t>(best), pulse.amps[best]);
  out.switch_times.insert(out.switch_times.begin() + static_cast<std::ptrdiff_t>(best), t);
  return out;
}

SquarePulse split_largest_segment(const SquarePulse& pulse, double total_time, std::mt19937_64& rng) {
  return split_largest_segment_at(pulse, total_time, uniform01(rng));
}

PulseSet parse_pulse_set(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed pulse JSON: ") + e.what());
  }
  PulseSet set;
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "square") {
      set.kind = PulseKind::square;
    } else if (kind == "gaussian") {
      set.kind = PulseKind::gaussian;
    } else {
      throw ParseError("unknown pulse kind '" + kind + "'");
    }
    set.total_time = doc.at("total_time").get<double>();
    for (const auto& p : doc.at("pulses")) {
      if (set.kind == PulseKind::square) {
        SquarePulse sp;
        sp.freq = p.at("freq").get<double>();
        sp.amps = p.at("amps").get<std::vector<double>>();
        sp.switch_times = p.value("switch_times", std::vector<double>{});
        set.square.push_back(std::move(sp));
      } else {
        GaussianPulse gp;
        gp.freq = p.at("freq").get<double>();
        for (const auto& c : p.at("components")) {
          gp.components.push_back(
              {c.at("amp").get<double>(), c.at("center").get<double>(), c.at("width").get<double>()});
        }
        if (p.contains("clip")) gp.clip = p["clip"].get<double>();
        set.gaussian.push_back(std::move(gp));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("pulse document: ") + e.what());
  }
  set.validate();
  return set;
}

PulseSet load_pulse_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pulse file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_pulse_set(buffer.str());
}

nlohmann::json to_json(const PulseSet& set) {
  json pulses = json::array();
  if (set.kind == PulseKind::square) {
    for (const auto& p : set.square) {
      pulses.push_back({{"freq", p.freq}, {"amps", p.amps}, {"switch_times", p.switch_times}});
    }
  } else {
    for (const auto& p : set.gaussian) {
      json comps = json::array();
      for (const auto& c : p.components) {
        comps.push_back({{"amp", c.amp}, {"center", c.center}, {"width", c.width}});
      }
      json entry = {{"freq", p.freq}, {"components", comps}};
      if (std::isfinite(p.clip)) entry["clip"] = p.clip;
      pulses.push_back(std::move(entry));
    }
  }
  return {{"schema_version", kPulseSchemaVersion},
          {"kind", set.kind == PulseKind::square ? "square" : "gaussian"},
          {"total_time", set.total_time},
          {"pulses", pulses}};
}

void save_pulse_set(const PulseSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write pulse file '" + path + "'");
  out << to_json(set).dump(2) << '\n';
}

const char* role_name(ParamRole role) {
  switch (role) {
    case ParamRole::amp: return "amp";
    case ParamRole::switch_time: return "switch_time";
    case ParamRole::freq: return "freq";
    case ParamRole::gauss_amp: return "gauss_amp";
    case ParamRole::gauss_center: return "gauss_center";
    case ParamRole::gauss_width: return "gauss_width";
  }
  return "unknown";
}

}  // namespace pulsevqe
