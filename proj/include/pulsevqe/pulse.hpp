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

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace pulsevqe {

/// Piecewise-constant envelope: amps[j] on [switch_times[j-1], switch_times[j]).
/// Amplitudes and frequency in GHz, times in ns.
struct SquarePulse {
  std::vector<double> amps;
  std::vector<double> switch_times;
  double freq = 0.0;

  std::size_t segments() const { return amps.size(); }
};

struct GaussianComponent {
  double amp = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// Sum of Gaussians, clipped to +-clip.
struct GaussianPulse {
  std::vector<GaussianComponent> components;
  double freq = 0.0;
  double clip = std::numeric_limits<double>::infinity();
};

enum class PulseKind { square, gaussian };

/// One drive per transmon, uniform kind, shared duration.
struct PulseSet {
  PulseKind kind = PulseKind::square;
  double total_time = 0.0;
  std::vector<SquarePulse> square;
  std::vector<GaussianPulse> gaussian;

  std::size_t size() const { return kind == PulseKind::square ? square.size() : gaussian.size(); }
  double frequency(std::size_t k) const;
  /// Envelope of transmon k at time t in [0, T].
  double amplitude(std::size_t k, double t) const;
  /// All switch times of all transmons (empty for Gaussian pulses).
  std::vector<double> breakpoints() const;
  /// Throws ValidationError unless every pulse is well formed.
  void validate() const;

  static PulseSet zero_square(std::size_t n_transmons, double total_time,
                              const std::vector<double>& freqs, std::size_t segments = 1);
};

/// Right-continuous lookup; t = T maps to the last segment.
double amplitude_at(const SquarePulse& pulse, double t, double total_time);
double amplitude_at(const GaussianPulse& pulse, double t, double total_time);

enum class PackMode {
  full,      // amps, switch times and frequency per transmon
  adaptive,  // amps and frequency only; switch times fixed
};

enum class ParamRole { amp, switch_time, freq, gauss_amp, gauss_center, gauss_width };

struct ParamSlot {
  int transmon = 0;
  ParamRole role = ParamRole::amp;
  int index = 0;
};

/// Box constraints attached when a pulse set is packed.
struct PulseBounds {
  double amp_bound = 0.02;      // GHz
  double freq_window = 1.0;     // GHz around omega_k
  double switch_margin = 0.1;   // ns kept clear of 0 and T
  double min_width = 0.1;       // ns, Gaussian sigma lower bound

  static PulseBounds standard() { return {}; }
  static PulseBounds adaptive() { return {0.04, 1.5, 0.1, 0.1}; }
};

/// Flat optimizer vector with a layout and per-entry bounds.
struct ParamVector {
  std::vector<double> values;
  std::vector<ParamSlot> layout;
  std::vector<double> lower;
  std::vector<double> upper;
  PackMode mode = PackMode::full;

  std::size_t size() const { return values.size(); }
  bool in_bounds() const;
  ParamVector with_values(std::vector<double> v) const;
};

ParamVector pack(const PulseSet& set, PackMode mode, const PulseBounds& bounds,
                 const std::vector<double>& omega);

struct RepairLog {
  int clamped = 0;
  int reordered = 0;

  int total() const { return clamped + reordered; }
};

inline constexpr double kMinSwitchGap = 1e-6;  // ns

/// Writes params into a copy of the template. Out-of-bound entries are
/// clamped; crossing switch times are sorted and separated.
PulseSet unpack(const ParamVector& params, const PulseSet& tmpl, RepairLog* log = nullptr);

/// Uniform double in [0, 1) from 53 random bits, stable across standard libraries.
double uniform01(std::mt19937_64& rng);

inline constexpr double kSplitMargin = 0.1;  // ns

/// Splits the longest segment at a + margin + u (b - a - 2 margin); falls back to
/// the midpoint when the segment is shorter than twice the margin.
SquarePulse split_largest_segment_at(const SquarePulse& pulse, double total_time, double u);
SquarePulse split_largest_segment(const SquarePulse& pulse, double total_time, std::mt19937_64& rng);

/// Pulse file I/O.
PulseSet parse_pulse_set(std::string_view text);
PulseSet load_pulse_set(const std::string& path);
nlohmann::json to_json(const PulseSet& set);
void save_pulse_set(const PulseSet& set, const std::string& path);

const char* role_name(ParamRole role);

}  // namespace pulsevqe
