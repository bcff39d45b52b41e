/* Copyright (c) 2026 The scenaware Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "io.hpp"

namespace scenaware {

struct ManifestEntry {
  std::string utt_id;
  std::string path;  // as written; relative paths resolve against the manifest dir
  std::string scenario_label;
  double duration_s = 0.0;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::string base_dir;  // directory the manifest was loaded from

  std::string ResolvePath(const ManifestEntry& e) const;
  std::vector<std::string> Labels() const;  // sorted, unique
};

// TSV, no header: utt_id, path, scenario_label, duration_s.
Manifest LoadManifest(const std::string& path);
Manifest ParseManifest(const std::string& text, const std::string& base_dir = {});
void SaveManifest(const std::string& path, const Manifest& manifest);
std::string FormatManifest(const Manifest& manifest);

enum class NoiseKind { kColoredNoise, kHarmonicHum, kBandpassChannel, kImpulsive, kBabbleLike };

const char* NoiseKindName(NoiseKind kind);

struct FilterParams {
  double hum_hz = 60.0;          // harmonic_hum fundamental
  int hum_harmonics = 6;
  double band_lo_hz = 300.0;     // bandpass_channel passband
  double band_hi_hz = 2400.0;
  double click_rate_hz = 6.0;    // impulsive: Poisson rate
  double click_decay_s = 0.004;
  double babble_lo_hz = 300.0;   // babble_like: band-limited noise under a
  double babble_hi_hz = 2400.0;  // two-tone syllabic envelope
  double babble_mod_hz = 4.0;
};

struct ScenarioSpec {
  std::string label;
  NoiseKind noise_kind = NoiseKind::kColoredNoise;
  double snr_db = 10.0;
  FilterParams filter;
};

// Throws on out-of-range SNR or parameters that would give an unstable filter.
void ValidateScenario(const ScenarioSpec& spec, int sample_rate);

// hum (60 Hz, 20 dB), pink (0 dB), bandpass (300-2400 Hz, 10 dB), clicks
// (20 dB) and babble (10 dB). babble shares the bandpass passband and differs
// from it only by its syllabic-rate envelope.
std::vector<ScenarioSpec> DefaultScenarios();

struct CorpusOptions {
  int utts_per_scenario = 100;
  // > 0: every utterance has this duration; otherwise uniform in [min, max].
  double duration_s = 0.0;
  double min_duration_s = 2.0;
  double max_duration_s = 10.0;
  int sample_rate = 8000;
  std::uint64_t seed = 7;
  int threads = 1;
  // Shortest admissible duration (one context window).
  double min_window_s = 0.975;
};

// Pre-mix components of one synthetic utterance; the mix is carrier + noise.
struct SynthesizedUtterance {
  std::vector<double> carrier;
  std::vector<double> noise;
  std::vector<double> mix;  // scaled into [-1, 1]
};

SynthesizedUtterance SynthesizeUtterance(const ScenarioSpec& spec, double duration_s,
                                         int sample_rate, std::uint64_t seed);

// Writes <out_dir>/wavs/<utt_id>.wav and <out_dir>/manifest.tsv.
Manifest GenerateCorpus(const std::vector<ScenarioSpec>& specs, const CorpusOptions& opts,
                        const std::string& out_dir);

double SignalPower(const std::vector<double>& x);

}  // namespace scenaware
