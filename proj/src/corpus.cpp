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

#include "corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

#include "parallel.hpp"
#include "rng.hpp"

namespace fs = std::filesystem;

namespace scenaware {

// ---------------------------------------------------------------------------
// Manifest

std::string Manifest::ResolvePath(const ManifestEntry& e) const {
  const fs::path p(e.path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (fs::path(base_dir) / p).string();
}

std::vector<std::string> Manifest::Labels() const {
  std::set<std::string> labels;
  for (const auto& e : entries) labels.insert(e.scenario_label);
  return {labels.begin(), labels.end()};
}

Manifest ParseManifest(const std::string& text, const std::string& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    const std::string where = "manifest line " + std::to_string(line_no) + ": ";
    if (cols.size() != 4)
      Fail(ErrorKind::kFormat,
           where + "expected 4 tab-separated columns, got " + std::to_string(cols.size()));
    ManifestEntry e{cols[0], cols[1], cols[2], 0.0};
    if (e.utt_id.empty()) Fail(ErrorKind::kFormat, where + "empty utt_id");
    const auto& d = cols[3];
    auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), e.duration_s);
    if (ec != std::errc() || ptr != d.data() + d.size() || !std::isfinite(e.duration_s))
      Fail(ErrorKind::kFormat, where + "non-numeric duration '" + d + "'");
    if (!seen.insert(e.utt_id).second)
      Fail(ErrorKind::kFormat, where + "duplicate utt_id '" + e.utt_id + "'");
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest LoadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open manifest " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseManifest(ss.str(), fs::path(path).parent_path().string());
}

std::string FormatManifest(const Manifest& manifest) {
  std::string out;
  char dur[64];
  for (const auto& e : manifest.entries) {
    std::snprintf(dur, sizeof dur, "%.6f", e.duration_s);
    out += e.utt_id + '\t' + e.path + '\t' + e.scenario_label + '\t' + dur + '\n';
  }
  return out;
}

void SaveManifest(const std::string& path, const Manifest& manifest) {
  const std::string text = FormatManifest(manifest);
  WriteFileBytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

// ---------------------------------------------------------------------------
// Scenario synthesis

const char* NoiseKindName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kColoredNoise: return "colored_noise";
    case NoiseKind::kHarmonicHum: return "harmonic_hum";
    case NoiseKind::kBandpassChannel: return "bandpass_channel";
    case NoiseKind::kImpulsive: return "impulsive";
    case NoiseKind::kBabbleLike: return "babble_like";
  }
  return "unknown";
}

namespace {

// RBJ cookbook biquad, direct form I.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;

  static Biquad Make(double b0, double b1, double b2, double a0, double a1, double a2) {
    return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
  }
  static Biquad Lowpass(double f, double q, int sr) {
    const double w = 2 * std::numbers::pi * f / sr, c = std::cos(w), al = std::sin(w) / (2 * q);
    return Make((1 - c) / 2, 1 - c, (1 - c) / 2, 1 + al, -2 * c, 1 - al);
  }
  static Biquad Highpass(double f, double q, int sr) {
    const double w = 2 * std::numbers::pi * f / sr, c = std::cos(w), al = std::sin(w) / (2 * q);
    return Make((1 + c) / 2, -(1 + c), (1 + c) / 2, 1 + al, -2 * c, 1 - al);
  }

  // Both poles strictly inside the unit circle (stability triangle).
  bool Stable() const { return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2; }

  void Apply(std::vector<double>& x) const {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    for (auto& v : x) {
      const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
};

constexpr double kButterworthQ = 0.7071067811865476;

std::vector<double> WhiteNoise(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.Normal();
  return x;
}

// Paul Kellet's refined pink-noise filter.
std::vector<double> PinkNoise(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
  for (auto& v : x) {
    const double w = rng.Normal();
    b0 = 0.99886 * b0 + w * 0.0555179;
    b1 = 0.99332 * b1 + w * 0.0750759;
    b2 = 0.96900 * b2 + w * 0.1538520;
    b3 = 0.86650 * b3 + w * 0.3104856;
    b4 = 0.55000 * b4 + w * 0.5329522;
    b5 = -0.7616 * b5 - w * 0.0168980;
    v = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
    b6 = w * 0.115926;
  }
  return x;
}

// Speech-like carrier: 3-5 harmonics of a random-walk pitch, amplitude
// modulated at a syllable-like 2-8 Hz rate. The signal is cut into phrase
// segments of 0.2-1.2 s (some near silent); each segment redraws its
// formant-like partials, keeping the fundamental, and harmonic weights drift.
std::vector<double> Carrier(std::size_t n, int sr, Rng& rng) {
  const double f0_center = rng.Uniform(90.0, 220.0);
  const std::size_t harmonics = 3 + rng.Index(3);
  const int max_number =
      std::max(static_cast<int>(harmonics), static_cast<int>(std::min(3400.0, 0.42 * sr) / f0_center));
  const double am_rate = rng.Uniform(2.0, 8.0);
  const double am_phase = rng.Uniform(0.0, 2 * std::numbers::pi);
  std::vector<double> phase(harmonics);
  for (auto& p : phase) p = rng.Uniform(0.0, 2 * std::numbers::pi);

  // Control tracks at 100 Hz.
  const std::size_t ctrl_step = static_cast<std::size_t>(sr / 100);
  const std::size_t num_ctrl = n / ctrl_step + 2;
  std::vector<double> pitch(num_ctrl), level(num_ctrl);
  std::vector<std::vector<double>> weight(harmonics, std::vector<double>(num_ctrl));
  std::vector<std::vector<int>> number(num_ctrl);
  std::vector<int> current(harmonics, 1);
  std::vector<double> lw(harmonics, 0.0);
  double w = 0.0;
  double seg_level = 1.0;
  std::size_t seg_left = 0;
  for (std::size_t c = 0; c < num_ctrl; ++c) {
    if (seg_left == 0) {
      seg_left = static_cast<std::size_t>(rng.Uniform(20.0, 120.0));
      seg_level = rng.Uniform() < 0.3 ? 0.01 : rng.Uniform(0.3, 1.0);
      for (std::size_t h = 1; h < harmonics; ++h) {
        int k = 0;
        do {
          k = 2 + static_cast<int>(rng.Index(static_cast<std::uint64_t>(max_number - 1)));
        } while (std::find(current.begin(), current.begin() + h, k) != current.begin() + h);
        current[h] = k;
      }
    }
    --seg_left;
    level[c] = seg_level;
    number[c] = current;
    w = std::clamp(0.98 * w + 0.05 * rng.Normal(), -0.6, 0.6);
    pitch[c] = w;
    for (std::size_t h = 0; h < harmonics; ++h) {
      lw[h] = std::clamp(0.97 * lw[h] + 0.15 * rng.Normal(), -1.5, 1.5);
      weight[h][c] = std::exp(lw[h]) / std::sqrt(current[h]);
    }
  }
  // 30 ms smoothing of the phrase steps.
  std::vector<double> smooth(num_ctrl);
  for (std::size_t c = 0; c < num_ctrl; ++c) {
    const std::size_t lo = c >= 1 ? c - 1 : 0;
    const std::size_t hi = std::min(num_ctrl - 1, c + 1);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += level[k];
    smooth[c] = s / static_cast<double>(hi - lo + 1);
  }

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i / ctrl_step;
    const double frac = static_cast<double>(i % ctrl_step) / ctrl_step;
    const auto lerp = [&](const std::vector<double>& v) { return v[c] + frac * (v[c + 1] - v[c]); };
    const double f0 = f0_center * std::exp(lerp(pitch));
    double s = 0.0;
    for (std::size_t h = 0; h < harmonics; ++h) {
      const double f = f0 * number[c][h];
      phase[h] += 2 * std::numbers::pi * f / sr;
      if (f < 0.45 * sr) s += lerp(weight[h]) * std::sin(phase[h]);
    }
    const double t = static_cast<double>(i) / sr;
    const double am = 0.1 + 0.9 * 0.5 * (1.0 - std::cos(2 * std::numbers::pi * am_rate * t + am_phase));
    out[i] = s * am * lerp(smooth);
  }
  return out;
}

std::vector<double> Noise(const ScenarioSpec& spec, std::size_t n, int sr, Rng& rng) {
  const FilterParams& fp = spec.filter;
  switch (spec.noise_kind) {
    case NoiseKind::kColoredNoise:
      return PinkNoise(n, rng);

    case NoiseKind::kHarmonicHum: {
      std::vector<double> x(n, 0.0);
      for (int h = 1; h <= fp.hum_harmonics; ++h) {
        const double f = fp.hum_hz * h;
        if (f >= 0.45 * sr) break;
        const double a = rng.Uniform(0.5, 1.0) * std::pow(h, -0.7);
        const double ph = rng.Uniform(0.0, 2 * std::numbers::pi);
        for (std::size_t i = 0; i < n; ++i)
          x[i] += a * std::sin(2 * std::numbers::pi * f * static_cast<double>(i) / sr + ph);
      }
      return x;
    }

    case NoiseKind::kBandpassChannel: {
      const double lo = fp.band_lo_hz * rng.Uniform(0.9, 1.1);
      const double hi = fp.band_hi_hz * rng.Uniform(0.9, 1.1);
      const auto hp = Biquad::Highpass(lo, kButterworthQ, sr);
      const auto lp = Biquad::Lowpass(std::min(hi, 0.45 * sr), kButterworthQ, sr);
      auto x = WhiteNoise(n, rng);
      hp.Apply(x);
      lp.Apply(x);
      return x;
    }

    case NoiseKind::kImpulsive: {
      std::vector<double> x(n, 0.0);
      const auto decay = std::max<std::size_t>(1, static_cast<std::size_t>(fp.click_decay_s * sr));
      const double duration = static_cast<double>(n) / sr;
      double t = rng.Exponential(fp.click_rate_hz);
      bool any = false;
      while (t < duration || !any) {
        const auto start = std::min(n - 1, static_cast<std::size_t>(t * sr));
        const double a = rng.Uniform(0.3, 1.0);
        for (std::size_t k = 0; k < 8 * decay && start + k < n; ++k)
          x[start + k] += a * rng.Normal() * std::exp(-static_cast<double>(k) / decay);
        any = true;
        t += rng.Exponential(fp.click_rate_hz);
      }
      return x;
    }

    case NoiseKind::kBabbleLike: {
      const double lo = fp.babble_lo_hz * rng.Uniform(0.9, 1.1);
      const double hi = fp.babble_hi_hz * rng.Uniform(0.9, 1.1);
      auto x = WhiteNoise(n, rng);
      Biquad::Highpass(lo, kButterworthQ, sr).Apply(x);
      Biquad::Lowpass(std::min(hi, 0.45 * sr), kButterworthQ, sr).Apply(x);
      const double m1 = fp.babble_mod_hz * rng.Uniform(0.7, 1.3);
      const double m2 = 1.7 * m1;
      const double p1 = rng.Uniform(0.0, 2 * std::numbers::pi);
      const double p2 = rng.Uniform(0.0, 2 * std::numbers::pi);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sr;
        const double e1 = 0.5 + 0.5 * std::sin(2 * std::numbers::pi * m1 * t + p1);
        const double e2 = 0.5 + 0.5 * std::sin(2 * std::numbers::pi * m2 * t + p2);
        x[i] *= 0.2 + 0.8 * e1 * e2;
      }
      return x;
    }
  }
  Fail(ErrorKind::kInternal, "unhandled noise kind");
}

}  // namespace

double SignalPower(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

void ValidateScenario(const ScenarioSpec& spec, int sample_rate) {
  Require(!spec.label.empty(), "scenario label must be non-empty");
  Require(spec.snr_db >= -5.0 && spec.snr_db <= 30.0,
          "scenario '" + spec.label + "': snr_db must lie in [-5, 30]");
  const FilterParams& fp = spec.filter;
  const double nyq = sample_rate / 2.0;
  switch (spec.noise_kind) {
    case NoiseKind::kHarmonicHum:
      Require(fp.hum_hz > 0 && fp.hum_hz < nyq && fp.hum_harmonics >= 1,
              "scenario '" + spec.label + "': invalid hum parameters");
      break;
    case NoiseKind::kBandpassChannel: {
      // Jitter of +-10% is applied per utterance; check the extremes.
      Require(fp.band_lo_hz > 0 && fp.band_lo_hz < fp.band_hi_hz && fp.band_hi_hz < nyq &&
                  fp.band_lo_hz * 1.1 < 0.45 * sample_rate,
              "scenario '" + spec.label + "': invalid passband");
      for (double s : {0.9, 1.1}) {
        Require(Biquad::Highpass(fp.band_lo_hz * s, kButterworthQ, sample_rate).Stable() &&
                    Biquad::Lowpass(std::min(fp.band_hi_hz * s, 0.45 * sample_rate),
                                    kButterworthQ, sample_rate)
                        .Stable(),
                "scenario '" + spec.label + "': unstable channel filter");
      }
      break;
    }
    case NoiseKind::kImpulsive:
      Require(fp.click_rate_hz > 0 && fp.click_decay_s > 0,
              "scenario '" + spec.label + "': invalid click parameters");
      break;
    case NoiseKind::kBabbleLike:
      Require(fp.babble_lo_hz > 0 && fp.babble_lo_hz < fp.babble_hi_hz &&
                  fp.babble_hi_hz < nyq && fp.babble_lo_hz * 1.1 < 0.45 * sample_rate && fp.babble_mod_hz > 0,
              "scenario '" + spec.label + "': invalid babble parameters");
      for (double s : {0.9, 1.1}) {
        Require(Biquad::Highpass(fp.babble_lo_hz * s, kButterworthQ, sample_rate).Stable() &&
                    Biquad::Lowpass(std::min(fp.babble_hi_hz * s, 0.45 * sample_rate),
                                    kButterworthQ, sample_rate)
                        .Stable(),
                "scenario '" + spec.label + "': unstable babble filter");
      }
      break;
    case NoiseKind::kColoredNoise:
      break;
  }
}

std::vector<ScenarioSpec> DefaultScenarios() {
  std::vector<ScenarioSpec> specs(5);
  specs[0].label = "hum";
  specs[0].noise_kind = NoiseKind::kHarmonicHum;
  specs[0].snr_db = 20.0;
  specs[1].label = "pink";
  specs[1].noise_kind = NoiseKind::kColoredNoise;
  specs[1].snr_db = 0.0;
  specs[2].label = "bandpass";
  specs[2].noise_kind = NoiseKind::kBandpassChannel;
  specs[2].snr_db = 10.0;
  specs[3].label = "clicks";
  specs[3].noise_kind = NoiseKind::kImpulsive;
  specs[3].snr_db = 20.0;
  specs[4].label = "babble";
  specs[4].noise_kind = NoiseKind::kBabbleLike;
  specs[4].snr_db = 10.0;
  return specs;
}

SynthesizedUtterance SynthesizeUtterance(const ScenarioSpec& spec, double duration_s,
                                         int sample_rate, std::uint64_t seed) {
  ValidateScenario(spec, sample_rate);
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Require(n > 0, "duration must be positive");

  SynthesizedUtterance u;
  u.carrier = Carrier(n, sample_rate, rng);
  u.noise = Noise(spec, n, sample_rate, rng);

  const double pc = SignalPower(u.carrier);
  const double pn = SignalPower(u.noise);
  if (pn > 0.0) {
    const double scale = std::sqrt(pc / (pn * std::pow(10.0, spec.snr_db / 10.0)));
    for (auto& v : u.noise) v *= scale;
  }

  u.mix.resize(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u.mix[i] = u.carrier[i] + u.noise[i];
    peak = std::max(peak, std::abs(u.mix[i]));
  }
  const double gain = peak > 0.0 ? 0.9 / peak : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u.mix[i] *= gain;
    u.carrier[i] *= gain;
    u.noise[i] *= gain;
  }
  return u;
}

Manifest GenerateCorpus(const std::vector<ScenarioSpec>& specs, const CorpusOptions& opts,
                        const std::string& out_dir) {
  Require(specs.size() >= 2, "at least 2 scenarios are required");
  Require(opts.utts_per_scenario >= 1, "utts_per_scenario must be >= 1");
  Require(opts.sample_rate == 8000 || opts.sample_rate == 16000,
          "sample rate must be 8000 or 16000");
  {
    std::set<std::string> labels;
    for (const auto& s : specs) {
      ValidateScenario(s, opts.sample_rate);
      Require(labels.insert(s.label).second, "duplicate scenario label '" + s.label + "'");
    }
  }
  if (opts.duration_s > 0.0) {
    if (opts.duration_s < opts.min_window_s)
      Fail(ErrorKind::kTooShort, "duration shorter than one context window");
  } else {
    Require(opts.min_duration_s <= opts.max_duration_s, "min duration exceeds max duration");
    if (opts.min_duration_s < opts.min_window_s)
      Fail(ErrorKind::kTooShort, "minimum duration shorter than one context window");
  }

  const fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "wavs", ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create output directory " + out_dir + ": " + ec.message());

  Manifest manifest;
  manifest.base_dir = root.string();
  const std::size_t per = static_cast<std::size_t>(opts.utts_per_scenario);
  manifest.entries.resize(specs.size() * per);
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (std::size_t u = 0; u < per; ++u) {
      const std::size_t idx = s * per + u;
      char id[32];
      std::snprintf(id, sizeof id, "_%04zu", u);
      auto& e = manifest.entries[idx];
      e.utt_id = specs[s].label + id;
      e.path = "wavs/" + e.utt_id + ".wav";
      e.scenario_label = specs[s].label;
      Rng dur_rng(SubstreamSeed(opts.seed, 2 * idx + 1));
      const double d = opts.duration_s > 0.0
                           ? opts.duration_s
                           : dur_rng.Uniform(opts.min_duration_s, opts.max_duration_s);
      // Round to whole samples so the manifest duration matches the file.
      e.duration_s = std::round(d * opts.sample_rate) / opts.sample_rate;
    }
  }

  ParallelFor(manifest.entries.size(), opts.threads, [&](std::size_t idx) {
    const auto& e = manifest.entries[idx];
    const auto& spec = specs[idx / per];
    auto u = SynthesizeUtterance(spec, e.duration_s, opts.sample_rate,
                                 SubstreamSeed(opts.seed, 2 * idx));
    SaveWaveform((root / e.path).string(), Waveform{std::move(u.mix), opts.sample_rate});
  });

  SaveManifest((root / "manifest.tsv").string(), manifest);
  return manifest;
}

}  // namespace scenaware
