#ifndef SDGF_SIGNALS_HPP
#define SDGF_SIGNALS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sdgf/modring.hpp"
#include "sdgf/types.hpp"

namespace sdgf {

struct Signal {
  Vector samples;
  std::string label;
  std::optional<Real> sample_rate;  // Hz; absent for synthetic signals

  Index size() const { return samples.size(); }
};

enum class SyntheticKind { Cusp, Ramp, Sing };

std::string_view to_string(SyntheticKind kind);
SyntheticKind synthetic_kind_from_string(std::string_view name);

// With t(l) = (l + 1) / L, l = 0..L-1:
//   cusp  sqrt|t - 0.37|
//   ramp  t - 1{t >= 0.37}
//   sing  1 / |t - (floor(0.37 L) + 0.5) / L|
// Throws InvalidArgument for L < 8.
Signal make_synthetic(SyntheticKind kind, Index L);

struct WavData {
  int channels = 0;
  int bits_per_sample = 0;
  bool floating_point = false;
  std::uint32_t sample_rate = 0;
  Vector samples;  // first channel only; PCM scaled to [-1, 1)
};

// RIFF/WAVE reader for 16-bit PCM and 32-bit IEEE float data. Multi-channel
// files are read (channels reported) but only the first channel is kept.
WavData read_wav(const std::string& path);

void write_wav_pcm16(const std::string& path, const Vector& samples, std::uint32_t sample_rate,
                     int channels = 1);
void write_wav_float(const std::string& path, const Vector& samples, std::uint32_t sample_rate);

struct AudioTrim {
  // nullopt: largest admissible L not exceeding the available samples
  std::optional<Index> L;
  Index offset = 0;  // first sample kept
  AdmissibilityMode mode = AdmissibilityMode::Relaxed;
};

// Mono WAV -> unit-peak signal of admissible length. Throws
// UnsupportedFormat (not mono, bad encoding), FileTooShort, NotAdmissible.
Signal load_audio(const std::string& path, const AudioTrim& trim = {});

}  // namespace sdgf

#endif  // SDGF_SIGNALS_HPP
