#include "sdgf/signals.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace sdgf {

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Cusp: return "cusp";
    case SyntheticKind::Ramp: return "ramp";
    case SyntheticKind::Sing: return "sing";
  }
  return "cusp";
}

SyntheticKind synthetic_kind_from_string(std::string_view name) {
  for (auto kind : {SyntheticKind::Cusp, SyntheticKind::Ramp, SyntheticKind::Sing}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown synthetic signal '" + std::string(name) + "'");
}

Signal make_synthetic(SyntheticKind kind, Index L) {
  if (L < 8) throw Error(ErrorCode::InvalidArgument, "synthetic signals need L >= 8");
  const Real len = static_cast<Real>(L);
  Signal s;
  s.samples.resize(L);
  s.label = std::string(to_string(kind));
  const Real sing_center = (std::floor(0.37 * len) + 0.5) / len;
  for (Index l = 0; l < L; ++l) {
    const Real t = static_cast<Real>(l + 1) / len;
    switch (kind) {
      case SyntheticKind::Cusp: s.samples(l) = std::sqrt(std::abs(t - 0.37)); break;
      case SyntheticKind::Ramp: s.samples(l) = t - (t >= 0.37 ? 1.0 : 0.0); break;
      case SyntheticKind::Sing: s.samples(l) = 1.0 / std::abs(t - sing_center); break;
    }
  }
  return s;
}

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

void write_wav(const std::string& path, std::uint16_t format, int bits, int channels,
               std::uint32_t rate, const std::vector<unsigned char>& data) {
  std::vector<unsigned char> out;
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, static_cast<std::uint32_t>(36 + data.size()));
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, rate);
  const int block = channels * bits / 8;
  put_u32(out, rate * static_cast<std::uint32_t>(block));
  put_u16(out, static_cast<std::uint16_t>(block));
  put_u16(out, static_cast<std::uint16_t>(bits));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IOFailure, "cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::IOFailure, "write to '" + path + "' failed");
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IOFailure, "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::UnsupportedFormat, "'" + path + "': " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw bad("not a RIFF/WAVE file");
  }
  WavData wav;
  std::uint16_t format = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || available < 16) throw bad("truncated fmt chunk");
      format = read_u16(chunk + 8);
      wav.channels = read_u16(chunk + 10);
      wav.sample_rate = read_u32(chunk + 12);
      wav.bits_per_sample = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40 || available < 40) throw bad("truncated extensible fmt chunk");
        format = read_u16(chunk + 8 + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = std::min<std::size_t>(size, available);
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || data == nullptr) throw bad("missing fmt or data chunk");
  if (wav.channels < 1) throw bad("no channels");
  if (format == kFormatPcm && wav.bits_per_sample == 16) {
    wav.floating_point = false;
  } else if (format == kFormatFloat && wav.bits_per_sample == 32) {
    wav.floating_point = true;
  } else {
    throw bad("only 16-bit PCM and 32-bit float are supported (format " + std::to_string(format) +
              ", " + std::to_string(wav.bits_per_sample) + " bits)");
  }
  const std::size_t width = static_cast<std::size_t>(wav.bits_per_sample / 8);
  const std::size_t frame = width * static_cast<std::size_t>(wav.channels);
  const std::size_t frames = data_size / frame;
  wav.samples.resize(static_cast<Index>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * frame;
    if (wav.floating_point) {
      float v;
      const std::uint32_t raw = read_u32(p);
      std::memcpy(&v, &raw, sizeof v);
      wav.samples(static_cast<Index>(i)) = v;
    } else {
      const auto v = static_cast<std::int16_t>(read_u16(p));
      wav.samples(static_cast<Index>(i)) = static_cast<Real>(v) / 32768.0;
    }
  }
  return wav;
}

void write_wav_pcm16(const std::string& path, const Vector& samples, std::uint32_t sample_rate,
                     int channels) {
  std::vector<unsigned char> data;
  for (Index i = 0; i < samples.size(); ++i) {
    const Real clipped = std::clamp(samples(i), -1.0, 32767.0 / 32768.0);
    const auto v = static_cast<std::int16_t>(std::lround(clipped * 32768.0));
    for (int c = 0; c < channels; ++c) put_u16(data, static_cast<std::uint16_t>(v));
  }
  write_wav(path, kFormatPcm, 16, channels, sample_rate, data);
}

void write_wav_float(const std::string& path, const Vector& samples, std::uint32_t sample_rate) {
  std::vector<unsigned char> data;
  for (Index i = 0; i < samples.size(); ++i) {
    const float v = static_cast<float>(samples(i));
    std::uint32_t raw;
    std::memcpy(&raw, &v, sizeof raw);
    put_u32(data, raw);
  }
  write_wav(path, kFormatFloat, 32, 1, sample_rate, data);
}

Signal load_audio(const std::string& path, const AudioTrim& trim) {
  const WavData wav = read_wav(path);
  if (wav.channels != 1) {
    throw Error(ErrorCode::UnsupportedFormat,
                "'" + path + "' has " + std::to_string(wav.channels) + " channels; mono required");
  }
  const Index count = wav.samples.size();
  if (trim.offset < 0 || trim.offset >= count) {
    throw Error(ErrorCode::FileTooShort, "offset " + std::to_string(trim.offset) +
                                             " leaves no samples in '" + path + "'");
  }
  const Index available = count - trim.offset;
  Index L = 0;
  if (trim.L) {
    L = *trim.L;
    if (L > available) {
      throw Error(ErrorCode::FileTooShort, "requested L = " + std::to_string(L) + " but only " +
                                               std::to_string(available) + " samples available");
    }
    if (!is_admissible_length(L, trim.mode).admissible) {
      throw Error(ErrorCode::NotAdmissible, "L = " + std::to_string(L) + " is not admissible");
    }
  } else {
    if (available < 3) throw Error(ErrorCode::FileTooShort, "fewer than 3 samples");
    L = static_cast<Index>(largest_admissible_at_most(available, trim.mode));
  }
  Signal s;
  s.samples = wav.samples.segment(trim.offset, L);
  const Real peak = s.samples.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw Error(ErrorCode::InvalidArgument, "'" + path + "' is silent");
  s.samples /= peak;
  const auto slash = path.find_last_of('/');
  std::string label = slash == std::string::npos ? path : path.substr(slash + 1);
  if (const auto dot = label.find_last_of('.'); dot != std::string::npos) label.resize(dot);
  s.label = label;
  s.sample_rate = static_cast<Real>(wav.sample_rate);
  return s;
}

}  // namespace sdgf
