#include "rirsim/audio_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "rirsim/error.hpp"

namespace rirsim {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xfffe;

class ByteWriter {
 public:
  template <class T>
  void put(T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buffer_.insert(buffer_.end(), bytes, bytes + sizeof(T));
  }
  void tag(const char (&id)[5]) { buffer_.insert(buffer_.end(), id, id + 4); }
  const std::vector<char>& bytes() const { return buffer_; }

 private:
  std::vector<char> buffer_;
};

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(data, static_cast<std::streamsize>(size));
  if (!out) throw Error("short write to '" + path.string() + "'");
}

template <class T>
T get(const std::vector<char>& bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) throw InvalidArgument("truncated WAV file");
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

std::vector<float> interleave(const MultichannelSignal& signal) {
  std::vector<float> out(signal.n_channels() * signal.n_samples());
  for (std::size_t c = 0; c < signal.n_channels(); ++c) {
    auto ch = signal.channel(c);
    for (std::size_t k = 0; k < ch.size(); ++k) out[k * signal.n_channels() + c] = ch[k];
  }
  return out;
}

}  // namespace

void write_wav_float(const std::filesystem::path& path, const MultichannelSignal& signal) {
  const auto channels = static_cast<std::uint16_t>(signal.n_channels());
  if (channels == 0) throw InvalidArgument("cannot write a WAV file without channels");
  const auto frames = static_cast<std::uint32_t>(signal.n_samples());
  const std::uint32_t data_bytes = frames * channels * 4u;
  const auto rate = static_cast<std::uint32_t>(std::lround(signal.fs()));

  ByteWriter w;
  w.tag("RIFF");
  w.put<std::uint32_t>(4 + (8 + 18) + (8 + 4) + (8 + data_bytes));
  w.tag("WAVE");
  w.tag("fmt ");
  w.put<std::uint32_t>(18);
  w.put<std::uint16_t>(kFormatFloat);
  w.put<std::uint16_t>(channels);
  w.put<std::uint32_t>(rate);
  w.put<std::uint32_t>(rate * channels * 4u);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(channels * 4u));
  w.put<std::uint16_t>(32);
  w.put<std::uint16_t>(0);
  w.tag("fact");
  w.put<std::uint32_t>(4);
  w.put<std::uint32_t>(frames);
  w.tag("data");
  w.put<std::uint32_t>(data_bytes);

  std::vector<char> bytes = w.bytes();
  const auto samples = interleave(signal);
  const auto* raw = reinterpret_cast<const char*>(samples.data());
  bytes.insert(bytes.end(), raw, raw + samples.size() * sizeof(float));
  write_file(path, bytes.data(), bytes.size());
}

MultichannelSignal read_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw InvalidArgument("'" + path.string() + "' is not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_offset = 0, data_size = 0;
  bool have_fmt = false;
  for (std::size_t pos = 12; pos + 8 <= bytes.size();) {
    const std::string id(bytes.data() + pos, 4);
    const auto size = get<std::uint32_t>(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      format = get<std::uint16_t>(bytes, body);
      channels = get<std::uint16_t>(bytes, body + 2);
      rate = get<std::uint32_t>(bytes, body + 4);
      bits = get<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible) format = get<std::uint16_t>(bytes, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      data_offset = body;
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || data_offset == 0) throw InvalidArgument("WAV file lacks fmt or data chunk");
  if (channels == 0) throw InvalidArgument("WAV file declares zero channels");
  const std::size_t width = bits / 8;
  const bool supported = (format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32)) ||
                         (format == kFormatFloat && (bits == 32 || bits == 64));
  if (!supported) {
    throw InvalidArgument("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                          std::to_string(bits) + " bits)");
  }
  const std::size_t frames = data_size / (width * channels);
  MultichannelSignal out(channels, frames, rate);
  for (std::size_t k = 0; k < frames; ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t at = data_offset + (k * channels + c) * width;
      double v = 0.0;
      if (format == kFormatFloat) {
        v = bits == 32 ? get<float>(bytes, at) : get<double>(bytes, at);
      } else if (bits == 16) {
        v = get<std::int16_t>(bytes, at) / 32768.0;
      } else if (bits == 24) {
        const auto b0 = static_cast<std::uint8_t>(bytes[at]);
        const auto b1 = static_cast<std::uint8_t>(bytes[at + 1]);
        const auto b2 = static_cast<std::uint8_t>(bytes[at + 2]);
        std::int32_t s = b0 | (b1 << 8) | (b2 << 16);
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388608.0;
      } else {
        v = get<std::int32_t>(bytes, at) / 2147483648.0;
      }
      out.channel(c)[k] = static_cast<float>(v);
    }
  }
  return out;
}

void write_raw_float(const std::filesystem::path& path, const MultichannelSignal& signal) {
  const auto samples = interleave(signal);
  write_file(path, reinterpret_cast<const char*>(samples.data()), samples.size() * sizeof(float));
  const nlohmann::json shape = {{"channels", signal.n_channels()},
                                {"samples", signal.n_samples()},
                                {"fs", signal.fs()},
                                {"dtype", "float32"},
                                {"layout", "interleaved"}};
  const std::string text = shape.dump(2) + "\n";
  write_file(path.string() + ".json", text.data(), text.size());
}

MultichannelSignal read_raw_float(const std::filesystem::path& path) {
  const auto sidecar = read_file(path.string() + ".json");
  const auto shape = nlohmann::json::parse(sidecar.begin(), sidecar.end());
  const auto channels = shape.at("channels").get<std::size_t>();
  const auto frames = shape.at("samples").get<std::size_t>();
  const auto bytes = read_file(path);
  if (bytes.size() != channels * frames * sizeof(float)) {
    throw InvalidArgument("raw payload size does not match its sidecar");
  }
  MultichannelSignal out(channels, frames, shape.at("fs").get<double>());
  for (std::size_t k = 0; k < frames; ++k) {
    for (std::size_t c = 0; c < channels; ++c) {
      out.channel(c)[k] = get<float>(bytes, (k * channels + c) * sizeof(float));
    }
  }
  return out;
}

}  // namespace rirsim
