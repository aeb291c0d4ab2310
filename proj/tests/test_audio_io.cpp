#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "rirsim/audio_io.hpp"
#include "rirsim/error.hpp"

using namespace rirsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rirsim_audio_test";
  fs::create_directories(dir);
  return dir / name;
}

MultichannelSignal random_signal(std::size_t ch, std::size_t n, double rate) {
  MultichannelSignal s(ch, n, rate);
  std::mt19937_64 rng(ch * 1000 + n);
  std::uniform_real_distribution<float> u(-1, 1);
  for (std::size_t c = 0; c < ch; ++c) {
    for (auto& v : s.channel(c)) v = u(rng);
  }
  return s;
}

void put_u16(std::ofstream& f, std::uint16_t v) { f.put(char(v & 0xff)).put(char(v >> 8)); }
void put_u32(std::ofstream& f, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) f.put(char((v >> (8 * i)) & 0xff));
}

}  // namespace

TEST_CASE("float WAV round trip") {
  const auto s = random_signal(3, 1234, 16000);
  const auto path = scratch("roundtrip.wav");
  write_wav_float(path, s);
  CHECK(fs::file_size(path) > 3 * 1234 * 4);
  const auto back = read_wav(path);
  CHECK(back == s);
}

TEST_CASE("raw float round trip with sidecar") {
  const auto s = random_signal(2, 999, 48000);
  const auto path = scratch("roundtrip.raw");
  write_raw_float(path, s);
  CHECK(fs::file_size(path) == 2 * 999 * 4);
  CHECK(fs::exists(path.string() + ".json"));
  CHECK(read_raw_float(path) == s);
}

TEST_CASE("16-bit PCM input") {
  const auto path = scratch("pcm16.wav");
  {
    std::ofstream f(path, std::ios::binary);
    const std::int16_t samples[] = {0, 16384, -32768, 32767};
    f.write("RIFF", 4);
    put_u32(f, 36 + 8);
    f.write("WAVEfmt ", 8);
    put_u32(f, 16);
    put_u16(f, 1);
    put_u16(f, 1);
    put_u32(f, 8000);
    put_u32(f, 16000);
    put_u16(f, 2);
    put_u16(f, 16);
    f.write("data", 4);
    put_u32(f, 8);
    for (auto v : samples) put_u16(f, static_cast<std::uint16_t>(v));
  }
  const auto s = read_wav(path);
  REQUIRE(s.n_channels() == 1);
  REQUIRE(s.n_samples() == 4);
  CHECK(s.fs() == 8000);
  CHECK(s.channel(0)[0] == 0.0f);
  CHECK(s.channel(0)[1] == 0.5f);
  CHECK(s.channel(0)[2] == -1.0f);
}

TEST_CASE("unreadable inputs") {
  CHECK_THROWS_AS(read_wav(scratch("missing.wav")), Error);
  const auto junk = scratch("junk.wav");
  std::ofstream(junk) << "not a wave file at all";
  CHECK_THROWS_AS(read_wav(junk), InvalidArgument);
  CHECK_THROWS_AS(read_raw_float(scratch("missing.raw")), Error);
}
