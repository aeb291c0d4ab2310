#pragma once

#include <filesystem>

#include "rirsim/convolution.hpp"

namespace rirsim {

// 32-bit IEEE float WAV, channels interleaved.
void write_wav_float(const std::filesystem::path& path, const MultichannelSignal& signal);

// Reads PCM 16/24/32-bit or IEEE float 32/64-bit WAV (plain or extensible).
MultichannelSignal read_wav(const std::filesystem::path& path);

// Raw little-endian interleaved float32 plus "<path>.json" describing
// {"channels", "samples", "fs", "dtype", "layout"}.
void write_raw_float(const std::filesystem::path& path, const MultichannelSignal& signal);
MultichannelSignal read_raw_float(const std::filesystem::path& path);

}  // namespace rirsim
