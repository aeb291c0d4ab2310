#include "rirsim/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "rirsim/error.hpp"
#include "rirsim/parallel.hpp"

namespace rirsim {

MultichannelSignal::MultichannelSignal(std::size_t n_channels, std::size_t n_samples, double fs)
    : n_channels_(n_channels), n_samples_(n_samples), fs_(fs), data_(n_channels * n_samples, 0.0f) {}

Trajectory Trajectory::split_evenly(std::vector<Point3> points, std::size_t n_samples) {
  if (points.empty()) throw InvalidArgument("trajectory has no points");
  Trajectory t;
  const std::size_t segment = n_samples / points.size();
  t.bounds.resize(points.size() + 1);
  for (std::size_t i = 0; i < points.size(); ++i) t.bounds[i] = i * segment;
  t.bounds.back() = n_samples;
  t.points = std::move(points);
  return t;
}

void Trajectory::validate(std::size_t n_samples) const {
  if (points.empty()) throw InvalidArgument("trajectory has no points");
  if (bounds.size() != points.size() + 1) {
    throw InvalidArgument("trajectory needs one segment per point");
  }
  if (bounds.front() != 0 || bounds.back() != n_samples) {
    throw InvalidArgument("trajectory segments must cover the whole signal");
  }
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (bounds[i] > bounds[i + 1]) throw InvalidArgument("trajectory segments overlap");
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

template <class T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw CapacityError("FFT buffer allocation failed");
  return FftwBuffer<T>(p);
}

// Real FFT of fixed size. Plans are built with FFTW_ESTIMATE so the chosen
// algorithm, and therefore every output bit, is the same on every run.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    auto in = fftw_alloc<double>(n);
    auto out = fftw_alloc<fftw_complex>(bins());
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), out.get(), in.get(), FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr) throw Error("FFTW planning failed");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // Arrays must come from fftw_alloc; thread-safe.
  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
  // Destroys `in`.
  void inverse(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(inverse_, in, out); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

struct Block {
  std::size_t start;
  std::size_t length;
};

MultichannelSignal filter_segments(std::span<const float> signal, const RirTensor& rirs,
                                   std::span<const std::size_t> bounds, std::size_t block_size,
                                   unsigned threads) {
  if (signal.empty()) throw InvalidArgument("input signal is empty");
  if (rirs.n_samples() == 0 || rirs.n_receivers() == 0) throw InvalidArgument("RIR is empty");
  const std::size_t rir_len = rirs.n_samples();
  const std::size_t n_rcv = rirs.n_receivers();
  const std::size_t block = block_size > 0 ? block_size : next_pow2(rir_len);
  const RealFft fft(next_pow2(block + rir_len - 1));
  const std::size_t n = fft.size();
  const std::size_t bins = fft.bins();
  const std::size_t out_len = signal.size() + rir_len - 1;
  const unsigned workers = resolve_threads(threads);

  std::vector<double> acc(n_rcv * out_len, 0.0);
  auto spectra = fftw_alloc<fftw_complex>(n_rcv * bins);

  for (std::size_t point = 0; point + 1 < bounds.size(); ++point) {
    if (bounds[point] == bounds[point + 1]) continue;
    // RIR spectra of this point, shared by all its blocks.
    parallel_for(n_rcv, workers, [&](std::size_t r, unsigned) {
      auto time = fftw_alloc<double>(n);
      auto h = rirs.channel(point, r);
      std::fill_n(time.get(), n, 0.0);
      std::copy(h.begin(), h.end(), time.get());
      fft.forward(time.get(), spectra.get() + r * bins);
    });

    std::vector<Block> blocks;
    for (std::size_t s = bounds[point]; s < bounds[point + 1]; s += block) {
      blocks.push_back({s, std::min(block, bounds[point + 1] - s)});
    }
    // Waves of blocks are filtered in parallel, then added in block order.
    const std::size_t wave = std::max<std::size_t>(1, 2 * workers);
    for (std::size_t first = 0; first < blocks.size(); first += wave) {
      const std::size_t count = std::min(wave, blocks.size() - first);
      std::vector<std::vector<double>> filtered(count);
      parallel_for(count, workers, [&](std::size_t i, unsigned) {
        const Block& b = blocks[first + i];
        const std::size_t len = b.length + rir_len - 1;
        auto time = fftw_alloc<double>(n);
        auto freq = fftw_alloc<fftw_complex>(bins);
        auto prod = fftw_alloc<fftw_complex>(bins);
        std::fill_n(time.get(), n, 0.0);
        std::copy_n(signal.begin() + static_cast<std::ptrdiff_t>(b.start), b.length, time.get());
        fft.forward(time.get(), freq.get());
        auto& out = filtered[i];
        out.resize(n_rcv * len);
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t r = 0; r < n_rcv; ++r) {
          const fftw_complex* h = spectra.get() + r * bins;
          for (std::size_t k = 0; k < bins; ++k) {
            const double re = freq[k][0] * h[k][0] - freq[k][1] * h[k][1];
            const double im = freq[k][0] * h[k][1] + freq[k][1] * h[k][0];
            prod[k][0] = re;
            prod[k][1] = im;
          }
          fft.inverse(prod.get(), time.get());
          for (std::size_t k = 0; k < len; ++k) out[r * len + k] = time[k] * scale;
        }
      });
      for (std::size_t i = 0; i < count; ++i) {
        const Block& b = blocks[first + i];
        const std::size_t len = b.length + rir_len - 1;
        for (std::size_t r = 0; r < n_rcv; ++r) {
          double* dst = acc.data() + r * out_len + b.start;
          const double* src = filtered[i].data() + r * len;
          for (std::size_t k = 0; k < len; ++k) dst[k] += src[k];
        }
      }
    }
  }

  MultichannelSignal out(n_rcv, out_len, rirs.fs());
  for (std::size_t r = 0; r < n_rcv; ++r) {
    auto dst = out.channel(r);
    for (std::size_t k = 0; k < out_len; ++k) dst[k] = static_cast<float>(acc[r * out_len + k]);
  }
  return out;
}

}  // namespace

MultichannelSignal overlap_add_filter(std::span<const float> signal, const RirTensor& rirs,
                                      std::size_t source, std::size_t block_size,
                                      unsigned threads) {
  if (source >= rirs.n_sources()) throw InvalidArgument("source index out of range");
  if (signal.empty()) throw InvalidArgument("input signal is empty");
  // Route through the segment filter with every segment but `source` empty.
  std::vector<std::size_t> bounds(rirs.n_sources() + 1, 0);
  for (std::size_t i = source + 1; i < bounds.size(); ++i) bounds[i] = signal.size();
  return filter_segments(signal, rirs, bounds, block_size, threads);
}

MultichannelSignal simulate_trajectory(std::span<const float> signal, const RirTensor& rirs,
                                       const Trajectory& trajectory, std::size_t block_size,
                                       unsigned threads) {
  trajectory.validate(signal.size());
  if (trajectory.points.size() != rirs.n_sources()) {
    throw InvalidArgument("trajectory has " + std::to_string(trajectory.points.size()) +
                          " points but " + std::to_string(rirs.n_sources()) + " RIR banks");
  }
  return filter_segments(signal, rirs, trajectory.bounds, block_size, threads);
}

}  // namespace rirsim
