#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace fracgs::detail {

// Real-to-complex DFT of fixed length backed by FFTW. Plans use
// FFTW_ESTIMATE so results are bit-reproducible from run to run.
class RealDft {
public:
  explicit RealDft(std::size_t n);
  ~RealDft();
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  // Unnormalized forward transform; in.size() may be shorter than n (zero padded).
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse; writes the first out.size() samples.
  void backward(std::span<const std::complex<double>> in, std::span<double> out);

private:
  std::size_t n_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

// Per-thread cached transform of length n.
RealDft& real_dft(std::size_t n);

}  // namespace fracgs::detail
