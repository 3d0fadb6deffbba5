#include "fft.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fracgs::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealDft::RealDft(std::size_t n) : n_(n) {
  real_ = fftw_alloc_real(n_);
  spec_ = fftw_alloc_complex(n_ / 2 + 1);
  if (!real_ || !spec_) throw std::bad_alloc();
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n_);
  fwd_ = fftw_plan_dft_r2c_1d(len, real_, spec_, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_1d(len, spec_, real_, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("fftw: plan creation failed");
}

RealDft::~RealDft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(real_);
  fftw_free(spec_);
}

void RealDft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::fill(real_, real_ + n_, 0.0);
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(std::min(in.size(), n_)), real_);
  fftw_execute(fwd_);
  const auto* s = reinterpret_cast<const std::complex<double>*>(spec_);
  std::copy(s, s + std::min(out.size(), spectrum_size()), out.begin());
}

void RealDft::backward(std::span<const std::complex<double>> in, std::span<double> out) {
  auto* s = reinterpret_cast<std::complex<double>*>(spec_);
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(spectrum_size()), s);
  fftw_execute(bwd_);
  std::copy(real_, real_ + std::min(out.size(), n_), out.begin());
}

RealDft& real_dft(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<RealDft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealDft>(n);
  return *slot;
}

}  // namespace fracgs::detail
