#include "ergolab/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace ergolab {

namespace {

// FFTW's planner is not thread safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> transform(std::vector<std::complex<double>> data, int sign) {
  if (data.empty()) return data;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return data;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(std::vector<std::complex<double>> data) {
  return transform(std::move(data), FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_backward(std::vector<std::complex<double>> data) {
  return transform(std::move(data), FFTW_BACKWARD);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace ergolab
