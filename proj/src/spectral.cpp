#include "ergolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergolab/fft.hpp"
#include "ergolab/parallel.hpp"

namespace ergolab {

namespace {

constexpr std::size_t kMaxPeaks = 64;

double frac_of_product(std::size_t n, double theta) {
  long double v = static_cast<long double>(n) * static_cast<long double>(theta);
  v -= std::floor(v);
  return static_cast<double>(v);
}

std::vector<double> scan_magnitudes(std::span<const std::complex<double>> eta, std::size_t size) {
  std::vector<std::complex<double>> padded(size, 0.0);
  for (std::size_t n = 1; n <= eta.size(); ++n) padded[n % size] += eta[n - 1];
  auto spectrum = fft_forward(std::move(padded));
  const double inv_n = 1.0 / static_cast<double>(eta.size());
  std::vector<double> mags(size);
  for (std::size_t j = 0; j < size; ++j) mags[j] = std::abs(spectrum[j]) * inv_n;
  return mags;
}

double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

std::complex<double> correlation_coefficient(std::span<const std::complex<double>> eta, double theta) {
  if (eta.empty()) throw std::invalid_argument("correlation_coefficient needs N >= 1");
  PairwiseAccumulator<std::complex<double>> acc;
  for (std::size_t n = 1; n <= eta.size(); ++n) acc.add(eta[n - 1] * unit_phase(-frac_of_product(n, theta)));
  return acc.total() / static_cast<double>(eta.size());
}

std::complex<double> correlation_coefficient(std::span<const std::complex<double>> eta, const ExactScalar& theta) {
  if (eta.empty()) throw std::invalid_argument("correlation_coefficient needs N >= 1");
  PairwiseAccumulator<std::complex<double>> acc;
  for (std::size_t n = 1; n <= eta.size(); ++n)
    acc.add(eta[n - 1] * unit_phase(-frac_times(theta, static_cast<i128>(n))));
  return acc.total() / static_cast<double>(eta.size());
}

double circle_distance(double x, double y) {
  double d = std::fabs(wrap01(x) - wrap01(y));
  return std::min(d, 1.0 - d);
}

SpectrumScan spectrum_scan(std::span<const std::complex<double>> eta, std::size_t oversample) {
  if (eta.size() < 16) throw std::invalid_argument("spectrum_scan needs N >= 16");
  if (oversample == 0 || (oversample & (oversample - 1)) != 0)
    throw std::invalid_argument("oversample must be a power of 2");
  SpectrumScan scan;
  scan.N = eta.size();
  scan.fft_size = oversample * next_pow2(eta.size());
  scan.series.assign(eta.begin(), eta.end());
  scan.magnitudes = scan_magnitudes(eta, scan.fft_size);
  return scan;
}

PeakReport peak_detect(const SpectrumScan& scan, double tau, bool refine) {
  PeakReport report;
  const std::size_t L = scan.fft_size;
  if (!refine) {
    const auto& m = scan.magnitudes;
    for (std::size_t j = 0; j < L; ++j) {
      double left = m[(j + L - 1) % L];
      double right = m[(j + 1) % L];
      if (m[j] >= tau && m[j] > left && m[j] >= right) report.peaks.push_back({scan.theta(j), m[j], false});
    }
    return report;
  }

  const double N = static_cast<double>(scan.N);
  std::vector<std::complex<double>> residual = scan.series;
  std::vector<double> mags = scan.magnitudes;
  for (std::size_t iter = 0; iter < kMaxPeaks; ++iter) {
    auto top = std::max_element(mags.begin(), mags.end());
    if (*top < tau) break;
    const double center = scan.theta(static_cast<std::size_t>(top - mags.begin()));

    // Golden-section search for the maximum of |coefficient| within one bin.
    auto objective = [&](double th) { return std::abs(correlation_coefficient(residual, th)); };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = center - 1.0 / static_cast<double>(L);
    double hi = center + 1.0 / static_cast<double>(L);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    const double stop = 1e-6 / N;
    while (hi - lo > stop) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = objective(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = objective(x1);
      }
    }
    double theta = 0.5 * (lo + hi);
    std::complex<double> c = correlation_coefficient(residual, theta);
    if (std::abs(c) < std::abs(correlation_coefficient(residual, center))) {
      theta = center;
      c = correlation_coefficient(residual, center);
    }
    theta = wrap01(theta);

    bool duplicate = false;
    for (const auto& p : report.peaks) duplicate = duplicate || circle_distance(p.theta, theta) < 1.0 / N;
    if (!duplicate && std::abs(c) >= tau) report.peaks.push_back({theta, std::abs(c), true});

    for (std::size_t n = 1; n <= residual.size(); ++n) residual[n - 1] -= c * unit_phase(frac_of_product(n, theta));
    mags = scan_magnitudes(residual, L);
  }
  std::sort(report.peaks.begin(), report.peaks.end(), [](const Peak& a, const Peak& b) { return a.theta < b.theta; });
  return report;
}

ContainmentReport containment_check(const PeakReport& peaks, std::span<const double> spectrum, double tol) {
  ContainmentReport report;
  for (const auto& p : peaks.peaks) {
    bool near = false;
    for (double s : spectrum) near = near || circle_distance(p.theta, s) <= tol;
    if (!near) report.violations.push_back(p);
  }
  report.pass = report.violations.empty();
  return report;
}

ContainmentReport containment_check(const PeakReport& peaks, std::span<const Frequency> spectrum, double tol) {
  std::vector<double> values;
  values.reserve(spectrum.size());
  for (const auto& f : spectrum) values.push_back(f.value);
  return containment_check(peaks, values, tol);
}

}  // namespace ergolab
