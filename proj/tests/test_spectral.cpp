#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "ergolab/spectral.hpp"

using namespace ergolab;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

std::complex<double> e(double t) { return std::polar(1.0, 2 * M_PI * (t - std::floor(t))); }

std::vector<std::complex<double>> linear_phase(const ExactScalar& a, std::size_t N) {
  std::vector<std::complex<double>> v(N);
  for (std::size_t n = 1; n <= N; ++n) v[n - 1] = e(frac_times(a, n));
  return v;
}

std::vector<std::complex<double>> quadratic_phase(const ExactScalar& a, std::size_t N) {
  std::vector<std::complex<double>> v(N);
  for (std::size_t n = 1; n <= N; ++n) v[n - 1] = e(frac_times(a, static_cast<i128>(n) * n));
  return v;
}

// Plain left-to-right DFT bin, long double accumulation.
std::complex<double> direct_bin(const std::vector<std::complex<double>>& eta, double theta) {
  std::complex<long double> s = 0;
  for (std::size_t n = 1; n <= eta.size(); ++n) {
    long double ph = -2.0L * M_PIl * std::fmod(static_cast<long double>(theta) * n, 1.0L);
    s += std::complex<long double>(eta[n - 1]) * std::polar(1.0L, ph);
  }
  return std::complex<double>(s / static_cast<long double>(eta.size()));
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("correlation_coefficient examples") {
  auto a = S("sqrt(2)-1");
  auto eta = linear_phase(a, 1000);
  CHECK(std::abs(correlation_coefficient(eta, a) - 1.0) < 1e-12);
  CHECK(std::abs(correlation_coefficient(eta, a + S("1/2"))) < 1e-12);
  CHECK(std::abs(correlation_coefficient(eta, a.to_double()) - 1.0) < 1e-9);
  std::vector<std::complex<double>> third(999);
  for (std::size_t n = 1; n <= third.size(); ++n) third[n - 1] = n % 3 == 0 ? 1.0 : 0.0;
  CHECK(std::abs(correlation_coefficient(third, S("1/3"))) == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("scan agrees with direct coefficients and Parseval") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> eta(1000);
  for (auto& v : eta) v = {g(rng), g(rng)};
  auto scan = spectrum_scan(eta, 4);
  CHECK(scan.fft_size == 4096);
  std::uniform_int_distribution<std::size_t> bin(0, scan.fft_size - 1);
  for (int i = 0; i < 64; ++i) {
    auto j = bin(rng);
    CHECK(std::abs(scan.magnitudes[j] - std::abs(direct_bin(eta, scan.theta(j)))) < 1e-10);
  }
  double lhs = 0, rhs = 0;
  for (double m : scan.magnitudes) lhs += m * m;
  lhs *= static_cast<double>(scan.N) / static_cast<double>(scan.fft_size);
  for (auto v : eta) rhs += std::norm(v);
  rhs /= static_cast<double>(eta.size());
  CHECK(std::abs(lhs - rhs) < 1e-8);
  CHECK_THROWS_AS(spectrum_scan(std::vector<std::complex<double>>(15, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(spectrum_scan(eta, 3), std::invalid_argument);
}

TEST_CASE("scan examples") {
  auto a = S("sqrt(2)-1");
  auto scan = spectrum_scan(linear_phase(a, 1 << 14));
  std::size_t arg = 0;
  for (std::size_t j = 0; j < scan.magnitudes.size(); ++j)
    if (scan.magnitudes[j] > scan.magnitudes[arg]) arg = j;
  CHECK(circle_distance(scan.theta(arg), a.to_double()) <= 1.0 / static_cast<double>(scan.fft_size));
  CHECK(scan.magnitudes[arg] >= 0.95);

  auto weyl = spectrum_scan(quadratic_phase(a, 1 << 16));
  double mx = 0;
  for (double m : weyl.magnitudes) mx = std::max(mx, m);
  CHECK(mx < 0.05);

  auto one = spectrum_scan(std::vector<std::complex<double>>(64, 1.0));
  auto peaks = peak_detect(one, 0.5);
  REQUIRE(peaks.peaks.size() == 1);
  CHECK(peaks.peaks[0].theta == doctest::Approx(0.0));
  CHECK(peaks.peaks[0].magnitude == doctest::Approx(1.0));
}

TEST_CASE("peak_detect") {
  auto a = S("sqrt(2)-1");
  const std::size_t N = 1 << 14;
  auto scan = spectrum_scan(linear_phase(a, N));
  for (bool refine : {true, false}) {
    auto p = peak_detect(scan, 0.5, refine);
    REQUIRE(p.peaks.size() == 1);
    CHECK(p.peaks[0].refined == refine);
  }
  auto refined = peak_detect(scan, 0.5).peaks[0];
  CHECK(circle_distance(refined.theta, a.to_double()) < 1.0 / (10.0 * N));
  CHECK(refined.magnitude > 0.999);
  CHECK(peak_detect(spectrum_scan(quadratic_phase(a, 1 << 16)), 0.1).peaks.empty());
  CHECK(peak_detect(scan, 1.01).peaks.empty());
  // Two components are found with their amplitudes; sidelobes are not reported.
  auto b = S("(sqrt(5)-1)/2");
  auto eta = linear_phase(a, N);
  auto eb = linear_phase(b, N);
  for (std::size_t i = 0; i < N; ++i) eta[i] = 0.7 * eta[i] + 0.3 * eb[i];
  auto two = peak_detect(spectrum_scan(eta), 0.05);
  REQUIRE(two.peaks.size() == 2);
  for (const auto& pk : two.peaks) {
    CHECK(pk.theta >= 0.0);
    CHECK(pk.theta < 1.0);
    bool near_a = circle_distance(pk.theta, a.to_double()) < 1e-4;
    CHECK((near_a || circle_distance(pk.theta, b.to_double()) < 1e-4));
    CHECK(pk.magnitude == doctest::Approx(near_a ? 0.7 : 0.3).epsilon(0.01));
  }
}

TEST_CASE("modulation moves peaks") {
  auto a = S("sqrt(3)-1");
  const std::size_t N = 1 << 13;
  auto eta = linear_phase(a, N);
  const double beta = 0.2;
  auto mod = eta;
  for (std::size_t n = 1; n <= N; ++n) mod[n - 1] *= e(beta * static_cast<double>(n));
  auto p0 = peak_detect(spectrum_scan(eta), 0.5).peaks;
  auto p1 = peak_detect(spectrum_scan(mod), 0.5).peaks;
  REQUIRE(p0.size() == 1);
  REQUIRE(p1.size() == 1);
  // With the e(-theta n) convention the modulated peak sits at theta + beta.
  CHECK(circle_distance(p1[0].theta, p0[0].theta + beta) < 1.0 / N);
}

TEST_CASE("containment_check") {
  auto a = S("sqrt(2)-1");
  auto sys = TorusSystem::rotation({a});
  PeakReport at_alpha{{{a.to_double(), 1.0, true}}};
  CHECK(containment_check(at_alpha, theoretical_spectrum(sys, 1), 1e-6).pass);
  PeakReport half{{{0.5, 1.0, true}}};
  auto r = containment_check(half, theoretical_spectrum(sys, 5), 1e-3);
  CHECK_FALSE(r.pass);
  CHECK(r.violations.size() == 1);
  CHECK(containment_check(PeakReport{}, theoretical_spectrum(sys, 1), 1e-3).pass);
  std::vector<double> plain{0.0, 0.25};
  CHECK(containment_check(PeakReport{{{0.9999, 1.0, false}}}, plain, 1e-3).pass);
}

TEST_CASE("circle_distance") {
  CHECK(circle_distance(0.05, 0.95) == doctest::Approx(0.1));
  CHECK(circle_distance(0.3, 0.3) == 0.0);
  CHECK(circle_distance(0.0, 0.5) == doctest::Approx(0.5));
}

}
