#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "ergolab/gowers.hpp"
#include "ergolab/seqgen.hpp"

using namespace ergolab;

namespace {

using cvec = std::vector<std::complex<double>>;

cvec random_input(std::mt19937_64& rng, std::size_t N) {
  std::normal_distribution<double> g;
  cvec F(N);
  for (auto& v : F) v = {g(rng), g(rng)};
  return F;
}

// Literal U^2 from the definition: (1/N) sum_{h=1}^N |(1/N) sum_n F_N(n) conj F_N(n+h)|^2.
double u2_literal(const cvec& F) {
  const std::size_t N = F.size();
  long double total = 0;
  for (std::size_t h = 1; h <= N; ++h) {
    std::complex<long double> s = 0;
    for (std::size_t n = 1; n + h <= N; ++n)
      s += std::complex<long double>(F[n - 1]) * std::conj(std::complex<long double>(F[n + h - 1]));
    s /= static_cast<long double>(N);
    total += std::norm(s);
  }
  return static_cast<double>(std::pow(total / N, 0.25L));
}

}  // namespace

TEST_SUITE("gowers") {

TEST_CASE("U1 examples") {
  CHECK(gowers_norm(cvec(100, 1.0), 1) == 1.0);
  cvec alt(100);
  for (std::size_t n = 1; n <= 100; ++n) alt[n - 1] = (n % 2) ? -1.0 : 1.0;
  CHECK(gowers_norm(alt, 1) == 0.0);
}

TEST_CASE("constant sequence under the truncated recursion") {
  for (std::size_t N : {10, 100, 1000}) {
    const double n = static_cast<double>(N);
    const double closed = std::pow((n - 1) * (2 * n - 1) / (6 * n * n), 0.25);
    CHECK(gowers_norm(cvec(N, 1.0), 2, GowersMethod::naive) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(gowers_u2_fft(cvec(N, 1.0)) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(u2_literal(cvec(N, 1.0)) == doctest::Approx(closed).epsilon(1e-12));
  }
  // U1 of the constant exceeds its truncated U2 value.
  CHECK(gowers_norm(cvec(100, 1.0), 1) > gowers_norm(cvec(100, 1.0), 2));
}

TEST_CASE("FFT U2 matches the naive recursion and the literal sum") {
  std::mt19937_64 rng(3);
  for (std::size_t N : {128, 512, 2048}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto F = random_input(rng, N);
      double fft = gowers_u2_fft(F);
      double naive = gowers_norm(F, 2, GowersMethod::naive);
      REQUIRE(std::abs(fft - naive) < 1e-10);
      if (N == 128 && trial < 5) CHECK(std::abs(naive - u2_literal(F)) < 1e-10);
    }
  }
  CHECK(gowers_u2_fft(cvec(64, 0.0)) == 0.0);
}

TEST_CASE("phase invariance") {
  std::mt19937_64 rng(5);
  auto F = random_input(rng, 64);
  auto G = F;
  const auto c = std::polar(1.0, 0.7);
  for (auto& v : G) v *= c;
  for (int s = 1; s <= 3; ++s) CHECK(std::abs(gowers_norm(F, s) - gowers_norm(G, s)) < 1e-12);
}

TEST_CASE("U3 of the constant against a brute-force triple sum") {
  const std::size_t N = 40;
  // ||1||_{U3}^8 = (1/N) sum_h ||1_{[1,N-h]}||_{U2}^4.
  long double total = 0;
  for (std::size_t h = 1; h <= N; ++h) {
    long double inner = 0;
    for (std::size_t k = 1; k <= N; ++k) {
      long double c = 0;
      for (std::size_t n = 1; n <= N; ++n) c += (n + h <= N && n + k <= N && n + h + k <= N) ? 1 : 0;
      c /= N;
      inner += c * c;
    }
    total += inner / N;
  }
  const double ref = static_cast<double>(std::pow(total / N, 0.125L));
  CHECK(gowers_norm(cvec(N, 1.0), 3) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("budget guard") {
  CHECK(gowers_naive_cost(1000, 2) == doctest::Approx(5e5));
  CHECK_THROWS_AS(gowers_norm(cvec(100000, 1.0), 3), BudgetExceeded);
  CHECK_THROWS_AS(gowers_norm(cvec(1000000, 1.0), 2, GowersMethod::naive), BudgetExceeded);
  CHECK_NOTHROW(gowers_norm(cvec(1000000, 1.0), 2));
  CHECK_THROWS_AS(gowers_norm(cvec(10, 1.0), 3, GowersMethod::fft), std::invalid_argument);
}

TEST_CASE("W-trick sweep") {
  const std::size_t N = 1 << 14;
  auto r2 = w_trick_uniformity(2, N);
  auto r3 = w_trick_uniformity(3, N);
  auto r5 = w_trick_uniformity(5, N);
  CHECK(r2.W == 2);
  CHECK(r5.W == 30);
  CHECK(r2.value > 0.0);
  CHECK(r3.value < r2.value);
  CHECK(r5.value < r3.value);
  // The maximizing residue is coprime to W.
  CHECK(std::gcd(r5.max_b, std::int64_t{30}) == 1);
  // Oracle for the w = 2 value: build Lambda_{2,b} - 1 directly and take U2.
  PrimeSieve sieve(2 * (N + 1) + 1);
  double best = 0;
  for (std::int64_t b : {1}) {
    cvec F(N);
    for (std::size_t n = 1; n <= N; ++n) {
      auto m = static_cast<std::uint64_t>(2 * n + b);
      F[n - 1] = 0.5 * (sieve.is_prime(m) ? std::log(static_cast<double>(m)) : 0.0) - 1.0;
    }
    best = std::max(best, gowers_norm(F, 2, GowersMethod::naive));
  }
  CHECK(r2.value == doctest::Approx(best).epsilon(1e-9));
  WTrickMode beatty{true, ExactScalar::parse("sqrt(2)"), ExactScalar::integer(0)};
  auto rb = w_trick_uniformity(2, 1 << 12, 2, beatty);
  CHECK(rb.value > 0.0);
  CHECK(std::isfinite(rb.value));
}

TEST_CASE("transfer diagnostic") {
  auto sys = TorusSystem::parse("rot:alpha=sqrt(2)-1");
  std::vector<Observable> f = {Observable::parse("char:1")};
  auto grid = SampleSet::grid(1, 256);
  const std::size_t N = 1000;
  auto zero = uniformity_transfer_diagnostic(sys, f, cvec(N, 0.0), grid);
  CHECK(zero.lhs == 0.0);
  auto one = uniformity_transfer_diagnostic(sys, f, cvec(N, 1.0), grid);
  std::complex<double> geo = 0;
  for (std::size_t n = 1; n <= N; ++n) geo += std::polar(1.0, 2 * M_PI * frac_times(sys.alpha()[0], n));
  CHECK(one.lhs == doctest::Approx(std::abs(geo) / N).epsilon(1e-10));
  CHECK(one.u_norm == 1.0);

  auto lhs_for = [&](std::uint64_t w) {
    auto W = static_cast<std::int64_t>(primorial(w));
    auto F = WeightSequence::mangoldt_wb(W, 1).values(1, 1 << 14);
    for (auto& v : F) v -= 1.0;
    return uniformity_transfer_diagnostic(sys, f, F, grid).lhs;
  };
  CHECK(lhs_for(5) < lhs_for(2));
}

}
