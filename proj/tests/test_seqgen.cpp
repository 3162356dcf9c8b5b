#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "doctest.h"
#include "ergolab/numbers.hpp"
#include "ergolab/seqgen.hpp"

using namespace ergolab;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

// Trial-division primality, independent of the sieve.
bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool trial_squarefree(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return true;
}

// Beatty values for n in [1, count] by exact floor.
std::set<i128> beatty_values(const ExactScalar& theta, const ExactScalar& gamma, i128 count) {
  std::set<i128> out;
  for (i128 n = 1; n <= count; ++n) out.insert((theta * ExactScalar::integer(n) + gamma).floor());
  return out;
}

}  // namespace

TEST_SUITE("seqgen") {

TEST_CASE("beatty_term") {
  CHECK(beatty_term(S("sqrt(2)"), S("0"), 5) == 7);
  CHECK(beatty_term(S("1"), S("0"), 9) == 9);
  CHECK(beatty_term(S("3/2"), S("0"), 3) == 4);
  // floor(n*sqrt(2)) against integer square roots: floor(n sqrt 2) = isqrt(2 n^2).
  for (i128 n = 1; n < 100000; n += 997) CHECK(beatty_term(S("sqrt(2)"), S("0"), n) == isqrt(2 * n * n));
}

TEST_CASE("beatty_indicator examples") {
  CHECK(beatty_indicator(S("3/2"), S("0"), 4));
  CHECK_FALSE(beatty_indicator(S("3/2"), S("0"), 2));
  for (int m = 1; m < 50; ++m) CHECK(beatty_indicator(S("1"), S("0"), m));
  CHECK_THROWS_AS(beatty_indicator(S("1/2"), S("0"), 3), std::domain_error);
}

TEST_CASE("beatty_indicator agrees with enumeration") {
  const std::vector<std::pair<const char*, const char*>> grid = {
      {"sqrt(2)", "0"}, {"sqrt(2)", "3/10"}, {"3/2", "0"}, {"3/2", "1/2"}, {"(1+sqrt(5))/2", "0"},
      {"(1+sqrt(5))/2", "9/10"}, {"sqrt(3)+1", "-1/3"}, {"7/3", "2"}, {"1", "0"}, {"1", "1/2"}};
  const i128 limit = 10000;
  for (const auto& [t, g] : grid) {
    auto theta = S(t);
    auto gamma = S(g);
    auto values = beatty_values(theta, gamma, limit + 10);
    for (i128 m = 1; m <= limit; ++m) {
      bool ref = values.count(m) > 0;
      REQUIRE(beatty_indicator(theta, gamma, m) == ref);
      REQUIRE(beatty_contains(theta, gamma, m) == ref);
    }
  }
}

TEST_CASE("beatty_hit_count") {
  CHECK(beatty_hit_count(S("2/3"), S("0"), 1) == 1);
  CHECK(beatty_hit_count(S("2/3"), S("0"), 2) == 2);
  CHECK(beatty_hit_count(S("2"), S("0"), 3) == 0);
  for (const char* t : {"2/3", "sqrt(2)-1", "(sqrt(5)-1)/2", "1/sqrt(7)"}) {
    auto theta = S(t);
    auto gamma = S("1/5");
    auto k = beatty_hit_bound(theta);
    CHECK((theta * ExactScalar::integer(k)) > ExactScalar::integer(1));
    CHECK((theta * ExactScalar::integer(k - 1)) <= ExactScalar::integer(1));
    // Telescoping: sum of hit counts over [lo, N] counts m with lo <= floor(m theta + gamma) <= N.
    i128 total = 0;
    const i128 N = 2000;
    for (i128 n = 0; n <= N; ++n) {
      auto h = beatty_hit_count(theta, gamma, n);
      CHECK((h == k || h == k - 1));
      total += h;
    }
    i128 direct = 0;
    for (i128 m = -10; m <= 100000; ++m) {
      auto v = (theta * ExactScalar::integer(m) + gamma).floor();
      if (v >= 0 && v <= N) ++direct;
    }
    CHECK(total == direct);
  }
}

TEST_CASE("Beatty density") {
  for (const char* t : {"sqrt(2)", "(1+sqrt(5))/2", "7/3"}) {
    auto theta = S(t);
    const std::int64_t N = 100000;
    std::int64_t count = 0;
    for (std::int64_t m = 1; m <= N; ++m) count += beatty_contains(theta, S("3/10"), m) ? 1 : 0;
    CHECK(std::abs(static_cast<double>(count) / N - 1.0 / theta.to_double()) < 10.0 / N);
  }
}

TEST_CASE("prime sieve") {
  PrimeSieve s(1000000);
  CHECK(s.pi(10) == 4);
  CHECK(s.pi(100) == 25);
  CHECK(s.pi(1000000) == 78498);
  for (std::uint64_t n = 0; n <= 5000; ++n) REQUIRE(s.is_prime(n) == trial_prime(n));
  for (std::uint64_t n = 999000; n <= 1000000; ++n) REQUIRE(s.is_prime(n) == trial_prime(n));
  auto ps = s.primes_up_to(1000);
  CHECK(ps.size() == 168);
  CHECK(ps.back() == 997);
  CHECK_THROWS_AS(s.is_prime(1000001), std::out_of_range);
  // pi is consistent with membership counting.
  std::uint64_t running = 0;
  for (std::uint64_t n = 0; n <= 70000; ++n) {
    running += s.is_prime(n) ? 1 : 0;
    if (n % 4093 == 0) CHECK(s.pi(n) == running);
  }
}

TEST_CASE("squarefree sieve") {
  SquarefreeSieve s(1000000);
  CHECK_FALSE(s.is_squarefree(12));
  CHECK(s.is_squarefree(10));
  CHECK(s.count(1000000) == 607926);
  for (std::uint64_t n = 1; n <= 5000; ++n) REQUIRE(s.is_squarefree(n) == trial_squarefree(n));
}

TEST_CASE("index sequences") {
  auto a = IndexSequence::parse("arith:q=3,r=1");
  CHECK(a.terms(1, 3) == std::vector<std::int64_t>{4, 7, 10});
  auto b = IndexSequence::parse("beatty:theta=sqrt(2),gamma=0");
  CHECK(b.terms(1, 5) == std::vector<std::int64_t>{1, 2, 4, 5, 7});
  auto p = IndexSequence::parse("primes");
  CHECK(p.terms(1, 5) == std::vector<std::int64_t>{2, 3, 5, 7, 11});
  CHECK(p.term(1000) == 7919);
  CHECK(p.truncates_by_value());
  CHECK(p.terms_up_to(20).size() == 8);
  auto q = IndexSequence::parse("squarefree");
  CHECK(q.terms(1, 6) == std::vector<std::int64_t>{1, 2, 3, 5, 6, 7});
  auto bp = IndexSequence::parse("beatty_primes:theta=sqrt(2),gamma=0");
  for (auto t : bp.terms(1, 30)) {
    CHECK(trial_prime(static_cast<std::uint64_t>(t)));
    CHECK(b.contains(t));
  }
  auto e = IndexSequence::parse("explicit:1,4,9");
  CHECK(e.contains(4));
  CHECK_FALSE(e.contains(5));
  for (const char* t : {"arith:q=3,r=1", "primes", "squarefree", "explicit:1,4,9"})
    CHECK(IndexSequence::parse(IndexSequence::parse(t).to_string()).to_string() == IndexSequence::parse(t).to_string());
  CHECK_THROWS_AS(IndexSequence::parse("arith:q=3,z=1"), ParseError);
  CHECK_THROWS_AS(IndexSequence::parse("nope"), ParseError);
  // terms are strictly increasing
  for (const char* t : {"arith:q=5,r=2", "beatty:theta=sqrt(3),gamma=1/2", "squarefree", "primes"}) {
    auto v = IndexSequence::parse(t).terms(1, 500);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
  }
}

TEST_CASE("weights") {
  auto lam = WeightSequence::mangoldt().with_range(100);
  CHECK(weight_eval(lam, 8).real() == doctest::Approx(std::log(2.0)));
  auto lamp = WeightSequence::mangoldt_prime().with_range(100);
  CHECK(weight_eval(lamp, 8).real() == 0.0);
  CHECK(weight_eval(lamp, 7).real() == doctest::Approx(std::log(7.0)));
  auto wb = WeightSequence::parse("mangoldt_wb:W=6,b=5");
  auto wbr = wb.with_range(10);
  CHECK(weight_eval(wbr, 1).real() == doctest::Approx(std::log(11.0) / 3.0));
  CHECK(weight_eval(WeightSequence::parse("mangoldt_wb:w=3,b=5").with_range(10), 1).real() ==
        doctest::Approx(std::log(11.0) / 3.0));
  CHECK_THROWS_AS(weight_eval(lamp, 1000), std::out_of_range);
  auto ex = WeightSequence::parse("exp:alpha=1/4");
  CHECK(std::abs(weight_eval(ex, 1) - std::complex<double>(0, 1)) < 1e-15);
  auto ind = WeightSequence::parse("indicator:arith:q=3,r=0");
  auto v = ind.values(1, 6);
  CHECK(v[2].real() == 1.0);
  CHECK(v[3].real() == 0.0);
  auto mb = WeightSequence::parse("mangoldt_beatty:theta=sqrt(2),gamma=0").with_range(100);
  CHECK(weight_eval(mb, 7).real() == doctest::Approx(std::log(7.0)));
  CHECK(weight_eval(mb, 3).real() == 0.0);  // 3 is not a Beatty term of sqrt(2)
  CHECK_THROWS_AS(WeightSequence::parse("trig:1@sqrt(q)"), ParseError);
}

TEST_CASE("Mertens-scale average of Lambda'") {
  const std::size_t N = 1000000;
  auto v = WeightSequence::mangoldt_prime().values(1, N);
  double s = 0;
  for (const auto& x : v) s += x.real();
  CHECK(std::abs(s / N - 1.0) < 0.02);
}

TEST_CASE("besicovitch_fit") {
  const std::size_t N = 3 * 1000;
  std::vector<std::complex<double>> phi(N);
  for (std::size_t n = 1; n <= N; ++n) phi[n - 1] = std::polar(1.0, 2 * M_PI * static_cast<double>(n % 3) / 3.0);
  auto fit = besicovitch_fit(phi, std::vector{S("0"), S("1/3"), S("2/3")});
  CHECK(std::abs(fit.coeffs[0]) < 1e-12);
  CHECK(std::abs(fit.coeffs[1] - 1.0) < 1e-12);
  CHECK(std::abs(fit.coeffs[2]) < 1e-12);
  CHECK(fit.residual < 1e-12);
  CHECK_THROWS_AS(besicovitch_fit(phi, std::vector{S("1/3"), S("4/3")}), std::invalid_argument);

  const std::size_t M = 1 << 16;
  std::vector<std::complex<double>> quad(M);
  auto r2 = S("sqrt(2)");
  for (std::size_t n = 1; n <= M; ++n) quad[n - 1] = std::polar(1.0, 2 * M_PI * frac_times(r2, static_cast<i128>(n) * n));
  for (const char* t : {"0", "1/3", "sqrt(2)-1", "(sqrt(5)-1)/2"})
    CHECK(std::abs(besicovitch_fit(quad, std::vector{S(t)}).coeffs[0]) < 0.05);
}

TEST_CASE("squarefree Besicovitch residual decreases with D") {
  const std::size_t N = 100000;
  auto phi = WeightSequence::parse("indicator:squarefree").values(1, N);
  auto freqs_for = [](int D) {
    std::set<std::pair<i128, i128>> seen;
    std::vector<ExactScalar> fs;
    for (int d = 1; d <= D; ++d)
      for (int a = 0; a < d * d; ++a) {
        auto f = ExactScalar::rational(a, d * d);
        if (seen.insert({f.a(), f.c()}).second) fs.push_back(f);
      }
    return fs;
  };
  double r2 = besicovitch_fit(phi, freqs_for(2)).residual;
  double r3 = besicovitch_fit(phi, freqs_for(3)).residual;
  double r5 = besicovitch_fit(phi, freqs_for(5)).residual;
  CHECK(r3 < r2);
  CHECK(r5 < r3);
}

}
