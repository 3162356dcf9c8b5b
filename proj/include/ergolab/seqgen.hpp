#pragma once

// Integer sequences (progressions, Beatty, squarefree, primes) and arithmetic
// weights (von Mangoldt family, W-tricked weights, trigonometric polynomials).

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ergolab/numbers.hpp"

namespace ergolab {

// ------------------------------------------------------------------ Beatty

/// floor(theta*n + gamma), computed exactly.
i128 beatty_term(const ExactScalar& theta, const ExactScalar& gamma, i128 n);

/// Membership of m in {floor(theta*n + gamma) : n >= 1} for theta >= 1, via
/// m/theta mod 1 in (a, b] with a = (gamma-1)/theta, b = gamma/theta; the arc
/// wraps to (a,1] u (0,b] when a >= b. std::domain_error for theta < 1.
bool beatty_indicator(const ExactScalar& theta, const ExactScalar& gamma, i128 m);

/// |{m in Z : floor(m*theta + gamma) = n}| = ceil((n+1-gamma)/theta) - ceil((n-gamma)/theta).
i128 beatty_hit_count(const ExactScalar& theta, const ExactScalar& gamma, i128 n);

/// min{j >= 1 : j*theta > 1}; for theta < 1 hit counts lie in {hit_bound-1, hit_bound}.
i128 beatty_hit_bound(const ExactScalar& theta);

/// Membership of m in {floor(theta*n + gamma) : n >= 1} for any theta > 0.
bool beatty_contains(const ExactScalar& theta, const ExactScalar& gamma, i128 m);

// ------------------------------------------------------------------ sieves

class PrimeSieve {
 public:
  /// Segmented Eratosthenes over [0, limit]; segments run through parallel_for.
  explicit PrimeSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  /// std::out_of_range beyond limit().
  bool is_prime(std::uint64_t n) const;
  /// Number of primes <= n.
  std::uint64_t pi(std::uint64_t n) const;
  std::vector<std::uint64_t> primes_up_to(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> prefix_;  // primes below word i
};

class SquarefreeSieve {
 public:
  explicit SquarefreeSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  bool is_squarefree(std::uint64_t n) const;
  /// Number of squarefree integers in [1, n].
  std::uint64_t count(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> prefix_;
};

// ---------------------------------------------------------- IndexSequence

class IndexSequence {
 public:
  struct Arithmetic {
    std::int64_t q;
    std::int64_t r;
  };
  struct Beatty {
    ExactScalar theta;
    ExactScalar gamma;
  };
  struct Squarefree {};
  struct Primes {};
  struct BeattyPrimes {
    ExactScalar theta;
    ExactScalar gamma;
  };
  struct Explicit {
    std::vector<std::int64_t> terms;
  };
  using Kind = std::variant<Arithmetic, Beatty, Squarefree, Primes, BeattyPrimes, Explicit>;

  static IndexSequence arithmetic(std::int64_t q, std::int64_t r);
  static IndexSequence beatty(ExactScalar theta, ExactScalar gamma);
  static IndexSequence squarefree();
  static IndexSequence primes();
  static IndexSequence beatty_primes(ExactScalar theta, ExactScalar gamma);
  static IndexSequence explicit_terms(std::vector<std::int64_t> terms);

  /// `arith:q=3,r=1`, `beatty:theta=sqrt(2),gamma=0`, `squarefree`, `primes`,
  /// `beatty_primes:theta=...,gamma=...`, `explicit:1,4,9`.
  static IndexSequence parse(std::string_view text);
  std::string to_string() const;

  const Kind& kind() const { return kind_; }
  /// Selected by value (a(n) <= N) rather than by position in averages.
  bool truncates_by_value() const;

  /// a(n), n >= 1.
  std::int64_t term(std::int64_t n) const;
  /// a(first), ..., a(first + count - 1).
  std::vector<std::int64_t> terms(std::int64_t first, std::size_t count) const;
  /// All terms with value <= max_value, in order.
  std::vector<std::int64_t> terms_up_to(std::int64_t max_value) const;
  bool contains(std::int64_t m) const;

 private:
  explicit IndexSequence(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

// --------------------------------------------------------- WeightSequence

class WeightSequence {
 public:
  struct Mangoldt {};
  struct MangoldtPrime {};
  struct MangoldtWb {
    std::int64_t W;
    std::int64_t b;
  };
  struct MangoldtBeatty {
    ExactScalar theta;
    ExactScalar gamma;
  };
  struct MangoldtBeattyWb {
    ExactScalar theta;
    ExactScalar gamma;
    std::int64_t W;
    std::int64_t b;
  };
  struct Indicator {
    IndexSequence sequence;
  };
  struct TrigPoly {
    std::vector<std::complex<double>> coeffs;
    std::vector<ExactScalar> freqs;
  };
  struct Explicit {
    std::vector<std::complex<double>> values;  // values[n-1]
  };
  using Kind = std::variant<Mangoldt, MangoldtPrime, MangoldtWb, MangoldtBeatty, MangoldtBeattyWb, Indicator,
                            TrigPoly, Explicit>;

  static WeightSequence mangoldt();
  static WeightSequence mangoldt_prime();
  static WeightSequence mangoldt_wb(std::int64_t W, std::int64_t b);
  static WeightSequence mangoldt_beatty(ExactScalar theta, ExactScalar gamma);
  static WeightSequence mangoldt_beatty_wb(ExactScalar theta, ExactScalar gamma, std::int64_t W, std::int64_t b);
  static WeightSequence indicator(IndexSequence sequence);
  static WeightSequence trig_poly(std::vector<std::complex<double>> coeffs, std::vector<ExactScalar> freqs);
  static WeightSequence explicit_values(std::vector<std::complex<double>> values);

  /// `mangoldt`, `mangoldt_prime`, `mangoldt_wb:w=5,b=7` (or `W=30`),
  /// `mangoldt_beatty:theta=..,gamma=..`, `mangoldt_beatty_wb:theta=..,gamma=..,w=..,b=..`,
  /// `indicator:<sequence>`, `trig:1@1/3;0.5@sqrt(2)` (coefficient `re` or `re|im`),
  /// `exp:alpha=..` (e(n alpha)), `const:c=..`.
  static WeightSequence parse(std::string_view text);
  std::string to_string() const;

  const Kind& kind() const { return kind_; }

  /// Largest integer whose primality is consulted for n <= max_n (0 if none).
  std::uint64_t sieve_limit(std::uint64_t max_n) const;
  /// Copy carrying a prime sieve that covers n <= max_n.
  WeightSequence with_range(std::uint64_t max_n) const;
  std::uint64_t range() const { return range_; }

  /// w(first), ..., w(first + count - 1); builds its own sieve when needed.
  std::vector<std::complex<double>> values(std::int64_t first, std::size_t count) const;

  friend std::complex<double> weight_eval(const WeightSequence& w, std::int64_t n);

 private:
  explicit WeightSequence(Kind k) : kind_(std::move(k)) {}
  std::complex<double> eval_with(const PrimeSieve* sieve, std::int64_t n) const;

  Kind kind_;
  std::shared_ptr<const PrimeSieve> sieve_;
  std::uint64_t range_ = 0;
};

/// Single value; std::out_of_range when n lies beyond the attached sieve
/// (see with_range) for the prime-based kinds, or n < 1.
std::complex<double> weight_eval(const WeightSequence& w, std::int64_t n);

/// von Mangoldt Lambda(n) using `sieve` for primality (n <= sieve.limit()).
double mangoldt_value(const PrimeSieve& sieve, std::uint64_t n);

// -------------------------------------------------------- Besicovitch fit

struct BesicovitchFit {
  std::vector<std::complex<double>> coeffs;
  double residual;
};

/// c_j = (1/N) sum phi(n) e(-theta_j n), residual = (1/N) sum |phi(n) - rho(n)|
/// for rho(n) = sum_j c_j e(theta_j n). phi[n-1] holds phi(n). Frequencies
/// must be distinct mod 1 (std::invalid_argument otherwise).
BesicovitchFit besicovitch_fit(std::span<const std::complex<double>> phi, std::span<const ExactScalar> freqs);

}  // namespace ergolab
