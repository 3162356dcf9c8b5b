#pragma once

// Exact scalars for torus frequencies: rationals and real quadratic
// irrationals (a + b*sqrt(d))/c, with 128-bit checked integer arithmetic.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ergolab {

using i128 = __int128;

/// Raised when an exact computation would leave the 128-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Raised on malformed text input (scalars, sequence/system specs).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace checked {
i128 add(i128 x, i128 y);
i128 sub(i128 x, i128 y);
i128 mul(i128 x, i128 y);
i128 neg(i128 x);
}  // namespace checked

i128 gcd(i128 x, i128 y);
i128 floor_div(i128 num, i128 den);
/// floor(sqrt(n)) for n >= 0.
i128 isqrt(i128 n);
std::string to_string(i128 v);
i128 parse_i128(std::string_view text);

/// Normalized fraction num/den with den > 0 and gcd(num, den) = 1.
class Rational {
 public:
  Rational() = default;
  Rational(i128 num, i128 den = 1);  // NOLINT(google-explicit-constructor)

  i128 num() const { return num_; }
  i128 den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  i128 floor() const { return floor_div(num_, den_); }
  double to_double() const;
  std::string to_string() const;

  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  Rational operator-() const;
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

/// A real number (a + b*sqrt(d))/c in canonical form: c > 0, gcd(a,b,c) = 1,
/// d > 1 squarefree when b != 0; rationals have b = 0 and d = 1.
class ExactScalar {
 public:
  ExactScalar() = default;
  static ExactScalar integer(i128 v) { return rational(v, 1); }
  static ExactScalar rational(i128 p, i128 q = 1);
  static ExactScalar rational(const Rational& r) { return rational(r.num(), r.den()); }
  /// (a + b*sqrt(d))/c for any d >= 0; square factors of d are extracted.
  static ExactScalar quadratic(i128 a, i128 b, i128 d, i128 c);
  /// Parses `p/q`, `sqrt(d)`, `(a+b*sqrt(d))/c` and +,-,*,/ combinations
  /// thereof within one quadratic field. Decimal literals are exact.
  static ExactScalar parse(std::string_view text);

  bool is_rational() const { return b_ == 0; }
  i128 a() const { return a_; }
  i128 b() const { return b_; }
  i128 c() const { return c_; }
  /// Squarefree radicand; 1 for rationals.
  i128 d() const { return d_; }
  Rational rational_part() const { return Rational(a_, c_); }
  Rational surd_coefficient() const { return Rational(b_, c_); }

  int sign() const;
  i128 floor() const;
  /// Nearest double; exact integer parts are cancelled before rounding.
  double to_double() const;
  /// Canonical text: `p`, `p/q`, or `(a+b*sqrt(d))/c`; parse() inverts it.
  std::string to_string() const;

  ExactScalar inverse() const;
  ExactScalar operator-() const;
  friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y);
  friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y);
  friend bool operator==(const ExactScalar&, const ExactScalar&) = default;
  friend std::strong_ordering operator<=>(const ExactScalar& x, const ExactScalar& y);

 private:
  i128 a_ = 0;
  i128 b_ = 0;
  i128 c_ = 1;
  i128 d_ = 1;
};

/// x mod 1, in [0, 1).
ExactScalar reduce_mod1(const ExactScalar& x);

/// (k*x) mod 1 as a double, reduced exactly before rounding.
double frac_times(const ExactScalar& x, i128 k);

/// Q-linear combination r + sum_d s_d*sqrt(d) over distinct squarefree d.
/// Closed under integer combinations, which is all a torus subgroup needs.
class SurdSum {
 public:
  SurdSum() = default;
  explicit SurdSum(const ExactScalar& x);

  /// Coefficients keyed by radicand; key 1 holds the rational part.
  const std::map<i128, Rational>& terms() const { return terms_; }
  Rational coefficient(i128 d) const;
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  bool is_integer() const;
  /// The value as a single ExactScalar when at most one radicand occurs.
  std::optional<ExactScalar> as_scalar() const;
  /// Value mod 1 in [0, 1): exactly 0 when the sum is an integer.
  double frac_value() const;
  std::string to_string() const;

  SurdSum& operator+=(const SurdSum& other);
  friend SurdSum operator+(SurdSum x, const SurdSum& y) { return x += y; }
  friend SurdSum operator-(const SurdSum& x, const SurdSum& y);
  friend SurdSum operator*(i128 k, const SurdSum& x);
  friend bool operator==(const SurdSum&, const SurdSum&) = default;

 private:
  void add_term(i128 d, const Rational& coeff);
  std::map<i128, Rational> terms_;
};

/// Subgroup of T generated by the given elements, optionally together with
/// all of Q/Z (models <Q, theta^-1>).
struct FrequencyGroupSpec {
  std::vector<ExactScalar> generators;
  bool includes_rationals = false;
};

bool subgroup_contains(const FrequencyGroupSpec& group, const ExactScalar& x);
bool subgroup_contains(const FrequencyGroupSpec& group, const SurdSum& x);

/// True iff no nontrivial integer combination of xs is an integer.
bool rationally_independent(std::span<const ExactScalar> xs);

std::uint64_t euler_totient(std::uint64_t n);
/// Product of the primes <= w; OverflowError past 128 bits.
i128 primorial(std::uint64_t w);
bool is_squarefree_int(i128 n);

}  // namespace ergolab
