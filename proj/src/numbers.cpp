#include "ergolab/numbers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace ergolab {

namespace checked {

i128 add(i128 x, i128 y) {
  i128 r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("128-bit overflow in addition");
  return r;
}

i128 sub(i128 x, i128 y) {
  i128 r;
  if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("128-bit overflow in subtraction");
  return r;
}

i128 mul(i128 x, i128 y) {
  i128 r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("128-bit overflow in multiplication");
  return r;
}

i128 neg(i128 x) { return sub(0, x); }

}  // namespace checked

i128 gcd(i128 x, i128 y) {
  if (x < 0) x = checked::neg(x);
  if (y < 0) y = checked::neg(y);
  while (y != 0) {
    i128 t = x % y;
    x = y;
    y = t;
  }
  return x;
}

i128 floor_div(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("division by zero");
  i128 q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

i128 isqrt(i128 n) {
  if (n < 0) throw std::domain_error("isqrt of negative value");
  using u128 = unsigned __int128;
  u128 un = static_cast<u128>(n);
  u128 r = static_cast<u128>(std::sqrt(static_cast<long double>(un)));
  while (r > 0 && r * r > un) --r;
  while ((r + 1) * (r + 1) <= un) ++r;
  return static_cast<i128>(r);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool negative = v < 0;
  unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                 : static_cast<unsigned __int128>(v);
  std::string out;
  while (u > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

i128 parse_i128(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw ParseError("malformed integer '" + std::string(text) + "'");
  i128 v = 0;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError("malformed integer '" + std::string(text) + "'");
    v = checked::add(checked::mul(v, 10), ch - '0');
  }
  return negative ? -v : v;
}

// ---------------------------------------------------------------- Rational

Rational::Rational(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = checked::neg(num);
    den = checked::neg(den);
  }
  i128 g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

double Rational::to_double() const {
  i128 ip = floor();
  i128 rem = num_ - ip * den_;
  return static_cast<double>(static_cast<long double>(ip) +
                             static_cast<long double>(rem) / static_cast<long double>(den_));
}

std::string Rational::to_string() const {
  if (den_ == 1) return ergolab::to_string(num_);
  return ergolab::to_string(num_) + "/" + ergolab::to_string(den_);
}

Rational operator+(const Rational& x, const Rational& y) {
  i128 g = gcd(x.den_, y.den_);
  i128 den = checked::mul(x.den_ / g, y.den_);
  i128 num = checked::add(checked::mul(x.num_, y.den_ / g), checked::mul(y.num_, x.den_ / g));
  return Rational(num, den);
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y) {
  i128 g1 = gcd(x.num_, y.den_);
  i128 g2 = gcd(y.num_, x.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked::mul(x.num_ / g1, y.num_ / g2), checked::mul(x.den_ / g2, y.den_ / g1));
}

Rational operator/(const Rational& x, const Rational& y) {
  if (y.num_ == 0) throw std::domain_error("division by zero");
  return x * Rational(y.den_, y.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = checked::neg(num_);
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
  i128 lhs = checked::mul(x.num_, y.den_);
  i128 rhs = checked::mul(y.num_, x.den_);
  return lhs <=> rhs;
}

// ------------------------------------------------------------ ExactScalar

namespace {

// sign of a + b*sqrt(d), d > 1 squarefree.
int surd_sign(i128 a, i128 b, i128 d) {
  int sa = (a > 0) - (a < 0);
  int sb = (b > 0) - (b < 0);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  i128 a2 = checked::mul(a, a);
  i128 b2d = checked::mul(checked::mul(b, b), d);
  return a2 > b2d ? sa : sb;
}

// floor((a + b*sqrt(d))/c), c > 0, d > 1 squarefree, b != 0.
i128 surd_floor(i128 a, i128 b, i128 d, i128 c) {
  i128 root = isqrt(checked::mul(checked::mul(b, b), d));
  i128 fl = b > 0 ? root : checked::sub(checked::neg(root), 1);
  return floor_div(checked::add(a, fl), c);
}

// (a + b*sqrt(d))/c as a double without cancellation in the numerator.
double surd_to_double(i128 a, i128 b, i128 d, i128 c) {
  using ld = long double;
  ld root = std::sqrt(static_cast<ld>(d));
  if (a == 0 || (a > 0) == (b > 0)) {
    return static_cast<double>((static_cast<ld>(a) + static_cast<ld>(b) * root) /
                               static_cast<ld>(c));
  }
  i128 num = checked::sub(checked::mul(a, a), checked::mul(checked::mul(b, b), d));
  ld den = static_cast<ld>(a) - static_cast<ld>(b) * root;
  return static_cast<double>(static_cast<ld>(num) / (den * static_cast<ld>(c)));
}

i128 common_field(const ExactScalar& x, const ExactScalar& y) {
  if (x.is_rational()) return y.d();
  if (y.is_rational() || x.d() == y.d()) return x.d();
  throw std::domain_error("arithmetic across quadratic fields sqrt(" + to_string(x.d()) +
                          ") and sqrt(" + to_string(y.d()) + ")");
}

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view text) : text_(text) {}

  ExactScalar parse() {
    ExactScalar v = expr();
    skip();
    if (pos_ != text_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse scalar '" + std::string(text_) + "': " + why);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExactScalar expr() {
    ExactScalar v = term();
    for (;;) {
      if (accept('+')) {
        v = v + term();
      } else if (accept('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  ExactScalar term() {
    ExactScalar v = unary();
    for (;;) {
      if (accept('*')) {
        v = v * unary();
      } else if (accept('/')) {
        ExactScalar den = unary();
        if (den.sign() == 0) fail("division by zero");
        v = v / den;
      } else {
        return v;
      }
    }
  }

  ExactScalar unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  ExactScalar primary() {
    skip();
    if (accept('(')) {
      ExactScalar v = expr();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!accept('(')) fail("expected '(' after sqrt");
      skip();
      i128 d = integer_literal();
      if (!accept(')')) fail("missing ')' after sqrt argument");
      if (d < 0) fail("sqrt of negative integer");
      return ExactScalar::quadratic(0, 1, d, 1);
    }
    return number();
  }

  i128 integer_literal() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return parse_i128(text_.substr(start, pos_ - start));
  }

  ExactScalar number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected number");
    i128 whole = parse_i128(text_.substr(start, pos_ - start));
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t fstart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (fstart == pos_) fail("expected digits after '.'");
      i128 scale = 1;
      i128 frac = 0;
      for (std::size_t i = fstart; i < pos_; ++i) {
        scale = checked::mul(scale, 10);
        frac = checked::add(checked::mul(frac, 10), text_[i] - '0');
      }
      return ExactScalar::rational(checked::add(checked::mul(whole, scale), frac), scale);
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E'))
      fail("floating-point exponents are not exact scalars");
    return ExactScalar::integer(whole);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExactScalar ExactScalar::rational(i128 p, i128 q) {
  Rational r(p, q);
  ExactScalar x;
  x.a_ = r.num();
  x.c_ = r.den();
  return x;
}

ExactScalar ExactScalar::quadratic(i128 a, i128 b, i128 d, i128 c) {
  if (c == 0) throw std::domain_error("zero denominator");
  if (d < 0) throw std::domain_error("negative radicand");
  if (b == 0 || d == 0) return rational(a, c);
  i128 square = 1;
  for (i128 p = 2; p * p <= d; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      square = checked::mul(square, p);
    }
  }
  b = checked::mul(b, square);
  if (d == 1) return rational(checked::add(a, b), c);
  if (c < 0) {
    a = checked::neg(a);
    b = checked::neg(b);
    c = checked::neg(c);
  }
  i128 g = gcd(gcd(a, b), c);
  ExactScalar x;
  x.a_ = a / g;
  x.b_ = b / g;
  x.c_ = c / g;
  x.d_ = d;
  return x;
}

ExactScalar ExactScalar::parse(std::string_view text) { return ScalarParser(text).parse(); }

int ExactScalar::sign() const { return surd_sign(a_, b_, d_); }

i128 ExactScalar::floor() const {
  if (b_ == 0) return floor_div(a_, c_);
  return surd_floor(a_, b_, d_, c_);
}

double ExactScalar::to_double() const {
  if (b_ == 0) return Rational(a_, c_).to_double();
  return surd_to_double(a_, b_, d_, c_);
}

std::string ExactScalar::to_string() const {
  if (b_ == 0) return Rational(a_, c_).to_string();
  std::string out = "(" + ergolab::to_string(a_);
  out += b_ < 0 ? "-" : "+";
  out += ergolab::to_string(b_ < 0 ? -b_ : b_) + "*sqrt(" + ergolab::to_string(d_) + "))/" +
         ergolab::to_string(c_);
  return out;
}

ExactScalar ExactScalar::inverse() const {
  if (sign() == 0) throw std::domain_error("inverse of zero");
  if (b_ == 0) return rational(c_, a_);
  // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
  i128 norm = checked::sub(checked::mul(a_, a_), checked::mul(checked::mul(b_, b_), d_));
  return quadratic(checked::mul(c_, a_), checked::neg(checked::mul(c_, b_)), d_, norm);
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar x = *this;
  x.a_ = checked::neg(a_);
  x.b_ = checked::neg(b_);
  return x;
}

ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
  i128 d = common_field(x, y);
  i128 a = checked::add(checked::mul(x.a_, y.c_), checked::mul(y.a_, x.c_));
  i128 b = checked::add(checked::mul(x.b_, y.c_), checked::mul(y.b_, x.c_));
  return ExactScalar::quadratic(a, b, d, checked::mul(x.c_, y.c_));
}

ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) { return x + (-y); }

ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
  i128 d = common_field(x, y);
  i128 a = checked::add(checked::mul(x.a_, y.a_), checked::mul(checked::mul(x.b_, y.b_), d));
  i128 b = checked::add(checked::mul(x.a_, y.b_), checked::mul(x.b_, y.a_));
  return ExactScalar::quadratic(a, b, d, checked::mul(x.c_, y.c_));
}

ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) { return x * y.inverse(); }

std::strong_ordering operator<=>(const ExactScalar& x, const ExactScalar& y) {
  int s = (x - y).sign();
  return s <=> 0;
}

ExactScalar reduce_mod1(const ExactScalar& x) { return x - ExactScalar::integer(x.floor()); }

double frac_times(const ExactScalar& x, i128 k) {
  if (x.is_rational()) {
    i128 num = checked::mul(k, x.a());
    i128 r = num - floor_div(num, x.c()) * x.c();
    return static_cast<double>(static_cast<long double>(r) / static_cast<long double>(x.c()));
  }
  i128 a = checked::mul(k, x.a());
  i128 b = checked::mul(k, x.b());
  i128 fl = surd_floor(a, b, x.d(), x.c());
  a = checked::sub(a, checked::mul(fl, x.c()));
  double v = surd_to_double(a, b, x.d(), x.c());
  if (v >= 1.0) v -= 1.0;
  if (v < 0.0) v = 0.0;
  return v;
}

// ---------------------------------------------------------------- SurdSum

SurdSum::SurdSum(const ExactScalar& x) {
  add_term(1, x.rational_part());
  if (!x.is_rational()) add_term(x.d(), x.surd_coefficient());
}

void SurdSum::add_term(i128 d, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(d);
  if (it == terms_.end()) {
    terms_.emplace(d, coeff);
    return;
  }
  it->second = it->second + coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

Rational SurdSum::coefficient(i128 d) const {
  auto it = terms_.find(d);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool SurdSum::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

bool SurdSum::is_integer() const { return is_rational() && coefficient(1).is_integer(); }

std::optional<ExactScalar> SurdSum::as_scalar() const {
  Rational r = coefficient(1);
  ExactScalar out = ExactScalar::rational(r);
  for (const auto& [d, s] : terms_) {
    if (d == 1) continue;
    if (!out.is_rational()) return std::nullopt;
    out = out + ExactScalar::quadratic(0, s.num(), d, s.den());
  }
  return out;
}

double SurdSum::frac_value() const {
  if (is_integer()) return 0.0;
  double total = 0.0;
  for (const auto& [d, s] : terms_) {
    ExactScalar term = d == 1 ? ExactScalar::rational(s) : ExactScalar::quadratic(0, s.num(), d, s.den());
    total += reduce_mod1(term).to_double();
  }
  total -= std::floor(total);
  return total >= 1.0 ? 0.0 : total;
}

std::string SurdSum::to_string() const {
  if (auto scalar = as_scalar()) return scalar->to_string();
  std::string out;
  for (const auto& [d, s] : terms_) {
    if (!out.empty()) out += "+";
    out += d == 1 ? "(" + s.to_string() + ")" : "(" + s.to_string() + ")*sqrt(" + ergolab::to_string(d) + ")";
  }
  return out;
}

SurdSum& SurdSum::operator+=(const SurdSum& other) {
  for (const auto& [d, s] : other.terms_) add_term(d, s);
  return *this;
}

SurdSum operator-(const SurdSum& x, const SurdSum& y) { return x + (-1) * y; }

SurdSum operator*(i128 k, const SurdSum& x) {
  SurdSum out;
  if (k == 0) return out;
  for (const auto& [d, s] : x.terms_) out.terms_.emplace(d, s * Rational(k));
  return out;
}

// ------------------------------------------------------ subgroup membership

namespace {

using Matrix = std::vector<std::vector<i128>>;

// Decides whether A u = v has an integer solution, by unimodular column
// reduction of A to lower column-echelon form and forward substitution.
bool integer_solvable(Matrix a, std::vector<i128> v) {
  const std::size_t rows = a.size();
  if (rows == 0) return true;
  const std::size_t cols = a[0].size();
  auto column_axpy = [&](std::size_t dst, std::size_t src, i128 q) {
    for (std::size_t r = 0; r < rows; ++r) a[r][dst] = checked::sub(a[r][dst], checked::mul(q, a[r][src]));
  };
  auto column_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
  };

  std::vector<long> pivot(rows, -1);
  std::size_t col = 0;
  for (std::size_t r = 0; r < rows && col < cols; ++r) {
    for (std::size_t j = col + 1; j < cols; ++j) {
      while (a[r][j] != 0) {
        i128 q = a[r][col] / a[r][j];
        column_axpy(col, j, q);
        column_swap(col, j);
      }
    }
    if (a[r][col] != 0) {
      pivot[r] = static_cast<long>(col);
      ++col;
    }
  }

  std::vector<i128> y(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    i128 residual = v[r];
    for (std::size_t c = 0; c < cols; ++c) {
      if (a[r][c] != 0 && static_cast<long>(c) != pivot[r]) residual = checked::sub(residual, checked::mul(a[r][c], y[c]));
    }
    if (pivot[r] >= 0) {
      i128 p = a[r][static_cast<std::size_t>(pivot[r])];
      if (residual % p != 0) return false;
      y[static_cast<std::size_t>(pivot[r])] = residual / p;
    } else if (residual != 0) {
      return false;
    }
  }
  return true;
}

i128 lcm(i128 x, i128 y) { return checked::mul(x / gcd(x, y), y); }

}  // namespace

bool subgroup_contains(const FrequencyGroupSpec& group, const SurdSum& x) {
  std::vector<SurdSum> gens;
  gens.reserve(group.generators.size());
  for (const auto& g : group.generators) gens.emplace_back(g);

  std::vector<i128> radicands;
  auto collect = [&](const SurdSum& s) {
    for (const auto& [d, coeff] : s.terms()) {
      if (d != 1 && std::find(radicands.begin(), radicands.end(), d) == radicands.end()) radicands.push_back(d);
    }
  };
  collect(x);
  for (const auto& g : gens) collect(g);
  std::sort(radicands.begin(), radicands.end());

  // Rows: one per radicand (the surd parts must match exactly) and, unless
  // all rationals are in the group, one for the rational part modulo Z.
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  const std::size_t k = gens.size();
  const bool integer_row = !group.includes_rationals;
  const std::size_t cols = k + (integer_row ? 1 : 0);
  for (i128 d : radicands) {
    std::vector<Rational> row(cols, Rational(0));
    for (std::size_t i = 0; i < k; ++i) row[i] = gens[i].coefficient(d);
    rows.push_back(std::move(row));
    rhs.push_back(x.coefficient(d));
  }
  if (integer_row) {
    std::vector<Rational> row(cols, Rational(0));
    for (std::size_t i = 0; i < k; ++i) row[i] = gens[i].coefficient(1);
    row[k] = Rational(1);
    rows.push_back(std::move(row));
    rhs.push_back(x.coefficient(1));
  }
  if (cols == 0) return rows.empty() || std::all_of(rhs.begin(), rhs.end(), [](const Rational& r) { return r.is_zero(); });

  Matrix a;
  std::vector<i128> v;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    i128 scale = rhs[r].den();
    for (const auto& e : rows[r]) scale = lcm(scale, e.den());
    std::vector<i128> irow;
    for (const auto& e : rows[r]) irow.push_back(checked::mul(e.num(), scale / e.den()));
    a.push_back(std::move(irow));
    v.push_back(checked::mul(rhs[r].num(), scale / rhs[r].den()));
  }
  return integer_solvable(std::move(a), std::move(v));
}

bool subgroup_contains(const FrequencyGroupSpec& group, const ExactScalar& x) {
  return subgroup_contains(group, SurdSum(x));
}

bool rationally_independent(std::span<const ExactScalar> xs) {
  // Independent iff the surd-coefficient vectors are Q-linearly independent:
  // any rational value of a combination can be scaled into Z.
  std::vector<i128> radicands;
  for (const auto& x : xs) {
    if (!x.is_rational() && std::find(radicands.begin(), radicands.end(), x.d()) == radicands.end())
      radicands.push_back(x.d());
  }
  if (xs.size() > radicands.size()) return false;
  std::vector<std::vector<Rational>> m;
  for (const auto& x : xs) {
    std::vector<Rational> row(radicands.size(), Rational(0));
    if (!x.is_rational()) {
      auto pos = std::find(radicands.begin(), radicands.end(), x.d()) - radicands.begin();
      row[static_cast<std::size_t>(pos)] = x.surd_coefficient();
    }
    m.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < radicands.size() && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t cc = c; cc < radicands.size(); ++cc) m[r][cc] = m[r][cc] - f * m[rank][cc];
    }
    ++rank;
  }
  return rank == xs.size();
}

std::uint64_t euler_totient(std::uint64_t n) {
  if (n == 0) throw std::domain_error("euler_totient(0)");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

i128 primorial(std::uint64_t w) {
  i128 product = 1;
  for (std::uint64_t p = 2; p <= w; ++p) {
    bool prime = true;
    for (std::uint64_t q = 2; q * q <= p; ++q) {
      if (p % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) product = checked::mul(product, static_cast<i128>(p));
  }
  return product;
}

bool is_squarefree_int(i128 n) {
  if (n < 0) n = -n;
  if (n == 0) return false;
  for (i128 p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

}  // namespace ergolab
