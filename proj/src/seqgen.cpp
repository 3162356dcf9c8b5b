#include "ergolab/seqgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "ergolab/parallel.hpp"
#include "ergolab/spec_text.hpp"

namespace ergolab {

namespace {

i128 ceil_of(const ExactScalar& x) { return -(-x).floor(); }

ExactScalar int_scalar(i128 v) { return ExactScalar::integer(v); }

void require_positive(const ExactScalar& theta) {
  if (theta.sign() <= 0) throw std::domain_error("Beatty slope must be positive, got " + theta.to_string());
}

}  // namespace

i128 beatty_term(const ExactScalar& theta, const ExactScalar& gamma, i128 n) {
  require_positive(theta);
  return (theta * int_scalar(n) + gamma).floor();
}

i128 beatty_hit_count(const ExactScalar& theta, const ExactScalar& gamma, i128 n) {
  require_positive(theta);
  return ceil_of((int_scalar(n + 1) - gamma) / theta) - ceil_of((int_scalar(n) - gamma) / theta);
}

i128 beatty_hit_bound(const ExactScalar& theta) {
  require_positive(theta);
  return theta.inverse().floor() + 1;
}

bool beatty_contains(const ExactScalar& theta, const ExactScalar& gamma, i128 m) {
  require_positive(theta);
  i128 lo = std::max<i128>(1, ceil_of((int_scalar(m) - gamma) / theta));
  i128 hi = ceil_of((int_scalar(m + 1) - gamma) / theta);
  return hi > lo;
}

bool beatty_indicator(const ExactScalar& theta, const ExactScalar& gamma, i128 m) {
  if (theta < ExactScalar::integer(1))
    throw std::domain_error("beatty_indicator needs theta >= 1; use beatty_hit_count");
  if (m < beatty_term(theta, gamma, 1)) return false;
  const ExactScalar inv = theta.inverse();
  const ExactScalar x = reduce_mod1(int_scalar(m) * inv);
  const ExactScalar a = reduce_mod1((gamma - int_scalar(1)) * inv);
  const ExactScalar b = reduce_mod1(gamma * inv);
  if (a < b) return a < x && x <= b;
  return x > a || x <= b;
}

// ------------------------------------------------------------------ sieves

namespace {

constexpr std::uint64_t kSegmentWords = 4096;

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t sqrt_floor(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> word_prefix(const std::vector<std::uint64_t>& bits) {
  std::vector<std::uint32_t> prefix(bits.size() + 1, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    prefix[i + 1] = prefix[i] + static_cast<std::uint32_t>(std::popcount(bits[i]));
  return prefix;
}

std::uint64_t count_through(const std::vector<std::uint64_t>& bits, const std::vector<std::uint32_t>& prefix,
                            std::uint64_t n) {
  std::uint64_t word = n / 64;
  std::uint64_t bit = n % 64;
  std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (bit + 1)) - 1);
  return prefix[word] + static_cast<std::uint64_t>(std::popcount(bits[word] & mask));
}

void clear_tail(std::vector<std::uint64_t>& bits, std::uint64_t limit) {
  std::uint64_t bit = limit % 64;
  if (bit != 63) bits.back() &= (std::uint64_t{1} << (bit + 1)) - 1;
}

}  // namespace

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw std::invalid_argument("PrimeSieve needs limit >= 2");
  const std::uint64_t words = limit / 64 + 1;
  // Odd-number wheel: every word starts as the 64-bit pattern of odd positions.
  bits_.assign(words, 0xAAAAAAAAAAAAAAAAULL);
  bits_[0] &= ~std::uint64_t{2};  // 1 is not prime
  bits_[0] |= std::uint64_t{4};   // 2 is prime
  const auto base = small_primes(sqrt_floor(limit));
  const std::size_t segments = (words + kSegmentWords - 1) / kSegmentWords;
  parallel_for(segments, [&](std::size_t s) {
    const std::uint64_t lo = s * kSegmentWords * 64;
    const std::uint64_t hi = std::min<std::uint64_t>(words, (s + 1) * kSegmentWords) * 64;
    for (std::uint64_t p : base) {
      if (p == 2) continue;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = start; j < hi; j += 2 * p) bits_[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    }
  });
  clear_tail(bits_, limit);
  prefix_ = word_prefix(bits_);
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
  if (n > limit_) throw std::out_of_range("is_prime beyond sieve limit");
  return bits_[n / 64] >> (n % 64) & 1U;
}

std::uint64_t PrimeSieve::pi(std::uint64_t n) const {
  return count_through(bits_, prefix_, std::min(n, limit_));
}

std::vector<std::uint64_t> PrimeSieve::primes_up_to(std::uint64_t n) const {
  if (n > limit_) throw std::out_of_range("primes_up_to beyond sieve limit");
  std::vector<std::uint64_t> out;
  out.reserve(pi(n));
  for (std::uint64_t w = 0; w <= n / 64; ++w) {
    std::uint64_t word = bits_[w];
    while (word != 0) {
      std::uint64_t p = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
      if (p > n) return out;
      out.push_back(p);
      word &= word - 1;
    }
  }
  return out;
}

SquarefreeSieve::SquarefreeSieve(std::uint64_t limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("SquarefreeSieve needs limit >= 1");
  bits_.assign(limit / 64 + 1, ~std::uint64_t{0});
  bits_[0] &= ~std::uint64_t{1};
  for (std::uint64_t p : small_primes(sqrt_floor(limit))) {
    const std::uint64_t sq = p * p;
    for (std::uint64_t j = sq; j <= limit; j += sq) bits_[j / 64] &= ~(std::uint64_t{1} << (j % 64));
  }
  clear_tail(bits_, limit);
  prefix_ = word_prefix(bits_);
}

bool SquarefreeSieve::is_squarefree(std::uint64_t n) const {
  if (n > limit_) throw std::out_of_range("is_squarefree beyond sieve limit");
  return bits_[n / 64] >> (n % 64) & 1U;
}

std::uint64_t SquarefreeSieve::count(std::uint64_t n) const {
  return count_through(bits_, prefix_, std::min(n, limit_));
}

// ---------------------------------------------------------- IndexSequence

namespace {

bool is_prime_trial(std::int64_t m) {
  if (m < 2) return false;
  if (m % 2 == 0) return m == 2;
  for (std::int64_t p = 3; p * p <= m; p += 2) {
    if (m % p == 0) return false;
  }
  return true;
}

std::uint64_t nth_prime_bound(std::uint64_t n) {
  if (n < 6) return 15;
  double x = static_cast<double>(n);
  return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x)))) + 3;
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

IndexSequence IndexSequence::arithmetic(std::int64_t q, std::int64_t r) {
  if (q < 1) throw std::invalid_argument("arithmetic progression needs q >= 1");
  return IndexSequence(Arithmetic{q, r});
}

IndexSequence IndexSequence::beatty(ExactScalar theta, ExactScalar gamma) {
  require_positive(theta);
  return IndexSequence(Beatty{std::move(theta), std::move(gamma)});
}

IndexSequence IndexSequence::squarefree() { return IndexSequence(Squarefree{}); }
IndexSequence IndexSequence::primes() { return IndexSequence(Primes{}); }

IndexSequence IndexSequence::beatty_primes(ExactScalar theta, ExactScalar gamma) {
  require_positive(theta);
  return IndexSequence(BeattyPrimes{std::move(theta), std::move(gamma)});
}

IndexSequence IndexSequence::explicit_terms(std::vector<std::int64_t> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] < 1 || (i > 0 && terms[i] <= terms[i - 1]))
      throw std::invalid_argument("explicit sequence must be strictly increasing positive integers");
  }
  return IndexSequence(Explicit{std::move(terms)});
}

IndexSequence IndexSequence::parse(std::string_view text) {
  SpecText s = parse_spec_text(text);
  if (s.name == "arith") {
    s.expect_keys({"q", "r"});
    return arithmetic(parse_int64(s.get("q")), s.find("r") ? parse_int64(s.get("r")) : 0);
  }
  if (s.name == "beatty" || s.name == "beatty_primes") {
    s.expect_keys({"theta", "gamma"});
    ExactScalar theta = ExactScalar::parse(s.get("theta"));
    ExactScalar gamma = s.find("gamma") ? ExactScalar::parse(s.get("gamma")) : ExactScalar::integer(0);
    if (theta.sign() <= 0) throw ParseError("Beatty slope must be positive");
    return s.name == "beatty" ? beatty(theta, gamma) : beatty_primes(theta, gamma);
  }
  if (s.name == "squarefree" || s.name == "primes") {
    s.expect_keys({});
    return s.name == "primes" ? primes() : squarefree();
  }
  if (s.name == "explicit") {
    s.expect_keys({}, true);
    std::vector<std::int64_t> terms;
    for (const auto& p : s.positional) terms.push_back(parse_int64(p));
    try {
      return explicit_terms(std::move(terms));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown sequence '" + s.name + "'");
}

std::string IndexSequence::to_string() const {
  return std::visit(
      Overloaded{
          [](const Arithmetic& a) { return "arith:q=" + std::to_string(a.q) + ",r=" + std::to_string(a.r); },
          [](const Beatty& b) { return "beatty:theta=" + b.theta.to_string() + ",gamma=" + b.gamma.to_string(); },
          [](const Squarefree&) { return std::string("squarefree"); },
          [](const Primes&) { return std::string("primes"); },
          [](const BeattyPrimes& b) {
            return "beatty_primes:theta=" + b.theta.to_string() + ",gamma=" + b.gamma.to_string();
          },
          [](const Explicit& e) {
            std::string out = "explicit:";
            for (std::size_t i = 0; i < e.terms.size(); ++i) out += (i ? "," : "") + std::to_string(e.terms[i]);
            return out;
          },
      },
      kind_);
}

bool IndexSequence::truncates_by_value() const {
  return std::holds_alternative<Primes>(kind_) || std::holds_alternative<BeattyPrimes>(kind_);
}

std::int64_t IndexSequence::term(std::int64_t n) const {
  if (n < 1) throw std::out_of_range("sequence positions start at 1");
  return terms(n, 1).front();
}

std::vector<std::int64_t> IndexSequence::terms(std::int64_t first, std::size_t count) const {
  if (first < 1) throw std::out_of_range("sequence positions start at 1");
  std::vector<std::int64_t> out;
  out.reserve(count);
  const auto last = static_cast<std::uint64_t>(first) + count - 1;
  std::visit(Overloaded{
                 [&](const Arithmetic& a) {
                   for (std::size_t i = 0; i < count; ++i)
                     out.push_back(a.q * (first + static_cast<std::int64_t>(i)) + a.r);
                 },
                 [&](const Beatty& b) {
                   for (std::size_t i = 0; i < count; ++i)
                     out.push_back(static_cast<std::int64_t>(
                         beatty_term(b.theta, b.gamma, first + static_cast<std::int64_t>(i))));
                 },
                 [&](const Squarefree&) {
                   SquarefreeSieve sieve(last * 17 / 10 + 64);
                   std::uint64_t pos = 0;
                   for (std::uint64_t m = 1; m <= sieve.limit() && out.size() < count; ++m) {
                     if (!sieve.is_squarefree(m)) continue;
                     if (++pos >= static_cast<std::uint64_t>(first)) out.push_back(static_cast<std::int64_t>(m));
                   }
                 },
                 [&](const Primes&) {
                   PrimeSieve sieve(nth_prime_bound(last));
                   auto ps = sieve.primes_up_to(sieve.limit());
                   for (std::uint64_t i = static_cast<std::uint64_t>(first) - 1; i < last; ++i)
                     out.push_back(static_cast<std::int64_t>(ps.at(i)));
                 },
                 [&](const BeattyPrimes& b) {
                   std::uint64_t bound = 2 * nth_prime_bound(last) * (static_cast<std::uint64_t>(b.theta.to_double()) + 1);
                   for (;;) {
                     auto all = terms_up_to(static_cast<std::int64_t>(bound));
                     if (all.size() >= last) {
                       out.assign(all.begin() + (first - 1), all.begin() + static_cast<std::ptrdiff_t>(last));
                       return;
                     }
                     bound *= 2;
                   }
                 },
                 [&](const Explicit& e) {
                   if (last > e.terms.size()) throw std::out_of_range("explicit sequence exhausted");
                   out.assign(e.terms.begin() + (first - 1), e.terms.begin() + static_cast<std::ptrdiff_t>(last));
                 },
             },
             kind_);
  return out;
}

std::vector<std::int64_t> IndexSequence::terms_up_to(std::int64_t max_value) const {
  std::vector<std::int64_t> out;
  if (max_value < 1) return out;
  const auto limit = static_cast<std::uint64_t>(max_value);
  std::visit(Overloaded{
                 [&](const Arithmetic& a) {
                   for (std::int64_t n = 1; a.q * n + a.r <= max_value; ++n) out.push_back(a.q * n + a.r);
                 },
                 [&](const Beatty& b) {
                   for (std::int64_t n = 1;; ++n) {
                     i128 t = beatty_term(b.theta, b.gamma, n);
                     if (t > max_value) break;
                     out.push_back(static_cast<std::int64_t>(t));
                   }
                 },
                 [&](const Squarefree&) {
                   SquarefreeSieve sieve(limit);
                   for (std::uint64_t m = 1; m <= limit; ++m)
                     if (sieve.is_squarefree(m)) out.push_back(static_cast<std::int64_t>(m));
                 },
                 [&](const Primes&) {
                   if (limit < 2) return;
                   for (auto p : PrimeSieve(limit).primes_up_to(limit)) out.push_back(static_cast<std::int64_t>(p));
                 },
                 [&](const BeattyPrimes& b) {
                   if (limit < 2) return;
                   for (auto p : PrimeSieve(limit).primes_up_to(limit))
                     if (beatty_contains(b.theta, b.gamma, p)) out.push_back(static_cast<std::int64_t>(p));
                 },
                 [&](const Explicit& e) {
                   for (auto t : e.terms)
                     if (t <= max_value) out.push_back(t);
                 },
             },
             kind_);
  return out;
}

bool IndexSequence::contains(std::int64_t m) const {
  return std::visit(Overloaded{
                        [&](const Arithmetic& a) { return m >= a.q + a.r && (m - a.r) % a.q == 0; },
                        [&](const Beatty& b) { return beatty_contains(b.theta, b.gamma, m); },
                        [&](const Squarefree&) { return m >= 1 && is_squarefree_int(m); },
                        [&](const Primes&) { return is_prime_trial(m); },
                        [&](const BeattyPrimes& b) { return is_prime_trial(m) && beatty_contains(b.theta, b.gamma, m); },
                        [&](const Explicit& e) { return std::binary_search(e.terms.begin(), e.terms.end(), m); },
                    },
                    kind_);
}

// --------------------------------------------------------- WeightSequence

double mangoldt_value(const PrimeSieve& sieve, std::uint64_t n) {
  if (n < 2) return 0.0;
  if (sieve.is_prime(n)) return std::log(static_cast<double>(n));
  std::uint64_t p = 2;
  while (p * p <= n && n % p != 0) ++p;
  if (n % p != 0) return 0.0;
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

namespace {

double wtrick_factor(std::int64_t W) {
  return static_cast<double>(euler_totient(static_cast<std::uint64_t>(W))) / static_cast<double>(W);
}

void check_wb(std::int64_t W, std::int64_t b) {
  if (W < 1 || b < 0) throw std::invalid_argument("W-trick needs W >= 1 and b >= 0");
}

}  // namespace

WeightSequence WeightSequence::mangoldt() { return WeightSequence(Mangoldt{}); }
WeightSequence WeightSequence::mangoldt_prime() { return WeightSequence(MangoldtPrime{}); }

WeightSequence WeightSequence::mangoldt_wb(std::int64_t W, std::int64_t b) {
  check_wb(W, b);
  return WeightSequence(MangoldtWb{W, b});
}

WeightSequence WeightSequence::mangoldt_beatty(ExactScalar theta, ExactScalar gamma) {
  require_positive(theta);
  return WeightSequence(MangoldtBeatty{std::move(theta), std::move(gamma)});
}

WeightSequence WeightSequence::mangoldt_beatty_wb(ExactScalar theta, ExactScalar gamma, std::int64_t W,
                                                  std::int64_t b) {
  require_positive(theta);
  check_wb(W, b);
  return WeightSequence(MangoldtBeattyWb{std::move(theta), std::move(gamma), W, b});
}

WeightSequence WeightSequence::indicator(IndexSequence sequence) {
  return WeightSequence(Indicator{std::move(sequence)});
}

WeightSequence WeightSequence::trig_poly(std::vector<std::complex<double>> coeffs, std::vector<ExactScalar> freqs) {
  if (coeffs.size() != freqs.size()) throw std::invalid_argument("trig_poly needs one coefficient per frequency");
  return WeightSequence(TrigPoly{std::move(coeffs), std::move(freqs)});
}

WeightSequence WeightSequence::explicit_values(std::vector<std::complex<double>> values) {
  return WeightSequence(Explicit{std::move(values)});
}

namespace {

std::int64_t parse_modulus(const SpecText& s) {
  if (s.find("W") && s.find("w")) throw ParseError("give either w (primorial bound) or W, not both");
  if (s.find("W")) return parse_int64(s.get("W"));
  i128 W = primorial(static_cast<std::uint64_t>(parse_int64(s.get("w"))));
  if (W > INT64_MAX / 1024) throw ParseError("primorial too large");
  return static_cast<std::int64_t>(W);
}

std::complex<double> parse_coefficient(const std::string& text) {
  auto bar = text.find('|');
  if (bar == std::string::npos) return {parse_real(text), 0.0};
  return {parse_real(text.substr(0, bar)), parse_real(text.substr(bar + 1))};
}

std::string format_coefficient(std::complex<double> c) {
  if (c.imag() == 0.0) return format_real(c.real());
  return format_real(c.real()) + "|" + format_real(c.imag());
}

}  // namespace

WeightSequence WeightSequence::parse(std::string_view text) {
  SpecText s = parse_spec_text(text);
  if (s.name == "mangoldt" || s.name == "mangoldt_prime") {
    s.expect_keys({});
    return s.name == "mangoldt" ? mangoldt() : mangoldt_prime();
  }
  if (s.name == "mangoldt_wb") {
    s.expect_keys({"w", "W", "b"});
    std::int64_t W = parse_modulus(s);
    std::int64_t b = parse_int64(s.get("b"));
    if (W < 1 || b < 0) throw ParseError("mangoldt_wb needs W >= 1, b >= 0");
    return mangoldt_wb(W, b);
  }
  if (s.name == "mangoldt_beatty" || s.name == "mangoldt_beatty_wb") {
    bool wb = s.name == "mangoldt_beatty_wb";
    if (wb) {
      s.expect_keys({"theta", "gamma", "w", "W", "b"});
    } else {
      s.expect_keys({"theta", "gamma"});
    }
    ExactScalar theta = ExactScalar::parse(s.get("theta"));
    ExactScalar gamma = s.find("gamma") ? ExactScalar::parse(s.get("gamma")) : ExactScalar::integer(0);
    if (theta.sign() <= 0) throw ParseError("Beatty slope must be positive");
    if (!wb) return mangoldt_beatty(theta, gamma);
    std::int64_t W = parse_modulus(s);
    std::int64_t b = parse_int64(s.get("b"));
    if (W < 1 || b < 0) throw ParseError("mangoldt_beatty_wb needs W >= 1, b >= 0");
    return mangoldt_beatty_wb(theta, gamma, W, b);
  }
  if (s.name == "indicator") return indicator(IndexSequence::parse(s.raw_args));
  if (s.name == "exp") {
    s.expect_keys({"alpha"});
    return trig_poly({1.0}, {ExactScalar::parse(s.get("alpha"))});
  }
  if (s.name == "const") {
    s.expect_keys({"c"});
    return trig_poly({parse_coefficient(s.get("c"))}, {ExactScalar::integer(0)});
  }
  if (s.name == "trig") {
    std::vector<std::complex<double>> coeffs;
    std::vector<ExactScalar> freqs;
    for (const auto& item : split_top_level(s.raw_args, ';')) {
      auto at = item.find('@');
      if (at == std::string::npos) throw ParseError("trig terms are written coef@theta, got '" + item + "'");
      coeffs.push_back(parse_coefficient(item.substr(0, at)));
      freqs.push_back(ExactScalar::parse(item.substr(at + 1)));
    }
    if (coeffs.empty()) throw ParseError("trig needs at least one term");
    return trig_poly(std::move(coeffs), std::move(freqs));
  }
  throw ParseError("unknown weight '" + s.name + "'");
}

std::string WeightSequence::to_string() const {
  return std::visit(
      Overloaded{
          [](const Mangoldt&) { return std::string("mangoldt"); },
          [](const MangoldtPrime&) { return std::string("mangoldt_prime"); },
          [](const MangoldtWb& m) { return "mangoldt_wb:W=" + std::to_string(m.W) + ",b=" + std::to_string(m.b); },
          [](const MangoldtBeatty& m) {
            return "mangoldt_beatty:theta=" + m.theta.to_string() + ",gamma=" + m.gamma.to_string();
          },
          [](const MangoldtBeattyWb& m) {
            return "mangoldt_beatty_wb:theta=" + m.theta.to_string() + ",gamma=" + m.gamma.to_string() +
                   ",W=" + std::to_string(m.W) + ",b=" + std::to_string(m.b);
          },
          [](const Indicator& i) { return "indicator:" + i.sequence.to_string(); },
          [](const TrigPoly& t) {
            std::string out = "trig:";
            for (std::size_t i = 0; i < t.coeffs.size(); ++i)
              out += (i ? ";" : "") + format_coefficient(t.coeffs[i]) + "@" + t.freqs[i].to_string();
            return out;
          },
          [](const Explicit& e) { return "explicit_values:" + std::to_string(e.values.size()); },
      },
      kind_);
}

std::uint64_t WeightSequence::sieve_limit(std::uint64_t max_n) const {
  return std::visit(Overloaded{
                        [&](const Mangoldt&) { return max_n; },
                        [&](const MangoldtPrime&) { return max_n; },
                        [&](const MangoldtWb& m) { return static_cast<std::uint64_t>(m.W) * max_n + m.b; },
                        [&](const MangoldtBeatty&) { return max_n; },
                        [&](const MangoldtBeattyWb& m) { return static_cast<std::uint64_t>(m.W) * max_n + m.b; },
                        [&](const Indicator&) { return std::uint64_t{0}; },
                        [&](const TrigPoly&) { return std::uint64_t{0}; },
                        [&](const Explicit&) { return std::uint64_t{0}; },
                    },
                    kind_);
}

WeightSequence WeightSequence::with_range(std::uint64_t max_n) const {
  WeightSequence out = *this;
  out.range_ = max_n;
  std::uint64_t limit = sieve_limit(max_n);
  if (limit > 0) out.sieve_ = std::make_shared<const PrimeSieve>(std::max<std::uint64_t>(limit, 2));
  return out;
}

std::complex<double> WeightSequence::eval_with(const PrimeSieve* sieve, std::int64_t n) const {
  auto prime_log = [&](std::uint64_t m) {
    return sieve->is_prime(m) ? std::log(static_cast<double>(m)) : 0.0;
  };
  const auto un = static_cast<std::uint64_t>(n);
  return std::visit(
      Overloaded{
          [&](const Mangoldt&) { return std::complex<double>(mangoldt_value(*sieve, un)); },
          [&](const MangoldtPrime&) { return std::complex<double>(prime_log(un)); },
          [&](const MangoldtWb& m) {
            return std::complex<double>(wtrick_factor(m.W) * prime_log(static_cast<std::uint64_t>(m.W) * un + m.b));
          },
          [&](const MangoldtBeatty& m) {
            double v = prime_log(un);
            return std::complex<double>(v != 0.0 && beatty_contains(m.theta, m.gamma, n) ? v : 0.0);
          },
          [&](const MangoldtBeattyWb& m) {
            std::uint64_t x = static_cast<std::uint64_t>(m.W) * un + m.b;
            double v = prime_log(x);
            if (v != 0.0 && !beatty_contains(m.theta, m.gamma, static_cast<i128>(x))) v = 0.0;
            return std::complex<double>(wtrick_factor(m.W) * v);
          },
          [&](const Indicator& i) { return std::complex<double>(i.sequence.contains(n) ? 1.0 : 0.0); },
          [&](const TrigPoly& t) {
            std::complex<double> sum = 0.0;
            for (std::size_t j = 0; j < t.coeffs.size(); ++j) sum += t.coeffs[j] * unit_phase(frac_times(t.freqs[j], n));
            return sum;
          },
          [&](const Explicit& e) {
            if (un > e.values.size()) throw std::out_of_range("explicit weight exhausted");
            return e.values[un - 1];
          },
      },
      kind_);
}

std::complex<double> weight_eval(const WeightSequence& w, std::int64_t n) {
  if (n < 1) throw std::out_of_range("weights are indexed from n = 1");
  std::uint64_t need = w.sieve_limit(static_cast<std::uint64_t>(n));
  if (need > 0 && (!w.sieve_ || w.sieve_->limit() < need))
    throw std::out_of_range("weight evaluated beyond its sieve range; call with_range first");
  return w.eval_with(w.sieve_.get(), n);
}

std::vector<std::complex<double>> WeightSequence::values(std::int64_t first, std::size_t count) const {
  if (first < 1) throw std::out_of_range("weights are indexed from n = 1");
  std::vector<std::complex<double>> out(count);
  if (count == 0) return out;
  const auto last = static_cast<std::uint64_t>(first) + count - 1;

  if (const auto* ind = std::get_if<Indicator>(&kind_)) {
    if (std::holds_alternative<IndexSequence::Squarefree>(ind->sequence.kind())) {
      SquarefreeSieve sf(last);
      for (std::size_t i = 0; i < count; ++i) out[i] = sf.is_squarefree(static_cast<std::uint64_t>(first) + i) ? 1.0 : 0.0;
      return out;
    }
    if (ind->sequence.truncates_by_value() || std::holds_alternative<IndexSequence::Beatty>(ind->sequence.kind())) {
      std::fill(out.begin(), out.end(), 0.0);
      for (auto t : ind->sequence.terms_up_to(static_cast<std::int64_t>(last)))
        if (t >= first) out[static_cast<std::size_t>(t - first)] = 1.0;
      return out;
    }
  }

  std::shared_ptr<const PrimeSieve> sieve = sieve_;
  std::uint64_t need = sieve_limit(last);
  if (need > 0 && (!sieve || sieve->limit() < need)) sieve = std::make_shared<const PrimeSieve>(std::max<std::uint64_t>(need, 2));
  for (std::size_t i = 0; i < count; ++i) out[i] = eval_with(sieve.get(), first + static_cast<std::int64_t>(i));
  return out;
}

// -------------------------------------------------------- Besicovitch fit

BesicovitchFit besicovitch_fit(std::span<const std::complex<double>> phi, std::span<const ExactScalar> freqs) {
  if (phi.empty()) throw std::invalid_argument("besicovitch_fit needs N >= 1");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    for (std::size_t j = i + 1; j < freqs.size(); ++j) {
      if ((SurdSum(freqs[i]) - SurdSum(freqs[j])).is_integer())
        throw std::invalid_argument("besicovitch_fit frequencies must be distinct mod 1");
    }
  }
  const std::size_t N = phi.size();
  const double inv_n = 1.0 / static_cast<double>(N);
  BesicovitchFit fit;
  fit.coeffs.resize(freqs.size());
  parallel_for(freqs.size(), [&](std::size_t j) {
    PairwiseAccumulator<std::complex<double>> acc;
    for (std::size_t n = 1; n <= N; ++n) acc.add(phi[n - 1] * unit_phase(-frac_times(freqs[j], static_cast<i128>(n))));
    fit.coeffs[j] = acc.total() * inv_n;
  });
  PairwiseAccumulator<double> residual;
  for (std::size_t n = 1; n <= N; ++n) {
    std::complex<double> rho = 0.0;
    for (std::size_t j = 0; j < freqs.size(); ++j)
      rho += fit.coeffs[j] * unit_phase(frac_times(freqs[j], static_cast<i128>(n)));
    residual.add(std::abs(phi[n - 1] - rho));
  }
  fit.residual = residual.total() * inv_n;
  return fit;
}

}  // namespace ergolab
