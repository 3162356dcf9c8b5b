#include "ergolab/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ergolab/parallel.hpp"
#include "ergolab/spec_text.hpp"

namespace ergolab {

i128 binom2(i128 n) {
  // one of n, n-1 is even
  if (n % 2 == 0) return checked::mul(n / 2, checked::sub(n, 1));
  return checked::mul(n, checked::sub(n, 1) / 2);
}

namespace {

double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double frac_product(i128 t, double y) {
  long double v = static_cast<long double>(t) * static_cast<long double>(y);
  v -= std::floor(v);
  return static_cast<double>(v);
}

std::int64_t to_i64(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("frequency vector leaves the 64-bit range");
  return static_cast<std::int64_t>(v);
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

// ------------------------------------------------------------- TorusPoint

TorusPoint TorusPoint::from_exact(std::vector<ExactScalar> xs) {
  TorusPoint p;
  for (auto& x : xs) {
    x = reduce_mod1(x);
    p.coords.push_back(wrap01(x.to_double()));
  }
  p.exact = std::move(xs);
  return p;
}

TorusPoint TorusPoint::from_double(std::vector<double> xs) {
  TorusPoint p;
  for (double x : xs) p.coords.push_back(wrap01(x));
  return p;
}

TorusPoint TorusPoint::parse(std::string_view text) {
  std::vector<ExactScalar> xs;
  for (const auto& part : split_top_level(text, ',')) xs.push_back(ExactScalar::parse(part));
  if (xs.empty()) throw ParseError("empty point");
  return from_exact(std::move(xs));
}

// ------------------------------------------------------------ TorusSystem

TorusSystem TorusSystem::rotation(std::vector<ExactScalar> alpha) {
  if (alpha.empty()) throw std::invalid_argument("rotation needs at least one angle");
  return TorusSystem(Kind::rotation, std::move(alpha));
}

TorusSystem TorusSystem::skew2(ExactScalar alpha) { return TorusSystem(Kind::skew2, {std::move(alpha)}); }

TorusSystem TorusSystem::parse(std::string_view text) {
  SpecText s = parse_spec_text(text);
  if (s.name == "rot" || s.name == "skew") {
    s.expect_keys({"alpha"});
    ExactScalar a = ExactScalar::parse(s.get("alpha"));
    return s.name == "rot" ? rotation({a}) : skew2(a);
  }
  if (s.name == "rot2") {
    s.expect_keys({"alpha1", "alpha2"});
    return rotation({ExactScalar::parse(s.get("alpha1")), ExactScalar::parse(s.get("alpha2"))});
  }
  throw ParseError("unknown system '" + s.name + "'");
}

std::string TorusSystem::to_string() const {
  if (kind_ == Kind::skew2) return "skew:alpha=" + alpha_[0].to_string();
  if (alpha_.size() == 1) return "rot:alpha=" + alpha_[0].to_string();
  if (alpha_.size() == 2) return "rot2:alpha1=" + alpha_[0].to_string() + ",alpha2=" + alpha_[1].to_string();
  std::string out = "rot";
  for (std::size_t i = 0; i < alpha_.size(); ++i) out += (i ? "," : ":") + alpha_[i].to_string();
  return out;
}

TorusPoint TorusSystem::iterate(const TorusPoint& x, i128 n) const {
  if (x.dim() != dim()) throw std::invalid_argument("point dimension does not match the system");
  if (x.exact) {
    const auto& e = *x.exact;
    try {
      if (kind_ == Kind::rotation) {
        std::vector<ExactScalar> out;
        for (std::size_t i = 0; i < alpha_.size(); ++i) out.push_back(e[i] + alpha_[i] * ExactScalar::integer(n));
        return TorusPoint::from_exact(std::move(out));
      }
      const ExactScalar nn = ExactScalar::integer(n);
      return TorusPoint::from_exact(
          {e[0] + nn * alpha_[0], e[1] + nn * e[0] + ExactScalar::integer(binom2(n)) * alpha_[0]});
    } catch (const std::domain_error&) {
      // point and angle in different quadratic fields: fall through to floats
    }
  }
  std::vector<double> out(dim());
  if (kind_ == Kind::rotation) {
    for (std::size_t i = 0; i < alpha_.size(); ++i) out[i] = x.coords[i] + frac_times(alpha_[i], n);
  } else {
    out[0] = x.coords[0] + frac_times(alpha_[0], n);
    out[1] = x.coords[1] + frac_product(n, x.coords[0]) + frac_times(alpha_[0], binom2(n));
  }
  return TorusPoint::from_double(std::move(out));
}

Shift TorusSystem::shift(i128 t) const {
  Shift sh;
  sh.t = t;
  if (kind_ == Kind::rotation) {
    for (const auto& a : alpha_) sh.frac.push_back(frac_times(a, t));
  } else {
    sh.frac = {frac_times(alpha_[0], t), frac_times(alpha_[0], binom2(t))};
  }
  return sh;
}

void TorusSystem::apply_shift(const Shift& sh, const SampleSet& samples, std::uint64_t s, double* out) const {
  apply_shift(sh.t, sh.frac.data(), samples, s, out);
}

void TorusSystem::apply_shift(i128 t, const double* frac, const SampleSet& samples, std::uint64_t s,
                              double* out) const {
  samples.coords(s, out);
  if (kind_ == Kind::rotation) {
    for (std::size_t i = 0; i < alpha_.size(); ++i) out[i] = wrap01(out[i] + frac[i]);
    return;
  }
  double ty;
  if (samples.is_grid()) {
    const auto K = static_cast<i128>(samples.grid_size());
    i128 tk = t % K;
    if (tk < 0) tk += K;
    i128 num = tk * static_cast<i128>(samples.grid_index(s, 0)) % K;
    ty = static_cast<double>(num) / static_cast<double>(K);
  } else {
    ty = frac_product(t, out[0]);
  }
  const double y = out[0];
  out[0] = wrap01(y + frac[0]);
  out[1] = wrap01(out[1] + ty + frac[1]);
}

// ------------------------------------------------------------- Observable

Observable Observable::character(std::vector<std::int64_t> m) {
  if (m.empty()) throw std::invalid_argument("character needs a frequency vector");
  Observable o;
  o.kind_ = Kind::character;
  o.terms_ = {{1.0, std::move(m)}};
  return o;
}

Observable Observable::trig_poly(std::vector<Term> terms) {
  if (terms.empty()) throw std::invalid_argument("trig_poly needs at least one term");
  for (const auto& t : terms) {
    if (t.freq.empty() || t.freq.size() != terms.front().freq.size())
      throw std::invalid_argument("trig_poly frequency vectors must share one dimension");
  }
  Observable o;
  o.kind_ = Kind::trig_poly;
  o.terms_ = std::move(terms);
  return o;
}

Observable Observable::arc(std::size_t axis, ExactScalar a, ExactScalar b) {
  Observable o;
  o.kind_ = Kind::arc;
  o.axis_ = axis;
  o.a_val_ = a.to_double();
  o.b_val_ = b.to_double();
  if (o.a_val_ < 0.0 || o.a_val_ > 1.0 || o.b_val_ < 0.0 || o.b_val_ > 1.0)
    throw std::invalid_argument("arc endpoints must lie in [0, 1]");
  o.a_ = std::move(a);
  o.b_ = std::move(b);
  return o;
}

Observable Observable::parse(std::string_view text) {
  SpecText s = parse_spec_text(text);
  if (s.name == "char") {
    s.expect_keys({}, true);
    std::vector<std::int64_t> m;
    for (const auto& p : s.positional) m.push_back(parse_int64(p));
    if (m.empty()) throw ParseError("char needs a frequency vector, e.g. char:0,1");
    return character(std::move(m));
  }
  if (s.name == "trig") {
    std::vector<Term> terms;
    for (const auto& item : split_top_level(s.raw_args, ';')) {
      auto at = item.find('@');
      if (at == std::string::npos) throw ParseError("trig terms are written coef@m1,m2, got '" + item + "'");
      std::string c = item.substr(0, at);
      std::complex<double> coeff;
      auto bar = c.find('|');
      if (bar == std::string::npos) {
        coeff = parse_real(c);
      } else {
        coeff = {parse_real(c.substr(0, bar)), parse_real(c.substr(bar + 1))};
      }
      std::vector<std::int64_t> m;
      for (const auto& p : split_top_level(item.substr(at + 1), ',')) m.push_back(parse_int64(p));
      terms.push_back({coeff, std::move(m)});
    }
    try {
      return trig_poly(std::move(terms));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  if (s.name == "arc") {
    s.expect_keys({"axis", "a", "b"});
    std::int64_t axis = parse_int64(s.get("axis"));
    if (axis < 0) throw ParseError("arc axis must be >= 0");
    try {
      return arc(static_cast<std::size_t>(axis), ExactScalar::parse(s.get("a")), ExactScalar::parse(s.get("b")));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown observable '" + s.name + "'");
}

std::string Observable::to_string() const {
  if (kind_ == Kind::character) return "char:" + join_ints(terms_[0].freq);
  if (kind_ == Kind::arc)
    return "arc:axis=" + std::to_string(axis_) + ",a=" + a_.to_string() + ",b=" + b_.to_string();
  std::string out = "trig:";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& c = terms_[i].coeff;
    out += i ? ";" : "";
    out += format_real(c.real());
    if (c.imag() != 0.0) out += "|" + format_real(c.imag());
    out += "@" + join_ints(terms_[i].freq);
  }
  return out;
}

std::size_t Observable::dim() const { return kind_ == Kind::arc ? 0 : terms_.front().freq.size(); }

bool Observable::fits(std::size_t d) const { return kind_ == Kind::arc ? axis_ < d : dim() == d; }

std::complex<double> Observable::evaluate(std::span<const double> x) const {
  if (kind_ == Kind::arc) {
    double v = x[axis_];
    bool in = a_val_ < b_val_ ? (a_val_ < v && v <= b_val_) : (v > a_val_ || v <= b_val_);
    return in ? 1.0 : 0.0;
  }
  std::complex<double> sum = 0.0;
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (std::size_t i = 0; i < t.freq.size(); ++i) phase += static_cast<double>(t.freq[i]) * x[i];
    sum += t.coeff * unit_phase(phase - std::floor(phase));
  }
  return sum;
}

double Observable::sup_norm() const {
  if (kind_ == Kind::arc) return 1.0;
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

Observable Observable::conjugate() const {
  Observable o = *this;
  for (auto& t : o.terms_) {
    t.coeff = std::conj(t.coeff);
    for (auto& m : t.freq) m = -m;
  }
  return o;
}

Observable Observable::compose(const TorusSystem& sys) const {
  if (kind_ == Kind::arc) throw std::invalid_argument("compose is defined for Fourier observables only");
  if (dim() != sys.dim()) throw std::invalid_argument("observable dimension does not match the system");
  std::vector<Term> out;
  for (const auto& t : terms_) {
    std::vector<std::vector<std::int64_t>> freqs{t.freq};
    std::vector<i128> times{1};
    OrbitCharacter oc = orbit_character(sys, freqs, times);
    out.push_back({t.coeff * unit_phase(oc.phase), oc.A});
  }
  Observable o = *this;
  o.terms_ = std::move(out);
  return o;
}

// -------------------------------------------------------- orbit characters

OrbitCharacter orbit_character(const TorusSystem& sys, std::span<const std::vector<std::int64_t>> freqs,
                               std::span<const i128> times) {
  const auto& alpha = sys.alpha();
  OrbitCharacter oc;
  if (sys.kind() == TorusSystem::Kind::rotation) {
    const std::size_t d = alpha.size();
    std::vector<i128> A(d, 0);
    std::vector<i128> coef(d, 0);
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      for (std::size_t i = 0; i < d; ++i) {
        A[i] = checked::add(A[i], freqs[j][i]);
        coef[i] = checked::add(coef[i], checked::mul(freqs[j][i], times[j]));
      }
    }
    double phase = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      oc.A.push_back(to_i64(A[i]));
      phase += frac_times(alpha[i], coef[i]);
    }
    oc.phase = phase - std::floor(phase);
    return oc;
  }
  i128 ay = 0;
  i128 az = 0;
  i128 coef = 0;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const i128 k = freqs[j][0];
    const i128 l = freqs[j][1];
    const i128 t = times[j];
    ay = checked::add(ay, checked::add(k, checked::mul(l, t)));
    az = checked::add(az, l);
    coef = checked::add(coef, checked::add(checked::mul(k, t), checked::mul(l, binom2(t))));
  }
  oc.A = {to_i64(ay), to_i64(az)};
  oc.phase = frac_times(alpha[0], coef);
  return oc;
}

// --------------------------------------------------------------- spectrum

std::optional<ExactScalar> Frequency::scalar() const {
  auto s = exact.as_scalar();
  if (!s) return std::nullopt;
  return reduce_mod1(*s);
}

std::string Frequency::to_string() const {
  if (auto s = scalar()) return s->to_string();
  return exact.to_string();
}

std::vector<Frequency> theoretical_spectrum(const TorusSystem& sys, int bound) {
  if (bound < 1) throw std::invalid_argument("spectrum bound must be >= 1");
  const auto& alpha = sys.alpha();
  const std::size_t d = sys.kind() == TorusSystem::Kind::rotation ? alpha.size() : 1;
  std::vector<SurdSum> generators;
  for (std::size_t i = 0; i < d; ++i) generators.emplace_back(alpha[i]);

  std::map<std::string, Frequency> unique;
  std::vector<std::int64_t> m(d, -bound);
  for (;;) {
    SurdSum s;
    for (std::size_t i = 0; i < d; ++i) s += static_cast<i128>(m[i]) * generators[i];
    SurdSum canon = s - SurdSum(ExactScalar::integer(s.coefficient(1).floor()));
    std::string key = canon.to_string();
    if (!unique.count(key)) unique.emplace(key, Frequency{m, s, s.frac_value()});
    std::size_t i = d;
    while (i > 0 && m[i - 1] == bound) m[--i] = -bound;
    if (i == 0) break;
    ++m[i - 1];
  }
  std::vector<Frequency> out;
  for (auto& [key, f] : unique) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const Frequency& x, const Frequency& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.exact.to_string() < y.exact.to_string();
  });
  return out;
}

bool is_totally_ergodic(const TorusSystem& sys) {
  if (sys.kind() == TorusSystem::Kind::skew2) return !sys.alpha()[0].is_rational();
  return rationally_independent(sys.alpha());
}

// -------------------------------------------------------------- SampleSet

SampleSet SampleSet::grid(std::size_t dim, std::uint64_t M) {
  if (M < 1) throw std::invalid_argument("sample count must be >= 1");
  if (dim < 1) throw std::invalid_argument("grid dimension must be >= 1");
  SampleSet s;
  s.dim_ = dim;
  std::uint64_t K = dim == 1 ? M : static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(M), 1.0 / dim)));
  auto power = [&](std::uint64_t k) {
    i128 p = 1;
    for (std::size_t i = 0; i < dim; ++i) p = checked::mul(p, k);
    return p;
  };
  while (K > 1 && power(K - 1) >= M) --K;
  while (power(K) < M) ++K;
  s.k_ = K;
  i128 size = power(K);
  if (size > static_cast<i128>(UINT64_MAX)) throw OverflowError("grid too large");
  s.size_ = static_cast<std::uint64_t>(size);
  s.id_ = "grid:d=" + std::to_string(dim) + ",K=" + std::to_string(K);
  return s;
}

SampleSet SampleSet::orbit(const TorusSystem& sys, const TorusPoint& x0, std::uint64_t M) {
  if (M < 1) throw std::invalid_argument("sample count must be >= 1");
  if (x0.dim() != sys.dim()) throw std::invalid_argument("orbit start does not match the system dimension");
  SampleSet s;
  s.dim_ = sys.dim();
  s.grid_ = false;
  s.size_ = M;
  s.orbit_.resize(M * s.dim_);
  parallel_for(M, [&](std::size_t m) {
    TorusPoint p = sys.iterate(x0, static_cast<i128>(m));
    std::copy(p.coords.begin(), p.coords.end(), s.orbit_.begin() + static_cast<std::ptrdiff_t>(m * s.dim_));
  });
  std::string start;
  for (std::size_t i = 0; i < x0.dim(); ++i) {
    start += i ? ";" : "";
    start += x0.exact ? (*x0.exact)[i].to_string() : format_real(x0.coords[i]);
  }
  s.id_ = "orbit:" + sys.to_string() + ",x0=" + start + ",M=" + std::to_string(M);
  return s;
}

std::uint64_t SampleSet::grid_index(std::uint64_t s, std::size_t axis) const {
  for (std::size_t i = dim_ - 1; i > axis; --i) s /= k_;
  return s % k_;
}

void SampleSet::coords(std::uint64_t s, double* out) const {
  if (!grid_) {
    std::copy_n(orbit_.begin() + static_cast<std::ptrdiff_t>(s * dim_), dim_, out);
    return;
  }
  for (std::size_t i = dim_; i-- > 0;) {
    out[i] = static_cast<double>(s % k_) / static_cast<double>(k_);
    s /= k_;
  }
}

TorusPoint SampleSet::point(std::uint64_t s) const {
  if (s >= size_) throw std::out_of_range("sample index out of range");
  if (!grid_) {
    return TorusPoint::from_double(
        std::vector<double>(orbit_.begin() + static_cast<std::ptrdiff_t>(s * dim_),
                            orbit_.begin() + static_cast<std::ptrdiff_t>((s + 1) * dim_)));
  }
  std::vector<ExactScalar> xs(dim_);
  for (std::size_t i = dim_; i-- > 0;) {
    xs[i] = ExactScalar::rational(static_cast<i128>(s % k_), static_cast<i128>(k_));
    s /= k_;
  }
  return TorusPoint::from_exact(std::move(xs));
}

std::vector<TorusPoint> sample_measure(const TorusSystem& sys, std::uint64_t M) {
  SampleSet grid = SampleSet::grid(sys.dim(), M);
  std::vector<TorusPoint> out;
  out.reserve(grid.size());
  for (std::uint64_t s = 0; s < grid.size(); ++s) out.push_back(grid.point(s));
  return out;
}

}  // namespace ergolab
