#include "ergolab/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ergolab/parallel.hpp"

namespace ergolab {

// ------------------------------------------------------------ TheoremSpec

TheoremSpec TheoremSpec::arithmetic(std::int64_t q, std::int64_t r) {
  if (q < 1) throw std::invalid_argument("arithmetic progression needs q >= 1");
  TheoremSpec t;
  t.kind = Kind::arithmetic;
  t.q = q;
  t.r = r;
  return t;
}

TheoremSpec TheoremSpec::beatty(ExactScalar theta, ExactScalar gamma) {
  if (theta.sign() <= 0) throw std::invalid_argument("Beatty slope must be positive");
  TheoremSpec t;
  t.kind = Kind::beatty;
  t.theta = std::move(theta);
  t.gamma = std::move(gamma);
  return t;
}

TheoremSpec TheoremSpec::squarefree() {
  TheoremSpec t;
  t.kind = Kind::squarefree;
  return t;
}

TheoremSpec TheoremSpec::primes() {
  TheoremSpec t;
  t.kind = Kind::primes;
  return t;
}

TheoremSpec TheoremSpec::beatty_primes(ExactScalar theta, ExactScalar gamma) {
  TheoremSpec t = beatty(std::move(theta), std::move(gamma));
  t.kind = Kind::beatty_primes;
  return t;
}

TheoremSpec TheoremSpec::besicovitch(std::vector<ExactScalar> generators, bool rational_spectrum) {
  TheoremSpec t;
  t.kind = Kind::besicovitch;
  t.phi_spectrum = std::move(generators);
  t.phi_rational_spectrum = rational_spectrum;
  return t;
}

TheoremSpec TheoremSpec::along(const IndexSequence& seq) {
  const auto& k = seq.kind();
  if (const auto* a = std::get_if<IndexSequence::Arithmetic>(&k)) return arithmetic(a->q, a->r);
  if (const auto* b = std::get_if<IndexSequence::Beatty>(&k)) return beatty(b->theta, b->gamma);
  if (std::holds_alternative<IndexSequence::Squarefree>(k)) return squarefree();
  if (std::holds_alternative<IndexSequence::Primes>(k)) return primes();
  if (const auto* b = std::get_if<IndexSequence::BeattyPrimes>(&k)) return beatty_primes(b->theta, b->gamma);
  throw std::invalid_argument("no theorem averages along " + seq.to_string());
}

std::string TheoremSpec::id() const {
  switch (kind) {
    case Kind::arithmetic:
      return "arith:q=" + std::to_string(q) + ",r=" + std::to_string(r);
    case Kind::beatty:
      return "beatty:theta=" + theta.to_string() + ",gamma=" + gamma.to_string();
    case Kind::squarefree:
      return "squarefree";
    case Kind::primes:
      return "primes";
    case Kind::beatty_primes:
      return "beatty_primes:theta=" + theta.to_string() + ",gamma=" + gamma.to_string();
    case Kind::besicovitch: {
      std::string out = "besicovitch:";
      for (std::size_t i = 0; i < phi_spectrum.size(); ++i) out += (i ? ";" : "") + phi_spectrum[i].to_string();
      if (phi_rational_spectrum) out += phi_spectrum.empty() ? "Q" : ";Q";
      return out;
    }
  }
  return "";
}

FrequencyGroupSpec TheoremSpec::forbidden_group() const {
  FrequencyGroupSpec g;
  switch (kind) {
    case Kind::arithmetic:
      g.generators = {ExactScalar::rational(1, q)};
      break;
    case Kind::beatty:
      g.generators = {theta.inverse()};
      break;
    case Kind::squarefree:
    case Kind::primes:
      g.includes_rationals = true;
      break;
    case Kind::beatty_primes:
      g.generators = {theta.inverse()};
      g.includes_rationals = true;
      break;
    case Kind::besicovitch:
      g.generators = phi_spectrum;
      g.includes_rationals = phi_rational_spectrum;
      break;
  }
  return g;
}

IndexSequence TheoremSpec::sequence() const {
  switch (kind) {
    case Kind::arithmetic:
      return IndexSequence::arithmetic(q, r);
    case Kind::beatty:
      return IndexSequence::beatty(theta, gamma);
    case Kind::squarefree:
      return IndexSequence::squarefree();
    case Kind::primes:
      return IndexSequence::primes();
    case Kind::beatty_primes:
      return IndexSequence::beatty_primes(theta, gamma);
    case Kind::besicovitch:
      break;
  }
  throw std::invalid_argument("the Besicovitch theorem averages against a weight; use besicovitch_weight_run");
}

namespace {

std::string describe(const FrequencyGroupSpec& g) {
  std::string out = "<";
  if (g.includes_rationals) out += "Q";
  for (std::size_t i = 0; i < g.generators.size(); ++i)
    out += (i || g.includes_rationals ? ", " : "") + g.generators[i].to_string();
  return out + ">";
}

}  // namespace

HypothesisResult check_hypothesis(const TorusSystem& sys, const TheoremSpec& theorem, int bound) {
  HypothesisResult result;
  const FrequencyGroupSpec group = theorem.forbidden_group();
  result.group = describe(group);
  for (const auto& f : theoretical_spectrum(sys, bound)) {
    if (f.exact.is_integer()) continue;
    if (subgroup_contains(group, f.exact)) {
      result.pass = false;
      result.witness = f;
      return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------- harness

bool convergence_verdict(const std::vector<ConvergenceRow>& rows, double tol) {
  if (rows.empty()) return false;
  const auto& last = rows.back();
  if (!(last.distance < tol)) return false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].N * 100 < last.N) continue;
    if (rows[i].distance > 1.2 * rows[i - 1].distance + 1e-12) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ConvergenceReport report_header(const TorusSystem& sys, std::span<const Observable> fs, const TheoremSpec& theorem,
                                const SampleSet& samples, const RunOptions& opts) {
  if (fs.empty()) throw std::invalid_argument("theorem runs need at least one observable f_1");
  ConvergenceReport rep;
  rep.theorem = theorem.id();
  rep.system = sys.to_string();
  for (const auto& f : fs) rep.observables.push_back(f.to_string());
  rep.sample_set = samples.id();
  rep.tol = opts.tol;
  rep.hypothesis = check_hypothesis(sys, theorem, opts.hypothesis_bound);
  return rep;
}

std::vector<std::uint64_t> sorted_schedule(std::span<const std::uint64_t> schedule) {
  std::vector<std::uint64_t> out(schedule.begin(), schedule.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty() || out.front() == 0) throw std::invalid_argument("N schedule must hold positive values");
  return out;
}

}  // namespace

ConvergenceReport run_theorem(const TorusSystem& sys, std::span<const Observable> fs, const TheoremSpec& theorem,
                              std::span<const std::uint64_t> schedule, const SampleSet& samples,
                              const RunOptions& opts) {
  ConvergenceReport rep = report_header(sys, fs, theorem, samples, opts);
  const auto Ns = sorted_schedule(schedule);
  if (!rep.hypothesis.pass && !opts.force) return rep;
  const IndexSequence seq = theorem.sequence();
  const IndexSequence plain = IndexSequence::arithmetic(1, 0);
  rep.ran = true;
  for (std::uint64_t N : Ns) {
    const auto t0 = Clock::now();
    double dist = 0.0;
    if (theorem.uniform()) {
      const std::size_t windows = std::max<std::size_t>(opts.windows, 1);
      const std::uint64_t stride = N / windows;
      for (std::size_t i = 0; i < windows; ++i) {
        AlongOptions along{Normalization::count, static_cast<std::int64_t>(1 + i * stride), opts.method};
        auto lhs = average_along(sys, fs, seq, N, samples, along);
        auto rhs = average_along(sys, fs, plain, N, samples, along);
        dist = std::max(dist, l2_distance(lhs, rhs));
      }
    } else {
      AlongOptions along{Normalization::count, 1, opts.method};
      auto lhs = average_along(sys, fs, seq, N, samples, along);
      auto rhs = average_along(sys, fs, plain, N, samples, along);
      dist = l2_distance(lhs, rhs);
    }
    rep.rows.push_back({N, dist, seconds_since(t0)});
  }
  rep.verdict = convergence_verdict(rep.rows, opts.tol);
  return rep;
}

ConvergenceReport besicovitch_weight_run(const TorusSystem& sys, std::span<const Observable> fs,
                                         const WeightSequence& phi, const TheoremSpec& theorem,
                                         std::span<const std::uint64_t> schedule, const SampleSet& samples,
                                         const RunOptions& opts) {
  ConvergenceReport rep = report_header(sys, fs, theorem, samples, opts);
  rep.theorem += " weight=" + phi.to_string();
  const auto Ns = sorted_schedule(schedule);
  if (!rep.hypothesis.pass && !opts.force) return rep;
  rep.ran = true;
  const IndexSequence plain = IndexSequence::arithmetic(1, 0);
  for (std::uint64_t N : Ns) {
    const auto t0 = Clock::now();
    const auto values = phi.values(1, N);
    const std::complex<double> mean = pairwise_sum(std::span<const std::complex<double>>(values)) /
                                      static_cast<double>(N);
    auto rhs = average_along(sys, fs, plain, N, samples, AlongOptions{Normalization::count, 1, opts.method});
    for (auto& v : rhs.values) v *= mean;
    EmpiricalFunction lhs;
    if (mean == 0.0 && std::all_of(values.begin(), values.end(), [](auto v) { return v == 0.0; })) {
      lhs = rhs;
    } else {
      lhs = average_along(sys, fs, phi, N, samples, Normalization::cesaro, opts.method);
    }
    rep.rows.push_back({N, l2_distance(lhs, rhs), seconds_since(t0)});
    rep.extras["weight_mean"] = mean.real();
    if (mean.imag() != 0.0) rep.extras["weight_mean_imag"] = mean.imag();
    rep.extras["lhs_norm"] = l2_norm(lhs);
  }
  rep.verdict = convergence_verdict(rep.rows, opts.tol);
  return rep;
}

TransferGap prime_transfer_gap(const TorusSystem& sys, std::span<const Observable> fs, std::size_t N,
                               const SampleSet& samples, CorrelationMethod method) {
  auto by_count = average_along(sys, fs, IndexSequence::primes(), N, samples,
                                AlongOptions{Normalization::count, 1, method});
  auto by_weight = average_along(sys, fs, WeightSequence::mangoldt_prime(), N, samples, Normalization::cesaro, method);
  return {sup_distance(by_count, by_weight), l2_distance(by_count, by_weight)};
}

// ------------------------------------------------------------- AP search

std::optional<ApWitness> beatty_ap_search(const std::vector<bool>& in_set, const ExactScalar& theta,
                                          const ExactScalar& gamma, int k) {
  if (k < 1) throw std::invalid_argument("beatty_ap_search needs k >= 1");
  if (in_set.size() < 2) return std::nullopt;
  const std::size_t L = in_set.size() - 1;
  const std::size_t words = L / 64 + 2;
  std::vector<std::uint64_t> bits(words, 0);
  for (std::size_t x = 1; x <= L; ++x)
    if (in_set[x]) bits[x / 64] |= std::uint64_t{1} << (x % 64);

  // Bits [64w + s, 64w + s + 64) of A.
  auto shifted = [&](std::size_t w, std::size_t s) -> std::uint64_t {
    const std::size_t pos = w * 64 + s;
    const std::size_t q = pos / 64;
    const std::size_t r = pos % 64;
    if (q >= words) return 0;
    std::uint64_t lo = bits[q] >> r;
    std::uint64_t hi = (r != 0 && q + 1 < words) ? bits[q + 1] << (64 - r) : 0;
    return lo | hi;
  };

  i128 previous = 0;
  for (i128 n = 1;; ++n) {
    const i128 d = beatty_term(theta, gamma, n);
    if (d < 1 || d == previous) continue;
    previous = d;
    if (static_cast<i128>(k) * d > static_cast<i128>(L) - 1) break;
    const auto dd = static_cast<std::size_t>(d);
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t acc = bits[w];
      for (int i = 1; i <= k && acc != 0; ++i) acc &= shifted(w, static_cast<std::size_t>(i) * dd);
      if (acc != 0) {
        const std::size_t m = w * 64 + static_cast<std::size_t>(std::countr_zero(acc));
        return ApWitness{static_cast<std::int64_t>(m), static_cast<std::int64_t>(d)};
      }
    }
  }
  return std::nullopt;
}

// ------------------------------------------------- diagonal orbit spectrum

OrbitSpectrum diagonal_orbit_spectrum(const TorusSystem& sys, const TorusPoint& x, int k, const Observable& F,
                                      std::size_t N, double tau, std::size_t oversample) {
  if (k < 1) throw std::invalid_argument("diagonal orbit needs k >= 1");
  const std::size_t d = sys.dim();
  if (!F.fits(d * static_cast<std::size_t>(k)))
    throw std::invalid_argument("observable must live on (T^" + std::to_string(d) + ")^" + std::to_string(k));
  OrbitSpectrum out;
  out.series.resize(N);
  parallel_for(N, [&](std::size_t idx) {
    const i128 n = static_cast<i128>(idx) + 1;
    std::vector<TorusPoint> pts;
    for (int j = 1; j <= k; ++j) pts.push_back(sys.iterate(x, static_cast<i128>(j) * n));
    const bool exact = F.is_fourier() && std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.exact; });
    if (exact) {
      std::complex<double> sum = 0.0;
      for (const auto& term : F.terms()) {
        SurdSum phase;
        for (std::size_t j = 0; j < pts.size(); ++j)
          for (std::size_t i = 0; i < d; ++i)
            phase += static_cast<i128>(term.freq[j * d + i]) * SurdSum((*pts[j].exact)[i]);
        sum += term.coeff * unit_phase(phase.frac_value());
      }
      out.series[idx] = sum;
      return;
    }
    std::vector<double> coords;
    for (const auto& p : pts) coords.insert(coords.end(), p.coords.begin(), p.coords.end());
    out.series[idx] = F.evaluate(coords);
  });
  out.scan = spectrum_scan(out.series, oversample);
  out.peaks = peak_detect(out.scan, tau, true);
  return out;
}

}  // namespace ergolab
