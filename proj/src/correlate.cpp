#include "ergolab/correlate.hpp"

#include <cmath>
#include <stdexcept>

#include "ergolab/parallel.hpp"

namespace ergolab {

CorrelationMethod parse_method(std::string_view text) {
  if (text == "auto" || text == "automatic") return CorrelationMethod::automatic;
  if (text == "analytic") return CorrelationMethod::analytic;
  if (text == "pointwise") return CorrelationMethod::pointwise;
  throw ParseError("unknown method '" + std::string(text) + "' (auto, analytic, pointwise)");
}

std::string to_string(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::analytic:
      return "analytic";
    case CorrelationMethod::pointwise:
      return "pointwise";
    default:
      return "auto";
  }
}

Normalization parse_normalization(std::string_view text) {
  if (text == "count") return Normalization::count;
  if (text == "cesaro") return Normalization::cesaro;
  if (text == "weight_sum") return Normalization::weight_sum;
  throw ParseError("unknown normalization '" + std::string(text) + "' (count, cesaro, weight_sum)");
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::count:
      return "count";
    case Normalization::cesaro:
      return "cesaro";
    default:
      return "weight_sum";
  }
}

std::uint64_t default_sample_count(std::size_t dim) {
  if (dim == 1) return 4096;
  std::uint64_t m = 1;
  for (std::size_t i = 0; i < dim; ++i) m *= dim == 2 ? 256 : 32;
  return m;
}

namespace {

constexpr std::uint64_t kPointwiseLimit = std::uint64_t{1} << 26;

/// One choice of Fourier term per observable, with the product coefficient.
struct TermTuple {
  std::complex<double> coeff;
  std::vector<std::vector<std::int64_t>> freqs;
};

std::vector<TermTuple> expand_terms(std::span<const Observable> fs) {
  std::vector<TermTuple> tuples{{1.0, {}}};
  for (const auto& f : fs) {
    std::vector<TermTuple> next;
    for (const auto& tup : tuples) {
      for (const auto& term : f.terms()) {
        TermTuple t = tup;
        t.coeff *= term.coeff;
        t.freqs.push_back(term.freq);
        next.push_back(std::move(t));
      }
    }
    if (next.size() > 100000) throw std::invalid_argument("too many Fourier term combinations");
    tuples = std::move(next);
  }
  return tuples;
}

bool all_fourier(std::span<const Observable> fs) {
  for (const auto& f : fs)
    if (!f.is_fourier()) return false;
  return true;
}

void check_dims(const TorusSystem& sys, std::span<const Observable> fs, const SampleSet& samples) {
  if (samples.dim() != sys.dim()) throw std::invalid_argument("sample set dimension does not match the system");
  for (const auto& f : fs) {
    if (!f.fits(sys.dim()))
      throw std::invalid_argument("observable " + f.to_string() + " does not fit the system dimension");
  }
}

bool use_analytic(CorrelationMethod method, std::span<const Observable> fs, bool needs_grid, const SampleSet& s) {
  bool possible = all_fourier(fs) && (!needs_grid || s.is_grid());
  if (method == CorrelationMethod::analytic && !possible)
    throw std::invalid_argument("analytic method needs Fourier observables" +
                                std::string(needs_grid ? " and a grid sample set" : ""));
  if (method == CorrelationMethod::pointwise) return false;
  return possible;
}

void check_pointwise_size(const SampleSet& samples) {
  if (samples.size() > kPointwiseLimit)
    throw std::invalid_argument("pointwise evaluation over " + std::to_string(samples.size()) +
                                " samples is not supported; use the analytic method");
}

i128 mod_k(i128 v, i128 K) {
  i128 r = v % K;
  return r < 0 ? r + K : r;
}

/// e(<A, x_s>), exact for grid samples.
std::complex<double> character_at(std::span<const std::int64_t> A, const SampleSet& samples, std::uint64_t s) {
  if (samples.is_grid()) {
    const auto K = static_cast<i128>(samples.grid_size());
    i128 num = 0;
    for (std::size_t i = 0; i < A.size(); ++i)
      num = (num + mod_k(A[i], K) * static_cast<i128>(samples.grid_index(s, i))) % K;
    return unit_phase(static_cast<double>(num) / static_cast<double>(K));
  }
  std::vector<double> x(samples.dim());
  samples.coords(s, x.data());
  double phase = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) phase += static_cast<double>(A[i]) * x[i];
  return unit_phase(phase - std::floor(phase));
}

/// prod_j f_j(T^{(j+1) t} x_s) at one sample, for a precomputed table of shifts.
struct ShiftTable {
  std::size_t width = 0;  // fractional parts per shift
  std::vector<i128> t;
  std::vector<double> frac;

  void add(const TorusSystem& sys, i128 time) {
    Shift sh = sys.shift(time);
    width = sh.frac.size();
    t.push_back(time);
    frac.insert(frac.end(), sh.frac.begin(), sh.frac.end());
  }
};

}  // namespace

// ------------------------------------------------------- multicorrelation

CorrelationSeries multicorrelation(const TorusSystem& sys, std::span<const Observable> fs, std::size_t N,
                                   const SampleSet& samples, CorrelationMethod method) {
  if (fs.size() < 2) throw std::invalid_argument("multicorrelation needs f0 and at least one more observable");
  if (N < 1) throw std::invalid_argument("multicorrelation needs N >= 1");
  check_dims(sys, fs, samples);

  CorrelationSeries out;
  out.values.resize(N);
  out.provenance = "system=" + sys.to_string() + ";samples=" + samples.id() + ";obs=";
  for (std::size_t j = 0; j < fs.size(); ++j) out.provenance += (j ? "|" : "") + fs[j].to_string();

  const std::size_t k = fs.size() - 1;
  if (use_analytic(method, fs, true, samples)) {
    const auto tuples = expand_terms(fs);
    const auto K = static_cast<std::int64_t>(samples.grid_size());
    parallel_for(N, [&](std::size_t idx) {
      const i128 n = static_cast<i128>(idx) + 1;
      std::vector<i128> times(k + 1);
      for (std::size_t j = 0; j <= k; ++j) times[j] = static_cast<i128>(j) * n;
      std::complex<double> sum = 0.0;
      for (const auto& tup : tuples) {
        OrbitCharacter oc = orbit_character(sys, tup.freqs, times);
        bool survives = true;
        for (auto a : oc.A) survives = survives && a % K == 0;
        if (survives) sum += tup.coeff * unit_phase(oc.phase);
      }
      out.values[idx] = sum;
    });
    return out;
  }

  check_pointwise_size(samples);
  const std::uint64_t M = samples.size();
  const std::size_t d = sys.dim();
  std::vector<std::complex<double>> f0(M);
  parallel_for(M, [&](std::size_t s) {
    std::vector<double> x(d);
    samples.coords(s, x.data());
    f0[s] = fs[0].evaluate(x);
  });
  const double inv_m = 1.0 / static_cast<double>(M);
  parallel_for(N, [&](std::size_t idx) {
    const i128 n = static_cast<i128>(idx) + 1;
    std::vector<Shift> shifts;
    for (std::size_t j = 1; j <= k; ++j) shifts.push_back(sys.shift(static_cast<i128>(j) * n));
    std::vector<double> x(d);
    PairwiseAccumulator<std::complex<double>> acc;
    for (std::uint64_t s = 0; s < M; ++s) {
      std::complex<double> prod = f0[s];
      for (std::size_t j = 1; j <= k; ++j) {
        sys.apply_shift(shifts[j - 1], samples, s, x.data());
        prod *= fs[j].evaluate(x);
      }
      acc.add(prod);
    }
    out.values[idx] = acc.total() * inv_m;
  });
  return out;
}

std::complex<double> cesaro(std::span<const std::complex<double>> series, std::size_t first, std::size_t last) {
  if (first < 1 || last < first || last > series.size())
    throw std::out_of_range("cesaro window must satisfy 1 <= first <= last <= N");
  return pairwise_sum(series.subspan(first - 1, last - first + 1)) / static_cast<double>(last - first + 1);
}

std::complex<double> cesaro(const CorrelationSeries& series, std::size_t first, std::size_t last) {
  return cesaro(std::span<const std::complex<double>>(series.values), first, last);
}

// --------------------------------------------------------- orbit averages

EmpiricalFunction weighted_orbit_average(const TorusSystem& sys, std::span<const Observable> fs,
                                         std::span<const std::int64_t> times,
                                         std::span<const std::complex<double>> weights, double denominator,
                                         const SampleSet& samples, CorrelationMethod method) {
  if (fs.empty()) throw std::invalid_argument("average needs at least one observable");
  if (!weights.empty() && weights.size() != times.size())
    throw std::invalid_argument("one weight per time is required");
  if (times.empty() || denominator == 0.0) throw std::domain_error("empty selection");
  check_dims(sys, fs, samples);

  const std::size_t k = fs.size();
  const std::size_t count = times.size();
  const std::uint64_t M = samples.size();
  const double inv = 1.0 / denominator;
  auto weight = [&](std::size_t i) { return weights.empty() ? std::complex<double>(1.0) : weights[i]; };

  EmpiricalFunction g;
  g.sample_set = samples.id();

  if (use_analytic(method, fs, false, samples)) {
    if (M > kPointwiseLimit) throw std::invalid_argument("too many samples to tabulate an empirical function");
    g.values.assign(M, 0.0);
    for (const auto& tup : expand_terms(fs)) {
      std::vector<std::int64_t> js(k);
      for (std::size_t j = 0; j < k; ++j) js[j] = static_cast<std::int64_t>(j + 1);
      // A(t) is affine in t; only the skew product lets it move.
      std::int64_t drift = 0;
      if (sys.kind() == TorusSystem::Kind::skew2) {
        for (std::size_t j = 0; j < k; ++j) drift += js[j] * tup.freqs[j][1];
      }
      std::vector<OrbitCharacter> ocs(count);
      parallel_for(count, [&](std::size_t i) {
        std::vector<i128> ts(k);
        for (std::size_t j = 0; j < k; ++j) ts[j] = static_cast<i128>(js[j]) * times[i];
        ocs[i] = orbit_character(sys, tup.freqs, ts);
      });

      if (drift == 0) {
        PairwiseAccumulator<std::complex<double>> acc;
        for (std::size_t i = 0; i < count; ++i) acc.add(weight(i) * unit_phase(ocs[i].phase));
        const std::complex<double> scalar = tup.coeff * acc.total() * inv;
        const auto& A = ocs[0].A;
        parallel_for(M, [&](std::size_t s) { g.values[s] += scalar * character_at(A, samples, s); });
        continue;
      }

      // Per-sample sums over the varying y-frequency; on a grid only the
      // K distinct y values matter.
      const std::int64_t az = ocs[0].A[1];
      if (samples.is_grid()) {
        const std::uint64_t K = samples.grid_size();
        const auto KK = static_cast<i128>(K);
        std::vector<std::uint64_t> ay(count);
        for (std::size_t i = 0; i < count; ++i) ay[i] = static_cast<std::uint64_t>(mod_k(ocs[i].A[0], KK));
        std::vector<std::complex<double>> column(K);
        parallel_for(K, [&](std::size_t j0) {
          PairwiseAccumulator<std::complex<double>> acc;
          for (std::size_t i = 0; i < count; ++i) {
            auto num = static_cast<std::uint64_t>(static_cast<unsigned __int128>(ay[i]) * j0 % K);
            double ph = static_cast<double>(num) / static_cast<double>(K) + ocs[i].phase;
            acc.add(weight(i) * unit_phase(ph));
          }
          column[j0] = acc.total();
        });
        const std::vector<std::int64_t> zchar{0, az};
        parallel_for(M, [&](std::size_t s) {
          g.values[s] += tup.coeff * column[samples.grid_index(s, 0)] * character_at(zchar, samples, s) * inv;
        });
      } else {
        parallel_for(M, [&](std::size_t s) {
          double x[2];
          samples.coords(s, x);
          PairwiseAccumulator<std::complex<double>> acc;
          for (std::size_t i = 0; i < count; ++i) {
            long double v = static_cast<long double>(ocs[i].A[0]) * x[0] + static_cast<long double>(az) * x[1];
            v -= std::floor(v);
            acc.add(weight(i) * unit_phase(static_cast<double>(v) + ocs[i].phase));
          }
          g.values[s] += tup.coeff * acc.total() * inv;
        });
      }
    }
    return g;
  }

  check_pointwise_size(samples);
  ShiftTable table;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 1; j <= k; ++j) table.add(sys, static_cast<i128>(j) * times[i]);
  g.values.resize(M);
  const std::size_t d = sys.dim();
  parallel_for(M, [&](std::size_t s) {
    std::vector<double> x(d);
    PairwiseAccumulator<std::complex<double>> acc;
    for (std::size_t i = 0; i < count; ++i) {
      std::complex<double> prod = weight(i);
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t row = i * k + j;
        sys.apply_shift(table.t[row], table.frac.data() + row * table.width, samples, s, x.data());
        prod *= fs[j].evaluate(x);
      }
      acc.add(prod);
    }
    g.values[s] = acc.total() * inv;
  });
  return g;
}

EmpiricalFunction average_along(const TorusSystem& sys, std::span<const Observable> fs, const IndexSequence& idx,
                                std::size_t N, const SampleSet& samples, const AlongOptions& opts) {
  if (N < 1) throw std::domain_error("empty selection (N = 0)");
  std::vector<std::int64_t> times;
  if (idx.truncates_by_value()) {
    if (opts.first != 1) throw std::invalid_argument("value-truncated sequences have no positional window");
    times = idx.terms_up_to(static_cast<std::int64_t>(N));
  } else {
    times = idx.terms(opts.first, N);
  }
  if (times.empty()) throw std::domain_error("empty selection: no terms of " + idx.to_string() + " up to N");
  double denominator = opts.normalization == Normalization::cesaro ? static_cast<double>(N)
                                                                   : static_cast<double>(times.size());
  return weighted_orbit_average(sys, fs, times, {}, denominator, samples, opts.method);
}

EmpiricalFunction average_along(const TorusSystem& sys, std::span<const Observable> fs, const WeightSequence& w,
                                std::size_t N, const SampleSet& samples, Normalization normalization,
                                CorrelationMethod method) {
  if (N < 1) throw std::domain_error("empty selection (N = 0)");
  const auto values = w.values(1, N);
  std::vector<std::int64_t> times;
  std::vector<std::complex<double>> weights;
  PairwiseAccumulator<std::complex<double>> total;
  for (std::size_t i = 0; i < N; ++i) {
    if (values[i] == 0.0) continue;
    times.push_back(static_cast<std::int64_t>(i) + 1);
    weights.push_back(values[i]);
    total.add(values[i]);
  }
  if (times.empty()) throw std::domain_error("empty selection: weight " + w.to_string() + " vanishes on [1, N]");
  double denominator = static_cast<double>(N);
  if (normalization == Normalization::count) denominator = static_cast<double>(times.size());
  if (normalization == Normalization::weight_sum) denominator = total.total().real();
  return weighted_orbit_average(sys, fs, times, weights, denominator, samples, method);
}

namespace {

void check_comparable(const EmpiricalFunction& g, const EmpiricalFunction& h) {
  if (g.sample_set != h.sample_set || g.values.size() != h.values.size())
    throw std::invalid_argument("empirical functions live on different sample sets (" + g.sample_set + " vs " +
                                h.sample_set + ")");
}

}  // namespace

double l2_distance(const EmpiricalFunction& g, const EmpiricalFunction& h) {
  check_comparable(g, h);
  PairwiseAccumulator<double> acc;
  for (std::size_t s = 0; s < g.values.size(); ++s) acc.add(std::norm(g.values[s] - h.values[s]));
  return std::sqrt(acc.total() / static_cast<double>(g.values.size()));
}

double l2_norm(const EmpiricalFunction& g) {
  PairwiseAccumulator<double> acc;
  for (const auto& v : g.values) acc.add(std::norm(v));
  return std::sqrt(acc.total() / static_cast<double>(g.values.size()));
}

double sup_distance(const EmpiricalFunction& g, const EmpiricalFunction& h) {
  check_comparable(g, h);
  double m = 0.0;
  for (std::size_t s = 0; s < g.values.size(); ++s) m = std::max(m, std::abs(g.values[s] - h.values[s]));
  return m;
}

}  // namespace ergolab
