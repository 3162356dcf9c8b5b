#include "ergolab/gowers.hpp"

#include <cmath>
#include <numeric>

#include "ergolab/fft.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/seqgen.hpp"

namespace ergolab {

namespace {

using Vec = std::vector<std::complex<double>>;

/// ||G||_{U^s}^{2^s} for G supported on [1, N], stored as G[n-1].
double norm_power(const Vec& G, std::size_t N, int s) {
  const double inv_n = 1.0 / static_cast<double>(N);
  if (s == 1) {
    PairwiseAccumulator<std::complex<double>> acc;
    for (const auto& v : G) acc.add(v);
    return std::norm(acc.total() * inv_n);
  }
  PairwiseAccumulator<double> acc;
  Vec H;
  for (std::size_t h = 1; h < G.size(); ++h) {
    // (G * conj(S^h G))(n) is supported on n <= len - h.
    H.resize(G.size() - h);
    for (std::size_t n = 0; n + h < G.size(); ++n) H[n] = G[n] * std::conj(G[n + h]);
    acc.add(norm_power(H, N, s - 1));
  }
  return acc.total() * inv_n;
}

std::size_t trimmed_length(std::span<const std::complex<double>> F) {
  std::size_t len = F.size();
  while (len > 0 && F[len - 1] == 0.0) --len;
  return len;
}

}  // namespace

double gowers_naive_cost(std::size_t N, int s) {
  double cost = 1.0;
  for (int i = 1; i <= s; ++i) cost *= static_cast<double>(N) / i;
  return cost;
}

double gowers_norm(std::span<const std::complex<double>> F, int s, GowersMethod method) {
  if (s < 1) throw std::invalid_argument("Gowers norms need s >= 1");
  if (F.empty()) throw std::invalid_argument("Gowers norms need N >= 1");
  const std::size_t N = F.size();
  if (s == 1) {
    return std::sqrt(norm_power(Vec(F.begin(), F.end()), N, 1));
  }
  if (method == GowersMethod::fft || (method == GowersMethod::automatic && s == 2)) {
    if (s != 2) throw std::invalid_argument("the FFT path computes U^2 only");
    return gowers_u2_fft(F);
  }
  const double cost = gowers_naive_cost(N, s);
  if (cost > kGowersBudget)
    throw BudgetExceeded("naive U^" + std::to_string(s) + " at N=" + std::to_string(N) + " needs ~" +
                         std::to_string(cost) + " operations (budget " + std::to_string(kGowersBudget) + ")");

  // The trailing zeros of F_N contribute nothing; the outer h-loop runs in parallel.
  const Vec G(F.begin(), F.begin() + static_cast<std::ptrdiff_t>(trimmed_length(F)));
  std::vector<double> per_h(G.size() > 0 ? G.size() - 1 : 0, 0.0);
  parallel_for(per_h.size(), [&](std::size_t i) {
    const std::size_t h = i + 1;
    Vec H(G.size() - h);
    for (std::size_t n = 0; n + h < G.size(); ++n) H[n] = G[n] * std::conj(G[n + h]);
    per_h[i] = norm_power(H, N, s - 1);
  });
  const double total = pairwise_sum(std::span<const double>(per_h)) / static_cast<double>(N);
  return std::pow(std::max(total, 0.0), 1.0 / std::pow(2.0, s));
}

double gowers_u2_fft(std::span<const std::complex<double>> F) {
  if (F.empty()) throw std::invalid_argument("Gowers norms need N >= 1");
  const std::size_t N = F.size();
  const std::size_t L = next_pow2(2 * N);
  Vec padded(L, 0.0);
  std::copy(F.begin(), F.end(), padded.begin());
  Vec spec = fft_forward(std::move(padded));
  for (auto& v : spec) v = std::norm(v);
  // backward(|X|^2)[h] / L = sum_n F(n+h) conj(F(n)), the conjugate of the needed sum.
  Vec auto_corr = fft_backward(std::move(spec));
  const double inv_n = 1.0 / static_cast<double>(N);
  const double scale = inv_n / static_cast<double>(L);
  PairwiseAccumulator<double> acc;
  for (std::size_t h = 1; h < N; ++h) acc.add(std::norm(auto_corr[h] * scale));
  double fourth = acc.total() * inv_n;
  return std::pow(std::max(fourth, 0.0), 0.25);
}

WTrickRow w_trick_uniformity(std::uint64_t w, std::size_t N, int s, const WTrickMode& mode) {
  if (N < 1) throw std::invalid_argument("w_trick_uniformity needs N >= 1");
  const i128 W = primorial(w);
  if (W > INT64_MAX / static_cast<i128>(N + 2)) throw OverflowError("W * N exceeds the sieve range");
  const auto W64 = static_cast<std::int64_t>(W);
  const PrimeSieve sieve(static_cast<std::uint64_t>(W64) * (N + 1) + 1);
  const double factor = static_cast<double>(euler_totient(static_cast<std::uint64_t>(W64))) / static_cast<double>(W64);

  WTrickRow row;
  row.w = w;
  row.W = W;
  row.value = -1.0;
  for (std::int64_t b = 1; b <= W64; ++b) {
    if (std::gcd(b, W64) != 1) continue;
    Vec F(N);
    parallel_for(N, [&](std::size_t i) {
      const auto n = static_cast<std::int64_t>(i) + 1;
      const std::uint64_t x = static_cast<std::uint64_t>(W64 * n + b);
      double lambda = sieve.is_prime(x) ? std::log(static_cast<double>(x)) : 0.0;
      double base = 1.0;
      if (mode.beatty) {
        const bool hit = beatty_hit_count(mode.theta, mode.gamma, static_cast<i128>(x)) > 0;
        if (!beatty_contains(mode.theta, mode.gamma, static_cast<i128>(x))) lambda = 0.0;
        base = hit ? 1.0 : 0.0;
      }
      F[i] = factor * lambda - base;
    });
    double v = gowers_norm(F, s);
    if (v > row.value) {
      row.value = v;
      row.max_b = b;
    }
  }
  return row;
}

TransferDiagnostic uniformity_transfer_diagnostic(const TorusSystem& sys, std::span<const Observable> fs,
                                                  std::span<const std::complex<double>> F,
                                                  const SampleSet& samples) {
  if (fs.empty()) throw std::invalid_argument("transfer diagnostic needs at least one observable");
  if (F.empty()) throw std::invalid_argument("transfer diagnostic needs N >= 1");
  TransferDiagnostic out;
  out.u_norm = gowers_norm(F, static_cast<int>(fs.size()));
  std::vector<std::int64_t> times;
  std::vector<std::complex<double>> weights;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i] == 0.0) continue;
    times.push_back(static_cast<std::int64_t>(i) + 1);
    weights.push_back(F[i]);
  }
  if (times.empty()) return out;
  auto g = weighted_orbit_average(sys, fs, times, weights, static_cast<double>(F.size()), samples);
  out.lhs = l2_norm(g);
  return out;
}

}  // namespace ergolab
