#pragma once

// Gowers uniformity norms on [N] = {1..N} by the inductive definition
//   ||F||_{U^1} = |(1/N) sum F_N(n)|,
//   ||F||_{U^{s+1}}^{2^{s+1}} = (1/N) sum_{h=1}^N ||F_N * conj(S^h F_N)||_{U^s}^{2^s},
// where F_N is F truncated to [1, N].

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ergolab/correlate.hpp"
#include "ergolab/dynsys.hpp"
#include "ergolab/numbers.hpp"

namespace ergolab {

/// The naive recursion would exceed the work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Approximate inner-loop count of the naive recursion, N^s / s!.
double gowers_naive_cost(std::size_t N, int s);
inline constexpr double kGowersBudget = 2e10;

enum class GowersMethod { automatic, naive, fft };

/// F[n-1] = F(n), N = F.size(). automatic uses the FFT path for s = 2 and the
/// recursion otherwise. BudgetExceeded when the recursion is too expensive.
double gowers_norm(std::span<const std::complex<double>> F, int s, GowersMethod method = GowersMethod::automatic);

/// ||F||_{U^2}^4 = (1/N) sum_{h=1}^N |(1/N) sum_n F_N(n) conj(F_N(n+h))|^2 via FFT.
double gowers_u2_fft(std::span<const std::complex<double>> F);

struct WTrickRow {
  std::uint64_t w = 0;
  i128 W = 0;
  std::int64_t max_b = 0;
  double value = 0.0;
};

/// Beatty mode compares Lambda_{theta,gamma,W,b} with the indicator of
/// {n : Wn + b = floor(theta m + gamma) for some integer m}.
struct WTrickMode {
  bool beatty = false;
  ExactScalar theta;
  ExactScalar gamma;
};

/// max over b <= W coprime to W of ||Lambda_{W,b} - base||_{U^s_[N]}, W the primorial of w.
WTrickRow w_trick_uniformity(std::uint64_t w, std::size_t N, int s = 2, const WTrickMode& mode = {});

struct TransferDiagnostic {
  double lhs = 0.0;
  double u_norm = 0.0;
};

/// lhs = L^2 norm over samples of (1/N) sum_n F(n) prod_j f_j(T^{jn} x);
/// u_norm = ||F||_{U^k_[N]} with k = number of observables.
TransferDiagnostic uniformity_transfer_diagnostic(const TorusSystem& sys, std::span<const Observable> fs,
                                                  std::span<const std::complex<double>> F,
                                                  const SampleSet& samples);

}  // namespace ergolab
