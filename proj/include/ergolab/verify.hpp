#pragma once

// Theorem harnesses: exact hypothesis checks on sigma(T), both sides of each
// multiple ergodic theorem at increasing N, negative controls, the Beatty
// common-difference search and the diagonal-orbit spectrum of the skew product.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergolab/correlate.hpp"
#include "ergolab/dynsys.hpp"
#include "ergolab/seqgen.hpp"
#include "ergolab/spectral.hpp"

namespace ergolab {

struct TheoremSpec {
  enum class Kind { arithmetic, beatty, squarefree, primes, beatty_primes, besicovitch };
  Kind kind = Kind::arithmetic;
  std::int64_t q = 1;
  std::int64_t r = 0;
  ExactScalar theta;
  ExactScalar gamma;
  /// Generators of <sigma(phi)> for the Besicovitch theorem.
  std::vector<ExactScalar> phi_spectrum;
  bool phi_rational_spectrum = false;

  static TheoremSpec arithmetic(std::int64_t q, std::int64_t r);
  static TheoremSpec beatty(ExactScalar theta, ExactScalar gamma);
  static TheoremSpec squarefree();
  static TheoremSpec primes();
  static TheoremSpec beatty_primes(ExactScalar theta, ExactScalar gamma);
  static TheoremSpec besicovitch(std::vector<ExactScalar> generators, bool rational_spectrum);
  /// The theorem whose left-hand side averages along `seq`.
  static TheoremSpec along(const IndexSequence& seq);

  std::string id() const;
  /// Subgroup that sigma(T) may meet only in 0.
  FrequencyGroupSpec forbidden_group() const;
  /// The left-hand side is a uniform Cesaro limit (checked over windows).
  bool uniform() const { return kind == Kind::arithmetic || kind == Kind::beatty; }
  IndexSequence sequence() const;
};

struct HypothesisResult {
  bool pass = true;
  std::optional<Frequency> witness;
  std::string group;
};

/// Tests every nonzero element of theoretical_spectrum(sys, bound) for
/// membership in the theorem's forbidden subgroup (exact arithmetic).
HypothesisResult check_hypothesis(const TorusSystem& sys, const TheoremSpec& theorem, int bound = 20);

struct ConvergenceRow {
  std::uint64_t N = 0;
  double distance = 0.0;
  double runtime_seconds = 0.0;
};

struct ConvergenceReport {
  std::string theorem;
  std::string system;
  std::vector<std::string> observables;
  std::string sample_set;
  HypothesisResult hypothesis;
  bool ran = false;
  std::vector<ConvergenceRow> rows;
  double tol = 0.0;
  bool verdict = false;
  /// Extra scalars, e.g. the weight mean of a Besicovitch run.
  std::map<std::string, double> extras;
};

struct RunOptions {
  std::size_t windows = 8;
  double tol = 0.05;
  bool force = false;
  int hypothesis_bound = 20;
  CorrelationMethod method = CorrelationMethod::automatic;
};

/// Pass iff distance(N_max) < tol and, over rows with N >= N_max/100, each
/// distance is at most 1.2 times the previous one.
bool convergence_verdict(const std::vector<ConvergenceRow>& rows, double tol);

/// distance(N) = L^2 distance between the two sides at N. Uniform theorems
/// take the max over `windows` windows of N consecutive positions starting at
/// 1 + i*floor(N/windows), each compared with the plain average over the same
/// window of n. Without a passing hypothesis (and no force) no rows are run.
ConvergenceReport run_theorem(const TorusSystem& sys, std::span<const Observable> fs, const TheoremSpec& theorem,
                              std::span<const std::uint64_t> schedule, const SampleSet& samples,
                              const RunOptions& opts = {});

/// distance(N) between (1/N) sum phi(n) prod T^{jn} f_j and (mean phi)(1/N) sum prod T^{jn} f_j.
/// extras: weight_mean at the largest N, lhs_norm.
ConvergenceReport besicovitch_weight_run(const TorusSystem& sys, std::span<const Observable> fs,
                                         const WeightSequence& phi, const TheoremSpec& theorem,
                                         std::span<const std::uint64_t> schedule, const SampleSet& samples,
                                         const RunOptions& opts = {});

struct TransferGap {
  double sup = 0.0;
  double l2 = 0.0;
};

/// (1/pi(N)) sum_{p <= N} against (1/N) sum Lambda'(n) over the samples.
TransferGap prime_transfer_gap(const TorusSystem& sys, std::span<const Observable> fs, std::size_t N,
                               const SampleSet& samples, CorrelationMethod method = CorrelationMethod::automatic);

struct ApWitness {
  std::int64_t m = 0;
  std::int64_t d = 0;
};

/// in_set[x] marks x in A for x in [1, L] (index 0 unused). Finds m, d with d a
/// term of floor(theta n + gamma), n >= 1, and m, m+d, ..., m+kd all in A;
/// terms d are tried in increasing order up to L/k.
std::optional<ApWitness> beatty_ap_search(const std::vector<bool>& in_set, const ExactScalar& theta,
                                          const ExactScalar& gamma, int k);

struct OrbitSpectrum {
  std::vector<std::complex<double>> series;
  SpectrumScan scan;
  PeakReport peaks;
};

/// Spectrum of n -> F(T^n x, T^{2n} x) for F on (T^d)^2, coordinates ordered
/// (x_1 coords, x_2 coords).
OrbitSpectrum diagonal_orbit_spectrum(const TorusSystem& sys, const TorusPoint& x, int k, const Observable& F,
                                      std::size_t N, double tau = 0.05, std::size_t oversample = 4);

}  // namespace ergolab
