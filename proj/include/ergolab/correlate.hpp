#pragma once

// Multi-correlation sequences alpha(n) = int f0 * T^n f1 * ... * T^{kn} fk dmu,
// Cesaro means, and empirical averages of prod_j f_j(T^{j a(n)} x) along index
// sequences and weights, evaluated on a sample set.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ergolab/dynsys.hpp"
#include "ergolab/seqgen.hpp"

namespace ergolab {

/// analytic: exact orbit-character algebra (Fourier observables only);
/// pointwise: evaluate observables at every shifted sample point.
/// automatic picks analytic whenever it applies.
enum class CorrelationMethod { automatic, analytic, pointwise };

CorrelationMethod parse_method(std::string_view text);
std::string to_string(CorrelationMethod m);

/// 4096 for d = 1, 256^2 for d = 2, 32^d beyond.
std::uint64_t default_sample_count(std::size_t dim);

struct CorrelationSeries {
  std::vector<std::complex<double>> values;  // values[n-1] = alpha(n)
  std::string provenance;
};

struct EmpiricalFunction {
  std::vector<std::complex<double>> values;  // one per sample point
  std::string sample_set;
};

/// fs = f0, f1, ..., fk (k >= 1). Grid quadrature over `samples`; the analytic
/// path needs a grid and gives the same numbers as summing over it.
CorrelationSeries multicorrelation(const TorusSystem& sys, std::span<const Observable> fs, std::size_t N,
                                   const SampleSet& samples, CorrelationMethod method = CorrelationMethod::automatic);

/// Mean of alpha(first..last), 1-based inclusive.
std::complex<double> cesaro(std::span<const std::complex<double>> series, std::size_t first, std::size_t last);
std::complex<double> cesaro(const CorrelationSeries& series, std::size_t first, std::size_t last);

enum class Normalization { count, cesaro, weight_sum };

Normalization parse_normalization(std::string_view text);
std::string to_string(Normalization n);

/// Core kernel: g(x) = (1/denominator) sum_i w_i prod_j f_j(T^{j t_i} x), fs = f1..fk.
/// Empty `weights` means all ones.
EmpiricalFunction weighted_orbit_average(const TorusSystem& sys, std::span<const Observable> fs,
                                         std::span<const std::int64_t> times,
                                         std::span<const std::complex<double>> weights, double denominator,
                                         const SampleSet& samples,
                                         CorrelationMethod method = CorrelationMethod::automatic);

struct AlongOptions {
  Normalization normalization = Normalization::count;
  /// Positional window start: terms a(first), ..., a(first + N - 1).
  std::int64_t first = 1;
  CorrelationMethod method = CorrelationMethod::automatic;
};

/// Average along idx. Sequences that truncate by value (primes, Beatty
/// primes) select a(n) <= N; the others select N consecutive positions.
/// count divides by the number of selected terms, cesaro by N.
EmpiricalFunction average_along(const TorusSystem& sys, std::span<const Observable> fs, const IndexSequence& idx,
                                std::size_t N, const SampleSet& samples, const AlongOptions& opts = {});

/// Weighted average over n in [1, N]; zero weights are skipped. count divides
/// by the number of nonzero weights, cesaro by N, weight_sum by sum w(n).
EmpiricalFunction average_along(const TorusSystem& sys, std::span<const Observable> fs, const WeightSequence& w,
                                std::size_t N, const SampleSet& samples,
                                Normalization normalization = Normalization::cesaro,
                                CorrelationMethod method = CorrelationMethod::automatic);

/// sqrt(mean |g - h|^2). std::invalid_argument on different sample sets.
double l2_distance(const EmpiricalFunction& g, const EmpiricalFunction& h);
double l2_norm(const EmpiricalFunction& g);
double sup_distance(const EmpiricalFunction& g, const EmpiricalFunction& h);

}  // namespace ergolab
