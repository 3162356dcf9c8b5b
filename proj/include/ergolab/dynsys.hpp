#pragma once

// Measure-preserving maps on tori with closed-form iterates: rotations
// x -> x + alpha and the skew product (y, z) -> (y + alpha, z + y).
// Observables, theoretical discrete spectra and quadrature sample sets.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/numbers.hpp"

namespace ergolab {

/// C(n, 2) = n(n-1)/2, valid for negative n as well.
i128 binom2(i128 n);

/// Point of T^d. coords are reduced to [0,1); `exact`, when present, holds
/// the same point in exact arithmetic and is authoritative.
struct TorusPoint {
  std::vector<double> coords;
  std::optional<std::vector<ExactScalar>> exact;

  static TorusPoint from_exact(std::vector<ExactScalar> xs);
  static TorusPoint from_double(std::vector<double> xs);
  /// Comma separated scalars, e.g. `1/4,0`.
  static TorusPoint parse(std::string_view text);
  std::size_t dim() const { return coords.size(); }
};

/// Fractional parts needed to move any point by T^t; see apply_shift.
struct Shift {
  i128 t = 0;
  std::vector<double> frac;
};

class SampleSet;

class TorusSystem {
 public:
  enum class Kind { rotation, skew2 };

  static TorusSystem rotation(std::vector<ExactScalar> alpha);
  static TorusSystem skew2(ExactScalar alpha);
  /// `rot:alpha=sqrt(2)-1`, `rot2:alpha1=..,alpha2=..`, `skew:alpha=..`.
  static TorusSystem parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  std::size_t dim() const { return kind_ == Kind::skew2 ? 2 : alpha_.size(); }
  /// Rotation vector; for skew2 the single base rotation alpha.
  const std::vector<ExactScalar>& alpha() const { return alpha_; }

  /// T^n x in O(1). Exact when x carries exact coordinates.
  TorusPoint iterate(const TorusPoint& x, i128 n) const;

  Shift shift(i128 t) const;
  /// Coordinates of T^t applied to sample s, written to out[0..dim).
  void apply_shift(const Shift& sh, const SampleSet& samples, std::uint64_t s, double* out) const;
  /// Same with the fractional parts of shift(t) given as a raw array.
  void apply_shift(i128 t, const double* frac, const SampleSet& samples, std::uint64_t s, double* out) const;

 private:
  TorusSystem(Kind k, std::vector<ExactScalar> a) : kind_(k), alpha_(std::move(a)) {}
  Kind kind_;
  std::vector<ExactScalar> alpha_;
};

class Observable {
 public:
  enum class Kind { character, trig_poly, arc };
  struct Term {
    std::complex<double> coeff;
    std::vector<std::int64_t> freq;
  };

  static Observable character(std::vector<std::int64_t> m);
  static Observable trig_poly(std::vector<Term> terms);
  /// Indicator of a < x_axis <= b (mod 1; wraps when a >= b).
  static Observable arc(std::size_t axis, ExactScalar a, ExactScalar b);
  /// `char:1`, `char:0,1`, `trig:1@1,0;0.5|-0.5@0,1`, `arc:axis=0,a=1/3,b=2/3`.
  static Observable parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  bool is_fourier() const { return kind_ != Kind::arc; }
  /// Fourier terms (character and trig_poly only).
  const std::vector<Term>& terms() const { return terms_; }
  /// Dimension of the frequency vectors; 0 for arcs (any dimension > axis).
  std::size_t dim() const;
  std::size_t axis() const { return axis_; }
  bool fits(std::size_t d) const;

  std::complex<double> evaluate(std::span<const double> x) const;
  double sup_norm() const;
  Observable conjugate() const;
  /// f o T for Fourier observables (std::invalid_argument for arcs).
  Observable compose(const TorusSystem& sys) const;

 private:
  Observable() = default;
  Kind kind_ = Kind::character;
  std::vector<Term> terms_;
  std::size_t axis_ = 0;
  ExactScalar a_;
  ExactScalar b_;
  double a_val_ = 0.0;
  double b_val_ = 0.0;
};

/// Phase of a product of characters along an orbit: prod_j e(<m_j, T^{t_j} x>)
/// = e(<A, x> + phase) with A integral.
struct OrbitCharacter {
  std::vector<std::int64_t> A;
  double phase = 0.0;
};

/// freqs[j] is evaluated at time times[j].
OrbitCharacter orbit_character(const TorusSystem& sys, std::span<const std::vector<std::int64_t>> freqs,
                               std::span<const i128> times);

/// Element sum_i coeffs_i * alpha_i of sigma(T), with its exact value and mod-1 float.
struct Frequency {
  std::vector<std::int64_t> coeffs;
  SurdSum exact;
  double value = 0.0;

  /// Reduced ExactScalar when the element lives in a single quadratic field.
  std::optional<ExactScalar> scalar() const;
  std::string to_string() const;
};

/// sigma(T) truncated to |coefficients| <= bound, deduplicated mod 1 and
/// sorted by value. Rotation: <m, alpha>; skew2: m*alpha.
std::vector<Frequency> theoretical_spectrum(const TorusSystem& sys, int bound);

bool is_totally_ergodic(const TorusSystem& sys);

/// Quadrature nodes for Lebesgue measure: a K^d grid with K^d >= M (K = M
/// for d = 1, ceil(sqrt(M)) for d = 2), or M orbit points T^m x0.
class SampleSet {
 public:
  static SampleSet grid(std::size_t dim, std::uint64_t M);
  static SampleSet orbit(const TorusSystem& sys, const TorusPoint& x0, std::uint64_t M);

  std::size_t dim() const { return dim_; }
  std::uint64_t size() const { return size_; }
  bool is_grid() const { return grid_; }
  /// K, grid points per axis.
  std::uint64_t grid_size() const { return k_; }
  std::string id() const { return id_; }

  /// Grid index of sample s along `axis` (axis 0 varies slowest).
  std::uint64_t grid_index(std::uint64_t s, std::size_t axis) const;
  void coords(std::uint64_t s, double* out) const;
  /// Exact for grid samples.
  TorusPoint point(std::uint64_t s) const;

 private:
  SampleSet() = default;
  std::size_t dim_ = 1;
  std::uint64_t size_ = 0;
  bool grid_ = true;
  std::uint64_t k_ = 0;
  std::string id_;
  std::vector<double> orbit_;  // size_ * dim_
};

std::vector<TorusPoint> sample_measure(const TorusSystem& sys, std::uint64_t M);

}  // namespace ergolab
