#ifndef MIXBESOV_GRID_HPP
#define MIXBESOV_GRID_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mixbesov/errors.hpp"

namespace mixbesov {

using Complex = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Uniform n1 x n2 grid on [-L, L) x [-pi, pi). The x2 axis is always one
/// torus period; x1 is a truncated window of the real line.
class GridSpec {
 public:
  GridSpec() = default;

  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }
  std::size_t size() const noexcept { return n1_ * n2_; }
  double window_half_width() const noexcept { return half_width_; }
  double dx1() const noexcept { return 2.0 * half_width_ / static_cast<double>(n1_); }
  double dx2() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(n2_); }
  double dx(int axis) const noexcept { return axis == 1 ? dx1() : dx2(); }
  std::size_t n(int axis) const noexcept { return axis == 1 ? n1_ : n2_; }

  double x1(std::size_t i) const noexcept {
    return -half_width_ + static_cast<double>(i) * dx1();
  }
  double x2(std::size_t j) const noexcept {
    return -std::numbers::pi + static_cast<double>(j) * dx2();
  }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n2_ + j; }

  // Frequency spacing on each axis: pi/L along x1, 1 along the torus.
  double dxi1() const noexcept { return std::numbers::pi / half_width_; }
  double dxi2() const noexcept { return 1.0; }

  /// Signed frequency index of FFT slot a on an axis of length n.
  static std::ptrdiff_t signed_index(std::size_t a, std::size_t n) noexcept {
    return a < n / 2 ? static_cast<std::ptrdiff_t>(a)
                     : static_cast<std::ptrdiff_t>(a) - static_cast<std::ptrdiff_t>(n);
  }
  double xi1(std::size_t a) const noexcept {
    return dxi1() * static_cast<double>(signed_index(a, n1_));
  }
  double xi2(std::size_t b) const noexcept {
    return static_cast<double>(signed_index(b, n2_));
  }
  double nyquist1() const noexcept { return dxi1() * static_cast<double>(n1_ / 2); }
  double nyquist2() const noexcept { return static_cast<double>(n2_ / 2); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  friend GridSpec make_grid(std::size_t, std::size_t, double);
  GridSpec(std::size_t n1, std::size_t n2, double half_width)
      : n1_(n1), n2_(n2), half_width_(half_width) {}

  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  double half_width_ = 0.0;
};

inline GridSpec make_grid(std::size_t n1, std::size_t n2, double half_width) {
  if (!is_power_of_two(n1) || !is_power_of_two(n2) || n1 < 8 || n2 < 8)
    throw Error(ErrorCode::NonPowerOfTwo,
                "grid sizes must be powers of two >= 8, got " + std::to_string(n1) + "x" +
                    std::to_string(n2));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw Error(ErrorCode::NonPositiveWindow, "window half width must be positive");
  return GridSpec(n1, n2, half_width);
}

enum class FieldKind : std::uint8_t { Real = 0, Complex = 1 };

/// Sampled function on a GridSpec, row-major with x1 as the major axis.
/// Real fields hold exactly zero imaginary parts: construction projects.
class Field {
 public:
  Field() = default;

  Field(GridSpec grid, std::vector<Complex> values, FieldKind kind)
      : grid_(grid), values_(std::move(values)), kind_(kind) {
    if (values_.size() != grid_.size())
      throw Error(ErrorCode::GridMismatch, "field payload does not match grid size");
    for (auto& v : values_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorCode::NonFiniteValue, "field values must be finite");
      if (kind_ == FieldKind::Real) v.imag(0.0);
    }
  }

  static Field zeros(GridSpec grid, FieldKind kind = FieldKind::Real) {
    return Field(grid, std::vector<Complex>(grid.size()), kind);
  }

  static Field real(GridSpec grid, const std::vector<double>& values) {
    std::vector<Complex> v(values.begin(), values.end());
    return Field(grid, std::move(v), FieldKind::Real);
  }

  const GridSpec& grid() const noexcept { return grid_; }
  FieldKind kind() const noexcept { return kind_; }
  bool is_real() const noexcept { return kind_ == FieldKind::Real; }
  std::span<const Complex> values() const noexcept { return values_; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[grid_.index(i, j)];
  }
  std::size_t size() const noexcept { return values_.size(); }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  Field scaled(Complex c) const {
    std::vector<Complex> out(values_);
    for (auto& v : out) v *= c;
    const bool stays_real = kind_ == FieldKind::Real && c.imag() == 0.0;
    return Field(grid_, std::move(out), stays_real ? FieldKind::Real : FieldKind::Complex);
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
  FieldKind kind_ = FieldKind::Real;
};

inline FieldKind combine_kinds(FieldKind a, FieldKind b) {
  return (a == FieldKind::Real && b == FieldKind::Real) ? FieldKind::Real : FieldKind::Complex;
}

inline void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid()))
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
}

/// a*f + b*g on a shared grid.
inline Field linear_combination(Complex a, const Field& f, Complex b, const Field& g) {
  require_same_grid(f, g);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f.values()[i] + b * g.values()[i];
  FieldKind kind = combine_kinds(f.kind(), g.kind());
  if (a.imag() != 0.0 || b.imag() != 0.0) kind = FieldKind::Complex;
  return Field(f.grid(), std::move(out), kind);
}

inline Field pointwise_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.values()[i] * g.values()[i];
  return Field(f.grid(), std::move(out), combine_kinds(f.kind(), g.kind()));
}

/// values[i, j] = f(x1_i, x2_j). A real-valued evaluator yields a real field.
template <class F>
Field sample_function(const GridSpec& grid, F&& f) {
  using R = std::invoke_result_t<F&, double, double>;
  constexpr bool returns_real = std::is_arithmetic_v<std::remove_cvref_t<R>>;
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < grid.n1(); ++i) {
    const double x1 = grid.x1(i);
    for (std::size_t j = 0; j < grid.n2(); ++j) {
      const Complex v = Complex(f(x1, grid.x2(j)));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorCode::EvaluatorReturnedNonFinite,
                    "evaluator returned a non-finite value at grid point (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
      values[grid.index(i, j)] = v;
    }
  }
  return Field(grid, std::move(values), returns_real ? FieldKind::Real : FieldKind::Complex);
}

// ---------------------------------------------------------------------------
// Support margin contract on the x1 window.

struct SupportMargin {
  double width = -1.0;          // negative: use L/4
  double relative_eps = 1e-10;  // relative to max|f|

  double resolved_width(const GridSpec& grid) const {
    return width < 0.0 ? grid.window_half_width() / 4.0 : width;
  }
};

/// True when |f| < eps*max|f| outside [-L+m, L-m] along x1.
inline bool satisfies_support_margin(const Field& f, SupportMargin margin = {}) {
  const auto& g = f.grid();
  const double m = margin.resolved_width(g);
  const double L = g.window_half_width();
  const double threshold = margin.relative_eps * f.max_abs();
  if (threshold == 0.0) return true;
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const double x1 = g.x1(i);
    if (x1 >= -L + m && x1 <= L - m) continue;
    for (std::size_t j = 0; j < g.n2(); ++j)
      if (std::abs(f(i, j)) >= threshold) return false;
  }
  return true;
}

inline void check_support_margin(const Field& f, Diagnostics* diag, const std::string& where,
                                 SupportMargin margin = {}) {
  if (diag && !satisfies_support_margin(f, margin))
    diag->warn(WarningKind::SupportMarginViolated,
               where + ": field is not negligible inside the x1 support margin");
}

}  // namespace mixbesov

#endif  // MIXBESOV_GRID_HPP
