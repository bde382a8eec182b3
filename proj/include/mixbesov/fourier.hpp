#ifndef MIXBESOV_FOURIER_HPP
#define MIXBESOV_FOURIER_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "mixbesov/grid.hpp"

namespace mixbesov {

/// Continuous-transform-scaled DFT of a Field. Coefficients are stored in FFT
/// slot order on both axes; slot (a, b) corresponds to the frequency pair
/// (grid.xi1(a), grid.xi2(b)).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(GridSpec grid, std::vector<Complex> coeffs, FieldKind source_kind)
      : grid_(grid), coeffs_(std::move(coeffs)), source_kind_(source_kind) {
    if (coeffs_.size() != grid_.size())
      throw Error(ErrorCode::GridMismatch, "spectrum does not match grid size");
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const Complex& operator()(std::size_t a, std::size_t b) const noexcept {
    return coeffs_[grid_.index(a, b)];
  }
  FieldKind source_kind() const noexcept { return source_kind_; }

  /// Coefficient at signed frequency indices (k, n), k in [-n1/2, n1/2).
  const Complex& at_frequency(std::ptrdiff_t k, std::ptrdiff_t n) const noexcept {
    const auto n1 = static_cast<std::ptrdiff_t>(grid_.n1());
    const auto n2 = static_cast<std::ptrdiff_t>(grid_.n2());
    const auto a = static_cast<std::size_t>((k % n1 + n1) % n1);
    const auto b = static_cast<std::size_t>((n % n2 + n2) % n2);
    return (*this)(a, b);
  }

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
  FieldKind source_kind_ = FieldKind::Complex;
};

namespace detail {

// In-place unnormalized 2D DFT (sign -1 forward, +1 inverse).
inline void fft2d(std::vector<Complex>& data, std::size_t n1, std::size_t n2, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> in, out;

  in.resize(n2);
  for (std::size_t i = 0; i < n1; ++i) {
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(i * n2), n2, in.begin());
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    std::copy_n(out.begin(), n2, data.begin() + static_cast<std::ptrdiff_t>(i * n2));
  }
  in.resize(n1);
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) in[i] = data[i * n2 + j];
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    for (std::size_t i = 0; i < n1; ++i) data[i * n2 + j] = out[i];
  }
}

// (-1)^(a+b): phase from placing the window origin at (-L, -pi).
inline double checkerboard(std::size_t a, std::size_t b) { return ((a + b) & 1u) ? -1.0 : 1.0; }

}  // namespace detail

/// coeffs(xi1, n) = dx1*dx2 * sum_x f(x) exp(-i(xi1*x1 + n*x2)).
inline SpectralField forward_transform(const Field& field) {
  const auto& g = field.grid();
  std::vector<Complex> data(field.values().begin(), field.values().end());
  detail::fft2d(data, g.n1(), g.n2(), false);
  const double scale = g.dx1() * g.dx2();
  for (std::size_t a = 0; a < g.n1(); ++a)
    for (std::size_t b = 0; b < g.n2(); ++b)
      data[g.index(a, b)] *= scale * detail::checkerboard(a, b);
  return SpectralField(g, std::move(data), field.kind());
}

/// Inverse with the (2pi)^-2 convention; dxi1 = pi/L, dxi2 = 1.
inline Field inverse_transform(const SpectralField& spec, FieldKind kind) {
  const auto& g = spec.grid();
  std::vector<Complex> data(spec.coeffs().begin(), spec.coeffs().end());
  const double scale = g.dxi1() * g.dxi2() / (4.0 * std::numbers::pi * std::numbers::pi);
  for (std::size_t a = 0; a < g.n1(); ++a)
    for (std::size_t b = 0; b < g.n2(); ++b)
      data[g.index(a, b)] *= scale * detail::checkerboard(a, b);
  detail::fft2d(data, g.n1(), g.n2(), true);
  return Field(g, std::move(data), kind);
}

inline Field inverse_transform(const SpectralField& spec) {
  return inverse_transform(spec, spec.source_kind());
}

/// Fourier multiplier m(xi1, xi2) applied to a spectrum.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& spec, Multiplier&& m) {
  const auto& g = spec.grid();
  std::vector<double> xi1(g.n1()), xi2(g.n2());
  for (std::size_t a = 0; a < g.n1(); ++a) xi1[a] = g.xi1(a);
  for (std::size_t b = 0; b < g.n2(); ++b) xi2[b] = g.xi2(b);
  std::vector<Complex> out(spec.coeffs().begin(), spec.coeffs().end());
  for (std::size_t a = 0; a < g.n1(); ++a)
    for (std::size_t b = 0; b < g.n2(); ++b) out[g.index(a, b)] *= Complex(m(xi1[a], xi2[b]));
  return SpectralField(g, std::move(out), spec.source_kind());
}

}  // namespace mixbesov

#endif  // MIXBESOV_FOURIER_HPP
