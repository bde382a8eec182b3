#ifndef MIXBESOV_MIXED_NORMS_HPP
#define MIXBESOV_MIXED_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mixbesov/fourier.hpp"
#include "mixbesov/grid.hpp"
#include "mixbesov/summation.hpp"

namespace mixbesov {

/// Integrability exponent in [1, inf]. Infinity is a tag, never a large float.
class Exponent {
 public:
  constexpr Exponent() = default;

  static Exponent finite(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
      throw Error(ErrorCode::ExponentOutOfRange,
                  "exponent must lie in [1, inf), got " + std::to_string(p));
    return Exponent(p, false);
  }
  static constexpr Exponent infinity() { return Exponent(0.0, true); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }
  /// 1/p with 1/inf = 0.
  constexpr double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

  /// Hoelder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const {
    if (infinite_) return finite(1.0);
    if (value_ == 1.0) return infinity();
    return finite(value_ / (value_ - 1.0));
  }

  static Exponent from_reciprocal(double r) {
    if (r < 0.0 || r > 1.0)
      throw Error(ErrorCode::ExponentOutOfRange, "reciprocal exponent outside [0, 1]");
    return r == 0.0 ? infinity() : finite(1.0 / r);
  }

  friend constexpr bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  std::string to_string() const {
    if (infinite_) return "inf";
    std::ostringstream os;
    os << std::setprecision(6) << value_;
    return os.str();
  }

 private:
  constexpr Exponent(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_ = 1.0;
  bool infinite_ = false;
};

/// Pair (p1, p2): p2 for the inner torus integral, p1 for the outer x1 integral.
struct MixedExponent {
  Exponent p1;
  Exponent p2;

  static MixedExponent of(double a, double b) {
    auto make = [](double v) { return std::isinf(v) ? Exponent::infinity() : Exponent::finite(v); };
    return {make(a), make(b)};
  }
  MixedExponent conjugate() const { return {p1.conjugate(), p2.conjugate()}; }
  friend bool operator==(const MixedExponent&, const MixedExponent&) = default;
};

/// D = [0, T] x torus with 0 < T <= L.
struct TimeDomain {
  double t_max = 1.0;
};

namespace detail {

// (sum_i w * |v_i|^p)^(1/p), or max|v_i| for p = inf. Scaled by the maximum so
// the result is exactly homogeneous under power-of-two rescaling.
inline double weighted_lp(std::span<double> abs_values, Exponent p, double weight) {
  double m = 0.0;
  for (double v : abs_values) m = std::max(m, v);
  if (m == 0.0) return 0.0;
  if (p.is_infinite()) return m;
  const double pv = p.value();
  const double inv = 1.0 / m;
  if (pv == 1.0) {
    for (double& v : abs_values) v *= inv;
  } else if (pv == 2.0) {
    for (double& v : abs_values) v = (v * inv) * (v * inv);
  } else {
    for (double& v : abs_values) v = std::pow(v * inv, pv);
  }
  const double s = pairwise_sum(abs_values) * weight;
  return m * (pv == 1.0 ? s : pv == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / pv));
}

}  // namespace detail

/// Mixed norm over rows [i_begin, i_end) of a row generator. row_abs(i, out)
/// writes |g(x1_i, x2_j)| for every j into out.
template <class RowAbs>
double mixed_norm_from_rows(std::size_t i_begin, std::size_t i_end, std::size_t n2, double dx1,
                            double dx2, MixedExponent p, RowAbs&& row_abs) {
  if (i_end <= i_begin) return 0.0;
  std::vector<double> row(n2);
  std::vector<double> inner(i_end - i_begin);
  for (std::size_t i = i_begin; i < i_end; ++i) {
    row_abs(i, std::span<double>(row));
    inner[i - i_begin] = detail::weighted_lp(row, p.p2, dx2);
  }
  return detail::weighted_lp(inner, p.p1, dx1);
}

/// Rows i with x1_i in [lo, hi), clamped to the window.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
};

inline RowRange rows_in(const GridSpec& g, double lo, double hi) {
  const double L = g.window_half_width();
  const double dx = g.dx1();
  auto first_at_or_above = [&](double x) -> std::size_t {
    const double s = std::ceil((x + L) / dx - 1e-9);
    if (s <= 0.0) return 0;
    return std::min(g.n1(), static_cast<std::size_t>(s));
  };
  return {first_at_or_above(lo), first_at_or_above(hi)};
}

inline RowRange rows_of_domain(const GridSpec& g, TimeDomain dom) {
  if (!(dom.t_max > 0.0))
    throw Error(ErrorCode::DomainExceedsWindow, "time domain needs T > 0");
  if (dom.t_max > g.window_half_width() * (1.0 + 1e-12))
    throw Error(ErrorCode::DomainExceedsWindow,
                "T = " + std::to_string(dom.t_max) + " exceeds the window half width");
  return rows_in(g, 0.0, dom.t_max);
}

inline double mixed_lp_norm_rows(const Field& f, MixedExponent p, RowRange rows) {
  const auto& g = f.grid();
  const auto values = f.values();
  return mixed_norm_from_rows(rows.begin, rows.end, g.n2(), g.dx1(), g.dx2(), p,
                              [&](std::size_t i, std::span<double> out) {
                                const std::size_t base = i * g.n2();
                                for (std::size_t j = 0; j < out.size(); ++j)
                                  out[j] = std::abs(values[base + j]);
                              });
}

/// ||f||_{(p1,p2)} over the whole window (Riemann sum, x2 over one period).
inline double mixed_lp_norm(const Field& f, MixedExponent p) {
  return mixed_lp_norm_rows(f, p, {0, f.grid().n1()});
}

/// ||f||_{D,(p1,p2)} with x1 restricted to [0, T].
inline double mixed_lp_norm_local(const Field& f, MixedExponent p, TimeDomain dom) {
  return mixed_lp_norm_rows(f, p, rows_of_domain(f.grid(), dom));
}

// ---------------------------------------------------------------------------

enum class ConvolutionKind { Plane, MixedPeriodic };

/// x2-analogue of the support margin: negligible within pi/4 of +-pi.
inline bool satisfies_x2_margin(const Field& f, double relative_eps = 1e-10) {
  const auto& g = f.grid();
  const double threshold = relative_eps * f.max_abs();
  if (threshold == 0.0) return true;
  const double m = std::numbers::pi / 4.0;
  for (std::size_t j = 0; j < g.n2(); ++j) {
    const double x2 = g.x2(j);
    if (x2 >= -std::numbers::pi + m && x2 <= std::numbers::pi - m) continue;
    for (std::size_t i = 0; i < g.n1(); ++i)
      if (std::abs(f(i, j)) >= threshold) return false;
  }
  return true;
}

/// Continuous convolution with measure dx1 dx2, computed as a product of
/// spectra. Plane treats both axes as lines (both factors must vanish near the
/// window edges); MixedPeriodic treats x2 as the torus.
inline Field convolve(const Field& f, const Field& g, ConvolutionKind kind,
                      Diagnostics* diag = nullptr) {
  require_same_grid(f, g);
  if (kind == ConvolutionKind::Plane) {
    check_support_margin(f, diag, "convolve(plane) first factor");
    check_support_margin(g, diag, "convolve(plane) second factor");
    if (diag && (!satisfies_x2_margin(f) || !satisfies_x2_margin(g)))
      diag->warn(WarningKind::SupportMarginViolated,
                 "convolve(plane): factor not negligible near x2 = +-pi");
  } else {
    check_support_margin(f, diag, "convolve(mixed_periodic) first factor");
    check_support_margin(g, diag, "convolve(mixed_periodic) second factor");
  }
  const auto sf = forward_transform(f);
  const auto sg = forward_transform(g);
  std::vector<Complex> prod(sf.coeffs().size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = sf.coeffs()[i] * sg.coeffs()[i];
  const FieldKind out_kind = combine_kinds(f.kind(), g.kind());
  return inverse_transform(SpectralField(f.grid(), std::move(prod), out_kind), out_kind);
}

}  // namespace mixbesov

#endif  // MIXBESOV_MIXED_NORMS_HPP
