#ifndef MIXBESOV_DIFFERENCE_NORMS_HPP
#define MIXBESOV_DIFFERENCE_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "mixbesov/littlewood_paley.hpp"
#include "mixbesov/mixed_norms.hpp"
#include "mixbesov/parallel.hpp"

namespace mixbesov {

// ---------------------------------------------------------------------------
// Increments. x2 shifts are periodic; x1 shifts wrap on the window, which is
// harmless under the support-margin contract.

namespace detail {

inline std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto nn = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % nn) + nn) % nn);
}

inline void check_lag(std::ptrdiff_t m, std::size_t n, const char* axis) {
  if (static_cast<std::size_t>(m < 0 ? -m : m) >= n)
    throw Error(ErrorCode::LagExceedsWindow, std::string("lag exceeds the window along ") + axis);
}

}  // namespace detail

/// f(x + h1 e1 + h2 e2) - f(x1, x2 + h2) - f(x1 + h1, x2) + f(x) with h = (m1 dx1, m2 dx2).
inline Field rect_increment(const Field& f, std::ptrdiff_t m1, std::ptrdiff_t m2) {
  const auto& g = f.grid();
  detail::check_lag(m1, g.n1(), "x1");
  detail::check_lag(m2, g.n2(), "x2");
  const auto v = f.values();
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const std::size_t ip = detail::wrap(static_cast<std::ptrdiff_t>(i) + m1, g.n1());
    for (std::size_t j = 0; j < g.n2(); ++j) {
      const std::size_t jp = detail::wrap(static_cast<std::ptrdiff_t>(j) + m2, g.n2());
      // Same association as dir_increment(dir_increment(f, 2, m2), 1, m1).
      out[g.index(i, j)] = (v[g.index(ip, jp)] - v[g.index(ip, j)]) -
                           (v[g.index(i, jp)] - v[g.index(i, j)]);
    }
  }
  return Field(g, std::move(out), f.kind());
}

/// f(x + h e_axis) - f(x) with h = m * dx_axis.
inline Field dir_increment(const Field& f, int axis, std::ptrdiff_t m) {
  if (axis != 1 && axis != 2) throw Error(ErrorCode::InvalidArgument, "axis must be 1 or 2");
  const auto& g = f.grid();
  detail::check_lag(m, g.n(axis), axis == 1 ? "x1" : "x2");
  const auto v = f.values();
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const std::size_t ip =
        axis == 1 ? detail::wrap(static_cast<std::ptrdiff_t>(i) + m, g.n1()) : i;
    for (std::size_t j = 0; j < g.n2(); ++j) {
      const std::size_t jp =
          axis == 2 ? detail::wrap(static_cast<std::ptrdiff_t>(j) + m, g.n2()) : j;
      out[g.index(i, j)] = v[g.index(ip, jp)] - v[g.index(i, j)];
    }
  }
  return Field(g, std::move(out), f.kind());
}

// ---------------------------------------------------------------------------
// Norms of increments computed without materializing the increment field.

namespace detail {

// Row kernel for |Box| or |delta| of one x1 row; real fields skip the complex
// modulus.
template <bool Rect>
inline void increment_abs_row(std::span<const Complex> v, std::size_t n2, std::size_t i,
                              std::size_t ip, std::size_t shift2, bool real,
                              std::span<double> out) {
  const Complex* a = v.data() + i * n2;
  const Complex* b = v.data() + ip * n2;
  const std::size_t split = n2 - shift2;
  auto at = [&](const Complex* r, std::size_t j) { return r[j < split ? j + shift2 : j - split]; };
  if (real) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double d = Rect ? (at(b, j).real() - b[j].real()) - (at(a, j).real() - a[j].real())
                            : at(b, j).real() - a[j].real();
      out[j] = std::fabs(d);
    }
  } else {
    for (std::size_t j = 0; j < n2; ++j) {
      const Complex d = Rect ? (at(b, j) - b[j]) - (at(a, j) - a[j]) : at(b, j) - a[j];
      out[j] = std::sqrt(d.real() * d.real() + d.imag() * d.imag());
    }
  }
}

}  // namespace detail

/// ||Box_{(s1 dx1, s2 dx2)} f||_p over rows [rows.begin, rows.end).
inline double rect_increment_norm(const Field& f, std::ptrdiff_t s1, std::ptrdiff_t s2,
                                  MixedExponent p, RowRange rows) {
  const auto& g = f.grid();
  const auto v = f.values();
  const std::size_t n2 = g.n2();
  const std::size_t shift2 = detail::wrap(s2, n2);
  const bool real = f.is_real();
  return mixed_norm_from_rows(rows.begin, rows.end, n2, g.dx1(), g.dx2(), p,
                              [&](std::size_t i, std::span<double> out) {
                                const std::size_t ip =
                                    detail::wrap(static_cast<std::ptrdiff_t>(i) + s1, g.n1());
                                detail::increment_abs_row<true>(v, n2, i, ip, shift2, real, out);
                              });
}

/// ||delta^axis_{s dx} f||_p over rows [rows.begin, rows.end).
inline double dir_increment_norm(const Field& f, int axis, std::ptrdiff_t s, MixedExponent p,
                                 RowRange rows) {
  const auto& g = f.grid();
  const auto v = f.values();
  const std::size_t n2 = g.n2();
  const std::size_t shift2 = axis == 2 ? detail::wrap(s, n2) : 0;
  const std::ptrdiff_t shift1 = axis == 1 ? s : 0;
  const bool real = f.is_real();
  return mixed_norm_from_rows(rows.begin, rows.end, n2, g.dx1(), g.dx2(), p,
                              [&](std::size_t i, std::span<double> out) {
                                const std::size_t ip =
                                    detail::wrap(static_cast<std::ptrdiff_t>(i) + shift1, g.n1());
                                detail::increment_abs_row<false>(v, n2, i, ip, shift2, real, out);
                              });
}

// ---------------------------------------------------------------------------
// Dyadic lag grid.

enum class ShiftSet {
  HalfOctave,  // shift magnitudes 2^a and 3*2^a up to the level's lag
  Dense,       // every integer shift up to the level's lag
};

/// Dyadic lags h_k = 2^(k_max - k) * finest * dx_axis for k = 0..k_max. The
/// finest level sits on `finest` grid steps, so every lag is an exact grid
/// multiple and refining the grid 2x with k_max + 1 keeps levels 0..k_max at
/// the same physical lags.
class LagGrid {
 public:
  static constexpr int kMinLevels = 3;

  LagGrid(const GridSpec& grid, int k_max, std::size_t finest = 1,
          ShiftSet shifts = ShiftSet::HalfOctave)
      : grid_(grid), k_max_(k_max), finest_(finest), shifts_(shifts) {
    if (k_max < kMinLevels)
      throw Error(ErrorCode::ResolutionTooCoarse,
                  "lag grid needs k_max >= 3 (at least four octaves)");
    if (finest == 0) throw Error(ErrorCode::InvalidArgument, "finest lag must be >= 1 step");
    for (int axis : {1, 2}) {
      if (multiple(axis, 0) > grid.n(axis) / 2)
        throw Error(ErrorCode::ResolutionTooCoarse,
                    "coarsest lag exceeds half the axis length; lower k_max or refine the grid");
    }
  }

  const GridSpec& grid() const noexcept { return grid_; }
  int k_max() const noexcept { return k_max_; }
  int levels() const noexcept { return k_max_ + 1; }
  ShiftSet shift_set() const noexcept { return shifts_; }
  std::size_t finest() const noexcept { return finest_; }

  /// Grid steps of level k.
  std::size_t multiple(int axis, int k) const {
    (void)axis;
    return finest_ << static_cast<unsigned>(k_max_ - k);
  }
  double lag(int axis, int k) const {
    return static_cast<double>(multiple(axis, k)) * grid_.dx(axis);
  }

  /// Positive shift magnitudes admitted at level k (sorted ascending).
  std::vector<std::size_t> shift_magnitudes(int axis, int k) const {
    const std::size_t top = multiple(axis, k);
    std::vector<std::size_t> out;
    if (shifts_ == ShiftSet::Dense) {
      for (std::size_t m = 1; m <= top; ++m) out.push_back(m);
      return out;
    }
    for (std::size_t m = 1; m <= top; m *= 2) {
      out.push_back(m);
      if (3 * m / 2 > m && 3 * m / 2 <= top && m >= 2) out.push_back(3 * m / 2);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  GridSpec grid_;
  int k_max_;
  std::size_t finest_;
  ShiftSet shifts_;
};

inline LagGrid make_lag_grid(const GridSpec& grid, int k_max, std::size_t finest = 1,
                             ShiftSet shifts = ShiftSet::HalfOctave) {
  return LagGrid(grid, k_max, finest, shifts);
}

enum class DiffVariant {
  Sup,    // sup over shifts |r| <= |h|
  Plain,  // increments at +-h
};

// ---------------------------------------------------------------------------

namespace detail {

inline const double kLn2 = std::log(2.0);

// Accumulates sum_k w_k * x_k^q (or max_k for q = inf) in level order.
struct LevelAccumulator {
  Exponent q;
  std::vector<double> terms;
  double sup = 0.0;

  void add(double weight_pow, double value_pow_q, double value_for_sup) {
    if (q.is_infinite())
      sup = std::max(sup, value_for_sup);
    else
      terms.push_back(weight_pow * value_pow_q);
  }
  // Returns (sum)^(1/q) or the max.
  double finish() {
    if (q.is_infinite()) return sup;
    return std::pow(pairwise_sum(terms), 1.0 / q.value());
  }
  // Returns the raw sum (q finite) or max (q infinite).
  double raw() {
    if (q.is_infinite()) return sup;
    return pairwise_sum(terms);
  }
};

inline double pow_q(double x, Exponent q) { return q.is_infinite() ? x : std::pow(x, q.value()); }

// One-axis term: ( sum_k h_k^{-a q} g_k^q log 2 )^{1/q}, where g_k is supplied
// as the q-th power average for finite q and as the plain value for q = inf.
inline double one_axis_term(const std::vector<double>& lags, double alpha, Exponent q,
                            const std::vector<double>& g_pow_q, const std::vector<double>& g_sup) {
  LevelAccumulator acc{q, {}, 0.0};
  for (std::size_t k = 0; k < lags.size(); ++k) {
    const double h = lags[k];
    if (q.is_infinite())
      acc.add(0.0, 0.0, std::pow(h, -alpha) * g_sup[k]);
    else
      acc.add(std::pow(h, -alpha * q.value()) * kLn2, g_pow_q[k], 0.0);
  }
  return acc.finish();
}

// Signed shifts s with |s| in the union of the level shift sets, ascending magnitude.
inline std::vector<std::ptrdiff_t> signed_shifts(const std::vector<std::size_t>& mags) {
  std::vector<std::ptrdiff_t> out;
  for (std::size_t m : mags) {
    out.push_back(static_cast<std::ptrdiff_t>(m));
    out.push_back(-static_cast<std::ptrdiff_t>(m));
  }
  return out;
}

}  // namespace detail

/// Per-level pieces of a difference norm; exposed for reports and tests.
struct DifferenceNormParts {
  double lp = 0.0;
  double dir1 = 0.0;
  double dir2 = 0.0;
  double rect = 0.0;
  double total() const { return lp + dir1 + dir2 + rect; }
};

/// Difference-characterization norm: sup-variant = ||.||^(1), plain = ||.||^(2).
/// Each dh/h integral is the dyadic sum sum_k h_k^{-aq} (.)(h_k) log 2.
inline DifferenceNormParts besov_norm_diff_parts(const Field& f, const BesovParams& params,
                                                 const LagGrid& lags, DiffVariant variant,
                                                 Diagnostics* diag = nullptr) {
  params.require_difference_range();
  if (!(lags.grid() == f.grid()))
    throw Error(ErrorCode::GridMismatch, "lag grid was built for a different grid");
  check_support_margin(f, diag, "besov_norm_diff");

  const auto& g = f.grid();
  const MixedExponent p = params.p;
  const Exponent q1 = params.q.p1;
  const Exponent q2 = params.q.p2;
  const int K = lags.levels();
  const RowRange all_rows{0, g.n1()};

  std::vector<double> h1(K), h2(K);
  for (int k = 0; k < K; ++k) {
    h1[k] = lags.lag(1, k);
    h2[k] = lags.lag(2, k);
  }

  DifferenceNormParts parts;
  parts.lp = mixed_lp_norm(f, p);

  if (variant == DiffVariant::Plain) {
    // Directional terms at +-h_k, q-th powers averaged over the sign.
    auto directional = [&](int axis, double alpha, Exponent q, const std::vector<double>& h) {
      std::vector<double> pos(K), neg(K);
      parallel_for(static_cast<std::size_t>(2 * K), [&](std::size_t t) {
        const int k = static_cast<int>(t / 2);
        const auto m = static_cast<std::ptrdiff_t>(lags.multiple(axis, k));
        (t % 2 == 0 ? pos : neg)[k] =
            dir_increment_norm(f, axis, t % 2 == 0 ? m : -m, p, all_rows);
      });
      std::vector<double> avg(K), sup(K);
      for (int k = 0; k < K; ++k) {
        avg[k] = 0.5 * (detail::pow_q(pos[k], q) + detail::pow_q(neg[k], q));
        sup[k] = std::max(pos[k], neg[k]);
      }
      return detail::one_axis_term(h, alpha, q, avg, sup);
    };
    parts.dir1 = directional(1, params.alpha1, q1, h1);
    parts.dir2 = directional(2, params.alpha2, q2, h2);

    // Rectangular term at the four sign combinations.
    std::vector<double> R(static_cast<std::size_t>(K * K * 4));
    parallel_for(R.size(), [&](std::size_t t) {
      const int k1 = static_cast<int>(t / (4 * K));
      const int k2 = static_cast<int>((t / 4) % K);
      const int signs = static_cast<int>(t % 4);
      auto m1 = static_cast<std::ptrdiff_t>(lags.multiple(1, k1));
      auto m2 = static_cast<std::ptrdiff_t>(lags.multiple(2, k2));
      if (signs & 1) m1 = -m1;
      if (signs & 2) m2 = -m2;
      R[t] = rect_increment_norm(f, m1, m2, p, all_rows);
    });
    auto r_at = [&](int k1, int k2, int s1, int s2) {
      return R[static_cast<std::size_t>((k1 * K + k2) * 4 + s1 + 2 * s2)];
    };
    detail::LevelAccumulator outer{q1, {}, 0.0};
    for (int k1 = 0; k1 < K; ++k1) {
      double outer_avg = 0.0;
      double outer_sup = 0.0;
      for (int s1 = 0; s1 < 2; ++s1) {
        detail::LevelAccumulator inner{q2, {}, 0.0};
        for (int k2 = 0; k2 < K; ++k2) {
          const double a = r_at(k1, k2, s1, 0);
          const double b = r_at(k1, k2, s1, 1);
          if (q2.is_infinite())
            inner.add(0.0, 0.0, std::pow(h2[k2], -params.alpha2) * std::max(a, b));
          else
            inner.add(std::pow(h2[k2], -params.alpha2 * q2.value()) * detail::kLn2,
                      0.5 * (std::pow(a, q2.value()) + std::pow(b, q2.value())), 0.0);
        }
        const double inner_val = inner.finish();
        outer_avg += 0.5 * detail::pow_q(inner_val, q1);
        outer_sup = std::max(outer_sup, inner_val);
      }
      if (q1.is_infinite())
        outer.add(0.0, 0.0, std::pow(h1[k1], -params.alpha1) * outer_sup);
      else
        outer.add(std::pow(h1[k1], -params.alpha1 * q1.value()) * detail::kLn2, outer_avg, 0.0);
    }
    parts.rect = outer.finish();
    return parts;
  }

  // Sup variant: evaluate every signed shift in the coarsest level's set once,
  // then take nested maxima; the level-k set is the prefix |s| <= m_k.
  const auto mags1 = lags.shift_magnitudes(1, 0);
  const auto mags2 = lags.shift_magnitudes(2, 0);
  const auto s1 = detail::signed_shifts(mags1);
  const auto s2 = detail::signed_shifts(mags2);

  auto directional_sup = [&](int axis, double alpha, Exponent q, const std::vector<double>& h,
                             const std::vector<std::ptrdiff_t>& shifts) {
    std::vector<double> D(shifts.size());
    parallel_for(shifts.size(), [&](std::size_t t) {
      D[t] = dir_increment_norm(f, axis, shifts[t], p, all_rows);
    });
    std::vector<double> gpow(K), gsup(K);
    for (int k = 0; k < K; ++k) {
      const auto top = static_cast<std::ptrdiff_t>(lags.multiple(axis, k));
      double best = 0.0;
      for (std::size_t t = 0; t < shifts.size(); ++t)
        if (std::abs(shifts[t]) <= top) best = std::max(best, D[t]);
      gsup[k] = best;
      gpow[k] = detail::pow_q(best, q);
    }
    return detail::one_axis_term(h, alpha, q, gpow, gsup);
  };
  parts.dir1 = directional_sup(1, params.alpha1, q1, h1, s1);
  parts.dir2 = directional_sup(2, params.alpha2, q2, h2, s2);

  std::vector<double> R(s1.size() * s2.size());
  parallel_for(R.size(), [&](std::size_t t) {
    R[t] = rect_increment_norm(f, s1[t / s2.size()], s2[t % s2.size()], p, all_rows);
  });
  detail::LevelAccumulator outer{q1, {}, 0.0};
  for (int k1 = 0; k1 < K; ++k1) {
    const auto top1 = static_cast<std::ptrdiff_t>(lags.multiple(1, k1));
    detail::LevelAccumulator inner{q2, {}, 0.0};
    for (int k2 = 0; k2 < K; ++k2) {
      const auto top2 = static_cast<std::ptrdiff_t>(lags.multiple(2, k2));
      double best = 0.0;
      for (std::size_t a = 0; a < s1.size(); ++a) {
        if (std::abs(s1[a]) > top1) continue;
        for (std::size_t b = 0; b < s2.size(); ++b)
          if (std::abs(s2[b]) <= top2) best = std::max(best, R[a * s2.size() + b]);
      }
      if (q2.is_infinite())
        inner.add(0.0, 0.0, std::pow(h2[k2], -params.alpha2) * best);
      else
        inner.add(std::pow(h2[k2], -params.alpha2 * q2.value()) * detail::kLn2,
                  std::pow(best, q2.value()), 0.0);
    }
    const double inner_val = inner.finish();
    if (q1.is_infinite())
      outer.add(0.0, 0.0, std::pow(h1[k1], -params.alpha1) * inner_val);
    else
      outer.add(std::pow(h1[k1], -params.alpha1 * q1.value()) * detail::kLn2,
                detail::pow_q(inner_val, q1), 0.0);
  }
  parts.rect = outer.finish();
  return parts;
}

inline double besov_norm_diff(const Field& f, const BesovParams& params, const LagGrid& lags,
                              DiffVariant variant, Diagnostics* diag = nullptr) {
  return besov_norm_diff_parts(f, params, lags, variant, diag).total();
}

/// Localized plain norm on D = [0, T] x torus. The Box and delta_1 terms are
/// measured over D - h1 = [0, max(T - h1, 0)], so no wrapped cell is read;
/// lags are taken with positive sign only.
inline DifferenceNormParts local_besov_norm_diff2_parts(const Field& f, const BesovParams& params,
                                                        TimeDomain dom, const LagGrid& lags) {
  params.require_difference_range();
  if (!(lags.grid() == f.grid()))
    throw Error(ErrorCode::GridMismatch, "lag grid was built for a different grid");
  const auto& g = f.grid();
  const RowRange d_rows = rows_of_domain(g, dom);
  const MixedExponent p = params.p;
  const Exponent q1 = params.q.p1;
  const Exponent q2 = params.q.p2;
  const int K = lags.levels();

  auto shrunk_rows = [&](int k1) {
    const std::size_t m1 = lags.multiple(1, k1);
    RowRange r = d_rows;
    r.end = r.end > r.begin + m1 ? r.end - m1 : r.begin;
    return r;
  };

  std::vector<double> h1(K), h2(K);
  for (int k = 0; k < K; ++k) {
    h1[k] = lags.lag(1, k);
    h2[k] = lags.lag(2, k);
  }

  DifferenceNormParts parts;
  parts.lp = mixed_lp_norm_rows(f, p, d_rows);

  std::vector<double> D1(K), D2(K);
  parallel_for(static_cast<std::size_t>(2 * K), [&](std::size_t t) {
    const int k = static_cast<int>(t / 2);
    if (t % 2 == 0)
      D1[k] = dir_increment_norm(f, 1, static_cast<std::ptrdiff_t>(lags.multiple(1, k)), p,
                                 shrunk_rows(k));
    else
      D2[k] = dir_increment_norm(f, 2, static_cast<std::ptrdiff_t>(lags.multiple(2, k)), p,
                                 d_rows);
  });
  auto powers = [](const std::vector<double>& v, Exponent q) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = detail::pow_q(v[i], q);
    return out;
  };
  parts.dir1 = detail::one_axis_term(h1, params.alpha1, q1, powers(D1, q1), D1);
  parts.dir2 = detail::one_axis_term(h2, params.alpha2, q2, powers(D2, q2), D2);

  std::vector<double> R(static_cast<std::size_t>(K * K));
  parallel_for(R.size(), [&](std::size_t t) {
    const int k1 = static_cast<int>(t / K);
    const int k2 = static_cast<int>(t % K);
    R[t] = rect_increment_norm(f, static_cast<std::ptrdiff_t>(lags.multiple(1, k1)),
                               static_cast<std::ptrdiff_t>(lags.multiple(2, k2)), p,
                               shrunk_rows(k1));
  });
  detail::LevelAccumulator outer{q1, {}, 0.0};
  for (int k1 = 0; k1 < K; ++k1) {
    detail::LevelAccumulator inner{q2, {}, 0.0};
    for (int k2 = 0; k2 < K; ++k2) {
      const double r = R[static_cast<std::size_t>(k1 * K + k2)];
      if (q2.is_infinite())
        inner.add(0.0, 0.0, std::pow(h2[k2], -params.alpha2) * r);
      else
        inner.add(std::pow(h2[k2], -params.alpha2 * q2.value()) * detail::kLn2,
                  std::pow(r, q2.value()), 0.0);
    }
    const double inner_val = inner.finish();
    if (q1.is_infinite())
      outer.add(0.0, 0.0, std::pow(h1[k1], -params.alpha1) * inner_val);
    else
      outer.add(std::pow(h1[k1], -params.alpha1 * q1.value()) * detail::kLn2,
                detail::pow_q(inner_val, q1), 0.0);
  }
  parts.rect = outer.finish();
  return parts;
}

inline double local_besov_norm_diff2(const Field& f, const BesovParams& params, TimeDomain dom,
                                     const LagGrid& lags) {
  return local_besov_norm_diff2_parts(f, params, dom, lags).total();
}

// ---------------------------------------------------------------------------
// Time-cutoff multiplier.

/// phi(t) = A * theta(t / w) * theta((T - t) / w): a plateau on [w, T - w]
/// with smooth exp-glue ramps, vanishing outside [0, T].
class WindowSpec {
 public:
  WindowSpec(double t_max, double transition_width, double amplitude = 1.0)
      : t_max_(t_max), width_(transition_width), amplitude_(amplitude) {
    if (!(t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "window needs T > 0");
    if (!(transition_width > 0.0) || transition_width > 0.5 * t_max)
      throw Error(ErrorCode::InvalidArgument, "transition width must lie in (0, T/2]");
    if (!(amplitude >= 0.0 && amplitude <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "amplitude must lie in [0, 1]");
  }

  double t_max() const noexcept { return t_max_; }
  double transition_width() const noexcept { return width_; }

  double operator()(double t) const {
    if (t <= 0.0 || t >= t_max_) return 0.0;
    return amplitude_ * smooth_step(t / width_) * smooth_step((t_max_ - t) / width_);
  }

  double derivative(double t) const {
    if (t <= 0.0 || t >= t_max_) return 0.0;
    const double a = smooth_step(t / width_);
    const double b = smooth_step((t_max_ - t) / width_);
    return amplitude_ *
           (smooth_step_derivative(t / width_) * b - a * smooth_step_derivative((t_max_ - t) / width_)) /
           width_;
  }

  double sup_norm() const { return amplitude_; }

  /// ||phi'||_inf, from the glue's derivative maximum (attained on a ramp).
  double derivative_sup_norm() const {
    double best = 0.0;
    constexpr int kSamples = 20000;
    for (int i = 1; i < kSamples; ++i)
      best = std::max(best, smooth_step_derivative(static_cast<double>(i) / kSamples));
    return amplitude_ * best / width_;
  }

  /// ||phi||_inf + ||phi'||_inf.
  double c1_norm() const { return sup_norm() + derivative_sup_norm(); }

 private:
  double t_max_;
  double width_;
  double amplitude_;
};

/// (phi x 1) f.
inline Field multiply_time_window(const Field& f, const WindowSpec& w) {
  const auto& g = f.grid();
  if (w.t_max() > g.window_half_width() * (1.0 + 1e-12))
    throw Error(ErrorCode::DomainExceedsWindow, "window extends beyond the grid");
  std::vector<Complex> out(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const double phi = w(g.x1(i));
    for (std::size_t j = 0; j < g.n2(); ++j) out[g.index(i, j)] *= phi;
  }
  return Field(g, std::move(out), f.kind());
}

}  // namespace mixbesov

#endif  // MIXBESOV_DIFFERENCE_NORMS_HPP
