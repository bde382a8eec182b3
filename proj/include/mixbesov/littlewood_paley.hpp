#ifndef MIXBESOV_LITTLEWOOD_PALEY_HPP
#define MIXBESOV_LITTLEWOOD_PALEY_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mixbesov/fourier.hpp"
#include "mixbesov/mixed_norms.hpp"
#include "mixbesov/parallel.hpp"

namespace mixbesov {

/// Smooth step built from a(t) = exp(-1/t) 1_{t>0}: theta(t) = a(t) / (a(t) + a(1-t)).
/// theta = 0 for t <= 0, theta = 1 for t >= 1.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

/// Derivative of smooth_step.
inline double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t);
  const double db = -b / ((1.0 - t) * (1.0 - t));
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

/// Dyadic partition of unity on the line.
///   psi(x) = theta(3 (4/3 - |x|)),  chi = psi,  rho(x) = psi(x/2) - psi(x).
/// psi == 1 on |x| <= 1 and vanishes for |x| >= 4/3, so supp rho lies in
/// 1 <= |x| <= 8/3 and chi + sum_j rho(2^-j .) telescopes to 1.
class DyadicPartition {
 public:
  static constexpr double kChiRadius = 4.0 / 3.0;
  static constexpr double kRhoInner = 1.0;
  static constexpr double kRhoOuter = 8.0 / 3.0;

  double psi(double x) const { return smooth_step(4.0 - 3.0 * std::abs(x)); }
  double chi(double x) const { return psi(x); }
  double rho(double x) const { return psi(0.5 * x) - psi(x); }

  /// rho_{-1} = chi, rho_j = rho(2^-j .) for j >= 0.
  double rho_j(int j, double x) const {
    return j < 0 ? chi(x) : rho(std::ldexp(x, -j));
  }

  /// Outer support radius of rho_j.
  static double support_radius(int j) {
    return j < 0 ? kChiRadius : std::ldexp(kRhoOuter, j);
  }
  /// Inner radius below which rho_j vanishes (0 for chi).
  static double inner_radius(int j) { return j < 0 ? 0.0 : std::ldexp(kRhoInner, j); }
};

inline DyadicPartition build_partition() { return {}; }

/// Largest deviation of chi + sum_{j<=j_max} rho_j from 1 over the given
/// frequencies, with j_max chosen to cover the largest one.
inline double partition_residual(const DyadicPartition& part, std::span<const double> freqs) {
  double zmax = 0.0;
  for (double z : freqs) zmax = std::max(zmax, std::abs(z));
  const int j_max = zmax <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(zmax)));
  double worst = 0.0;
  for (double z : freqs) {
    double s = part.chi(z);
    for (int j = 0; j <= j_max; ++j) s += part.rho_j(j, z);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

/// Block index (j, k), each >= -1. Axis::All leaves that axis unfiltered, which
/// yields the one-directional blocks Delta^1_j and Delta^2_k.
struct BlockIndex {
  static constexpr int All = std::numeric_limits<int>::min();
  int j = -1;
  int k = -1;
  friend bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

namespace detail {

inline void validate_block_axis(int idx) {
  if (idx != BlockIndex::All && idx < -1)
    throw Error(ErrorCode::InvalidArgument, "block index must be >= -1");
}

inline double axis_multiplier(const DyadicPartition& part, int idx, double xi) {
  return idx == BlockIndex::All ? 1.0 : part.rho_j(idx, xi);
}

inline void warn_truncated(const GridSpec& g, BlockIndex idx, Diagnostics* diag) {
  if (!diag) return;
  if (idx.j != BlockIndex::All && DyadicPartition::support_radius(idx.j) > g.nyquist1())
    diag->warn(WarningKind::TruncatedBlock,
               "block j=" + std::to_string(idx.j) + " extends beyond the x1 Nyquist frequency");
  if (idx.k != BlockIndex::All && DyadicPartition::support_radius(idx.k) > g.nyquist2())
    diag->warn(WarningKind::TruncatedBlock,
               "block k=" + std::to_string(idx.k) + " extends beyond the x2 Nyquist frequency");
}

}  // namespace detail

/// Delta_{j,k} f = F^-1[(rho_j x rho_k) F f], from a precomputed spectrum.
inline Field lp_block(const SpectralField& spec, const DyadicPartition& part, BlockIndex idx,
                      Diagnostics* diag = nullptr) {
  detail::validate_block_axis(idx.j);
  detail::validate_block_axis(idx.k);
  detail::warn_truncated(spec.grid(), idx, diag);
  const auto filtered = apply_multiplier(spec, [&](double xi1, double xi2) {
    return detail::axis_multiplier(part, idx.j, xi1) * detail::axis_multiplier(part, idx.k, xi2);
  });
  return inverse_transform(filtered);
}

inline Field lp_block(const Field& field, const DyadicPartition& part, BlockIndex idx,
                      Diagnostics* diag = nullptr) {
  return lp_block(forward_transform(field), part, idx, diag);
}

/// Top block level so that 2^level >= Nyquist on that axis (at least 0).
inline int top_block_level(double nyquist) {
  if (nyquist <= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log2(nyquist) - 1e-12));
}

/// All blocks Delta_{j,k} f for -1 <= j <= j_max, -1 <= k <= k_max.
/// Blocks whose multiplier vanishes on every grid frequency are not stored.
class BlockDecomposition {
 public:
  BlockDecomposition(const Field& field, const DyadicPartition& part) : grid_(field.grid()) {
    j_max_ = top_block_level(grid_.nyquist1());
    k_max_ = top_block_level(grid_.nyquist2());
    const auto spec = forward_transform(field);
    const std::size_t nj = static_cast<std::size_t>(j_max_ + 2);
    const std::size_t nk = static_cast<std::size_t>(k_max_ + 2);
    blocks_.resize(nj * nk);

    // Which levels touch at least one grid frequency with nonzero weight.
    auto live_levels = [&](std::size_t n, auto xi_of, int top) {
      std::vector<bool> live(static_cast<std::size_t>(top + 2), false);
      for (std::size_t a = 0; a < n; ++a)
        for (int l = -1; l <= top; ++l)
          if (part.rho_j(l, xi_of(a)) != 0.0) live[static_cast<std::size_t>(l + 1)] = true;
      return live;
    };
    const auto live1 = live_levels(grid_.n1(), [&](std::size_t a) { return grid_.xi1(a); }, j_max_);
    const auto live2 = live_levels(grid_.n2(), [&](std::size_t b) { return grid_.xi2(b); }, k_max_);

    parallel_for(blocks_.size(), [&](std::size_t slot) {
      const std::size_t jj = slot / nk;
      const std::size_t kk = slot % nk;
      if (!live1[jj] || !live2[kk]) return;
      blocks_[slot] = lp_block(spec, part,
                               {static_cast<int>(jj) - 1, static_cast<int>(kk) - 1});
    });
  }

  const GridSpec& grid() const noexcept { return grid_; }
  int j_max() const noexcept { return j_max_; }
  int k_max() const noexcept { return k_max_; }

  /// Block (j, k); nullopt when the block is identically zero on this grid.
  const std::optional<Field>& block(int j, int k) const {
    if (j < -1 || j > j_max_ || k < -1 || k > k_max_)
      throw Error(ErrorCode::InvalidArgument, "block index outside the decomposition");
    return blocks_[slot(j, k)];
  }

  Field block_or_zero(int j, int k) const {
    const auto& b = block(j, k);
    return b ? *b : Field::zeros(grid_, FieldKind::Complex);
  }

  /// ||Delta_{j,k} f||_p for every stored block, laid out [(j+1)*(k_max+2) + (k+1)].
  std::vector<double> block_norms(MixedExponent p) const {
    std::vector<double> norms(blocks_.size(), 0.0);
    parallel_for(blocks_.size(), [&](std::size_t s) {
      if (blocks_[s]) norms[s] = mixed_lp_norm(*blocks_[s], p);
    });
    return norms;
  }

  /// Sum of all blocks.
  Field reconstruct() const {
    std::vector<Complex> sum(grid_.size());
    bool all_real = true;
    for (const auto& b : blocks_) {
      if (!b) continue;
      all_real = all_real && b->is_real();
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b->values()[i];
    }
    return Field(grid_, std::move(sum), all_real ? FieldKind::Real : FieldKind::Complex);
  }

  std::size_t slot(int j, int k) const noexcept {
    return static_cast<std::size_t>(j + 1) * static_cast<std::size_t>(k_max_ + 2) +
           static_cast<std::size_t>(k + 1);
  }

 private:
  GridSpec grid_;
  int j_max_ = 0;
  int k_max_ = 0;
  std::vector<std::optional<Field>> blocks_;
};

inline BlockDecomposition decompose(const Field& field, const DyadicPartition& part) {
  return BlockDecomposition(field, part);
}

/// Exponent triple (alpha, p, q) of a Besov space with dominating mixed smoothness.
struct BesovParams {
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  MixedExponent p = MixedExponent::of(2, 2);
  MixedExponent q = MixedExponent::of(2, 2);

  /// The difference characterizations need alpha in (0, 1)^2.
  void require_difference_range() const {
    if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0))
      throw Error(ErrorCode::ExponentOutOfRange, "difference norms need alpha in (0,1)^2");
  }
};

/// l^q norm of a nonnegative sequence (max for q = inf).
inline double lq_norm(std::vector<double> values, Exponent q) {
  return detail::weighted_lp(values, q, 1.0);
}

/// || ( 2^{a1 j} || (2^{a2 k} ||Delta_{j,k} f||_p)_k ||_{l^q2} )_j ||_{l^q1}
inline double besov_norm_lp(const BlockDecomposition& decomp, const BesovParams& params) {
  const auto norms = decomp.block_norms(params.p);
  const int jm = decomp.j_max();
  const int km = decomp.k_max();
  std::vector<double> outer;
  outer.reserve(static_cast<std::size_t>(jm + 2));
  for (int j = -1; j <= jm; ++j) {
    std::vector<double> inner;
    inner.reserve(static_cast<std::size_t>(km + 2));
    for (int k = -1; k <= km; ++k)
      inner.push_back(std::exp2(params.alpha2 * k) * norms[decomp.slot(j, k)]);
    outer.push_back(std::exp2(params.alpha1 * j) * lq_norm(std::move(inner), params.q.p2));
  }
  return lq_norm(std::move(outer), params.q.p1);
}

/// Multiplies the spectrum by (i xi)^order on the chosen axis. For odd orders
/// the unpaired Nyquist slot is zeroed so real input stays real.
inline Field spectral_derivative(const Field& field, int axis, int order = 1,
                                 Diagnostics* diag = nullptr) {
  if (axis != 1 && axis != 2) throw Error(ErrorCode::InvalidArgument, "axis must be 1 or 2");
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 0");
  if (axis == 1) check_support_margin(field, diag, "spectral_derivative");
  const auto& g = field.grid();
  const double nyq = axis == 1 ? g.nyquist1() : g.nyquist2();
  const auto spec = apply_multiplier(forward_transform(field), [&](double xi1, double xi2) {
    const double xi = axis == 1 ? xi1 : xi2;
    if ((order % 2 == 1) && std::abs(xi) >= nyq) return Complex(0.0);
    static constexpr Complex kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPhase[order % 4] * std::pow(xi, order);
  });
  return inverse_transform(spec, field.kind());
}

}  // namespace mixbesov

#endif  // MIXBESOV_LITTLEWOOD_PALEY_HPP
