#ifndef MIXBESOV_RANDOM_FIELDS_HPP
#define MIXBESOV_RANDOM_FIELDS_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "mixbesov/difference_norms.hpp"
#include "mixbesov/grid.hpp"
#include "mixbesov/parallel.hpp"
#include "mixbesov/summation.hpp"

namespace mixbesov {

// ---------------------------------------------------------------------------
// Random streams.

/// Independent generator for sample `index` of the stream seeded by `seed`.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6d62u};
  return std::mt19937_64(seq);
}

// ---------------------------------------------------------------------------
// Sampler geometry: where the field lives inside its grid and which lags the
// grid steps correspond to.

struct SampleGeometry {
  GridSpec grid;
  double step1 = 0.0;            // lag per grid step along x1 in the sampler's coordinates
  double step2 = 0.0;            // lag per grid step along x2
  std::size_t row_begin = 0;     // rows carrying the domain [0, T)
  std::size_t row_end = 0;
  bool periodic2 = true;         // x2 anchors wrap (torus) or stop at the edge (rectangle)

  double lag(int axis, std::size_t m) const {
    return static_cast<double>(m) * (axis == 1 ? step1 : step2);
  }
};

template <class S>
concept FieldSampler = requires(const S& s, std::uint64_t i) {
  { s.geometry() } -> std::convertible_to<SampleGeometry>;
  { s.sample(i) } -> std::convertible_to<Field>;
};

/// Returns the same field for every index.
class DeterministicSampler {
 public:
  DeterministicSampler(Field field, SampleGeometry geom) : field_(std::move(field)), geom_(geom) {}
  const SampleGeometry& geometry() const noexcept { return geom_; }
  Field sample(std::uint64_t) const { return field_; }

 private:
  Field field_;
  SampleGeometry geom_;
};

// ---------------------------------------------------------------------------
// Product-covariance Gaussian fields.

enum class DomainTag { Torus, Rectangle };

/// Q(x, y) = q1(x1, y1) q2(x2, y2). Axis 1 is sampled at u1 = i T / n1 on
/// [0, T). Axis 2 uses the torus coordinate x2 for Torus and u2 = j T2 / n2 on
/// [0, T2) for Rectangle.
struct CovSpec {
  std::function<double(double, double)> q1;
  std::function<double(double, double)> q2;
  DomainTag tag = DomainTag::Torus;
  double t_max = 1.0;
  double extent2 = 1.0;

  static double brownian(double s, double t) { return std::min(s, t); }

  /// Brownian-sheet covariance min(s1, t1) min(s2, t2) on [0, T] x [0, T].
  static CovSpec brownian_sheet(double t_max = 1.0) {
    return CovSpec{brownian, brownian, DomainTag::Rectangle, t_max, t_max};
  }
};

inline constexpr std::size_t kMaxDenseAxis = 1024;

namespace detail {

// Symmetric PSD square root; eigenvalues below -tol * max raise.
inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& c, const char* axis) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::CovarianceNotPSD, std::string("eigendecomposition failed on ") + axis);
  Eigen::VectorXd ev = eig.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10 * top)
      throw Error(ErrorCode::CovarianceNotPSD,
                  std::string("covariance along ") + axis + " has a negative eigenvalue");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

inline Eigen::MatrixXd covariance_matrix(const std::function<double(double, double)>& q,
                                         const std::vector<double>& u, const char* axis) {
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double v = q(u[a], u[b]);
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue, std::string("covariance along ") + axis);
      c(a, b) = v;
    }
  if (!c.isApprox(c.transpose(), 1e-12))
    throw Error(ErrorCode::CovarianceNotPSD, std::string("covariance along ") + axis +
                                                 " is not symmetric");
  return c;
}

inline Eigen::MatrixXd standard_normal(std::mt19937_64& rng, Eigen::Index rows,
                                       Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) z(i, j) = normal(rng);
  return z;
}

}  // namespace detail

/// X = A1 Z A2^T with Ai the symmetric square root of the axis covariance.
class ProductGaussianSampler {
 public:
  ProductGaussianSampler(CovSpec cov, const GridSpec& grid, std::uint64_t seed)
      : cov_(std::move(cov)), seed_(seed), geom_{grid, 0.0, 0.0, 0, grid.n1(), true} {
    if (grid.n1() > kMaxDenseAxis || grid.n2() > kMaxDenseAxis)
      throw Error(ErrorCode::GridTooLargeForDense, "dense sampling supports at most 1024 per axis");
    if (!cov_.q1 || !cov_.q2) throw Error(ErrorCode::InvalidArgument, "covariance not set");
    if (!(cov_.t_max > 0.0) || !(cov_.extent2 > 0.0))
      throw Error(ErrorCode::NonPositiveWindow, "covariance domain must have positive extent");
    std::vector<double> u1(grid.n1()), u2(grid.n2());
    for (std::size_t i = 0; i < u1.size(); ++i)
      u1[i] = static_cast<double>(i) * cov_.t_max / static_cast<double>(grid.n1());
    const bool torus = cov_.tag == DomainTag::Torus;
    for (std::size_t j = 0; j < u2.size(); ++j)
      u2[j] = torus ? grid.x2(j)
                    : static_cast<double>(j) * cov_.extent2 / static_cast<double>(grid.n2());
    geom_.step1 = cov_.t_max / static_cast<double>(grid.n1());
    geom_.step2 = torus ? grid.dx2() : cov_.extent2 / static_cast<double>(grid.n2());
    geom_.periodic2 = torus;
    a1_ = detail::psd_sqrt(detail::covariance_matrix(cov_.q1, u1, "x1"), "x1");
    a2_ = detail::psd_sqrt(detail::covariance_matrix(cov_.q2, u2, "x2"), "x2");
    u1_ = std::move(u1);
    u2_ = std::move(u2);
  }

  const SampleGeometry& geometry() const noexcept { return geom_; }
  const CovSpec& covariance() const noexcept { return cov_; }
  double coordinate(int axis, std::size_t idx) const { return axis == 1 ? u1_[idx] : u2_[idx]; }

  Field sample(std::uint64_t index) const {
    auto rng = substream(seed_, index);
    const auto n1 = static_cast<Eigen::Index>(geom_.grid.n1());
    const auto n2 = static_cast<Eigen::Index>(geom_.grid.n2());
    const Eigen::MatrixXd z = detail::standard_normal(rng, n1, n2);
    const Eigen::MatrixXd x = a1_ * z * a2_.transpose();
    std::vector<Complex> v(geom_.grid.size());
    for (Eigen::Index i = 0; i < n1; ++i)
      for (Eigen::Index j = 0; j < n2; ++j) v[static_cast<std::size_t>(i * n2 + j)] = x(i, j);
    return Field(geom_.grid, std::move(v), FieldKind::Real);
  }

 private:
  CovSpec cov_;
  std::uint64_t seed_;
  SampleGeometry geom_;
  Eigen::MatrixXd a1_, a2_;
  std::vector<double> u1_, u2_;
};

inline std::vector<Field> sample_product_gaussian(const CovSpec& cov, const GridSpec& grid,
                                                  std::size_t n_samples, std::uint64_t seed) {
  const ProductGaussianSampler sampler(cov, grid, seed);
  std::vector<std::optional<Field>> slots(n_samples);
  parallel_for(n_samples, [&](std::size_t s) { slots[s] = sampler.sample(s); });
  std::vector<Field> out;
  out.reserve(n_samples);
  for (auto& f : slots) out.push_back(std::move(*f));
  return out;
}

// ---------------------------------------------------------------------------
// Stochastic heat equation on (-pi, pi) with Dirichlet boundary, driven by
// space-time white noise, via exact OU transitions of the sine modes.

struct SheConfig {
  double t_max = 1.0;
  std::size_t n_modes = 128;
  std::size_t n_time = 256;
  std::size_t n_space = 256;
  std::uint64_t seed = 0;
};

inline double she_eigenfunction(std::size_t j, double x) {
  return std::sin(static_cast<double>(j) * (x + std::numbers::pi) / 2.0) /
         std::sqrt(std::numbers::pi);
}

inline double she_eigenvalue(std::size_t j) {
  return static_cast<double>(j) * static_cast<double>(j) / 4.0;
}

/// E[u(t,x) u(t,y)] for the truncated system.
inline double she_covariance_oracle(std::size_t n_modes, double t, double x, double y) {
  std::vector<double> terms(n_modes);
  for (std::size_t j = 1; j <= n_modes; ++j) {
    const double lam = she_eigenvalue(j);
    const double w = std::isinf(t) ? 1.0 : -std::expm1(-2.0 * lam * t);
    terms[j - 1] = she_eigenfunction(j, x) * she_eigenfunction(j, y) * w / (2.0 * lam);
  }
  return pairwise_sum(terms);
}

inline double she_variance_oracle(std::size_t n_modes, double t, double x) {
  return she_covariance_oracle(n_modes, t, x, x);
}

/// Bound on the variance dropped by truncating after n_modes modes.
inline double she_truncation_tail_bound(std::size_t n_modes) {
  return (2.0 / std::numbers::pi) / static_cast<double>(n_modes);
}

/// Field layout: grid n1 = 2 n_time on [-T, T) so that x1 = t; rows with
/// t < 0 are zero and row n_time holds u(0, .) = 0. Axis 2 is x in [-pi, pi).
class SheSampler {
 public:
  explicit SheSampler(SheConfig cfg)
      : cfg_(cfg), geom_{make_grid(2 * cfg.n_time, cfg.n_space, cfg.t_max), 0, 0, 0, 0, true} {
    if (cfg.n_time < 2) throw Error(ErrorCode::InvalidArgument, "n_time must be >= 2");
    if (cfg.n_modes == 0 || cfg.n_modes > cfg.n_space / 2)
      throw Error(ErrorCode::ModeCountExceedsGrid, "n_modes must lie in [1, n_space/2]");
    geom_.step1 = geom_.grid.dx1();
    geom_.step2 = geom_.grid.dx2();
    geom_.row_begin = cfg.n_time;
    geom_.row_end = 2 * cfg.n_time;
    geom_.periodic2 = true;

    const auto J = static_cast<Eigen::Index>(cfg.n_modes);
    const auto nx = static_cast<Eigen::Index>(cfg.n_space);
    phi_.resize(J, nx);
    for (Eigen::Index j = 0; j < J; ++j)
      for (Eigen::Index c = 0; c < nx; ++c)
        phi_(j, c) = she_eigenfunction(static_cast<std::size_t>(j + 1),
                                       geom_.grid.x2(static_cast<std::size_t>(c)));
    decay_.resize(J);
    noise_.resize(J);
    const double dt = geom_.step1;
    for (Eigen::Index j = 0; j < J; ++j) {
      const double lam = she_eigenvalue(static_cast<std::size_t>(j + 1));
      decay_[j] = std::exp(-lam * dt);
      noise_[j] = std::sqrt(-std::expm1(-2.0 * lam * dt) / (2.0 * lam));
    }
  }

  const SampleGeometry& geometry() const noexcept { return geom_; }
  const SheConfig& config() const noexcept { return cfg_; }
  double time(std::size_t row) const { return geom_.grid.x1(row); }

  Field sample(std::uint64_t index) const {
    auto rng = substream(cfg_.seed, index);
    std::normal_distribution<double> normal;
    const auto nt = static_cast<Eigen::Index>(cfg_.n_time);
    const auto J = static_cast<Eigen::Index>(cfg_.n_modes);
    Eigen::MatrixXd modes = Eigen::MatrixXd::Zero(nt, J);
    for (Eigen::Index r = 1; r < nt; ++r)
      for (Eigen::Index j = 0; j < J; ++j)
        modes(r, j) = decay_[j] * modes(r - 1, j) + noise_[j] * normal(rng);
    const Eigen::MatrixXd u = modes * phi_;
    const std::size_t n2 = cfg_.n_space;
    std::vector<Complex> v(geom_.grid.size());
    for (Eigen::Index r = 0; r < nt; ++r)
      for (std::size_t c = 0; c < n2; ++c)
        v[(cfg_.n_time + static_cast<std::size_t>(r)) * n2 + c] = u(r, static_cast<Eigen::Index>(c));
    return Field(geom_.grid, std::move(v), FieldKind::Real);
  }

 private:
  SheConfig cfg_;
  SampleGeometry geom_;
  Eigen::MatrixXd phi_;
  Eigen::VectorXd decay_, noise_;
};

/// One draw of the SHE (sample index 0 of the configured seed).
inline Field simulate_she(const SheConfig& cfg) { return SheSampler(cfg).sample(0); }

// ---------------------------------------------------------------------------
// Increment moments.

enum class MomentKind { Rect, Dir1, Dir2 };

inline const char* to_string(MomentKind k) {
  switch (k) {
    case MomentKind::Rect: return "rect";
    case MomentKind::Dir1: return "dir1";
    case MomentKind::Dir2: return "dir2";
  }
  return "?";
}

struct MomentEntry {
  MomentKind kind = MomentKind::Rect;
  int k1 = -1;  // lag level on axis 1 (-1 when unused)
  int k2 = -1;
  double h1 = 0.0;
  double h2 = 0.0;
  double p = 2.0;
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

struct MomentReport {
  std::vector<double> lags1;  // h1 per level, level 0 coarsest
  std::vector<double> lags2;
  std::vector<double> p_list;
  std::size_t n_samples = 0;
  std::vector<MomentEntry> entries;

  const MomentEntry* find(MomentKind kind, int k1, int k2, double p) const {
    for (const auto& e : entries)
      if (e.kind == kind && e.k1 == k1 && e.k2 == k2 && e.p == p) return &e;
    return nullptr;
  }

  std::vector<const MomentEntry*> select(MomentKind kind, double p) const {
    std::vector<const MomentEntry*> out;
    for (const auto& e : entries)
      if (e.kind == kind && e.p == p) out.push_back(&e);
    return out;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "h1,h2,p,moment_kind,value,stderr,n\n";
    for (const auto& e : entries)
      os << e.h1 << ',' << e.h2 << ',' << e.p << ',' << to_string(e.kind) << ',' << e.value
         << ',' << e.stderr_ << ',' << e.n << '\n';
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : entries)
      rows.push_back({{"h1", e.h1},
                      {"h2", e.h2},
                      {"p", e.p},
                      {"moment_kind", to_string(e.kind)},
                      {"value", e.value},
                      {"stderr", e.stderr_},
                      {"n", e.n}});
    return {{"lags1", lags1}, {"lags2", lags2}, {"p", p_list}, {"n_samples", n_samples},
            {"moments", rows}};
  }

  /// Table from an exact moment law; stderr is zero. `law(kind, h1, h2, p)`;
  /// h2 is ignored for Dir1 and h1 for Dir2.
  static MomentReport from_law(std::vector<double> lags1, std::vector<double> lags2,
                               std::vector<double> p_list,
                               const std::function<double(MomentKind, double, double, double)>& law) {
    MomentReport r;
    r.lags1 = std::move(lags1);
    r.lags2 = std::move(lags2);
    r.p_list = std::move(p_list);
    for (double p : r.p_list) {
      for (int k1 = 0; k1 < static_cast<int>(r.lags1.size()); ++k1)
        for (int k2 = 0; k2 < static_cast<int>(r.lags2.size()); ++k2)
          r.entries.push_back({MomentKind::Rect, k1, k2, r.lags1[k1], r.lags2[k2], p,
                               law(MomentKind::Rect, r.lags1[k1], r.lags2[k2], p), 0.0, 0});
      for (int k1 = 0; k1 < static_cast<int>(r.lags1.size()); ++k1)
        r.entries.push_back({MomentKind::Dir1, k1, -1, r.lags1[k1], 0.0, p,
                             law(MomentKind::Dir1, r.lags1[k1], 0.0, p), 0.0, 0});
      for (int k2 = 0; k2 < static_cast<int>(r.lags2.size()); ++k2)
        r.entries.push_back({MomentKind::Dir2, -1, k2, 0.0, r.lags2[k2], p,
                             law(MomentKind::Dir2, 0.0, r.lags2[k2], p), 0.0, 0});
    }
    return r;
  }
};

/// Exact moments of the Brownian sheet on [0,1]^2: Box is N(0, h1 h2), delta_1
/// at height x2 is N(0, h1 x2) and its anchor average over x2 in [0,1) is
/// E|Z|^p h1^{p/2} / (p/2 + 1). Lags double from `finest` over `levels` levels.
inline MomentReport brownian_sheet_moment_law(int levels, double finest,
                                              std::vector<double> p_list = {2.0, 4.0}) {
  std::vector<double> lags;
  for (int k = 0; k < levels; ++k) lags.push_back(finest * std::ldexp(1.0, levels - 1 - k));
  auto abs_moment = [](double p) {
    return std::pow(2.0, p / 2) * std::tgamma((p + 1) / 2) / std::sqrt(std::numbers::pi);
  };
  return MomentReport::from_law(lags, lags, std::move(p_list),
                                [&](MomentKind kind, double h1, double h2, double p) {
                                  const double c = abs_moment(p);
                                  switch (kind) {
                                    case MomentKind::Rect: return c * std::pow(h1 * h2, p / 2);
                                    case MomentKind::Dir1: return c * std::pow(h1, p / 2) / (p / 2 + 1);
                                    case MomentKind::Dir2: return c * std::pow(h2, p / 2) / (p / 2 + 1);
                                  }
                                  return 0.0;
                                });
}

namespace detail {

struct AnchorSet {
  std::size_t r_begin, r_end;  // anchor rows
  std::size_t c_end;           // anchor columns [0, c_end)
};

inline AnchorSet anchors(const SampleGeometry& g, std::size_t m1, std::size_t m2) {
  AnchorSet a{g.row_begin, g.row_begin, g.grid.n2()};
  // x1 + h1 must stay inside the domain rows, i.e. x1 in [0, T - h1].
  if (g.row_end > g.row_begin + m1) a.r_end = g.row_end - m1;
  if (!g.periodic2) a.c_end = g.grid.n2() > m2 ? g.grid.n2() - m2 : 0;
  return a;
}

inline double abs_pow(double d, double p) {
  if (p == 2.0) return d * d;
  if (p == 4.0) {
    const double d2 = d * d;
    return d2 * d2;
  }
  if (p == 1.0) return d;
  return std::pow(d, p);
}

// Real parts with each row extended periodically by n2 columns, so that
// column shifts up to n2 never need a modulo.
class PaddedRows {
 public:
  explicit PaddedRows(const Field& f) : n2_(f.grid().n2()), data_(f.grid().n1() * 2 * n2_) {
    const auto v = f.values();
    for (std::size_t i = 0; i < f.grid().n1(); ++i)
      for (std::size_t j = 0; j < 2 * n2_; ++j)
        data_[i * 2 * n2_ + j] = v[i * n2_ + (j < n2_ ? j : j - n2_)].real();
  }
  const double* row(std::size_t i) const { return data_.data() + i * 2 * n2_; }

 private:
  std::size_t n2_;
  std::vector<double> data_;
};

// Increments of one anchor row into out[0, a.c_end).
inline void increment_row(const PaddedRows& x, MomentKind kind, std::size_t i, std::size_t m1,
                          std::size_t m2, std::size_t c_end, double* out) {
  const double* a = x.row(i);
  switch (kind) {
    case MomentKind::Rect: {
      const double* b = x.row(i + m1);
      for (std::size_t j = 0; j < c_end; ++j) out[j] = (b[j + m2] - b[j]) - (a[j + m2] - a[j]);
      break;
    }
    case MomentKind::Dir1: {
      const double* b = x.row(i + m1);
      for (std::size_t j = 0; j < c_end; ++j) out[j] = b[j] - a[j];
      break;
    }
    case MomentKind::Dir2:
      for (std::size_t j = 0; j < c_end; ++j) out[j] = a[j + m2] - a[j];
      break;
  }
}

// Sample-level anchor averages of |increment|^p for every p.
inline void anchor_means(const PaddedRows& x, MomentKind kind, std::size_t m1, std::size_t m2,
                         const AnchorSet& a, const std::vector<double>& ps, double* out) {
  const std::size_t count = (a.r_end - a.r_begin) * a.c_end;
  std::vector<std::vector<double>> rows(ps.size(), std::vector<double>(a.r_end - a.r_begin));
  std::vector<double> d(a.c_end), buf(a.c_end);
  for (std::size_t i = a.r_begin; i < a.r_end; ++i) {
    increment_row(x, kind, i, m1, m2, a.c_end, d.data());
    for (std::size_t t = 0; t < ps.size(); ++t) {
      for (std::size_t j = 0; j < a.c_end; ++j) buf[j] = abs_pow(std::abs(d[j]), ps[t]);
      rows[t][i - a.r_begin] = pairwise_sum(buf);
    }
  }
  for (std::size_t t = 0; t < ps.size(); ++t)
    out[t] = count == 0 ? 0.0 : pairwise_sum(rows[t]) / static_cast<double>(count);
}

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n == 0) return {0.0, 0.0};
  const double mean = pairwise_sum(xs) / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

inline void require_resolvable(const SampleGeometry& g, const LagGrid& lags) {
  if (!(lags.grid() == g.grid))
    throw Error(ErrorCode::GridMismatch, "lag grid was built for a different grid");
  const std::size_t rows = g.row_end - g.row_begin;
  if (lags.multiple(1, 0) >= rows)
    throw Error(ErrorCode::ResolutionTooCoarse, "coarsest x1 lag leaves no admissible anchors");
  if (!g.periodic2 && lags.multiple(2, 0) >= g.grid.n2())
    throw Error(ErrorCode::ResolutionTooCoarse, "coarsest x2 lag leaves no admissible anchors");
}

}  // namespace detail

/// Anchor- and sample-averaged moments E|Box X|^p (all level pairs),
/// E|delta_1 X|^p and E|delta_2 X|^p. Standard errors come from the spread of
/// the per-sample anchor averages.
template <FieldSampler S>
MomentReport estimate_increment_moments(const S& sampler, const LagGrid& lags,
                                        std::vector<double> p_list, std::size_t n_samples) {
  const SampleGeometry geom = sampler.geometry();
  detail::require_resolvable(geom, lags);
  if (p_list.empty()) throw Error(ErrorCode::InvalidArgument, "no moment orders requested");
  for (double p : p_list)
    if (!(p > 0.0) || !std::isfinite(p))
      throw Error(ErrorCode::InvalidArgument, "moment orders must be positive and finite");
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");

  const int K = lags.levels();
  const std::size_t P = p_list.size();
  struct Slot {
    MomentKind kind;
    int k1, k2;
  };
  std::vector<Slot> slots;
  for (int k1 = 0; k1 < K; ++k1)
    for (int k2 = 0; k2 < K; ++k2) slots.push_back({MomentKind::Rect, k1, k2});
  for (int k = 0; k < K; ++k) slots.push_back({MomentKind::Dir1, k, -1});
  for (int k = 0; k < K; ++k) slots.push_back({MomentKind::Dir2, -1, k});

  const std::size_t width = slots.size() * P;
  std::vector<double> per_sample(n_samples * width);

  parallel_for(n_samples, [&](std::size_t s) {
    const detail::PaddedRows x(sampler.sample(s));
    for (std::size_t t = 0; t < slots.size(); ++t) {
      const Slot& sl = slots[t];
      const std::size_t m1 = sl.k1 >= 0 ? lags.multiple(1, sl.k1) : 0;
      const std::size_t m2 = sl.k2 >= 0 ? lags.multiple(2, sl.k2) : 0;
      detail::anchor_means(x, sl.kind, m1, m2, detail::anchors(geom, m1, m2), p_list,
                           per_sample.data() + s * width + t * P);
    }
  });

  MomentReport r;
  r.p_list = p_list;
  r.n_samples = n_samples;
  for (int k = 0; k < K; ++k) {
    r.lags1.push_back(geom.lag(1, lags.multiple(1, k)));
    r.lags2.push_back(geom.lag(2, lags.multiple(2, k)));
  }
  std::vector<double> column(n_samples);
  for (std::size_t t = 0; t < slots.size(); ++t) {
    const Slot& sl = slots[t];
    for (std::size_t pi = 0; pi < P; ++pi) {
      for (std::size_t s = 0; s < n_samples; ++s) column[s] = per_sample[s * width + t * P + pi];
      const auto [mean, se] = detail::mean_and_stderr(column);
      MomentEntry e;
      e.kind = sl.kind;
      e.k1 = sl.k1;
      e.k2 = sl.k2;
      e.h1 = sl.k1 >= 0 ? r.lags1[sl.k1] : 0.0;
      e.h2 = sl.k2 >= 0 ? r.lags2[sl.k2] : 0.0;
      e.p = p_list[pi];
      e.value = mean;
      e.stderr_ = se;
      e.n = n_samples;
      r.entries.push_back(e);
    }
  }
  return r;
}

/// Shape statistics of one increment: E[D^2], skewness E[D^3]/E[D^2]^{3/2}
/// and kurtosis E[D^4]/E[D^2]^2, with delta-method standard errors over
/// per-sample anchor averages.
struct IncrementShape {
  double second = 0.0;
  double second_se = 0.0;
  double skewness = 0.0;
  double skewness_se = 0.0;
  double kurtosis = 0.0;
  double kurtosis_se = 0.0;
  std::size_t n = 0;
};

namespace detail {

inline IncrementShape shape_from_samples(const std::vector<double>& m2s,
                                         const std::vector<double>& m3s,
                                         const std::vector<double>& m4s) {
  const std::size_t N = m2s.size();
  const double n = static_cast<double>(N);
  auto mean = [&](const std::vector<double>& x) { return pairwise_sum(x) / n; };
  const double A = mean(m2s), B = mean(m3s), C = mean(m4s);
  auto cov = [&](const std::vector<double>& x, double mx, const std::vector<double>& y, double my) {
    std::vector<double> t(N);
    for (std::size_t s = 0; s < N; ++s) t[s] = (x[s] - mx) * (y[s] - my);
    return N > 1 ? pairwise_sum(t) / (n - 1.0) / n : 0.0;
  };
  const double vAA = cov(m2s, A, m2s, A), vBB = cov(m3s, B, m3s, B), vCC = cov(m4s, C, m4s, C);
  const double vAB = cov(m2s, A, m3s, B), vAC = cov(m2s, A, m4s, C);

  IncrementShape out;
  out.n = N;
  out.second = A;
  out.second_se = std::sqrt(vAA);
  if (A > 0.0) {
    out.skewness = B / std::pow(A, 1.5);
    const double gA = -1.5 * B / std::pow(A, 2.5), gB = 1.0 / std::pow(A, 1.5);
    out.skewness_se = std::sqrt(std::max(0.0, gA * gA * vAA + 2 * gA * gB * vAB + gB * gB * vBB));
    out.kurtosis = C / (A * A);
    const double hA = -2.0 * C / (A * A * A), hC = 1.0 / (A * A);
    out.kurtosis_se = std::sqrt(std::max(0.0, hA * hA * vAA + 2 * hA * hC * vAC + hC * hC * vCC));
  }
  return out;
}

}  // namespace detail

/// Shape statistics for several lags (m1, m2) from one pass over the samples.
template <FieldSampler S>
std::vector<IncrementShape> increment_shapes(
    const S& sampler, MomentKind kind, std::vector<std::pair<std::size_t, std::size_t>> lags,
    std::size_t n_samples) {
  const SampleGeometry geom = sampler.geometry();
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");
  std::vector<detail::AnchorSet> anchor_sets;
  for (auto& [m1, m2] : lags) {
    if (kind == MomentKind::Dir1) m2 = 0;
    if (kind == MomentKind::Dir2) m1 = 0;
    if (m2 > geom.grid.n2()) throw Error(ErrorCode::LagExceedsWindow, "x2 lag exceeds the period");
    anchor_sets.push_back(detail::anchors(geom, m1, m2));
    const auto& a = anchor_sets.back();
    if (a.r_end <= a.r_begin || a.c_end == 0)
      throw Error(ErrorCode::ResolutionTooCoarse, "lag leaves no admissible anchors");
  }
  const std::size_t L = lags.size();
  std::vector<double> m2s(n_samples * L), m3s(n_samples * L), m4s(n_samples * L);
  parallel_for(n_samples, [&](std::size_t s) {
    const detail::PaddedRows x(sampler.sample(s));
    for (std::size_t l = 0; l < L; ++l) {
      const auto& a = anchor_sets[l];
      std::vector<double> d(a.c_end), r2, r3, r4, b2(a.c_end), b3(a.c_end), b4(a.c_end);
      for (std::size_t i = a.r_begin; i < a.r_end; ++i) {
        detail::increment_row(x, kind, i, lags[l].first, lags[l].second, a.c_end, d.data());
        for (std::size_t j = 0; j < a.c_end; ++j) {
          const double d2 = d[j] * d[j];
          b2[j] = d2;
          b3[j] = d2 * d[j];
          b4[j] = d2 * d2;
        }
        r2.push_back(pairwise_sum(b2));
        r3.push_back(pairwise_sum(b3));
        r4.push_back(pairwise_sum(b4));
      }
      const double cnt = static_cast<double>((a.r_end - a.r_begin) * a.c_end);
      m2s[l * n_samples + s] = pairwise_sum(r2) / cnt;
      m3s[l * n_samples + s] = pairwise_sum(r3) / cnt;
      m4s[l * n_samples + s] = pairwise_sum(r4) / cnt;
    }
  });
  std::vector<IncrementShape> out;
  for (std::size_t l = 0; l < L; ++l) {
    auto slice = [&](const std::vector<double>& v) {
      return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(l * n_samples),
                                 v.begin() + static_cast<std::ptrdiff_t>((l + 1) * n_samples));
    };
    out.push_back(detail::shape_from_samples(slice(m2s), slice(m3s), slice(m4s)));
  }
  return out;
}

template <FieldSampler S>
IncrementShape increment_shape(const S& sampler, MomentKind kind, std::size_t m1, std::size_t m2,
                               std::size_t n_samples) {
  return increment_shapes(sampler, kind, {{m1, m2}}, n_samples).front();
}

/// Pointwise mean of X(i, j)^2 over samples, with standard error.
template <FieldSampler S>
std::pair<double, double> pointwise_second_moment(const S& sampler, std::size_t i, std::size_t j,
                                                  std::size_t n_samples) {
  std::vector<double> xs(n_samples);
  parallel_for(n_samples, [&](std::size_t s) {
    const double x = sampler.sample(s)(i, j).real();
    xs[s] = x * x;
  });
  return detail::mean_and_stderr(xs);
}

/// Pointwise mean of X(i, j) X(i, l) over samples, with standard error.
template <FieldSampler S>
std::pair<double, double> pointwise_cross_moment(const S& sampler, std::size_t i, std::size_t j,
                                                 std::size_t l, std::size_t n_samples) {
  std::vector<double> xs(n_samples);
  parallel_for(n_samples, [&](std::size_t s) {
    const Field f = sampler.sample(s);
    xs[s] = f(i, j).real() * f(i, l).real();
  });
  return detail::mean_and_stderr(xs);
}

// ---------------------------------------------------------------------------
// Slope fits and the Kolmogorov verdict.

struct SlopeFit {
  std::vector<double> slopes;      // one per regressor
  std::vector<double> half_widths; // 2 standard errors
  double intercept = 0.0;
  double r_squared = 1.0;
  std::size_t points = 0;
  bool degenerate_zero = false;    // every moment was zero: slopes reported as +inf
};

namespace detail {

// Least squares of y on [1, x_1 .. x_d].
inline SlopeFit least_squares(const std::vector<std::vector<double>>& xs,
                              const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto d = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(n, d + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    for (Eigen::Index c = 0; c < d; ++c) A(i, c + 1) = xs[c][i];
    b[i] = y[i];
  }
  const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd resid = b - A * beta;
  const double sse = resid.squaredNorm();
  const double mean = b.mean();
  const double sst = (b.array() - mean).square().sum();
  SlopeFit fit;
  fit.points = static_cast<std::size_t>(n);
  fit.intercept = beta[0];
  fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  const double dof = static_cast<double>(n - d - 1);
  const double sigma2 = dof > 0 ? sse / dof : 0.0;
  const Eigen::MatrixXd cov = (A.transpose() * A).inverse() * sigma2;
  for (Eigen::Index c = 0; c < d; ++c) {
    fit.slopes.push_back(beta[c + 1]);
    fit.half_widths.push_back(2.0 * std::sqrt(std::max(cov(c + 1, c + 1), 0.0)));
  }
  return fit;
}

inline SlopeFit fit_entries(const std::vector<const MomentEntry*>& es, MomentKind kind) {
  const std::size_t dims = kind == MomentKind::Rect ? 2 : 1;
  std::vector<std::vector<double>> xs(dims);
  std::vector<double> y;
  bool any_positive = false;
  for (const auto* e : es) {
    if (e->value > 0.0) any_positive = true;
  }
  if (!any_positive) {
    SlopeFit fit;
    fit.degenerate_zero = true;
    fit.points = es.size();
    fit.slopes.assign(dims, std::numeric_limits<double>::infinity());
    fit.half_widths.assign(dims, 0.0);
    return fit;
  }
  for (const auto* e : es) {
    if (!(e->value > 0.0)) continue;
    if (kind == MomentKind::Rect) {
      xs[0].push_back(std::log(e->h1));
      xs[1].push_back(std::log(e->h2));
    } else {
      xs[0].push_back(std::log(kind == MomentKind::Dir1 ? e->h1 : e->h2));
    }
    y.push_back(std::log(e->value));
  }
  if (y.size() < dims + 2)
    throw Error(ErrorCode::InsufficientLagLevels, "too few positive moments for a slope fit");
  return least_squares(xs, y);
}

inline void require_levels(const MomentReport& r, std::size_t min_levels) {
  if (r.lags1.size() < min_levels || r.lags2.size() < min_levels)
    throw Error(ErrorCode::InsufficientLagLevels,
                "slope fits need at least " + std::to_string(min_levels) + " lag levels");
}

}  // namespace detail

struct RegularityFit {
  double p = 2.0;
  SlopeFit rect;  // slopes in (log h1, log h2)
  SlopeFit dir1;
  SlopeFit dir2;
};

inline constexpr std::size_t kMinFitLevels = 4;

inline RegularityFit regularity_fit(const MomentReport& report, double p) {
  detail::require_levels(report, kMinFitLevels);
  RegularityFit out;
  out.p = p;
  out.rect = detail::fit_entries(report.select(MomentKind::Rect, p), MomentKind::Rect);
  out.dir1 = detail::fit_entries(report.select(MomentKind::Dir1, p), MomentKind::Dir1);
  out.dir2 = detail::fit_entries(report.select(MomentKind::Dir2, p), MomentKind::Dir2);
  return out;
}

inline RegularityFit regularity_fit(const MomentReport& report) {
  if (report.p_list.empty()) throw Error(ErrorCode::InvalidArgument, "report has no moments");
  return regularity_fit(report, report.p_list.front());
}

struct KolmogorovCondition {
  std::string name;   // "rect_x1", "rect_x2", "dir1", "dir2"
  double fitted = 0.0;
  double half_width = 0.0;
  double required = 0.0;
  bool pass = false;
};

struct KolmogorovVerdict {
  std::vector<KolmogorovCondition> conditions;
  double tolerance = 0.1;
  double p2 = 0.0;
  double alpha1_max = 0.0;  // largest alpha_i the fitted slopes support (within tolerance)
  double alpha2_max = 0.0;
  bool pass = false;

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    auto num = [](double x) -> nlohmann::json {
      if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
      return x;
    };
    for (const auto& c : conditions)
      cs.push_back({{"name", c.name},
                    {"fitted", num(c.fitted)},
                    {"half_width", c.half_width},
                    {"required", c.required},
                    {"pass", c.pass}});
    return {{"conditions", cs},  {"tolerance", tolerance},    {"p2", p2},
            {"alpha1_max", num(alpha1_max)}, {"alpha2_max", num(alpha2_max)}, {"pass", pass}};
  }
};

/// Required exponent (1 + alpha q) p2 / q.
inline double kolmogorov_exponent(double alpha, double q, double p2) {
  return (1.0 + alpha * q) * p2 / q;
}

/// Fits log E|.|^{p2} against log h per condition and compares each slope
/// with the required exponent.
inline KolmogorovVerdict kolmogorov_check(const MomentReport& report, const BesovParams& params,
                                          double tolerance = 0.1) {
  const auto& p = params.p;
  const auto& q = params.q;
  if (p.p1.is_infinite() || p.p2.is_infinite() || q.p1.is_infinite() || q.p2.is_infinite())
    throw Error(ErrorCode::ExponentOrderingViolated, "exponents must be finite");
  const double q1 = q.p1.value(), q2 = q.p2.value(), p1 = p.p1.value(), p2 = p.p2.value();
  if (!(q1 <= q2 && q2 <= p1 && p1 <= p2))
    throw Error(ErrorCode::ExponentOrderingViolated, "need q1 <= q2 <= p1 <= p2");
  if (!(params.alpha1 > 0.0 && params.alpha1 < 1.0 && params.alpha2 > 0.0 && params.alpha2 < 1.0))
    throw Error(ErrorCode::ExponentOutOfRange, "alpha must lie in (0,1)^2");
  if (std::find(report.p_list.begin(), report.p_list.end(), p2) == report.p_list.end())
    throw Error(ErrorCode::InvalidArgument, "report lacks moments of order p2");
  detail::require_levels(report, kMinFitLevels);

  const RegularityFit fit = regularity_fit(report, p2);
  const double e1 = kolmogorov_exponent(params.alpha1, q1, p2);
  const double e2 = kolmogorov_exponent(params.alpha2, q2, p2);

  KolmogorovVerdict v;
  v.tolerance = tolerance;
  v.p2 = p2;
  auto add = [&](std::string name, const SlopeFit& f, std::size_t c, double required) {
    KolmogorovCondition kc{std::move(name), f.slopes[c], f.half_widths[c], required, false};
    kc.pass = kc.fitted >= required - tolerance;
    v.conditions.push_back(kc);
  };
  add("rect_x1", fit.rect, 0, e1);
  add("rect_x2", fit.rect, 1, e2);
  add("dir1", fit.dir1, 0, e1);
  add("dir2", fit.dir2, 0, e2);
  v.pass = std::all_of(v.conditions.begin(), v.conditions.end(),
                       [](const KolmogorovCondition& c) { return c.pass; });

  // (1 + a q) p2 / q <= s + tol  <=>  a <= ((s + tol) q / p2 - 1) / q.
  auto alpha_max = [&](double s, double qi) {
    if (std::isinf(s)) return std::numeric_limits<double>::infinity();
    return ((s + tolerance) * qi / p2 - 1.0) / qi;
  };
  v.alpha1_max = std::min(alpha_max(fit.rect.slopes[0], q1), alpha_max(fit.dir1.slopes[0], q1));
  v.alpha2_max = std::min(alpha_max(fit.rect.slopes[1], q2), alpha_max(fit.dir2.slopes[0], q2));
  return v;
}

}  // namespace mixbesov

#endif  // MIXBESOV_RANDOM_FIELDS_HPP
