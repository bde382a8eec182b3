#include "test_util.hpp"

using namespace mixbesov;
using std::numbers::pi;

namespace {

ProductGaussianSampler brownian(std::size_t n, std::uint64_t seed = 3) {
  return ProductGaussianSampler(CovSpec::brownian_sheet(1.0), make_grid(n, n, pi), seed);
}

SheConfig small_she() {
  SheConfig c;
  c.t_max = 1.0;
  c.n_modes = 32;
  c.n_time = 64;
  c.n_space = 64;
  c.seed = 5;
  return c;
}

double within_se(double value, double expect, double se) { return std::abs(value - expect) / se; }

}  // namespace

TEST(BrownianSheet, PointwiseVariance) {
  const auto s = brownian(64);
  const auto [m, se] = pointwise_second_moment(s, 32, 32, 2000);
  EXPECT_LT(within_se(m, 0.25, se), 4.0) << m << " +- " << se;
  const auto [m2, se2] = pointwise_second_moment(s, 16, 48, 2000);
  EXPECT_LT(within_se(m2, 0.25 * 0.75, se2), 4.0) << m2 << " +- " << se2;
}

TEST(BrownianSheet, OriginEdgesAreZero) {
  const auto f = brownian(32).sample(0);
  for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(f(0, j).real(), 0.0, 1e-7);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(f(i, 0).real(), 0.0, 1e-7);
}

TEST(BrownianSheet, RectIncrementShape) {
  const std::size_t n = 64;
  const auto shapes = increment_shapes(brownian(n), MomentKind::Rect, {{1, 1}, {4, 2}, {8, 8}}, 512);
  const std::vector<double> h2 = {1.0 / (n * n), 8.0 / (n * n), 64.0 / (n * n)};
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    EXPECT_LT(within_se(shapes[l].second, h2[l], shapes[l].second_se), 4.0) << l;
    EXPECT_LT(within_se(shapes[l].kurtosis, 3.0, shapes[l].kurtosis_se), 6.0) << l;
    EXPECT_LT(within_se(shapes[l].skewness, 0.0, shapes[l].skewness_se), 6.0) << l;
  }
}

TEST(BrownianSheet, SamplesAreDeterministicAndIndependent) {
  const auto a = brownian(32, 11), b = brownian(32, 11), c = brownian(32, 12);
  EXPECT_TRUE(a.sample(4) == b.sample(4));
  EXPECT_FALSE(a.sample(4) == a.sample(5));
  EXPECT_FALSE(a.sample(4) == c.sample(4));
}

TEST(ProductGaussian, RejectsOversizedGrid) {
  EXPECT_MB_ERROR(ProductGaussianSampler(CovSpec::brownian_sheet(), make_grid(2048, 8, 1.0), 0),
                  ErrorCode::GridTooLargeForDense);
}

TEST(ProductGaussian, BatchMatchesIndexedSamples) {
  const auto cov = CovSpec::brownian_sheet(2.0);
  const auto g = make_grid(16, 16, 1.0);
  const auto batch = sample_product_gaussian(cov, g, 3, 9);
  const ProductGaussianSampler s(cov, g, 9);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(batch[i] == s.sample(i));
}

TEST(Moments, ProductFieldHasExactMoments) {
  const std::size_t n = 64;
  const auto g = make_grid(n, n, 1.0);
  const double step = 1.0 / n;
  const auto f = sample_function(g, [&](double x1, double x2) {
    return (x1 + 1.0) / 2.0 * (x2 + pi) / (2 * pi);
  });
  const DeterministicSampler s(f, SampleGeometry{g, step, step, 0, n, false});
  const LagGrid lags(g, 4);
  const auto rep = estimate_increment_moments(s, lags, {1.0, 2.0}, 3);
  for (int k1 = 0; k1 <= 4; ++k1)
    for (int k2 = 0; k2 <= 4; ++k2) {
      const auto* e = rep.find(MomentKind::Rect, k1, k2, 2.0);
      ASSERT_NE(e, nullptr);
      const double expect = std::pow(e->h1 * e->h2, 2);
      EXPECT_NEAR(e->value, expect, 1e-10 * expect);
      EXPECT_EQ(e->stderr_, 0.0);
    }
  const auto fit = regularity_fit(rep, 1.0);
  EXPECT_NEAR(fit.rect.slopes[0], 1.0, 1e-9);
  EXPECT_NEAR(fit.rect.slopes[1], 1.0, 1e-9);
  EXPECT_NEAR(fit.dir1.slopes[0], 1.0, 1e-9);
  EXPECT_NEAR(fit.dir2.slopes[0], 1.0, 1e-9);
}

TEST(Moments, BrownianSlopes) {
  const auto s = brownian(128);
  const auto rep = estimate_increment_moments(s, LagGrid(s.geometry().grid, 4), {2.0}, 128);
  const auto fit = regularity_fit(rep);
  EXPECT_NEAR(fit.rect.slopes[0], 1.0, 0.1);
  EXPECT_NEAR(fit.rect.slopes[1], 1.0, 0.1);
  EXPECT_NEAR(fit.dir1.slopes[0], 1.0, 0.1);
  EXPECT_NEAR(fit.dir2.slopes[0], 1.0, 0.1);
}

TEST(Moments, CsvHeaderAndRows) {
  const auto rep = brownian_sheet_moment_law(4, 0.125, {2.0});
  const auto csv = rep.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "h1,h2,p,moment_kind,value,stderr,n");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            1 + rep.entries.size());
  EXPECT_EQ(rep.entries.size(), 16u + 4 + 4);
}

TEST(Moments, RejectsBadRequests) {
  const auto s = brownian(64);
  const LagGrid lags(s.geometry().grid, 3);
  EXPECT_MB_ERROR(estimate_increment_moments(s, lags, {}, 4), ErrorCode::InvalidArgument);
  EXPECT_MB_ERROR(estimate_increment_moments(s, lags, {-1.0}, 4), ErrorCode::InvalidArgument);
  EXPECT_MB_ERROR(estimate_increment_moments(s, lags, {2.0}, 0), ErrorCode::InvalidArgument);
  EXPECT_MB_ERROR(estimate_increment_moments(s, LagGrid(make_grid(32, 32, pi), 3), {2.0}, 4),
                  ErrorCode::GridMismatch);
}

TEST(Moments, FitsRecoverPowerLaws) {
  std::vector<double> lags;
  for (int k = 0; k < 6; ++k) lags.push_back(std::ldexp(1.0, -k));
  const auto rep = MomentReport::from_law(lags, lags, {3.0}, [](MomentKind kind, double h1, double h2, double) {
    switch (kind) {
      case MomentKind::Rect: return 2.0 * std::pow(h1, 0.7) * std::pow(h2, 1.9);
      case MomentKind::Dir1: return 0.5 * std::pow(h1, 1.3);
      case MomentKind::Dir2: return std::pow(h2, 0.4);
    }
    return 0.0;
  });
  const auto fit = regularity_fit(rep, 3.0);
  EXPECT_NEAR(fit.rect.slopes[0], 0.7, 1e-12);
  EXPECT_NEAR(fit.rect.slopes[1], 1.9, 1e-12);
  EXPECT_NEAR(fit.rect.intercept, std::log(2.0), 1e-12);
  EXPECT_NEAR(fit.dir1.slopes[0], 1.3, 1e-12);
  EXPECT_NEAR(fit.dir2.slopes[0], 0.4, 1e-12);
  EXPECT_NEAR(fit.dir2.r_squared, 1.0, 1e-12);
}

TEST(She, InitialRowAndBoundaryVanish) {
  const auto cfg = small_she();
  const auto u = simulate_she(cfg);
  EXPECT_EQ(u.grid().n1(), 2 * cfg.n_time);
  for (std::size_t i = 0; i <= cfg.n_time; ++i)
    for (std::size_t j = 0; j < cfg.n_space; ++j) EXPECT_EQ(u(i, j), Complex(0.0));
  for (std::size_t i = cfg.n_time; i < 2 * cfg.n_time; ++i) EXPECT_NEAR(u(i, 0).real(), 0.0, 1e-13);
}

TEST(She, SameSeedSameField) {
  const auto cfg = small_she();
  EXPECT_TRUE(simulate_she(cfg) == simulate_she(cfg));
  auto other = cfg;
  other.seed = 6;
  EXPECT_FALSE(simulate_she(cfg) == simulate_she(other));
}

TEST(She, RejectsTooManyModes) {
  auto cfg = small_she();
  cfg.n_modes = 33;
  EXPECT_MB_ERROR(SheSampler{cfg}, ErrorCode::ModeCountExceedsGrid);
}

TEST(She, VarianceMatchesModalSum) {
  const auto cfg = small_she();
  const SheSampler s(cfg);
  const std::size_t row = 2 * cfg.n_time - 1;
  const double t = s.time(row);
  const auto [m, se] = pointwise_second_moment(s, row, cfg.n_space / 2, 2000);
  EXPECT_LT(within_se(m, she_variance_oracle(cfg.n_modes, t, 0.0), se), 4.0) << m << " +- " << se;
  const double y = s.geometry().grid.x2(cfg.n_space / 2 + 8);
  const auto [c, cse] = pointwise_cross_moment(s, row, cfg.n_space / 2, cfg.n_space / 2 + 8, 2000);
  EXPECT_LT(within_se(c, she_covariance_oracle(cfg.n_modes, t, 0.0, y), cse), 4.0) << c;
}

TEST(She, TruncationTailIsBounded) {
  // Stationary variance at the midpoint of the interval: (2/pi) sum over odd j of 1/j^2.
  for (std::size_t J : {8u, 32u, 128u, 512u}) {
    const double gap = pi / 4 - she_variance_oracle(J, INFINITY, 0.0);
    EXPECT_GE(gap, 0.0);
    EXPECT_LE(gap, she_truncation_tail_bound(J));
  }
}

TEST(She, IncrementSlopes) {
  SheConfig cfg;
  cfg.n_time = 128;
  cfg.n_space = 128;
  cfg.n_modes = 64;
  cfg.seed = 1;
  const SheSampler s(cfg);
  const auto rep = estimate_increment_moments(s, LagGrid(s.geometry().grid, 4, 2), {2.0}, 64);
  const auto fit = regularity_fit(rep);
  EXPECT_NEAR(fit.dir1.slopes[0], 0.5, 0.15);
  EXPECT_NEAR(fit.dir2.slopes[0], 1.0, 0.15);
}

TEST(Kolmogorov, ExactBrownianBoundary) {
  const auto law = brownian_sheet_moment_law(6, 1.0 / 256);
  BesovParams b;
  b.q = MixedExponent::of(2, 2);
  b.p = MixedExponent::of(2, 4);
  b.alpha1 = b.alpha2 = 0.01;
  const auto v = kolmogorov_check(law, b, 0.1);
  EXPECT_TRUE(v.pass);
  EXPECT_NEAR(v.alpha1_max, 0.025, 1e-9);
  EXPECT_NEAR(v.alpha2_max, 0.025, 1e-9);
  EXPECT_EQ(v.conditions.size(), 4u);
  for (double a : {0.03, 0.2, 0.6}) {
    b.alpha1 = b.alpha2 = a;
    EXPECT_FALSE(kolmogorov_check(law, b, 0.1).pass) << a;
  }
}

TEST(Kolmogorov, PassIsMonotoneInAlpha) {
  const auto law = brownian_sheet_moment_law(5, 1.0 / 64);
  BesovParams b;
  b.q = MixedExponent::of(2, 2);
  b.p = MixedExponent::of(2, 2);
  bool previous = true;
  for (double a = 0.05; a < 1.0; a += 0.05) {
    b.alpha1 = b.alpha2 = a;
    const bool now = kolmogorov_check(law, b).pass;
    EXPECT_TRUE(previous || !now) << a;
    previous = now;
  }
}

TEST(Kolmogorov, ZeroFieldPasses) {
  const auto g = make_grid(64, 64, 1.0);
  const DeterministicSampler s(Field::zeros(g), SampleGeometry{g, 1.0 / 64, 1.0 / 64, 0, 64, true});
  const auto rep = estimate_increment_moments(s, LagGrid(g, 4), {2.0}, 2);
  BesovParams b;
  b.alpha1 = b.alpha2 = 0.9;
  const auto v = kolmogorov_check(rep, b);
  EXPECT_TRUE(v.pass);
  EXPECT_TRUE(std::isinf(v.alpha1_max));
}

TEST(Kolmogorov, RejectsBadExponents) {
  const auto law = brownian_sheet_moment_law(5, 1.0 / 64);
  BesovParams b;
  b.q = MixedExponent::of(2, 1);
  EXPECT_MB_ERROR(kolmogorov_check(law, b), ErrorCode::ExponentOrderingViolated);
  b.q = MixedExponent::of(2, 2);
  b.p = MixedExponent::of(4, 2);
  EXPECT_MB_ERROR(kolmogorov_check(law, b), ErrorCode::ExponentOrderingViolated);
  b.p = MixedExponent::of(2, 3);
  EXPECT_MB_ERROR(kolmogorov_check(law, b), ErrorCode::InvalidArgument);
  b.p = MixedExponent::of(2, 2);
  EXPECT_MB_ERROR(kolmogorov_check(brownian_sheet_moment_law(3, 0.1), b),
                  ErrorCode::InsufficientLagLevels);
}
