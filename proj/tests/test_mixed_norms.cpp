#include "test_util.hpp"

using namespace mixbesov;
using std::numbers::pi;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double indicator01(double x1, double) { return (x1 >= 0.0 && x1 < 1.0) ? 1.0 : 0.0; }

// Riemann-sum Lp norm of a one-dimensional sample vector.
double lp1d(const std::vector<double>& v, double p, double dx) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p) * dx;
  return std::pow(s, 1.0 / p);
}

double gaussian_density(double x, double var) {
  return std::exp(-x * x / (2 * var)) / std::sqrt(2 * pi * var);
}

}  // namespace

TEST(Exponent, RejectsBelowOne) {
  EXPECT_MB_ERROR(Exponent::finite(0.5), ErrorCode::ExponentOutOfRange);
  EXPECT_TRUE(Exponent::infinity().is_infinite());
  EXPECT_DOUBLE_EQ(Exponent::finite(4).conjugate().value(), 4.0 / 3.0);
  EXPECT_TRUE(Exponent::finite(1).conjugate().is_infinite());
}

TEST(MixedLpNorm, IndicatorInX1) {
  const auto g = make_grid(256, 64, 4.0);
  const auto f = sample_function(g, indicator01);
  EXPECT_NEAR(mixed_lp_norm(f, MixedExponent::of(2, 2)), std::sqrt(2 * pi), 1e-12);
  EXPECT_NEAR(mixed_lp_norm(f, MixedExponent::of(kInf, 1)), 2 * pi, 1e-12);
}

TEST(MixedLpNorm, TensorProductsFactor) {
  const auto g = make_grid(128, 64, 3.0);
  auto gx = [](double x1) { return std::exp(-x1 * x1) * (1 + 0.5 * std::sin(3 * x1)); };
  auto hx = [](double x2) { return 1.5 + std::cos(x2) + 0.3 * std::sin(2 * x2); };
  const auto f = sample_function(g, [&](double x1, double x2) { return gx(x1) * hx(x2); });
  std::vector<double> gv(g.n1()), hv(g.n2());
  for (std::size_t i = 0; i < g.n1(); ++i) gv[i] = gx(g.x1(i));
  for (std::size_t j = 0; j < g.n2(); ++j) hv[j] = hx(g.x2(j));
  for (auto [p1, p2] : {std::pair{1.0, 2.0}, {2.0, 4.0}, {kInf, 1.0}}) {
    const double expect = lp1d(gv, p1, g.dx1()) * lp1d(hv, p2, g.dx2());
    EXPECT_NEAR(mixed_lp_norm(f, MixedExponent::of(p1, p2)) / expect, 1.0, 1e-10);
  }
}

TEST(MixedLpNorm, ScalingIsExact) {
  const auto f = mbt::random_real(make_grid(32, 32, 1.0), 3);
  for (auto p : {MixedExponent::of(1, 1), MixedExponent::of(2, 4), MixedExponent::of(3, kInf)}) {
    const double base = mixed_lp_norm(f, p);
    EXPECT_EQ(mixed_lp_norm(f.scaled(4.0), p), 4.0 * base);
    EXPECT_EQ(mixed_lp_norm(f.scaled(-0.5), p), 0.5 * base);
    EXPECT_NEAR(mixed_lp_norm(f.scaled(-3.0), p), 3.0 * base, 1e-14 * base);
  }
}

TEST(MixedLpNorm, ZeroField) {
  EXPECT_EQ(mixed_lp_norm(Field::zeros(make_grid(8, 8, 1.0)), MixedExponent::of(2, 2)), 0.0);
}

TEST(MixedLpNormLocal, ConstantOnUnitDomain) {
  const auto g = make_grid(64, 32, 2.0);
  const auto f = sample_function(g, [](double, double) { return 1.0; });
  EXPECT_NEAR(mixed_lp_norm_local(f, MixedExponent::of(1, 1), TimeDomain{1.0}), 2 * pi, 1e-12);
}

TEST(MixedLpNormLocal, FullDomainMatchesGlobalForSupportedField) {
  const auto g = make_grid(64, 32, 2.0);
  const auto f = sample_function(g, [](double x1, double x2) {
    return (x1 >= 0.0 && x1 < 2.0) ? std::sin(x1) * (2 + std::cos(x2)) : 0.0;
  });
  const auto p = MixedExponent::of(2, 3);
  EXPECT_NEAR(mixed_lp_norm_local(f, p, TimeDomain{2.0}), mixed_lp_norm(f, p), 1e-14);
}

TEST(MixedLpNormLocal, LinearRampClosedForm) {
  const auto g = make_grid(2048, 8, 2.0);
  const auto f = sample_function(g, [](double x1, double) { return x1; });
  const double v = mixed_lp_norm_local(f, MixedExponent::of(2, 2), TimeDomain{1.0});
  double riemann = 0.0;
  for (std::size_t i = 0; g.x1(i) < 1.0; ++i)
    if (g.x1(i) >= 0.0) riemann += g.x1(i) * g.x1(i) * g.dx1();
  EXPECT_NEAR(v, std::sqrt(2 * pi * riemann), 1e-12);
  EXPECT_NEAR(v, std::sqrt(2 * pi / 3), 3e-3);
}

TEST(MixedLpNormLocal, MonotoneInDomain) {
  const auto f = mbt::random_real(make_grid(64, 16, 2.0), 9);
  double prev = 0.0;
  for (double t : {0.1, 0.4, 0.9, 1.3, 2.0}) {
    const double v = mixed_lp_norm_local(f, MixedExponent::of(2, 1), TimeDomain{t});
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(MixedLpNormLocal, DomainBeyondWindowRaises) {
  const auto f = Field::zeros(make_grid(16, 16, 1.0));
  EXPECT_MB_ERROR(mixed_lp_norm_local(f, MixedExponent::of(2, 2), TimeDomain{1.5}),
                  ErrorCode::DomainExceedsWindow);
}

TEST(Convolve, DiscreteDeltaIsIdentity) {
  const auto g = make_grid(64, 32, 2.0);
  const auto f = mbt::random_bandlimited(g, 4, 8, 6);
  std::vector<Complex> d(g.size());
  d[g.index(g.n1() / 2, g.n2() / 2)] = 1.0 / (g.dx1() * g.dx2());
  const Field delta(g, d, FieldKind::Real);
  for (auto kind : {ConvolutionKind::Plane, ConvolutionKind::MixedPeriodic})
    EXPECT_LE(mbt::rel_l2(convolve(f, delta, kind), f), 1e-10);
}

TEST(Convolve, GaussianTimesPeriodicBumps) {
  const auto g = make_grid(512, 64, 16.0);
  const double v1 = 0.5, v2 = 0.8;
  const auto a = sample_function(g, [&](double x1, double x2) {
    return gaussian_density(x1, v1) * (1 + std::cos(x2));
  });
  const auto b = sample_function(g, [&](double x1, double x2) {
    return gaussian_density(x1, v2) * (1 + std::cos(x2));
  });
  // Periodic convolution of (1 + cos) with itself is 2 pi + pi cos.
  const auto expect = sample_function(g, [&](double x1, double x2) {
    return gaussian_density(x1, v1 + v2) * (2 * pi + pi * std::cos(x2));
  });
  Diagnostics diag;
  EXPECT_LE(mbt::rel_l2(convolve(a, b, ConvolutionKind::MixedPeriodic, &diag), expect), 1e-6);
  EXPECT_TRUE(diag.empty());
}

TEST(Convolve, DirectSummationOracleOnCoarseGrid) {
  const auto g = make_grid(16, 8, 2.0);
  const auto f = sample_function(g, [](double x1, double x2) {
    return std::exp(-4 * x1 * x1) * (1 + 0.5 * std::sin(x2));
  });
  const auto h = sample_function(g, [](double x1, double x2) {
    return std::exp(-6 * (x1 - 0.2) * (x1 - 0.2)) * (2 + std::cos(2 * x2));
  });
  const auto c = convolve(f, h, ConvolutionKind::MixedPeriodic);
  // Cyclic sum with the origin at the centre cell.
  const std::size_t n1 = g.n1(), n2 = g.n2();
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
          s += f(a, b) * h((i + n1 + n1 / 2 - a) % n1, (j + n2 + n2 / 2 - b) % n2);
      s *= g.dx1() * g.dx2();
      EXPECT_NEAR(std::abs(c(i, j) - s), 0.0, 1e-12);
    }
}

TEST(Convolve, GridMismatchRaises) {
  EXPECT_MB_ERROR(convolve(Field::zeros(make_grid(8, 8, 1.0)), Field::zeros(make_grid(16, 8, 1.0)),
                           ConvolutionKind::Plane),
                  ErrorCode::GridMismatch);
}

TEST(Convolve, PlaneWarnsWhenMarginViolated) {
  const auto g = make_grid(32, 32, 2.0);
  const auto edge = sample_function(g, [](double x1, double) { return std::exp(-(x1 - 1.8) * (x1 - 1.8)); });
  Diagnostics diag;
  convolve(edge, edge, ConvolutionKind::Plane, &diag);
  EXPECT_TRUE(diag.has(WarningKind::SupportMarginViolated));
}

TEST(ExactInequalities, YoungOnFiftyRandomPairs) {
  const auto g = make_grid(32, 32, 1.0);
  const std::vector<std::pair<double, double>> pairs{{1, 1}, {1.5, 1.2}, {2, 4.0 / 3}, {4, 1}, {1.25, 2}};
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto f = mbt::random_real(g, 100 + t), h = mbt::random_real(g, 200 + t);
    const auto [p1, p2] = pairs[t % pairs.size()];
    const auto [s1, s2] = pairs[(t + 2) % pairs.size()];
    auto r_of = [](double p, double s) {
      const double inv = 1 / p + 1 / s - 1;
      return inv <= 0 ? Exponent::infinity() : Exponent::finite(1 / inv);
    };
    const MixedExponent r{r_of(p1, s1), r_of(p2, s2)};
    const double lhs = mixed_lp_norm(convolve(f, h, ConvolutionKind::MixedPeriodic), r);
    const double rhs = mixed_lp_norm(f, MixedExponent::of(p1, p2)) * mixed_lp_norm(h, MixedExponent::of(s1, s2));
    EXPECT_LE(lhs, rhs * (1 + 1e-12)) << t;
  }
}

TEST(ExactInequalities, TriangleAndHolder) {
  const auto g = make_grid(32, 32, 1.0);
  const std::vector<MixedExponent> set{MixedExponent::of(1, 1), MixedExponent::of(2, 2),
                                       MixedExponent::of(1, kInf), MixedExponent::of(kInf, 2),
                                       MixedExponent::of(2, 4)};
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto f = mbt::random_real(g, 300 + t), h = mbt::random_real(g, 400 + t);
    const auto& p = set[t % set.size()];
    const double sum = mixed_lp_norm(linear_combination(1, f, 1, h), p);
    EXPECT_LE(sum, (mixed_lp_norm(f, p) + mixed_lp_norm(h, p)) * (1 + 1e-12));
    const double prod = mixed_lp_norm(pointwise_product(f, h), MixedExponent::of(1, 1));
    EXPECT_LE(prod, mixed_lp_norm(f, p) * mixed_lp_norm(h, p.conjugate()) * (1 + 1e-12));
  }
}

TEST(MixedLpNorm, InvariantUnderCyclicX2Shift) {
  const auto g = make_grid(32, 32, 1.0);
  const auto f = mbt::random_real(g, 17);
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.n2(); ++j) v[g.index(i, (j + 5) % g.n2())] = f(i, j);
  const Field shifted(g, v, FieldKind::Real);
  for (auto p : {MixedExponent::of(1, 1), MixedExponent::of(2, 3), MixedExponent::of(kInf, 2)})
    EXPECT_NEAR(mixed_lp_norm(shifted, p) / mixed_lp_norm(f, p), 1.0, 1e-12);
}
