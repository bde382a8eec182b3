#include "test_util.hpp"

using namespace mixbesov;
using std::numbers::pi;

namespace {

// Independent evaluation of the glue: theta(t) = a(t) / (a(t) + a(1 - t)).
double glue_a(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
double glue_theta(double t) { return glue_a(t) / (glue_a(t) + glue_a(1 - t)); }
double oracle_psi(double x) { return glue_theta((4.0 / 3.0 - std::abs(x)) * 3.0); }
double oracle_rho_j(int j, double x) {
  if (j < 0) return oracle_psi(x);
  const double s = std::ldexp(x, -j);
  return oracle_psi(s / 2) - oracle_psi(s);
}

const DyadicPartition kPart = build_partition();

}  // namespace

TEST(Partition, ValuesAtCheckpoints) {
  EXPECT_EQ(kPart.chi(0.0), 1.0);
  for (int j = 0; j < 8; ++j) EXPECT_EQ(kPart.rho_j(j, 0.0), 0.0);
  EXPECT_NEAR(kPart.rho(2.0), 1.0, 1e-15);
  EXPECT_NEAR(kPart.rho(1.0), 0.0, 1e-15);
  EXPECT_NEAR(kPart.rho(4.0), 0.0, 1e-15);
  for (double x : {0.3, 0.9, 1.1, 1.25, 1.7, 2.4, 2.6, 3.1})
    EXPECT_NEAR(kPart.rho(x), oracle_rho_j(0, x), 1e-14) << x;
}

TEST(Partition, SumsToOneAtFive) {
  double s = kPart.chi(5.0);
  for (int j = 0; j <= 6; ++j) s += kPart.rho(5.0 / std::ldexp(1.0, j));
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Partition, SupportsAndRange) {
  for (int i = -4000; i <= 4000; ++i) {
    const double x = i * 1e-3;
    const double c = kPart.chi(x), r = kPart.rho(x);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
    if (std::abs(x) >= 4.0 / 3.0) EXPECT_EQ(c, 0.0) << x;
    if (std::abs(x) <= 3.0 / 4.0 || std::abs(x) >= 8.0 / 3.0) EXPECT_EQ(r, 0.0) << x;
  }
}

TEST(Partition, ResidualAtAllGridFrequencies) {
  for (double L : {1.0, pi, 7.5}) {
    const auto g = make_grid(1024, 512, L);
    std::vector<double> freqs;
    for (std::size_t a = 0; a < g.n1(); ++a) freqs.push_back(g.xi1(a));
    for (std::size_t b = 0; b < g.n2(); ++b) freqs.push_back(g.xi2(b));
    EXPECT_LE(partition_residual(kPart, freqs), 1e-12);
  }
}

TEST(LpBlock, OneDirectionalBlockOfCosine) {
  const auto g = make_grid(256, 64, 8.0);
  const auto f = sample_function(g, [](double x1, double x2) { return std::exp(-x1 * x1) * std::cos(4 * x2); });
  const auto spec = forward_transform(f);
  for (int k = -1; k <= 5; ++k) {
    const auto b = lp_block(spec, kPart, BlockIndex{BlockIndex::All, k});
    if (k == 1)
      EXPECT_LE(mbt::rel_l2(b, f), 1e-10);
    else
      EXPECT_LE(std::sqrt(std::pow(mixed_lp_norm(b, MixedExponent::of(2, 2)), 2)) /
                    mixed_lp_norm(f, MixedExponent::of(2, 2)),
                1e-10)
          << k;
  }
}

TEST(LpBlock, LowBlockKeepsConstant) {
  const auto g = make_grid(32, 32, 2.0);
  const auto f = sample_function(g, [](double, double) { return 2.5; });
  EXPECT_LE(mbt::rel_l2(lp_block(f, kPart, BlockIndex{-1, -1}), f), 1e-14);
}

TEST(LpBlock, WarnsWhenBeyondNyquist) {
  const auto g = make_grid(32, 32, pi);
  Diagnostics diag;
  lp_block(Field::zeros(g), kPart, BlockIndex{4, 0}, &diag);
  EXPECT_TRUE(diag.has(WarningKind::TruncatedBlock));
  Diagnostics quiet;
  lp_block(Field::zeros(g), kPart, BlockIndex{2, 2}, &quiet);
  EXPECT_TRUE(quiet.empty());
}

TEST(LpBlock, InvalidIndexRaises) {
  EXPECT_MB_ERROR(lp_block(Field::zeros(make_grid(8, 8, 1.0)), kPart, BlockIndex{-2, 0}),
                  ErrorCode::InvalidArgument);
}

TEST(Decompose, ConstantLivesInLowestBlock) {
  const auto g = make_grid(64, 64, pi);
  const auto d = decompose(sample_function(g, [](double, double) { return 1.0; }), kPart);
  const auto norms = d.block_norms(MixedExponent::of(2, 2));
  for (int j = -1; j <= d.j_max(); ++j)
    for (int k = -1; k <= d.k_max(); ++k) {
      const double v = norms[d.slot(j, k)];
      if (j == -1 && k == -1)
        EXPECT_NEAR(v, 2 * pi, 1e-12);
      else
        EXPECT_LT(v, 1e-12);
    }
}

TEST(Decompose, HarmonicBlocksMatchMaskOracle) {
  const auto g = make_grid(64, 64, pi);
  const auto f = sample_function(g, [](double x1, double x2) { return std::polar(1.0, 8 * x1 + 2 * x2); });
  const auto d = decompose(f, kPart);
  const auto norms = d.block_norms(MixedExponent::of(2, 2));
  int nonzero = 0;
  for (int j = -1; j <= d.j_max(); ++j)
    for (int k = -1; k <= d.k_max(); ++k) {
      const double weight = oracle_rho_j(j, 8.0) * oracle_rho_j(k, 2.0);
      EXPECT_NEAR(norms[d.slot(j, k)], weight * 2 * pi, 1e-10) << j << "," << k;
      if (weight != 0.0) ++nonzero;
    }
  EXPECT_EQ(nonzero, 1);
  EXPECT_GT(norms[d.slot(2, 0)], 6.0);
}

TEST(Decompose, ReconstructsRandomFields) {
  const auto g = make_grid(64, 32, 2.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = mbt::random_bandlimited(g, s, 20, 10);
    EXPECT_LE(mbt::rel_l2(decompose(f, kPart).reconstruct(), f), 1e-10) << s;
  }
}

TEST(Decompose, BlockLevelsCoverNyquist) {
  const auto g = make_grid(128, 64, pi);
  const auto d = decompose(Field::zeros(g), kPart);
  EXPECT_GE(std::ldexp(1.0, d.j_max()), g.nyquist1());
  EXPECT_GE(std::ldexp(1.0, d.k_max()), g.nyquist2());
  EXPECT_LT(std::ldexp(1.0, d.j_max() - 1), g.nyquist1());
}

TEST(Decompose, NearOrthogonality) {
  const auto g = make_grid(64, 64, 2.0);
  const auto f = mbt::random_real(g, 8);
  const double scale = mixed_lp_norm(f, MixedExponent::of(2, 2));
  const auto spec = forward_transform(f);
  for (auto [j, k, jj, kk] : {std::array{0, 1, 2, 1}, {1, 1, 1, 3}, {-1, 2, 3, 2}, {2, 0, 4, 4}}) {
    const auto once = lp_block(spec, kPart, BlockIndex{j, k});
    const auto twice = lp_block(once, kPart, BlockIndex{jj, kk});
    EXPECT_LE(mixed_lp_norm(twice, MixedExponent::of(2, 2)), 1e-12 * scale);
  }
}

TEST(Decompose, IdenticalAcrossRuns) {
  const auto g = make_grid(64, 64, 2.0);
  const auto f = mbt::random_real(g, 21);
  const auto a = decompose(f, kPart).block_norms(MixedExponent::of(2, 2));
  const auto b = decompose(f, kPart).block_norms(MixedExponent::of(2, 2));
  EXPECT_EQ(a, b);
}

TEST(BesovNormLp, ZeroField) {
  const BesovParams bp{0.5, 0.5, MixedExponent::of(2, 2), MixedExponent::of(2, 2)};
  EXPECT_EQ(besov_norm_lp(decompose(Field::zeros(make_grid(32, 32, 1.0)), kPart), bp), 0.0);
}

TEST(BesovNormLp, SingleBlockHarmonic) {
  const auto g = make_grid(64, 64, pi);
  const auto f = sample_function(g, [](double x1, double x2) { return std::polar(1.0, 8 * x1 + 2 * x2); });
  const BesovParams bp{0.5, 0.5, MixedExponent::of(2, 2), MixedExponent::of(2, 2)};
  // Only block (2,0) survives: weight 2^{0.5*2 + 0.5*0} times ||f||_{(2,2)} = 2 pi.
  EXPECT_NEAR(besov_norm_lp(decompose(f, kPart), bp), 4 * pi, 1e-10);
}

TEST(BesovNormLp, ConstantOnlyUsesLowestBlock) {
  const auto g = make_grid(64, 64, pi);
  const auto f = sample_function(g, [](double, double) { return 3.0; });
  const BesovParams bp{0.3, 0.4, MixedExponent::of(2, 2), MixedExponent::of(2, 2)};
  EXPECT_NEAR(besov_norm_lp(decompose(f, kPart), bp), 3.0 * 2 * pi * std::pow(2.0, -0.7), 1e-12);
}

TEST(BesovNormLp, Homogeneity) {
  const auto f = mbt::random_real(make_grid(64, 32, 2.0), 4);
  const BesovParams bp{0.3, 0.6, MixedExponent::of(2, 3), MixedExponent::of(1, 2)};
  const double base = besov_norm_lp(decompose(f, kPart), bp);
  EXPECT_NEAR(besov_norm_lp(decompose(f.scaled(-2.0), kPart), bp), 2 * base, 1e-13 * base);
}

TEST(BesovNormLp, SumOrderMatchesDirectDisplay) {
  const auto g = make_grid(64, 32, 2.0);
  const auto f = mbt::random_real(g, 12);
  const BesovParams bp{0.25, 0.75, MixedExponent::of(2, 2), MixedExponent::of(1, 3)};
  const auto d = decompose(f, kPart);
  const auto norms = d.block_norms(bp.p);
  double outer = 0.0;
  for (int j = -1; j <= d.j_max(); ++j) {
    double inner = 0.0;
    for (int k = -1; k <= d.k_max(); ++k)
      inner += std::pow(std::pow(2.0, bp.alpha2 * k) * norms[d.slot(j, k)], 3.0);
    outer += std::pow(2.0, bp.alpha1 * j) * std::cbrt(inner);
  }
  EXPECT_NEAR(besov_norm_lp(d, bp) / outer, 1.0, 1e-12);
}

TEST(SpectralDerivative, HarmonicEigenvalue) {
  const auto g = make_grid(64, 16, pi);
  const auto f = sample_function(g, [](double x1, double) { return std::polar(1.0, 8 * x1); });
  const auto d = spectral_derivative(f, 1);
  const auto p = MixedExponent::of(2, 2);
  EXPECT_NEAR(mixed_lp_norm(d, p) / mixed_lp_norm(f, p), 8.0, 1e-12);
}

TEST(SpectralDerivative, ConstantInX2HasZeroX2Derivative) {
  const auto g = make_grid(64, 32, 4.0);
  const auto f = sample_function(g, [](double x1, double) { return std::exp(-x1 * x1); });
  EXPECT_LT(spectral_derivative(f, 2).max_abs(), 1e-13);
}

TEST(SpectralDerivative, GaussianClosedForm) {
  const auto g = make_grid(256, 8, 8.0);
  const auto f = sample_function(g, [](double x1, double) { return std::exp(-x1 * x1); });
  const auto expect = sample_function(g, [](double x1, double) { return -2 * x1 * std::exp(-x1 * x1); });
  const auto d = spectral_derivative(f, 1);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err += std::norm(d.values()[i] - expect.values()[i]);
  EXPECT_LE(std::sqrt(err * g.dx1() * g.dx2()), 1e-8);
  EXPECT_TRUE(d.is_real());
}

TEST(SpectralDerivative, WarnsOnMarginViolation) {
  const auto g = make_grid(64, 8, 2.0);
  const auto f = sample_function(g, [](double x1, double) { return std::cos(x1); });
  Diagnostics diag;
  spectral_derivative(f, 1, 1, &diag);
  EXPECT_TRUE(diag.has(WarningKind::SupportMarginViolated));
}

TEST(BesovParams, DifferenceRangeIsChecked) {
  const BesovParams bad{1.2, 0.5, MixedExponent::of(2, 2), MixedExponent::of(2, 2)};
  EXPECT_MB_ERROR(bad.require_difference_range(), ErrorCode::ExponentOutOfRange);
}
