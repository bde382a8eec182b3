#ifndef MIXBESOV_CORPUS_HPP
#define MIXBESOV_CORPUS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mixbesov/difference_norms.hpp"
#include "mixbesov/grid.hpp"
#include "mixbesov/littlewood_paley.hpp"
#include "mixbesov/random_fields.hpp"

namespace mixbesov {

/// A named test field. `build` samples the member on any grid of the family;
/// stochastic members are drawn once at the reference resolution and
/// subsampled so that every resolution sees the same realization.
struct CorpusMember {
  std::string name;
  std::string provenance;
  bool margin_waiver = false;
  std::function<Field(const GridSpec&)> build;
};

struct Corpus {
  std::string version;
  std::vector<CorpusMember> members;

  const CorpusMember& at(const std::string& name) const {
    for (const auto& m : members)
      if (m.name == name) return m;
    throw Error(ErrorCode::InvalidArgument, "no corpus member named " + name);
  }
};

/// Keeps every `factor`-th sample on both axes.
inline Field subsample(const Field& f, std::size_t factor) {
  const auto& g = f.grid();
  if (factor == 1) return f;
  if (factor == 0 || g.n1() % factor != 0 || g.n2() % factor != 0)
    throw Error(ErrorCode::InvalidArgument, "subsampling factor must divide both axes");
  const GridSpec coarse = make_grid(g.n1() / factor, g.n2() / factor, g.window_half_width());
  std::vector<Complex> v(coarse.size());
  for (std::size_t i = 0; i < coarse.n1(); ++i)
    for (std::size_t j = 0; j < coarse.n2(); ++j)
      v[coarse.index(i, j)] = f(i * factor, j * factor);
  return Field(coarse, std::move(v), f.kind());
}

/// theta((R - |x|) / w): 1 on |x| <= R - w, 0 on |x| >= R.
inline double plateau(double x, double radius, double width) {
  return smooth_step((radius - std::abs(x)) / width);
}

namespace detail {

struct Mode {
  double xi;
  double n;
  double amp;
  double phase;
};

inline std::vector<Mode> random_modes(std::uint64_t seed, int count, int max_xi, int max_n,
                                      double decay) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> xi(0, max_xi), n(-max_n, max_n);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal;
  std::vector<Mode> modes;
  for (int m = 0; m < count; ++m) {
    Mode md{static_cast<double>(xi(rng)), static_cast<double>(n(rng)), normal(rng), phase(rng)};
    md.amp *= std::pow(1.0 + std::abs(md.xi) + std::abs(md.n), -decay) / std::sqrt(count);
    modes.push_back(md);
  }
  return modes;
}

inline Field generated_once(const GridSpec& g, std::size_t reference_n,
                            const std::function<Field(const GridSpec&)>& make) {
  if (g.n1() != g.n2() || g.n1() > reference_n || reference_n % g.n1() != 0)
    throw Error(ErrorCode::InvalidArgument,
                "stochastic corpus members need square grids dividing the reference size " +
                    std::to_string(reference_n));
  const GridSpec ref = make_grid(reference_n, reference_n, g.window_half_width());
  return subsample(make(ref), reference_n / g.n1());
}

}  // namespace detail

inline constexpr std::size_t kCorpusReferenceN = 512;

/// The ten-member corpus used by the equivalence experiment. Members with
/// x1 support inside |x1| < L/2 satisfy the default margin; the two pure
/// harmonics carry a waiver.
inline Corpus default_corpus(std::uint64_t seed = 20240611) {
  Corpus c;
  c.version = "default-v1";
  c.members.push_back({"gauss_narrow_x_raised_cos", "exp(-x1^2/(2*0.25^2)) * (1+cos x2)/2", false,
                       [](const GridSpec& g) {
                         return sample_function(g, [](double x1, double x2) {
                           return std::exp(-x1 * x1 / (2 * 0.0625)) * (1 + std::cos(x2)) / 2;
                         });
                       }});
  c.members.push_back({"gauss_x_von_mises", "exp(-x1^2/(2*0.3^2)) * exp(cos x2 - 1)", false,
                       [](const GridSpec& g) {
                         return sample_function(g, [](double x1, double x2) {
                           return std::exp(-x1 * x1 / (2 * 0.09)) * std::exp(std::cos(x2) - 1);
                         });
                       }});
  c.members.push_back({"bump_cos6_cos3", "plateau(x1; L/2, L/4) * cos(6 x1) * cos(3 x2)", false,
                       [](const GridSpec& g) {
                         const double L = g.window_half_width();
                         return sample_function(g, [L](double x1, double x2) {
                           return plateau(x1, L / 2, L / 4) * std::cos(6 * x1) * std::cos(3 * x2);
                         });
                       }});
  c.members.push_back({"bump_cos12x1_5x2", "plateau(x1; L/2, L/4) * cos(12 x1 + 5 x2)", false,
                       [](const GridSpec& g) {
                         const double L = g.window_half_width();
                         return sample_function(g, [L](double x1, double x2) {
                           return plateau(x1, L / 2, L / 4) * std::cos(12 * x1 + 5 * x2);
                         });
                       }});
  c.members.push_back({"single_block_cos4_cos2", "cos(4 x1) cos(2 x2): block (1,0) only", true,
                       [](const GridSpec& g) {
                         return sample_function(g, [](double x1, double x2) {
                           return std::cos(4 * x1) * std::cos(2 * x2);
                         });
                       }});
  c.members.push_back({"harmonic_8_2", "exp(i(8 x1 + 2 x2))", true, [](const GridSpec& g) {
                         return sample_function(g, [](double x1, double x2) {
                           return std::polar(1.0, 8 * x1 + 2 * x2);
                         });
                       }});
  const auto modes_a = detail::random_modes(seed ^ 0xa1u, 24, 24, 12, 0.0);
  c.members.push_back({"random_bandlimited", "plateau window * 24 random modes |xi|<=24 |n|<=12",
                       false, [modes_a](const GridSpec& g) {
                         const double L = g.window_half_width();
                         return sample_function(g, [&](double x1, double x2) {
                           double s = 0.0;
                           for (const auto& m : modes_a)
                             s += m.amp * std::cos(m.xi * x1 + m.n * x2 + m.phase);
                           return plateau(x1, L / 2, L / 4) * s;
                         });
                       }});
  const auto modes_b = detail::random_modes(seed ^ 0xb2u, 40, 40, 30, 1.5);
  c.members.push_back({"random_decaying_spectrum",
                       "plateau window * 40 random modes, amplitude (1+|xi|+|n|)^-1.5", false,
                       [modes_b](const GridSpec& g) {
                         const double L = g.window_half_width();
                         return sample_function(g, [&](double x1, double x2) {
                           double s = 0.0;
                           for (const auto& m : modes_b)
                             s += m.amp * std::cos(m.xi * x1 + m.n * x2 + m.phase);
                           return plateau(x1, L / 2, L / 4) * s;
                         });
                       }});
  c.members.push_back(
      {"brownian_sheet_windowed",
       "Brownian sheet on [0,1]^2 drawn at 512^2, times plateau(x1; L/2, L/4) plateau(x2; 2.8, 1.2)",
       false, [seed](const GridSpec& g) {
         return detail::generated_once(g, kCorpusReferenceN, [seed](const GridSpec& ref) {
           const Field sheet = ProductGaussianSampler(CovSpec::brownian_sheet(1.0), ref, seed)
                                   .sample(0);
           const double L = ref.window_half_width();
           std::vector<Complex> v(sheet.values().begin(), sheet.values().end());
           for (std::size_t i = 0; i < ref.n1(); ++i)
             for (std::size_t j = 0; j < ref.n2(); ++j)
               v[ref.index(i, j)] *= plateau(ref.x1(i), L / 2, L / 4) * plateau(ref.x2(j), 2.8, 1.2);
           return Field(ref, std::move(v), FieldKind::Real);
         });
       }});
  c.members.push_back(
      {"she_snapshot_windowed",
       "SHE path (T=L, 128 modes) drawn at 512^2, times a time window on [0, 0.7 L]", false,
       [seed](const GridSpec& g) {
         return detail::generated_once(g, kCorpusReferenceN, [seed](const GridSpec& ref) {
           const double L = ref.window_half_width();
           SheConfig cfg{L, 128, ref.n1() / 2, ref.n2(), seed ^ 0x5eu};
           const Field u = SheSampler(cfg).sample(0);
           return multiply_time_window(u, WindowSpec(0.7 * L, 0.2 * L));
         });
       }});
  return c;
}

}  // namespace mixbesov

#endif  // MIXBESOV_CORPUS_HPP
