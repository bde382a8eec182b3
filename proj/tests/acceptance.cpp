// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "mixbesov/mixbesov.hpp"

using namespace mixbesov;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

BesovParams besov(double a1, double a2, MixedExponent p, MixedExponent q) {
  BesovParams b;
  b.alpha1 = a1;
  b.alpha2 = a2;
  b.p = p;
  b.q = q;
  return b;
}

const BesovParams kDefault = besov(0.3, 0.4, MixedExponent::of(2, 2), MixedExponent::of(2, 2));

Outcome norm_equivalence() {
  const auto rep = run_equivalence_experiment(default_corpus(), kDefault, {256, pi, 6, true});
  return {rep.pass(50.0, 0.25), fmt("band constant %.4g (limit 50), max refinement change %.3g (limit 0.25)",
                                    rep.band_constant(), rep.max_delta)};
}

Field random_trig(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::uniform_int_distribution<int> xi(-40, 40), m(-30, 30);
  std::vector<std::array<double, 4>> modes(30);
  for (auto& md : modes) md = {double(xi(rng)), double(m(rng)), n(rng), n(rng)};
  return sample_function(g, [&](double x1, double x2) {
    Complex s = 0.0;
    for (const auto& md : modes) s += Complex(md[2], md[3]) * std::polar(1.0, md[0] * x1 + md[1] * x2);
    return s;
  });
}

double rel_l2(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.values()[i] - b.values()[i]);
    den += std::norm(b.values()[i]);
  }
  return std::sqrt(num / den);
}

Outcome partition_and_reconstruction() {
  const auto part = build_partition();
  const auto g = make_grid(512, 512, pi);
  std::vector<double> freqs;
  for (std::size_t a = 0; a < g.n1(); ++a) freqs.push_back(g.xi1(a));
  for (std::size_t b = 0; b < g.n2(); ++b) freqs.push_back(g.xi2(b));
  const double residual = partition_residual(part, freqs);
  const auto g2 = make_grid(128, 128, pi);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = random_trig(g2, s);
    worst = std::max(worst, rel_l2(decompose(f, part).reconstruct(), f));
  }
  return {residual <= 1e-12 && worst <= 1e-10,
          fmt("partition residual %.2e, worst reconstruction residual %.2e over 20 fields",
              residual, worst)};
}

Outcome exact_inequalities() {
  const auto rep = run_inequality_suite(SuiteKind::MixedLp, Corpus{}, kDefault);
  return {rep.pass() && rep.violations == 0,
          fmt("%zu violations over %zu instances", rep.violations, rep.instances.size())};
}

Outcome bernstein() {
  const auto rep = run_inequality_suite(SuiteKind::Bernstein, Corpus{}, kDefault);
  double widest = 0.0;
  for (const auto& g : rep.groups) widest = std::max(widest, g.value);
  return {rep.pass(), fmt("widest per-group band %.3f (limit 1.5) over %zu groups", widest,
                          rep.groups.size())};
}

Outcome brownian_moments() {
  const std::size_t n = 128;
  const ProductGaussianSampler s(CovSpec::brownian_sheet(1.0), make_grid(n, n, pi), 2024);
  std::vector<std::pair<std::size_t, std::size_t>> lags;
  for (std::size_t m : {1, 2, 4, 8, 16}) lags.push_back({m, m});
  const auto shapes = increment_shapes(s, MomentKind::Rect, lags, 2048);
  bool ok = true;
  double worst_m2 = 0.0, worst_k = 0.0;
  for (std::size_t l = 0; l < lags.size(); ++l) {
    const double h = static_cast<double>(lags[l].first) / n;
    const double z2 = std::abs(shapes[l].second - h * h) / shapes[l].second_se;
    const double zk = std::abs(shapes[l].kurtosis - 3.0) / shapes[l].kurtosis_se;
    worst_m2 = std::max(worst_m2, z2);
    worst_k = std::max(worst_k, zk);
    ok = ok && z2 <= 4.0 && zk <= 6.0;
  }
  return {ok, fmt("max |E(Box)^2 - h^2| = %.2f SE (limit 4), max |kurtosis - 3| = %.2f SE (limit 6)",
                  worst_m2, worst_k)};
}

Outcome she_regularity() {
  SheConfig cfg;
  cfg.t_max = 1.0;
  cfg.n_modes = 128;
  cfg.n_time = 256;
  cfg.n_space = 256;
  cfg.seed = 17;
  const SheSampler s(cfg);
  const auto rep = estimate_increment_moments(s, LagGrid(s.geometry().grid, 4, 2), {2.0}, 1024);
  const auto fit = regularity_fit(rep);
  const double s1 = fit.dir1.slopes[0], s2 = fit.dir2.slopes[0];

  SheConfig stat = cfg;
  stat.t_max = 40.0;
  stat.n_time = 8;
  stat.seed = 18;
  const SheSampler ss(stat);
  const auto [var, se] = pointwise_second_moment(ss, 2 * stat.n_time - 1, stat.n_space / 2, 1024);
  const double z = std::abs(var - pi / 4) / se;
  const bool ok = std::abs(s1 - 0.5) <= 0.1 && std::abs(s2 - 1.0) <= 0.1 && z <= 4.0;
  return {ok, fmt("slope dir1 %.3f (0.5 +- 0.1), dir2 %.3f (1.0 +- 0.1), variance %.4f vs pi/4 at %.2f SE",
                  s1, s2, var, z)};
}

Outcome kolmogorov() {
  const auto law = brownian_sheet_moment_law(6, 1.0 / 256);
  const double tol = 0.1;
  auto verdict = [&](double a) {
    return kolmogorov_check(law, besov(a, a, MixedExponent::of(2, 4), MixedExponent::of(2, 2)), tol);
  };
  // Slope 2 per axis at p2 = 4, q = 2 admits (1 + 2a) * 2 <= 2, i.e. a <= 0.
  const double threshold = 0.0;
  double boundary = 0.0;
  bool monotone = true, prev = true;
  for (int i = 1; i < 1000; ++i) {
    const double a = i * 1e-3;
    const bool p = verdict(a).pass;
    if (p) boundary = a;
    monotone = monotone && (prev || !p);
    prev = p;
  }
  const bool inside = verdict(0.01).pass;
  const bool outside = !verdict(0.06).pass && !verdict(0.2).pass && !verdict(0.6).pass;
  const double reported = verdict(0.01).alpha1_max;
  const bool ok = inside && outside && monotone && std::abs(boundary - threshold) <= 0.05 &&
                  std::abs(reported - threshold) <= 0.05;
  return {ok, fmt("pass at 0.01: %s, fail at 0.06/0.2/0.6: %s, scanned boundary %.3f, alpha_max %.3f "
                  "(analytic threshold 0)",
                  inside ? "yes" : "no", outside ? "yes" : "no", boundary, reported)};
}

Outcome multiplier_and_lifting() {
  const auto mult = run_inequality_suite(SuiteKind::Multiplier, Corpus{}, kDefault);
  const auto lift = run_inequality_suite(SuiteKind::Lifting, default_corpus(), kDefault);
  double growth = 0.0, cmax = 0.0;
  for (const auto& g : mult.groups) {
    if (g.statistic == "growth") growth = std::max(growth, g.value);
    cmax = std::max(cmax, g.max_constant);
  }
  double lmax = 0.0;
  bool finite = std::isfinite(cmax);
  for (const auto& g : lift.groups) {
    lmax = std::max(lmax, g.max_constant);
    finite = finite && std::isfinite(g.max_constant);
  }
  return {mult.pass() && lift.pass() && finite,
          fmt("multiplier growth %.3f (limit 1.5), max constants: multiplier %.3g, lifting %.3g",
              growth, cmax, lmax)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"norm equivalence", norm_equivalence},
      {"partition and reconstruction", partition_and_reconstruction},
      {"exact mixed-norm inequalities", exact_inequalities},
      {"Bernstein constants", bernstein},
      {"Brownian sheet moments", brownian_moments},
      {"heat equation regularity", she_regularity},
      {"Kolmogorov verdict", kolmogorov},
      {"multiplier and lifting", multiplier_and_lifting},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
