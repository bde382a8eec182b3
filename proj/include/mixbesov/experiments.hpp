#ifndef MIXBESOV_EXPERIMENTS_HPP
#define MIXBESOV_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixbesov/corpus.hpp"
#include "mixbesov/difference_norms.hpp"
#include "mixbesov/fourier.hpp"
#include "mixbesov/littlewood_paley.hpp"
#include "mixbesov/mixed_norms.hpp"
#include "mixbesov/random_fields.hpp"

namespace mixbesov {

inline nlohmann::json to_json(const MixedExponent& p) {
  auto one = [](const Exponent& e) -> nlohmann::json {
    if (e.is_infinite()) return "inf";
    return e.value();
  };
  return nlohmann::json::array({one(p.p1), one(p.p2)});
}

inline nlohmann::json to_json(const BesovParams& b) {
  return {{"alpha", {b.alpha1, b.alpha2}}, {"p", to_json(b.p)}, {"q", to_json(b.q)}};
}

inline nlohmann::json to_json(const std::vector<Warning>& ws) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : ws)
    out.push_back({{"kind", w.kind == WarningKind::SupportMarginViolated ? "SupportMarginViolated"
                                                                          : "TruncatedBlock"},
                   {"detail", w.detail}});
  return out;
}

// ---------------------------------------------------------------------------
// Norm equivalence.

struct NormTriple {
  double lp = 0.0;
  double plain = 0.0;
  double sup = 0.0;
};

inline NormTriple all_norms(const Field& f, const BesovParams& params, const LagGrid& lags,
                            Diagnostics* diag = nullptr) {
  NormTriple t;
  t.lp = besov_norm_lp(decompose(f, build_partition()), params);
  t.plain = besov_norm_diff(f, params, lags, DiffVariant::Plain, diag);
  t.sup = besov_norm_diff(f, params, lags, DiffVariant::Sup, nullptr);
  return t;
}

struct EquivalenceSetup {
  std::size_t n = 256;
  double half_width = std::numbers::pi;
  int k_max = 6;
  bool refine = true;  // also evaluate at 2n with k_max + 1
};

struct EquivalenceRow {
  std::string name;
  bool margin_waiver = false;
  NormTriple coarse;
  NormTriple fine;
  double r2 = 0.0;   // plain / lp
  double r12 = 0.0;  // plain / sup
  double r2_fine = 0.0;
  double r12_fine = 0.0;
  double delta_r2 = 0.0;  // |fine / coarse - 1|
  double delta_r12 = 0.0;
  std::vector<Warning> warnings;
};

struct EquivalenceReport {
  std::string corpus_version;
  BesovParams params;
  EquivalenceSetup setup;
  std::vector<EquivalenceRow> rows;
  double band_lo = std::numeric_limits<double>::infinity();
  double band_hi = 0.0;
  double max_delta = 0.0;

  /// Smallest C with every ratio in [1/C, C].
  double band_constant() const { return std::max(band_hi, 1.0 / band_lo); }

  bool pass(double c_limit = 50.0, double delta_limit = 0.25) const {
    return !rows.empty() && band_constant() <= c_limit && max_delta <= delta_limit;
  }

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j{{"name", r.name},
                       {"margin_waiver", r.margin_waiver},
                       {"besov_lp", r.coarse.lp},
                       {"besov_diff_plain", r.coarse.plain},
                       {"besov_diff_sup", r.coarse.sup},
                       {"r2", r.r2},
                       {"r12", r.r12},
                       {"warnings", mixbesov::to_json(r.warnings)}};
      if (setup.refine) {
        j["fine"] = {{"besov_lp", r.fine.lp},
                     {"besov_diff_plain", r.fine.plain},
                     {"besov_diff_sup", r.fine.sup},
                     {"r2", r.r2_fine},
                     {"r12", r.r12_fine}};
        j["delta_r2"] = r.delta_r2;
        j["delta_r12"] = r.delta_r12;
      }
      rs.push_back(j);
    }
    return {{"corpus_version", corpus_version},
            {"grid", {setup.n, setup.n}},
            {"window_half_width", setup.half_width},
            {"k_max", setup.k_max},
            {"refine", setup.refine},
            {"rows", rs},
            {"band", {band_lo, band_hi}},
            {"band_constant", band_constant()},
            {"max_delta", max_delta}};
  }
};

inline EquivalenceReport run_equivalence_experiment(const Corpus& corpus,
                                                    const BesovParams& params,
                                                    const EquivalenceSetup& setup = {}) {
  params.require_difference_range();
  EquivalenceReport rep;
  rep.corpus_version = corpus.version;
  rep.params = params;
  rep.setup = setup;
  const GridSpec coarse = make_grid(setup.n, setup.n, setup.half_width);
  const LagGrid coarse_lags(coarse, setup.k_max);
  std::optional<GridSpec> fine;
  std::optional<LagGrid> fine_lags;
  if (setup.refine) {
    fine = make_grid(2 * setup.n, 2 * setup.n, setup.half_width);
    fine_lags.emplace(*fine, setup.k_max + 1);
  }
  for (const auto& m : corpus.members) {
    EquivalenceRow row;
    row.name = m.name;
    row.margin_waiver = m.margin_waiver;
    Diagnostics diag;
    row.coarse = all_norms(m.build(coarse), params, coarse_lags, &diag);
    row.r2 = row.coarse.plain / row.coarse.lp;
    row.r12 = row.coarse.plain / row.coarse.sup;
    rep.band_lo = std::min({rep.band_lo, row.r2, row.r12});
    rep.band_hi = std::max({rep.band_hi, row.r2, row.r12});
    if (setup.refine) {
      row.fine = all_norms(m.build(*fine), params, *fine_lags, nullptr);
      row.r2_fine = row.fine.plain / row.fine.lp;
      row.r12_fine = row.fine.plain / row.fine.sup;
      row.delta_r2 = std::abs(row.r2_fine / row.r2 - 1.0);
      row.delta_r12 = std::abs(row.r12_fine / row.r12 - 1.0);
      rep.max_delta = std::max({rep.max_delta, row.delta_r2, row.delta_r12});
    }
    row.warnings = diag.warnings();
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Inequality suites.

enum class SuiteKind { Bernstein, Embedding, YoungConv, Lifting, Multiplier, MixedLp };

inline const char* to_string(SuiteKind k) {
  switch (k) {
    case SuiteKind::Bernstein: return "bernstein";
    case SuiteKind::Embedding: return "embedding";
    case SuiteKind::YoungConv: return "young_conv";
    case SuiteKind::Lifting: return "lifting";
    case SuiteKind::Multiplier: return "multiplier";
    case SuiteKind::MixedLp: return "mixed_lp";
  }
  return "?";
}

inline SuiteKind suite_kind_from_string(const std::string& s) {
  for (auto k : {SuiteKind::Bernstein, SuiteKind::Embedding, SuiteKind::YoungConv,
                 SuiteKind::Lifting, SuiteKind::Multiplier, SuiteKind::MixedLp})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown suite kind '" + s + "'");
}

/// One inequality lhs <= C * rhs; constant = lhs / rhs.
struct SuiteInstance {
  std::string group;
  std::string label;
  double scale = 0.0;  // dyadic index, window width, or pair number
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
};

/// Summary of a group of instances. `statistic` is the max/min constant
/// ratio ("band"), the largest successive ratio ("growth"), the largest
/// constant ("max_constant") or the violation count ("violations").
struct SuiteGroup {
  std::string name;
  std::string statistic;
  double value = 0.0;
  double limit = 0.0;  // 0: no limit beyond finiteness
  double min_constant = 0.0;
  double max_constant = 0.0;
  bool pass = false;
};

struct SuiteReport {
  SuiteKind kind = SuiteKind::MixedLp;
  std::vector<SuiteInstance> instances;
  std::vector<SuiteGroup> groups;
  std::vector<Warning> warnings;
  std::size_t violations = 0;

  bool pass() const {
    return !groups.empty() &&
           std::all_of(groups.begin(), groups.end(), [](const SuiteGroup& g) { return g.pass; });
  }

  nlohmann::json to_json() const {
    nlohmann::json is = nlohmann::json::array(), gs = nlohmann::json::array();
    for (const auto& i : instances)
      is.push_back({{"group", i.group}, {"label", i.label}, {"scale", i.scale},
                    {"lhs", i.lhs}, {"rhs", i.rhs}, {"constant", i.constant}});
    for (const auto& g : groups)
      gs.push_back({{"name", g.name}, {"statistic", g.statistic}, {"value", g.value},
                    {"limit", g.limit}, {"min_constant", g.min_constant},
                    {"max_constant", g.max_constant}, {"pass", g.pass}});
    return {{"kind", to_string(kind)}, {"pass", pass()}, {"violations", violations},
            {"groups", gs}, {"instances", is}, {"warnings", mixbesov::to_json(warnings)}};
  }
};

struct SuiteOptions {
  std::size_t n = 256;
  double half_width = std::numbers::pi;
  std::size_t bernstein_n = 512;
  std::size_t pairs = 100;
  std::size_t pair_grid = 64;
  std::uint64_t seed = 7;
  double band_limit = 1.5;
  double growth_limit = 1.5;
};

namespace detail {

inline SuiteInstance instance(std::string group, std::string label, double scale, double lhs,
                              double rhs) {
  return {std::move(group), std::move(label), scale, lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

// Summarizes every group present in the instance list, in first-seen order.
inline void summarize(SuiteReport& rep, const std::string& statistic, double limit) {
  std::vector<std::string> names;
  for (const auto& i : rep.instances)
    if (std::find(names.begin(), names.end(), i.group) == names.end()) names.push_back(i.group);
  for (const auto& name : names) {
    std::vector<double> cs;
    bool finite = true;
    for (const auto& i : rep.instances)
      if (i.group == name) {
        cs.push_back(i.constant);
        finite = finite && std::isfinite(i.constant) && i.constant > 0.0 && i.rhs > 0.0;
      }
    SuiteGroup g;
    g.name = name;
    g.statistic = statistic;
    g.limit = limit;
    g.min_constant = *std::min_element(cs.begin(), cs.end());
    g.max_constant = *std::max_element(cs.begin(), cs.end());
    if (statistic == "band") {
      g.value = g.max_constant / g.min_constant;
    } else if (statistic == "growth") {
      g.value = 0.0;
      for (std::size_t t = 1; t < cs.size(); ++t) g.value = std::max(g.value, cs[t] / cs[t - 1]);
    } else {
      g.value = g.max_constant;
    }
    g.pass = finite && (limit <= 0.0 || g.value <= limit);
    rep.groups.push_back(g);
  }
}

// Kernel F^{-1}[m(2^-j xi_axis)] (x) profile on the other axis, realized on
// the grid by filtering a unit-mass spike at the origin.
inline Field scaled_kernel(const GridSpec& g, int axis, int j, bool annulus,
                           const std::function<double(double)>& profile) {
  const DyadicPartition part;
  const std::size_t i0 = g.n1() / 2, j0 = g.n2() / 2;  // x1 = 0, x2 = 0
  std::vector<Complex> v(g.size());
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t c = 0; c < g.n2(); ++c) {
      if (axis == 1)
        v[g.index(i, c)] = i == i0 ? profile(g.x2(c)) / g.dx1() : 0.0;
      else
        v[g.index(i, c)] = c == j0 ? profile(g.x1(i)) / g.dx2() : 0.0;
    }
  const Field spike(g, std::move(v), FieldKind::Real);
  auto m = [&](double xi) {
    const double s = std::ldexp(xi, -j);
    return annulus ? part.rho(s) : part.chi(s);
  };
  const auto spec = apply_multiplier(forward_transform(spike), [&](double xi1, double xi2) {
    return m(axis == 1 ? xi1 : xi2);
  });
  return inverse_transform(spec, FieldKind::Real);
}

inline Field mixed_kernel(const GridSpec& g, int j, int k) {
  const DyadicPartition part;
  std::vector<Complex> v(g.size());
  v[g.index(g.n1() / 2, g.n2() / 2)] = 1.0 / (g.dx1() * g.dx2());
  const Field spike(g, std::move(v), FieldKind::Real);
  const auto spec = apply_multiplier(forward_transform(spike), [&](double xi1, double xi2) {
    return part.chi(std::ldexp(xi1, -j)) * part.chi(std::ldexp(xi2, -k));
  });
  return inverse_transform(spec, FieldKind::Real);
}

inline std::string p_label(const MixedExponent& p) {
  return "p=(" + p.p1.to_string() + "," + p.p2.to_string() + ")";
}

inline SuiteReport bernstein_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = SuiteKind::Bernstein;
  const GridSpec g = make_grid(opt.bernstein_n, opt.bernstein_n, opt.half_width);
  const auto x2_profile = [](double x2) { return std::exp(std::cos(x2)); };
  const auto x1_profile = [](double x1) { return std::exp(-8.0 * x1 * x1); };
  const std::vector<MixedExponent> ps{MixedExponent::of(1, 1), MixedExponent::of(2, 2),
                                      MixedExponent{Exponent::infinity(), Exponent::finite(2)}};
  for (const auto& p : ps) {
    const std::string pl = p_label(p);
    for (int axis : {1, 2}) {
      const auto& prof = axis == 1 ? std::function<double(double)>(x2_profile)
                                   : std::function<double(double)>(x1_profile);
      const std::string ax = axis == 1 ? "x1" : "x2";
      for (int j = 1; j <= 5; ++j) {
        const double scale = std::ldexp(1.0, j);
        const Field ball = scaled_kernel(g, axis, j, false, prof);
        const double nb = mixed_lp_norm(ball, p);
        const double nd = mixed_lp_norm(spectral_derivative(ball, axis, 1), p);
        rep.instances.push_back(instance("ball " + ax + " N=1 " + pl,
                                         "|d f| <= C 2^j |f|, j=" + std::to_string(j), j, nd,
                                         scale * nb));
        const Field ann = scaled_kernel(g, axis, j, true, prof);
        const double na = mixed_lp_norm(ann, p);
        for (int N : {1, 2}) {
          const double ndn = mixed_lp_norm(spectral_derivative(ann, axis, N), p);
          rep.instances.push_back(instance("annulus " + ax + " N=" + std::to_string(N) + " " + pl,
                                           "|f| <= C 2^-jN |d^N f|, j=" + std::to_string(j), j,
                                           na, ndn / std::pow(scale, N)));
        }
      }
    }
    for (int j = 1; j <= 5; ++j)
      for (int k = 1; k <= 5; ++k) {
        const Field f = mixed_kernel(g, j, k);
        const double nf = mixed_lp_norm(f, p);
        const double nd = mixed_lp_norm(spectral_derivative(spectral_derivative(f, 1), 2), p);
        rep.instances.push_back(instance("ball mixed d1d2 " + pl,
                                         "j=" + std::to_string(j) + " k=" + std::to_string(k),
                                         10 * j + k, nd, std::ldexp(nf, j + k)));
      }
  }
  summarize(rep, "band", opt.band_limit);
  return rep;
}

inline BesovParams with_alpha(BesovParams b, double a1, double a2) {
  b.alpha1 = a1;
  b.alpha2 = a2;
  return b;
}

inline double lp_norm_of(const BlockDecomposition& d, const BesovParams& b) {
  return besov_norm_lp(d, b);
}

inline SuiteReport embedding_suite(const Corpus& corpus, const BesovParams& params,
                                   const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = SuiteKind::Embedding;
  const GridSpec g = make_grid(opt.n, opt.n, opt.half_width);
  const double a1 = params.alpha1, a2 = params.alpha2;
  for (const auto& m : corpus.members) {
    const Field f = m.build(g);
    const auto d = decompose(f, build_partition());
    // (i): B^{a}_{p,(q3,q2)} in B^{(a1-0.2, a2)}_{p,(q1,q2)} with q3 = inf, q1 = 1.
    {
      BesovParams lhs = with_alpha(params, a1 - 0.2, a2);
      lhs.q = MixedExponent{Exponent::finite(1), params.q.p2};
      BesovParams rhs = params;
      rhs.q = MixedExponent{Exponent::infinity(), params.q.p2};
      rep.instances.push_back(instance("(i) x1", m.name, 0, lp_norm_of(d, lhs), lp_norm_of(d, rhs)));
      BesovParams lhs2 = with_alpha(params, a1, a2 - 0.2);
      lhs2.q = MixedExponent{params.q.p1, Exponent::finite(1)};
      BesovParams rhs2 = params;
      rhs2.q = MixedExponent{params.q.p1, Exponent::infinity()};
      rep.instances.push_back(
          instance("(i) x2", m.name, 0, lp_norm_of(d, lhs2), lp_norm_of(d, rhs2)));
    }
    // (ii): B^{a}_{p,q} in L^p.
    rep.instances.push_back(
        instance("(ii)", m.name, 0, mixed_lp_norm(f, params.p), lp_norm_of(d, params)));
    // (iii)/(iv): lowering integrability from p3 = 1 costs 1/p3 - 1/p_i smoothness.
    {
      const double gain1 = 1.0 - params.p.p1.reciprocal();
      BesovParams rhs = with_alpha(params, a1 + gain1, a2);
      rhs.p = MixedExponent{Exponent::finite(1), params.p.p2};
      rep.instances.push_back(
          instance("(iii)", m.name, 0, lp_norm_of(d, params), lp_norm_of(d, rhs)));
      const double gain2 = 1.0 - params.p.p2.reciprocal();
      BesovParams rhs2 = with_alpha(params, a1, a2 + gain2);
      rhs2.p = MixedExponent{params.p.p1, Exponent::finite(1)};
      rep.instances.push_back(
          instance("(iv)", m.name, 0, lp_norm_of(d, params), lp_norm_of(d, rhs2)));
    }
  }
  summarize(rep, "max_constant", 0.0);
  return rep;
}

inline SuiteReport lifting_suite(const Corpus& corpus, const BesovParams& params,
                                 const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = SuiteKind::Lifting;
  const GridSpec g = make_grid(opt.n, opt.n, opt.half_width);
  const auto part = build_partition();
  for (const auto& m : corpus.members) {
    const Field f = m.build(g);
    const double rhs = besov_norm_lp(decompose(f, part), params);
    Diagnostics diag;
    const Field d1 = spectral_derivative(f, 1, 1, m.margin_waiver ? nullptr : &diag);
    const Field d2 = spectral_derivative(f, 2, 1);
    rep.instances.push_back(instance(
        "d/dx1: (a1-1, a2) <= (a1, a2)", m.name, 0,
        besov_norm_lp(decompose(d1, part), with_alpha(params, params.alpha1 - 1, params.alpha2)),
        rhs));
    rep.instances.push_back(instance(
        "d/dx2: (a1, a2-1) <= (a1, a2)", m.name, 0,
        besov_norm_lp(decompose(d2, part), with_alpha(params, params.alpha1, params.alpha2 - 1)),
        rhs));
    for (const auto& w : diag.warnings()) rep.warnings.push_back(w);
  }
  summarize(rep, "max_constant", 0.0);
  return rep;
}

inline SuiteReport young_conv_suite(const BesovParams& params, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = SuiteKind::YoungConv;
  const GridSpec g = make_grid(opt.n, opt.n, opt.half_width);
  const auto part = build_partition();
  struct Bump {
    double s;
    double kappa;
    double shift;
  };
  const std::vector<Bump> bumps{{0.2, 1.0, 0.0}, {0.35, 2.0, 0.3}, {0.5, 0.5, -0.2},
                                {0.25, 4.0, 0.1}};
  std::vector<Field> fields;
  for (const auto& b : bumps)
    fields.push_back(sample_function(g, [b](double x1, double x2) {
      return std::exp(-(x1 - b.shift) * (x1 - b.shift) / (2 * b.s * b.s)) *
             std::exp(b.kappa * (std::cos(x2) - 1));
    }));
  // (p1, p2) -> p and (q1, q2) -> q with 1/p = 1/p1 + 1/p2 - 1.
  struct Combo {
    double p1, p2, q1, q2;
  };
  const std::vector<Combo> combos{{2, 1, 2, 1}, {4.0 / 3, 4.0 / 3, 2, 2}, {1, 1, 1, 1},
                                  {2, 2, 4.0 / 3, 4.0 / 3}};
  const double b1 = 0.2, b2 = 0.3;
  auto expo = [](double r) {
    return r <= 0.0 ? Exponent::infinity() : Exponent::finite(1.0 / r);
  };
  const std::size_t nf = fields.size();
  std::vector<BesovParams> pf, pg, pc;
  for (const auto& c : combos) {
    const Exponent p = expo(1 / c.p1 + 1 / c.p2 - 1);
    const Exponent q = expo(1 / c.q1 + 1 / c.q2 - 1);
    pf.push_back({params.alpha1, params.alpha2, MixedExponent::of(c.p1, c.p1),
                  MixedExponent::of(c.q1, c.q1)});
    pg.push_back({b1, b2, MixedExponent::of(c.p2, c.p2), MixedExponent::of(c.q2, c.q2)});
    pc.push_back({params.alpha1 + b1, params.alpha2 + b2, MixedExponent{p, p}, MixedExponent{q, q}});
  }
  // Norms indexed [combo][field] and [combo][pair].
  std::vector<std::vector<double>> nf_f(combos.size()), nf_g(combos.size()), n_conv(combos.size());
  for (std::size_t a = 0; a < nf; ++a) {
    const auto d = decompose(fields[a], part);
    for (std::size_t c = 0; c < combos.size(); ++c) {
      nf_f[c].push_back(besov_norm_lp(d, pf[c]));
      nf_g[c].push_back(besov_norm_lp(d, pg[c]));
    }
  }
  for (std::size_t a = 0; a < nf; ++a)
    for (std::size_t b = 0; b < nf; ++b) {
      Diagnostics diag;
      const auto d = decompose(convolve(fields[a], fields[b], ConvolutionKind::MixedPeriodic, &diag),
                               part);
      for (std::size_t c = 0; c < combos.size(); ++c) n_conv[c].push_back(besov_norm_lp(d, pc[c]));
    }
  for (std::size_t c = 0; c < combos.size(); ++c) {
    const auto& cb = combos[c];
    const std::string group = "p=(" + Exponent::finite(cb.p1).to_string() + "," +
                              Exponent::finite(cb.p2).to_string() + ") q=(" +
                              Exponent::finite(cb.q1).to_string() + "," +
                              Exponent::finite(cb.q2).to_string() + ")";
    for (std::size_t a = 0; a < nf; ++a)
      for (std::size_t b = 0; b < nf; ++b)
        rep.instances.push_back(instance(group,
                                         "bump" + std::to_string(a) + " * bump" + std::to_string(b),
                                         static_cast<double>(a * nf + b), n_conv[c][a * nf + b],
                                         nf_f[c][a] * nf_g[c][b]));
  }
  summarize(rep, "max_constant", 0.0);
  return rep;
}

/// Random-field members for the multiplier suite: SHE paths with x1 = t on
/// [0, L) and one Brownian sheet.
inline std::vector<std::pair<std::string, Field>> random_field_corpus(const GridSpec& g,
                                                                     std::uint64_t seed) {
  std::vector<std::pair<std::string, Field>> out;
  for (std::uint64_t s = 0; s < 3; ++s) {
    SheConfig cfg{g.window_half_width(), std::min<std::size_t>(128, g.n2() / 2), g.n1() / 2,
                  g.n2(), seed + s};
    out.emplace_back("she_seed" + std::to_string(seed + s), SheSampler(cfg).sample(0));
  }
  out.emplace_back("brownian_sheet",
                   ProductGaussianSampler(CovSpec::brownian_sheet(1.0), g, seed).sample(0));
  return out;
}

inline SuiteReport multiplier_suite(const BesovParams& params, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = SuiteKind::Multiplier;
  const GridSpec g = make_grid(opt.n, opt.n, opt.half_width);
  const double t_window = 2.0 * opt.half_width / std::numbers::pi;
  const LagGrid lags(g, 6);
  const std::vector<double> widths{0.4 * t_window / 2.0, 0.2 * t_window / 2.0,
                                   0.1 * t_window / 2.0};
  for (const auto& [name, f] : random_field_corpus(g, opt.seed)) {
    const double local = local_besov_norm_diff2(f, params, TimeDomain{t_window}, lags);
    for (double w : widths) {
      const WindowSpec win(t_window, w);
      Diagnostics diag;
      const double lhs = besov_norm_diff(multiply_time_window(f, win), params, lags,
                                         DiffVariant::Plain, &diag);
      rep.instances.push_back(instance(name, "width=" + std::to_string(w), w, lhs,
                                       win.c1_norm() * local));
      for (const auto& wn : diag.warnings()) rep.warnings.push_back(wn);
    }
  }
  summarize(rep, "growth", opt.growth_limit);
  return rep;
}

inline SuiteReport mixed_lp_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.kind = SuiteKind::MixedLp;
  const GridSpec g = make_grid(opt.pair_grid, opt.pair_grid, opt.half_width);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, 4);
  auto random_field = [&] {
    std::vector<Complex> v(g.size());
    for (auto& x : v) x = unif(rng);
    return Field(g, std::move(v), FieldKind::Real);
  };
  const std::vector<MixedExponent> test_set{MixedExponent::of(1, 1), MixedExponent::of(2, 2),
                                            MixedExponent::of(1, std::numeric_limits<double>::infinity()),
                                            MixedExponent{Exponent::infinity(), Exponent::finite(2)},
                                            MixedExponent::of(2, 4)};
  const std::vector<double> ladder{1.0, 1.5, 2.0, 3.0, 4.0};
  constexpr double kSlack = 1e-12;
  auto check = [&](const char* group, std::size_t t, const std::string& label, double lhs,
                   double rhs) {
    auto inst = instance(group, label, static_cast<double>(t), lhs, rhs);
    if (lhs > rhs + kSlack * std::max(1.0, rhs)) ++rep.violations;
    rep.instances.push_back(inst);
  };
  for (std::size_t t = 0; t < opt.pairs; ++t) {
    const Field f = random_field(), h = random_field();
    const auto& p = test_set[t % test_set.size()];
    check("triangle", t, p_label(p), mixed_lp_norm(linear_combination(1, f, 1, h), p),
          mixed_lp_norm(f, p) + mixed_lp_norm(h, p));
  }
  for (std::size_t t = 0; t < opt.pairs; ++t) {
    const Field f = random_field(), h = random_field();
    const auto& p = test_set[t % test_set.size()];
    const MixedExponent pc = p.conjugate();
    check("holder", t, p_label(p), mixed_lp_norm(pointwise_product(f, h), MixedExponent::of(1, 1)),
          mixed_lp_norm(f, p) * mixed_lp_norm(h, pc));
  }
  for (std::size_t t = 0; t < opt.pairs; ++t) {
    const Field f = random_field(), h = random_field();
    // Draw exponents until 0 <= 1/p + 1/s - 1 <= 1 holds on both axes.
    double p[2], s[2];
    for (int a = 0; a < 2; ++a) {
      do {
        p[a] = ladder[pick(rng)];
        s[a] = ladder[pick(rng)];
      } while (1 / p[a] + 1 / s[a] - 1 < 0.0);
    }
    auto r_of = [](double x, double y) {
      const double inv = 1 / x + 1 / y - 1;
      return inv <= 0.0 ? Exponent::infinity() : Exponent::finite(1 / inv);
    };
    const MixedExponent pp = MixedExponent::of(p[0], p[1]), ss = MixedExponent::of(s[0], s[1]);
    const MixedExponent rr{r_of(p[0], s[0]), r_of(p[1], s[1])};
    Diagnostics diag;
    const Field conv = convolve(f, h, ConvolutionKind::MixedPeriodic, &diag);
    check("young", t, p_label(pp) + " " + p_label(ss) + " -> " + p_label(rr),
          mixed_lp_norm(conv, rr), mixed_lp_norm(f, pp) * mixed_lp_norm(h, ss));
  }
  // A group passes when it has no violations.
  for (const char* name : {"triangle", "holder", "young"}) {
    SuiteGroup grp;
    grp.name = name;
    grp.statistic = "violations";
    double worst = 0.0, best = std::numeric_limits<double>::infinity();
    std::size_t bad = 0;
    for (const auto& i : rep.instances)
      if (i.group == name) {
        worst = std::max(worst, i.constant);
        best = std::min(best, i.constant);
        if (i.lhs > i.rhs + kSlack * std::max(1.0, i.rhs)) ++bad;
      }
    grp.value = static_cast<double>(bad);
    grp.min_constant = best;
    grp.max_constant = worst;
    grp.pass = bad == 0;
    rep.groups.push_back(grp);
  }
  return rep;
}

}  // namespace detail

inline SuiteReport run_inequality_suite(SuiteKind kind, const Corpus& corpus,
                                        const BesovParams& params,
                                        const SuiteOptions& opt = {}) {
  if (corpus.members.empty() && (kind == SuiteKind::Embedding || kind == SuiteKind::Lifting))
    throw Error(ErrorCode::InvalidArgument, "suite needs a nonempty corpus");
  switch (kind) {
    case SuiteKind::Bernstein: return detail::bernstein_suite(opt);
    case SuiteKind::Embedding: return detail::embedding_suite(corpus, params, opt);
    case SuiteKind::YoungConv: return detail::young_conv_suite(params, opt);
    case SuiteKind::Lifting: return detail::lifting_suite(corpus, params, opt);
    case SuiteKind::Multiplier: return detail::multiplier_suite(params, opt);
    case SuiteKind::MixedLp: return detail::mixed_lp_suite(opt);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown suite kind");
}

}  // namespace mixbesov

#endif  // MIXBESOV_EXPERIMENTS_HPP
