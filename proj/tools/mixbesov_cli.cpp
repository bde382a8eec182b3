// mixbesov: command-line driver for norms, sampling, moment estimation and
// the experiment suites. Every subcommand writes a JSON report
//   {schema_version, command, params, results[], warnings[]}
// and prints a short summary. Exit codes: 0 ok, 1 validation error, 2 suite
// failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixbesov/mixbesov.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mixbesov;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSuiteFailure = 2;

// ---------------------------------------------------------------------------
// Argument parsing helpers.

double parse_number(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  }
  if (pos != s.size()) throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty list");
  return out;
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
  const auto v = parse_list(s);
  if (v.size() != 2)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " needs two comma-separated values");
  return {v[0], v[1]};
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw Error(ErrorCode::InvalidArgument, "grid must look like 256x256");
  const double a = parse_number(s.substr(0, x)), b = parse_number(s.substr(x + 1));
  if (!(a >= 1 && b >= 1) || a != std::floor(a) || b != std::floor(b))
    throw Error(ErrorCode::InvalidArgument, "grid sizes must be positive integers");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

MixedExponent parse_exponent(const std::string& s, const char* what) {
  const auto [a, b] = parse_pair(s, what);
  return MixedExponent::of(a, b);
}

// ---------------------------------------------------------------------------
// Options shared by the subcommands.

struct Common {
  std::string out;  // JSON report path
  std::string field_out;
  std::string config;
  bool no_timestamp = false;
};

struct BesovArgs {
  std::string alpha = "0.3,0.4";
  std::string p = "2,2";
  std::string q = "2,2";

  BesovParams params() const {
    const auto [a1, a2] = parse_pair(alpha, "--alpha");
    return BesovParams{a1, a2, parse_exponent(p, "--p"), parse_exponent(q, "--q")};
  }
};

struct SamplerArgs {
  std::string model = "brownian_sheet";
  std::string grid = "128x128";
  double t_max = 1.0;
  double half_width = std::numbers::pi;
  std::size_t modes = 128;
  std::uint64_t seed = 7;
};

// Field-producing subcommands write the field to --out and the report to --report.
void add_common(CLI::App* app, Common& c, bool produces_field) {
  if (produces_field) {
    app->add_option("--out", c.field_out, "Field file (MBDF); an index is appended for several");
    app->add_option("--report", c.out, "Write the JSON report to this path");
  } else {
    app->add_option("--out", c.out, "Write the JSON report to this path");
  }
  app->add_option("--config", c.config,
                  "JSON file whose keys mirror flag names; flags given on the command line win");
  app->add_flag("--no-timestamp", c.no_timestamp, "Omit the timestamp from the report");
}

void add_besov(CLI::App* app, BesovArgs& b) {
  app->add_option("--alpha", b.alpha, "Smoothness a1,a2")->capture_default_str();
  app->add_option("--p", b.p, "Integrability p1,p2 (inf allowed)")->capture_default_str();
  app->add_option("--q", b.q, "Summability q1,q2 (inf allowed)")->capture_default_str();
}

void add_sampler(CLI::App* app, SamplerArgs& s) {
  app->add_option("--model", s.model, "brownian_sheet or she")
      ->check(CLI::IsMember({"brownian_sheet", "she"}))
      ->capture_default_str();
  app->add_option("--grid", s.grid, "Sample grid N1xN2 (she: time steps x space points)")
      ->capture_default_str();
  app->add_option("--T", s.t_max, "Time horizon")->capture_default_str();
  app->add_option("--half-width", s.half_width, "Window half-width L (brownian_sheet)")
      ->capture_default_str();
  app->add_option("--modes", s.modes, "Galerkin modes (she)")->capture_default_str();
  app->add_option("--seed", s.seed, "Random seed")->capture_default_str();
}

// Fills options that were not given on the command line from a JSON config.
void apply_config(CLI::App* app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    CLI::Option* opt = nullptr;
    try {
      opt = app->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ",";
        text += value[i].is_string() ? value[i].get<std::string>() : value[i].dump();
      }
    } else if (value.is_boolean()) {
      if (!value.get<bool>()) continue;
      text = "true";
    } else {
      text = value.dump();
    }
    opt->add_result(text);
    opt->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Reports.

struct Report {
  json doc;

  Report(const std::string& command, json params) {
    doc = {{"schema_version", kSchemaVersion},
           {"command", command},
           {"params", std::move(params)},
           {"results", json::array()},
           {"warnings", json::array()}};
  }

  void add_result(json r) { doc["results"].push_back(std::move(r)); }

  void add_warnings(const std::vector<Warning>& ws) {
    for (auto& w : mixbesov::to_json(ws)) doc["warnings"].push_back(w);
  }

  void write(const Common& c) {
    if (!c.no_timestamp) {
      const std::time_t now = std::time(nullptr);
      std::ostringstream os;
      os << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
      doc["timestamp"] = os.str();
    }
    if (c.out.empty()) return;
    std::ofstream os(c.out, std::ios::trunc);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + c.out + " for writing");
    os << doc.dump(2) << '\n';
    if (!os) throw Error(ErrorCode::IoError, "write failed for " + c.out);
  }
};

json besov_json(const BesovParams& b) { return mixbesov::to_json(b); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

fs::path indexed_path(const fs::path& base, std::size_t idx, std::size_t count) {
  if (count == 1) return base;
  std::ostringstream os;
  os << base.stem().string() << '_' << std::setw(4) << std::setfill('0') << idx
     << base.extension().string();
  return base.parent_path() / os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  os << text;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_norm(const Common& c, const std::string& in, const BesovArgs& b) {
  const BesovParams params = b.params();
  const Field f = read_field(in);
  Diagnostics diag;
  check_support_margin(f, &diag, "norm");
  const double v = besov_norm_lp(decompose(f, build_partition()), params);
  Report r("norm", {{"in", in}, {"besov", besov_json(params)}});
  r.add_result({{"besov_lp", v}});
  r.add_warnings(diag.warnings());
  r.write(c);
  std::cout << "besov_lp = " << fmt(v) << '\n';
  return kExitOk;
}

struct DiffArgs {
  std::string in;
  int variant = 2;
  int k_max = 6;
  std::size_t finest = 1;
  double domain = 0.0;
};

int cmd_diffnorm(const Common& c, const DiffArgs& d, const BesovArgs& b) {
  const BesovParams params = b.params();
  const Field f = read_field(d.in);
  const LagGrid lags(f.grid(), d.k_max, d.finest);
  Diagnostics diag;
  DifferenceNormParts parts;
  json p{{"in", d.in}, {"besov", besov_json(params)}, {"variant", d.variant},
         {"k_max", d.k_max}, {"finest", d.finest}};
  if (d.domain > 0.0) {
    if (d.variant != 2)
      throw Error(ErrorCode::InvalidArgument, "--domain is only defined for variant 2");
    parts = local_besov_norm_diff2_parts(f, params, TimeDomain{d.domain}, lags);
    p["domain"] = d.domain;
  } else {
    parts = besov_norm_diff_parts(f, params, lags, d.variant == 1 ? DiffVariant::Sup
                                                                  : DiffVariant::Plain,
                                  &diag);
  }
  Report r("diffnorm", p);
  r.add_result({{"besov_diff", parts.total()},
                {"parts", {{"lp", parts.lp}, {"dir1", parts.dir1}, {"dir2", parts.dir2},
                           {"rect", parts.rect}}}});
  r.add_warnings(diag.warnings());
  r.write(c);
  std::cout << "besov_diff(variant " << d.variant << ") = " << fmt(parts.total()) << '\n';
  return kExitOk;
}

int cmd_decompose(const Common& c, const std::string& in, const std::string& p_text,
                  const std::string& csv) {
  const MixedExponent p = parse_exponent(p_text, "--p");
  const Field f = read_field(in);
  const auto d = decompose(f, build_partition());
  const auto norms = d.block_norms(p);
  std::ostringstream os;
  os.precision(17);
  os << "j,k,norm\n";
  Report r("decompose", {{"in", in}, {"p", mixbesov::to_json(p)}});
  for (int j = -1; j <= d.j_max(); ++j)
    for (int k = -1; k <= d.k_max(); ++k) {
      const double v = norms[d.slot(j, k)];
      os << j << ',' << k << ',' << v << '\n';
      r.add_result({{"j", j}, {"k", k}, {"norm", v}});
    }
  if (csv.empty())
    std::cout << os.str();
  else
    write_text(csv, os.str());
  r.write(c);
  return kExitOk;
}

CovSpec covariance_named(const std::string& name, double t_max) {
  if (name == "brownian_sheet") return CovSpec::brownian_sheet(t_max);
  if (name == "ou") {
    auto ou = [](double s, double t) { return std::exp(-std::abs(s - t)); };
    return CovSpec{ou, ou, DomainTag::Rectangle, t_max, t_max};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown covariance '" + name + "'");
}

int cmd_sample_gauss(const Common& c, const std::string& cov_name, const SamplerArgs& s,
                     std::size_t count, const std::string& field_out) {
  const auto [n1, n2] = parse_grid(s.grid);
  const GridSpec g = make_grid(n1, n2, s.half_width);
  const ProductGaussianSampler sampler(covariance_named(cov_name, s.t_max), g, s.seed);
  Report r("sample-gauss", {{"cov", cov_name}, {"grid", {n1, n2}}, {"T", s.t_max},
                            {"half_width", s.half_width}, {"count", count}, {"seed", s.seed}});
  for (std::size_t i = 0; i < count; ++i) {
    const Field f = sampler.sample(i);
    json res{{"index", i}, {"l2", mixed_lp_norm(f, MixedExponent::of(2, 2))}};
    if (!field_out.empty()) {
      const fs::path path = indexed_path(field_out, i, count);
      write_field(f, path);
      res["file"] = path.string();
    }
    r.add_result(res);
  }
  r.write(c);
  std::cout << "sampled " << count << " field(s) on " << n1 << "x" << n2 << '\n';
  return kExitOk;
}

SheConfig she_config(const SamplerArgs& s) {
  const auto [nt, nx] = parse_grid(s.grid);
  return SheConfig{s.t_max, s.modes, nt, nx, s.seed};
}

int cmd_simulate_she(const Common& c, const SamplerArgs& s, const std::string& field_out) {
  const SheConfig cfg = she_config(s);
  const Field u = simulate_she(cfg);
  Report r("simulate-she", {{"T", cfg.t_max}, {"modes", cfg.n_modes},
                            {"grid", {cfg.n_time, cfg.n_space}}, {"seed", cfg.seed}});
  json res{{"field_grid", {u.grid().n1(), u.grid().n2()}},
           {"l2", mixed_lp_norm(u, MixedExponent::of(2, 2))}};
  if (!field_out.empty()) {
    write_field(u, field_out);
    res["file"] = field_out;
  }
  r.add_result(res);
  r.write(c);
  std::cout << "simulated SHE path on " << cfg.n_time << " time steps x " << cfg.n_space
            << " points\n";
  return kExitOk;
}

struct MomentArgs {
  std::size_t samples = 256;
  int k_max = 4;
  std::size_t finest = 1;
  std::string p_list = "2";
  std::string csv;
};

json fit_json(const SlopeFit& f) {
  auto num = [](double x) -> json {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
  };
  json slopes = json::array(), hw = json::array();
  for (double v : f.slopes) slopes.push_back(num(v));
  for (double v : f.half_widths) hw.push_back(num(v));
  return {{"slopes", slopes}, {"half_widths", hw}, {"r_squared", num(f.r_squared)},
          {"points", f.points}};
}

MomentReport run_moments(const SamplerArgs& s, const MomentArgs& m) {
  const auto p_list = parse_list(m.p_list);
  if (s.model == "she") {
    const SheSampler sampler(she_config(s));
    const LagGrid lags(sampler.geometry().grid, m.k_max, m.finest);
    return estimate_increment_moments(sampler, lags, p_list, m.samples);
  }
  const auto [n1, n2] = parse_grid(s.grid);
  const ProductGaussianSampler sampler(CovSpec::brownian_sheet(s.t_max),
                                       make_grid(n1, n2, s.half_width), s.seed);
  const LagGrid lags(sampler.geometry().grid, m.k_max, m.finest);
  return estimate_increment_moments(sampler, lags, p_list, m.samples);
}

json sampler_json(const SamplerArgs& s) {
  json j{{"model", s.model}, {"grid", s.grid}, {"T", s.t_max}, {"seed", s.seed}};
  if (s.model == "she")
    j["modes"] = s.modes;
  else
    j["half_width"] = s.half_width;
  return j;
}

int cmd_moments(const Common& c, const SamplerArgs& s, const MomentArgs& m) {
  const MomentReport rep = run_moments(s, m);
  json params = sampler_json(s);
  params.update({{"samples", m.samples}, {"k_max", m.k_max}, {"finest", m.finest},
                 {"p", parse_list(m.p_list)}});
  Report r("moments", params);
  json res = rep.to_json();
  for (double p : rep.p_list) {
    const RegularityFit fit = regularity_fit(rep, p);
    res["fits"].push_back({{"p", p}, {"rect", fit_json(fit.rect)}, {"dir1", fit_json(fit.dir1)},
                           {"dir2", fit_json(fit.dir2)}});
    std::cout << "p=" << fmt(p) << "  slope dir1 " << fmt(fit.dir1.slopes[0]) << "  dir2 "
              << fmt(fit.dir2.slopes[0]) << "  rect (" << fmt(fit.rect.slopes[0]) << ", "
              << fmt(fit.rect.slopes[1]) << ")\n";
  }
  r.add_result(res);
  if (!m.csv.empty()) write_text(m.csv, rep.to_csv());
  r.write(c);
  return kExitOk;
}

int cmd_kolmogorov(const Common& c, const SamplerArgs& s, MomentArgs m, const BesovArgs& b,
                   bool exact, double tol) {
  const BesovParams params = b.params();
  json p{{"besov", besov_json(params)}, {"tolerance", tol}, {"exact", exact}};
  MomentReport rep;
  if (exact) {
    rep = brownian_sheet_moment_law(m.k_max + 1, 1.0 / 256);
    p["model"] = "brownian_sheet_exact";
  } else {
    if (params.p.p2.is_infinite())
      throw Error(ErrorCode::ExponentOrderingViolated, "exponents must be finite");
    m.p_list = fmt(params.p.p2.value());
    rep = run_moments(s, m);
    p.update(sampler_json(s));
    p.update({{"samples", m.samples}, {"k_max", m.k_max}, {"finest", m.finest}});
  }
  const KolmogorovVerdict v = kolmogorov_check(rep, params, tol);
  Report r("kolmogorov", p);
  r.add_result(v.to_json());
  r.write(c);
  std::cout << "kolmogorov verdict: " << (v.pass ? "pass" : "fail") << "  (alpha_max "
            << fmt(v.alpha1_max) << ", " << fmt(v.alpha2_max) << ")\n";
  return kExitOk;
}

int cmd_equivalence(const Common& c, const BesovArgs& b, const EquivalenceSetup& setup,
                    std::uint64_t seed) {
  const BesovParams params = b.params();
  const Corpus corpus = default_corpus(seed);
  const EquivalenceReport rep = run_equivalence_experiment(corpus, params, setup);
  Report r("equivalence", {{"besov", besov_json(params)}, {"corpus_seed", seed}});
  r.add_result(rep.to_json());
  for (const auto& row : rep.rows) r.add_warnings(row.warnings);
  r.write(c);
  for (const auto& row : rep.rows)
    std::cout << std::left << std::setw(28) << row.name << " r2 " << std::setw(10) << fmt(row.r2)
              << " r12 " << std::setw(10) << fmt(row.r12) << " delta " << fmt(std::max(row.delta_r2, row.delta_r12))
              << '\n';
  std::cout << "band constant " << fmt(rep.band_constant()) << ", max delta " << fmt(rep.max_delta)
            << " -> " << (rep.pass() ? "pass" : "FAIL") << '\n';
  return rep.pass() ? kExitOk : kExitSuiteFailure;
}

int cmd_suite(const Common& c, const std::string& kind_name, const BesovArgs& b,
              const SuiteOptions& opt, std::uint64_t corpus_seed) {
  const SuiteKind kind = suite_kind_from_string(kind_name);
  const BesovParams params = b.params();
  const Corpus corpus = default_corpus(corpus_seed);
  const SuiteReport rep = run_inequality_suite(kind, corpus, params, opt);
  Report r("suite", {{"kind", kind_name}, {"besov", besov_json(params)}, {"n", opt.n},
                     {"pairs", opt.pairs}, {"seed", opt.seed}, {"corpus_seed", corpus_seed}});
  r.add_result(rep.to_json());
  r.add_warnings(rep.warnings);
  r.write(c);
  for (const auto& g : rep.groups)
    std::cout << std::left << std::setw(44) << g.name << ' ' << g.statistic << ' '
              << fmt(g.value) << "  C in [" << fmt(g.min_constant) << ", " << fmt(g.max_constant)
              << "]  " << (g.pass ? "ok" : "FAIL") << '\n';
  std::cout << "suite " << kind_name << ": " << (rep.pass() ? "pass" : "FAIL") << '\n';
  return rep.pass() ? kExitOk : kExitSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-smoothness Besov norms, random fields and experiment suites", "mixbesov"};
  app.require_subcommand(1);

  Common common;
  BesovArgs besov;
  SamplerArgs sampler;
  MomentArgs moments;
  DiffArgs diff;
  std::string in, csv, cov_name = "brownian_sheet", p_only = "2,2", suite_kind;
  std::size_t count = 1;
  bool exact = false, no_refine = false;
  double tol = 0.1;
  EquivalenceSetup eq;
  SuiteOptions suite;
  std::uint64_t corpus_seed = 20240611;

  auto* norm = app.add_subcommand("norm", "Littlewood-Paley Besov norm of a field file");
  norm->add_option("--in", in, "Field file (MBDF)")->required();
  add_besov(norm, besov);

  auto* dn = app.add_subcommand("diffnorm", "Difference-characterization norm of a field file");
  dn->add_option("--in", diff.in, "Field file (MBDF)")->required();
  dn->add_option("--variant", diff.variant, "1: sup over shifts, 2: plain increments")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  dn->add_option("--k-max", diff.k_max, "Finest lag level")->capture_default_str();
  dn->add_option("--finest", diff.finest, "Finest lag in grid steps")->capture_default_str();
  dn->add_option("--domain", diff.domain, "Localize to [0,T] x torus (variant 2)");
  add_besov(dn, besov);

  auto* dec = app.add_subcommand("decompose", "Per-block mixed norms as CSV");
  dec->add_option("--in", in, "Field file (MBDF)")->required();
  dec->add_option("--p", p_only, "Block norm exponent p1,p2")->capture_default_str();
  dec->add_option("--csv", csv, "CSV path (default: standard output)");

  auto* sg = app.add_subcommand("sample-gauss", "Sample product-covariance Gaussian fields");
  sg->add_option("--cov", cov_name, "brownian_sheet or ou")
      ->check(CLI::IsMember({"brownian_sheet", "ou"}))
      ->capture_default_str();
  sg->add_option("--count", count, "Number of samples")->capture_default_str();
  add_sampler(sg, sampler);

  auto* she = app.add_subcommand("simulate-she", "Simulate one stochastic heat equation path");
  add_sampler(she, sampler);

  auto* mom = app.add_subcommand("moments", "Monte Carlo increment moments and slope fits");
  add_sampler(mom, sampler);
  mom->add_option("--samples", moments.samples, "Number of samples")->capture_default_str();
  mom->add_option("--k-max", moments.k_max, "Finest lag level")->capture_default_str();
  mom->add_option("--finest", moments.finest, "Finest lag in grid steps")->capture_default_str();
  mom->add_option("--moments", moments.p_list, "Moment orders, comma separated")
      ->capture_default_str();
  mom->add_option("--csv", moments.csv, "Write the moment table as CSV");

  auto* kol = app.add_subcommand("kolmogorov", "Kolmogorov-type verdict from fitted moment slopes");
  add_sampler(kol, sampler);
  add_besov(kol, besov);
  kol->add_option("--samples", moments.samples, "Number of samples")->capture_default_str();
  kol->add_option("--k-max", moments.k_max, "Finest lag level")->capture_default_str();
  kol->add_option("--finest", moments.finest, "Finest lag in grid steps")->capture_default_str();
  kol->add_option("--tol", tol, "Slope tolerance")->capture_default_str();
  kol->add_flag("--exact", exact, "Use the exact Brownian-sheet moment law instead of sampling");

  auto* equiv = app.add_subcommand("equivalence", "Norm equivalence experiment on the corpus");
  add_besov(equiv, besov);
  equiv->add_option("--n", eq.n, "Grid size per axis")->capture_default_str();
  equiv->add_option("--k-max", eq.k_max, "Finest lag level")->capture_default_str();
  equiv->add_option("--half-width", eq.half_width, "Window half-width L")->capture_default_str();
  equiv->add_flag("--no-refine", no_refine, "Skip the refined-grid pass");
  equiv->add_option("--corpus-seed", corpus_seed, "Seed of the random corpus members")
      ->capture_default_str();

  auto* su = app.add_subcommand("suite", "Run one inequality suite");
  su->add_option("kind", suite_kind,
                 "bernstein, embedding, young_conv, lifting, multiplier or mixed_lp")
      ->required()
      ->check(CLI::IsMember({"bernstein", "embedding", "young_conv", "lifting", "multiplier",
                             "mixed_lp"}));
  add_besov(su, besov);
  su->add_option("--n", suite.n, "Grid size per axis")->capture_default_str();
  su->add_option("--pairs", suite.pairs, "Random pairs per exact inequality")
      ->capture_default_str();
  su->add_option("--seed", suite.seed, "Random seed")->capture_default_str();
  su->add_option("--corpus-seed", corpus_seed, "Seed of the random corpus members")
      ->capture_default_str();

  for (auto* sub : app.get_subcommands({})) add_common(sub, common, sub == sg || sub == she);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config(active, common.config);
    if (active == norm) return cmd_norm(common, in, besov);
    if (active == dn) return cmd_diffnorm(common, diff, besov);
    if (active == dec) return cmd_decompose(common, in, p_only, csv);
    if (active == sg) return cmd_sample_gauss(common, cov_name, sampler, count, common.field_out);
    if (active == she) return cmd_simulate_she(common, sampler, common.field_out);
    if (active == mom) return cmd_moments(common, sampler, moments);
    if (active == kol) return cmd_kolmogorov(common, sampler, moments, besov, exact, tol);
    if (active == equiv) {
      eq.refine = !no_refine;
      return cmd_equivalence(common, besov, eq, corpus_seed);
    }
    if (active == su) return cmd_suite(common, suite_kind, besov, suite, corpus_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
