// Batch driver: demos and verification suites over the quadric loop-space
// laboratory. Structured JSON/CSV artifacts out, deterministic for a fixed
// seed; timestamps go to a separate log stream only.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "quadloop/continuation.hpp"
#include "quadloop/deformation.hpp"
#include "quadloop/harmonic.hpp"
#include "quadloop/monodromy.hpp"
#include "quadloop/sampling.hpp"
#include "quadloop/serialize.hpp"

namespace {

using nlohmann::json;
using namespace quadloop;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitConfig = 4;

struct RunConfig {
  Tolerances tol;
  GridDefaults grids;
  RunSeed seed;
  std::string out_dir = ".";
  std::string log_path;
};

void log_line(const RunConfig& cfg, const std::string& line) {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  std::ostringstream msg;
  msg << "[" << ms << "] " << line << "\n";
  if (cfg.log_path.empty()) {
    std::cerr << msg.str();
  } else {
    std::ofstream out(cfg.log_path, std::ios::app);
    out << msg.str();
  }
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

void apply_config_file(RunConfig* cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(j, {"tolerances", "grids", "seed", "out_dir", "log"}, "config root");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown_keys(t,
                        {"tau_M", "tau_K", "tau_0", "tau_cut", "tau_spec", "tau_overlap",
                         "tau_cont", "tau_lift"},
                        "tolerances");
    cfg->tol.tau_M = t.value("tau_M", cfg->tol.tau_M);
    cfg->tol.tau_K = t.value("tau_K", cfg->tol.tau_K);
    cfg->tol.tau_0 = t.value("tau_0", cfg->tol.tau_0);
    cfg->tol.tau_cut = t.value("tau_cut", cfg->tol.tau_cut);
    cfg->tol.tau_spec = t.value("tau_spec", cfg->tol.tau_spec);
    cfg->tol.tau_overlap = t.value("tau_overlap", cfg->tol.tau_overlap);
    cfg->tol.tau_cont = t.value("tau_cont", cfg->tol.tau_cont);
    cfg->tol.tau_lift = t.value("tau_lift", cfg->tol.tau_lift);
  }
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    reject_unknown_keys(g, {"m_deg", "n_grid", "n_loop", "t_grid", "sobolev_k"}, "grids");
    cfg->grids.m_deg = g.value("m_deg", cfg->grids.m_deg);
    cfg->grids.n_grid = g.value("n_grid", cfg->grids.n_grid);
    cfg->grids.n_loop = g.value("n_loop", cfg->grids.n_loop);
    cfg->grids.t_grid = g.value("t_grid", cfg->grids.t_grid);
    cfg->grids.sobolev_k = g.value("sobolev_k", cfg->grids.sobolev_k);
  }
  if (j.contains("seed")) cfg->seed.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg->out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("log")) cfg->log_path = j.at("log").get<std::string>();
}

void validate_config(const RunConfig& cfg) {
  const double ts[] = {cfg.tol.tau_M,    cfg.tol.tau_K,       cfg.tol.tau_0,
                       cfg.tol.tau_cut,  cfg.tol.tau_spec,    cfg.tol.tau_overlap,
                       cfg.tol.tau_cont, cfg.tol.tau_lift};
  for (double t : ts) {
    if (!(t > 0.0)) throw ConfigError("all tolerances must be positive");
  }
  if (cfg.grids.n_loop < 4 || cfg.grids.n_loop > 4096) {
    throw ConfigError("n_loop out of bounds [4, 4096]");
  }
  if (cfg.grids.m_deg < 4 || cfg.grids.m_deg > 4096) {
    throw ConfigError("m_deg out of bounds [4, 4096]");
  }
  if (cfg.grids.n_grid < 4 * cfg.grids.m_deg) {
    throw ConfigError("n_grid must be at least 4 * m_deg");
  }
  if (cfg.grids.t_grid < 2 || cfg.grids.t_grid > 65536) {
    throw ConfigError("t_grid out of bounds [2, 65536]");
  }
  if (cfg.grids.sobolev_k < 0 || cfg.grids.sobolev_k > 8) {
    throw ConfigError("sobolev_k out of bounds [0, 8]");
  }
}

void write_file(const RunConfig& cfg, const std::string& name, const std::string& body) {
  const std::string path = cfg.out_dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << body;
  log_line(cfg, "wrote " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

int run_demo_monodromy(const RunConfig& cfg) {
  MonodromyOptions opts;
  opts.t_grid = std::max(cfg.grids.t_grid, 256);
  opts.seed = cfg.seed;
  const DemoCurve demo = demo_curve(opts.t_grid, cfg.grids.n_loop, cfg.grids.sobolev_k);
  const MonodromyResult res = monodromy_increment(demo.curve, opts, cfg.tol);
  const double err = std::abs(std::abs(res.increment) - 2.0 * kTwoPi);

  json summary = json::parse(monodromy_to_json(res));
  summary["period_reference"] = 2.0 * kTwoPi;
  summary["increment_abs_error"] = err;
  summary["t_grid"] = opts.t_grid;
  summary["n_loop"] = cfg.grids.n_loop;
  summary["seed"] = cfg.seed.seed;
  const std::string out = summary.dump(2);
  write_file(cfg, "demo_monodromy.json", out + "\n");
  write_file(cfg, "demo_monodromy_trace.csv", monodromy_trace_csv(res));
  std::cout << out << "\n";
  return err <= 1e-3 ? kExitOk : kExitVerificationFailed;
}

int run_continue(const RunConfig& cfg, const std::string& input) {
  const LoopCurve curve = curve_from_json(read_file(input));
  MonodromyOptions opts;
  opts.t_grid = cfg.grids.t_grid;
  opts.seed = cfg.seed;
  const MonodromyResult res = monodromy_increment(curve, opts, cfg.tol);
  const std::string chain = chain_to_json(res.chain);
  write_file(cfg, "chain.json", chain + "\n");
  write_file(cfg, "chain_trace.csv", chain_to_csv(res.chain));
  std::cout << monodromy_to_json(res) << "\n";
  return kExitOk;
}

BoundaryArcSet parse_arcs(const std::string& spec) {
  std::vector<BoundaryArc> arcs;
  std::istringstream in(spec);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw ConfigError("arcs are 'start:end' pairs");
    try {
      arcs.push_back(BoundaryArc{std::stod(token.substr(0, colon)),
                                 std::stod(token.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("malformed arc bounds in '" + token + "'");
    }
  }
  if (arcs.empty()) throw ConfigError("empty arc list");
  return BoundaryArcSet::from_arcs(std::move(arcs));
}

int run_harmonic(const RunConfig& cfg, const std::string& arc_spec, double delta,
                 bool kernel, double kernel_eps) {
  if (kernel) {
    KernelOptions opts;
    const KernelCertificate cert = lemma53_kernel(kernel_eps, opts);
    json out{{"delta", cert.delta},
             {"degree", cert.report.degree},
             {"margin", cert.report.margin},
             {"sup_re", cert.report.sup_re},
             {"epsilon", kernel_eps},
             {"pass", cert.report.verified}};
    write_file(cfg, "kernel_certificate.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return cert.report.verified ? kExitOk : kExitVerificationFailed;
  }
  const BoundaryArcSet gamma = parse_arcs(arc_spec);
  if (!(delta > 0.0) || delta >= gamma.total_length() / kTwoPi) {
    throw ConfigError("delta must lie in (0, arc measure)");
  }
  const HarmonicCertificate cert = certificate_build(gamma, delta);
  const CertificateReport check = certificate_verify(cert, gamma, 4096);
  json out = json::parse(certificate_to_json(cert));
  out["verify"] = {{"pass", check.pass},
                   {"value_at_zero_error", check.value_at_zero_error},
                   {"sup_re_disc", check.sup_re_disc},
                   {"margin_off_gamma", check.margin_off_gamma},
                   {"boundary_grid", check.boundary_grid}};
  write_file(cfg, "harmonic_certificate.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return check.pass ? kExitOk : kExitVerificationFailed;
}

int run_push_disc(const RunConfig& cfg, const std::string& input) {
  const PushProblem problem = push_problem_from_json(read_file(input));
  const PushFamily fam = push_disc(problem, cfg.tol, cfg.grids);
  const std::string out = push_report_to_json(fam.report);
  write_file(cfg, "push_report.json", out + "\n");
  std::cout << out << "\n";
  const bool pass = fam.report.pass_i && fam.report.pass_ii && fam.report.pass_iii &&
                    fam.report.pass_iv && fam.report.degree_support_ok;
  return pass ? kExitOk : kExitVerificationFailed;
}

struct VerifySuite {
  json results = json::object();
  bool all_pass = true;

  void check(const std::string& name, bool pass, double observed, double bound) {
    results[name] = {{"pass", pass}, {"observed", observed}, {"bound", bound}};
    all_pass = all_pass && pass;
  }
};

int run_verify(const RunConfig& cfg) {
  VerifySuite suite;
  const std::uint64_t seed = cfg.seed.seed;

  {  // retraction: idempotence + fixed points on M
    auto rng = seeded_rng(seed, 1);
    double worst_idem = 0.0, worst_fix = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const C3 z = random_ambient_point(rng);
      const C3 r = retract_point(z, cfg.tol);
      worst_idem = std::max(worst_idem, norm2(retract_point(r, cfg.tol) - r));
      const QuadricPoint m = random_m_point(rng, cfg.tol);
      worst_fix = std::max(worst_fix, norm2(retract_point(m.z, cfg.tol) - m.z));
    }
    suite.check("retraction_idempotent", worst_idem <= 1e-12, worst_idem, 1e-12);
    suite.check("retraction_fixed_on_M", worst_fix <= 1e-12, worst_fix, 1e-12);
  }
  {  // retraction is complex differentiable: conjugate-direction defect O(eps^2)
    auto rng = seeded_rng(seed, 2);
    double worst_ratio = 1e9;
    for (int i = 0; i < 20; ++i) {
      const C3 z = random_ambient_point(rng, 0.2);
      std::normal_distribution<double> gauss(0.0, 1.0);
      C3 v{Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng))};
      const auto defect = [&](double eps) {
        C3 zp = z, zm = z, zi = z, zj = z;
        for (int c = 0; c < 3; ++c) {
          zp[c] += eps * v[c];
          zm[c] -= eps * v[c];
          zi[c] += eps * Cx(0.0, 1.0) * v[c];
          zj[c] -= eps * Cx(0.0, 1.0) * v[c];
        }
        const C3 dv = retract_point(zp, cfg.tol) - retract_point(zm, cfg.tol);
        const C3 di = retract_point(zi, cfg.tol) - retract_point(zj, cfg.tol);
        C3 cr;  // Cauchy-Riemann residual d(iv) - i d(v)
        for (int c = 0; c < 3; ++c) cr[c] = di[c] - Cx(0.0, 1.0) * dv[c];
        return norm2(cr) / (2.0 * eps);
      };
      const double d3 = defect(1e-3);
      const double d4 = defect(1e-4);
      if (d3 > 1e-14) worst_ratio = std::min(worst_ratio, d3 / std::max(d4, 1e-16));
    }
    suite.check("retraction_complex_differentiable", worst_ratio >= 50.0, worst_ratio, 50.0);
  }
  {  // period of omega over K
    const double p = period_K(256);
    const double err = std::abs(p - 2.0 * kTwoPi);
    const double err2 = std::abs(period_K(512) - 2.0 * kTwoPi);
    suite.check("period_value", err <= 1e-8, err, 1e-8);
    suite.check("period_convergence", err / std::max(err2, 1e-18) >= 10.0,
                err / std::max(err2, 1e-18), 10.0);
  }
  {  // f on constants, df algebra, finite differences
    auto rng = seeded_rng(seed, 3);
    const Loop cl = Loop::constant(random_m_point(rng, cfg.tol).z, cfg.grids.n_loop,
                                   cfg.grids.sobolev_k);
    suite.check("f_constant_zero", std::abs(f_eval(cl, {}, cfg.tol).value) == 0.0,
                std::abs(f_eval(cl, {}, cfg.tol).value), 0.0);
    double worst_lin = 0.0, worst_slope = 1e9;
    for (int i = 0; i < 3; ++i) {
      const Loop x = random_mprime_loop(rng, cfg.grids.n_loop, cfg.grids.sobolev_k);
      const auto v = random_tangent_section(rng, x);
      const Cx dv = df_eval(x, v, cfg.tol);
      std::vector<C3> iv(v.size()), v2(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) {
        iv[j] = Cx(0.0, 1.0) * v[j];
        v2[j] = 2.0 * v[j];
      }
      worst_lin = std::max(worst_lin, std::abs(df_eval(x, iv, cfg.tol) - Cx(0.0, 1.0) * dv));
      worst_lin = std::max(worst_lin, std::abs(df_eval(x, v2, cfg.tol) - 2.0 * dv));
      const auto fd = [&](double h) {
        const auto xs = x.grid_samples();
        std::vector<C3> plus(xs.size()), minus(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) {
          plus[j] = retract_point(xs[j] + h * v[j], cfg.tol);
          minus[j] = retract_point(xs[j] - h * v[j], cfg.tol);
        }
        const Loop xp = Loop::from_samples(plus, x.n_loop(), x.sobolev_k());
        const Loop xm = Loop::from_samples(minus, x.n_loop(), x.sobolev_k());
        const Cx diff =
            (f_eval(xp, {}, cfg.tol).value - f_eval(xm, {}, cfg.tol).value) / (2.0 * h);
        return std::abs(diff - dv);
      };
      const double e3 = fd(1e-3);
      const double e4 = fd(2e-4);
      const double slope = std::log(e3 / std::max(e4, 1e-18)) / std::log(5.0);
      worst_slope = std::min(worst_slope, slope);
    }
    suite.check("df_complex_linear", worst_lin <= 1e-12, worst_lin, 1e-12);
    suite.check("df_matches_finite_difference", worst_slope >= 1.8, worst_slope, 1.8);
  }
  {  // mean value property on loop discs
    auto rng = seeded_rng(seed, 4);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const LoopDisc D = random_mprime_loop_disc(rng, 16, cfg.grids.n_loop,
                                                 cfg.grids.sobolev_k);
      const auto f = [&](const Loop& x) { return f_eval(x, {}, cfg.tol).value; };
      worst = std::max(worst, mean_value_audit(f, D, cfg.tol));
    }
    suite.check("mean_value_identity", worst <= 1e-6, worst, 1e-6);
  }
  {  // extension-schedule independence
    auto rng = seeded_rng(seed, 5);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Loop x = random_mprime_loop(rng, cfg.grids.n_loop, cfg.grids.sobolev_k);
      FEvalOptions s0, s1;
      s1.schedule = 1;
      worst = std::max(worst,
                       std::abs(f_eval(x, s0, cfg.tol).value - f_eval(x, s1, cfg.tol).value));
    }
    suite.check("extension_independence", worst <= 1e-6, worst, 1e-6);
  }
  {  // fiber profiles of u: unique minimum on the chart
    auto rng = seeded_rng(seed, 6);
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i) {
      QuadricPoint z = random_m_point(rng, cfg.tol);
      if (classify(z, {}, cfg.tol).kappa <= 10.0 * cfg.tol.tau_K) continue;
      for (int k = 0; k < 4 && ok; ++k) {
        const FiberScan scan = fiber_line_scan(z, kTwoPi * k / 8.0, 9, cfg.tol);
        ok = scan.min_at_zero && scan.monotone_left && scan.monotone_right;
      }
    }
    suite.check("fiber_minimum_at_zero", ok, ok ? 1.0 : 0.0, 1.0);
  }
  {  // harmonic arcs: measure additivity, rotation invariance, round trip
    auto rng = seeded_rng(seed, 7);
    double worst = 0.0;
    bool cert_ok = true;
    for (int i = 0; i < 3; ++i) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double a0 = kTwoPi * u(rng);
      const double l0 = 0.3 + 0.8 * u(rng);
      const double a1 = a0 + l0 + 0.4 + u(rng);
      const double l1 = 0.3 + 0.6 * u(rng);
      const BoundaryArcSet set =
          BoundaryArcSet::from_arcs({BoundaryArc{a0, a0 + l0}, BoundaryArc{a1, a1 + l1}});
      worst = std::max(worst, std::abs(set.total_length() - (l0 + l1)));
      worst = std::max(worst,
                       std::abs(set.rotated(1.1).total_length() - set.total_length()));
      const double delta = 0.4 * set.total_length() / kTwoPi;
      const HarmonicCertificate cert = certificate_build(set, delta);
      cert_ok = cert_ok && certificate_verify(cert, set, 4096).pass;
      const HarmonicCertificate back = certificate_from_json(certificate_to_json(cert));
      cert_ok = cert_ok && certificate_verify(back, set, 4096).pass;
    }
    suite.check("arc_measure_additivity", worst <= 1e-14, worst, 1e-14);
    suite.check("certificate_roundtrip", cert_ok, cert_ok ? 1.0 : 0.0, 1.0);
  }
  {  // single-valuedness over a closed curve inside M'-loops
    auto rng = seeded_rng(seed, 8);
    MonodromyOptions opts;
    opts.t_grid = 256;       // satisfies the (3.4) step bound for generic curves
    opts.eps_push = 0.2;
    opts.seed = cfg.seed;
    const LoopCurve c = random_mprime_closed_curve(rng, opts.t_grid, cfg.grids.n_loop,
                                                   cfg.grids.sobolev_k);
    const MonodromyResult res = monodromy_increment(c, opts, cfg.tol);
    suite.check("null_class_increment", std::abs(res.increment) <= 1e-6,
                std::abs(res.increment), 1e-6);
  }

  json out{{"schema", kSchemaVersion},
           {"record", "verify_report"},
           {"seed", seed},
           {"pass", suite.all_pass},
           {"checks", suite.results}};
  const std::string body = out.dump(2);
  write_file(cfg, "verify.json", body + "\n");
  std::cout << body << "\n";
  return suite.all_pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for analytic continuation on quadric loop spaces"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (strict schema)");
  app.add_option("--out", cfg.out_dir, "output directory for artifacts");
  app.add_option("--log", cfg.log_path, "log file for timestamped progress lines");
  app.add_option("--seed", cfg.seed.seed, "run seed");

  auto* demo = app.add_subcommand("demo-monodromy", "shrinking-circles demo: increment +-4pi");
  auto* cont = app.add_subcommand("continue", "continue f along a loop-curve file");
  std::string cont_input;
  cont->add_option("--input", cont_input, "loop_curve JSON file")->required();
  auto* harm = app.add_subcommand("harmonic", "harmonic-measure certificates");
  std::string arc_spec = "0.0:1.0";
  double harm_delta = 0.1;
  bool harm_kernel = false;
  double harm_eps = 0.5;
  harm->add_option("--arcs", arc_spec, "comma-separated start:end arcs (radians)");
  harm->add_option("--delta", harm_delta, "target value at the origin");
  harm->add_flag("--kernel", harm_kernel, "run the sector kernel search instead");
  harm->add_option("--eps", harm_eps, "sector aperture for --kernel");
  auto* push = app.add_subcommand("push-disc", "run a boundary-push problem file");
  std::string push_input;
  push->add_option("--input", push_input, "push_problem JSON file")->required();
  auto* verify = app.add_subcommand("verify", "full invariant suite, machine-readable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (!config_path.empty()) apply_config_file(&cfg, config_path);
    validate_config(cfg);
    if (demo->parsed()) return run_demo_monodromy(cfg);
    if (cont->parsed()) return run_continue(cfg, cont_input);
    if (harm->parsed()) return run_harmonic(cfg, arc_spec, harm_delta, harm_kernel, harm_eps);
    if (push->parsed()) return run_push_disc(cfg, push_input);
    if (verify->parsed()) return run_verify(cfg);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const SerializationError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    json out{{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    std::cout << out.dump(2) << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
