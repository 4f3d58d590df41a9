// zetalab: batch front end for the evaluators, torus simulations and the shift scanner.
//
// Artifacts go to --output-dir, else $ZETALAB_OUTPUT_DIR, else ./zetalab_out.
// Every CSV starts with "# config_hash=...,seed=..." and every JSON summary
// carries the same two keys. Wall time goes to run_info.json only, so the
// summaries are byte-identical across runs.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "zetalab/zetalab.hpp"

namespace {

using namespace zetalab;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InadmissibleTarget:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::NotCoprime:
    case ErrorKind::NotGreater:
    case ErrorKind::UnknownFunctional:
    case ErrorKind::BadTruncation:
      return 2;
    case ErrorKind::DomainError:
    case ErrorKind::PoleAt1:
    case ErrorKind::SingularFactor:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::TruncationTooSmall:
      return 3;
    case ErrorKind::IoError:
      return 4;
  }
  return 1;
}

void report_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

struct Context {
  std::string command;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::filesystem::path out_dir;
  std::string hash;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write_json(const std::string& name, json body) const {
    body["config_hash"] = hash;
    body["seed"] = seed;
    atomic_write(out_dir / name, body.dump(2) + "\n");
  }
  void write_csv(const std::string& name, const CsvTable& t) const { atomic_write(out_dir / name, t.render(hash, seed)); }
  void write_run_info() const {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json info{{"command", command}, {"config_hash", hash}, {"seed", seed}, {"workers", workers}, {"wall_seconds", secs}};
    atomic_write(out_dir / (command + "_run_info.json"), info.dump(2) + "\n");
  }
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::pair<double, double> parse_pair(const std::string& text) {
  std::stringstream ss(text);
  double a = 0.0, b = 0.0;
  char comma = 0;
  if (!(ss >> a >> comma >> b) || comma != ',') fail(ErrorKind::ConfigError, "expected 'sigma,t', got '" + text + "'");
  return {a, b};
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigError, "bad integer '" + item + "' in list");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Pointwise evaluation of a function spec.
Evaluation evaluate_spec(const FunctionSpec& f, double sigma, double t, double abs_tol) {
  const ComplexPoint s{sigma, t};
  const AccuracyBudget acc{abs_tol, std::int64_t{1} << 26};
  if (f.is_periodic()) {
    if (f.smoothing) return smoothed_periodic_zeta_n(s, f.alpha, f.b, *f.smoothing, acc);
    return periodic_hurwitz_zeta(s, f.alpha, f.b, acc);
  }
  if (f.smoothing) return smoothed_phi_n(s, f.spec, *f.smoothing, acc);
  if (f.spec.instance != Instance::Generic) return make_instance_evaluator(f.spec, abs_tol)->at(sigma, t);
  if (sigma > 1.0) return matsumoto_series(s, f.spec, acc);
  fail(ErrorKind::DomainError, "generic Euler products have no continuation to sigma <= 1; pass --smoothed n");
}

int cmd_eval(Context& ctx, const std::string& spec_path, const std::string& at, std::int64_t smoothed, double sigma_star1,
             double abs_tol) {
  json spec_json = load_json(spec_path);
  if (smoothed > 0) spec_json["smoothed"] = {{"n", smoothed}, {"sigma_star1", sigma_star1}};
  const FunctionSpec f = parse_function(spec_json);
  const auto [sigma, t] = parse_pair(at);
  ctx.hash = config_hash({{"command", "eval"}, {"spec", spec_json}, {"at", {sigma, t}}, {"abs_tol", abs_tol}});
  const Evaluation e = evaluate_spec(f, sigma, t, abs_tol);
  json out{{"at", {sigma, t}}, {"value", complex_json(e.value)}, {"abs_err_bound", e.abs_err_bound}};
  ctx.write_json("eval.json", out);
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_verify(Context& ctx, const std::string& suite, const std::string& config_path, const std::string& against,
               bool strict) {
  if (suite != "identities" && suite != "claims" && suite != "all") {
    fail(ErrorKind::ConfigError, "unknown suite '" + suite + "'");
  }
  const json cfg = config_path.empty() ? json::object() : load_json(config_path);
  ctx.hash = config_hash({{"command", "verify"}, {"suite", suite}, {"config", cfg}});
  json previous;
  if (!against.empty()) {
    const std::string other = artifact_hash(against);
    if (other != ctx.hash) {
      fail(ErrorKind::ConfigError, "refusing to compare: artifact hash " + other + " differs from " + ctx.hash);
    }
    previous = load_json(against);
  }
  std::vector<CheckResult> checks;
  if (suite == "identities" || suite == "all") {
    auto r = run_identities(cfg, ctx.seed);
    checks.insert(checks.end(), r.begin(), r.end());
  }
  if (suite == "claims" || suite == "all") {
    auto r = run_claims(cfg, ctx.seed);
    checks.insert(checks.end(), r.begin(), r.end());
  }
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << fmt_double(c.measured)
              << " threshold=" << fmt_double(c.threshold) << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n";
  }
  json out{{"suite", suite}, {"all_passed", all}, {"checks", checks_to_json(checks)}};
  if (!previous.is_null()) {
    json diff = json::array();
    for (const auto& c : checks) {
      for (const auto& p : previous.value("checks", json::array())) {
        if (p.value("name", "") == c.name) {
          diff.push_back({{"name", c.name}, {"measured", c.measured}, {"previous", p.value("measured", 0.0)},
                          {"same_verdict", p.value("passed", false) == c.passed}});
        }
      }
    }
    out["comparison"] = diff;
  }
  ctx.write_json("verify_" + suite + ".json", out);
  return strict && !all ? 1 : 0;
}

json load_scan_json(const std::string& path, std::int64_t N, double epsilon) {
  json j = load_json(path);
  if (!j.is_object()) fail(ErrorKind::ConfigError, "scan config must be an object");
  if (N >= 0) j["N"] = N;
  if (epsilon == epsilon) j["epsilon"] = epsilon;  // not NaN: flag given
  if (!j.contains("epsilon") || !j["epsilon"].is_number() || !(j["epsilon"].get<double>() > 0.0)) {
    fail(ErrorKind::ConfigError, "epsilon must be a positive number");
  }
  return j;
}

void write_scan_outputs(const Context& ctx, const ScanResult& r, const std::string& prefix) {
  json summary{{"hits", r.hits},
               {"density_num", r.density_num},
               {"density_den", r.density_den},
               {"density", r.density()},
               {"best_k", r.best_k},
               {"best_distance", r.best_distance},
               {"borderline", r.borderline},
               {"max_eval_error", r.max_error}};
  ctx.write_json(prefix + "_summary.json", summary);
  CsvTable dens{{"N", "hits", "density"}, {}};
  for (const auto& d : r.density_series) dens.rows.push_back({std::to_string(d.N), std::to_string(d.hits), fmt_double(d.density)});
  ctx.write_csv(prefix + "_density.csv", dens);
  CsvTable hits{{"k", "dist1", "dist2"}, {}};
  for (const auto& h : r.hit_rows) hits.rows.push_back({std::to_string(h.k), fmt_double(h.dist1), fmt_double(h.dist2)});
  ctx.write_csv(prefix + "_hits.csv", hits);
  std::cout << summary.dump() << "\n";
}

int cmd_scan(Context& ctx, const std::string& path, std::int64_t N, double epsilon) {
  const json j = load_scan_json(path, N, epsilon);
  ctx.hash = config_hash({{"command", "scan"}, {"config", j}});
  const ScanConfig cfg = parse_scan_config(j, ctx.workers);
  write_scan_outputs(ctx, scan(cfg), "scan");
  return 0;
}

int cmd_density(Context& ctx, const std::string& path, const std::string& checkpoints) {
  json j = load_scan_json(path, -1, std::numeric_limits<double>::quiet_NaN());
  const auto cps = parse_int_list(checkpoints);
  if (cps.empty()) fail(ErrorKind::ConfigError, "need at least one checkpoint");
  j["N"] = cps.back();
  j["checkpoints"] = cps;
  ctx.hash = config_hash({{"command", "density"}, {"config", j}});
  const ScanConfig cfg = parse_scan_config(j, ctx.workers);
  const auto series = density_series(cfg, cps);
  CsvTable t{{"N", "hits", "density"}, {}};
  for (const auto& d : series) {
    t.rows.push_back({std::to_string(d.N), std::to_string(d.hits), fmt_double(d.density)});
    std::cout << d.N << "," << d.hits << "," << fmt_double(d.density) << "\n";
  }
  ctx.write_csv("density.csv", t);
  return 0;
}

int cmd_torus(Context& ctx, const std::string& path) {
  const json j = load_json(path);
  ctx.hash = config_hash({{"command", "torus"}, {"config", j}});
  return detail::config_guard("torus config", [&] {
    const std::string mode = j.at("mode").get<std::string>();
    const RationalShift shift = parse_shift(j.at("shift"));
    if (mode == "haar") {
      const Truncation tr{j.value("prime_cutoff", std::uint64_t{29}), j.value("m_cutoff", std::uint64_t{8})};
      const auto checks = check_haar(shift, j.value("samples", std::int64_t{10000}), ctx.seed);
      HaarSampler sampler(shift, tr, ctx.seed);
      CsvTable t{{"sample", "coordinate", "phase"}, {}};
      const std::int64_t dump = std::min<std::int64_t>(j.value("samples", std::int64_t{10000}), j.value("csv_samples", std::int64_t{1000}));
      for (std::int64_t i = 0; i < dump; ++i) {
        const OmegaSample w = sampler.next();
        for (std::size_t c = 0; c < w.primes.size(); ++c) {
          t.rows.push_back({std::to_string(i), "omega1(" + std::to_string(w.primes[c]) + ")", fmt_double(std::arg(w.omega1[c]))});
        }
        for (std::size_t m = 0; m < w.omega2.size(); ++m) {
          t.rows.push_back({std::to_string(i), "omega2(" + std::to_string(m) + ")", fmt_double(std::arg(w.omega2[m]))});
        }
      }
      ctx.write_csv("torus_haar.csv", t);
      ctx.write_json("torus_summary.json", {{"mode", mode}, {"checks", checks_to_json(checks)}});
      for (const auto& c : checks) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " " << fmt_double(c.measured) << "\n";
      return 0;
    }
    const HurwitzParam alpha(j.value("alpha", 0.7548776662));
    if (mode == "birkhoff") {
      const std::int64_t N = j.value("N", std::int64_t{100000});
      const std::int64_t samples = j.value("samples", std::int64_t{4096});
      CsvTable t{{"functional", "time_avg_re", "time_avg_im", "space_avg_re", "space_avg_im", "std_error", "bound"}, {}};
      json rows = json::array();
      for (const auto& id : j.value("functionals", default_functionals())) {
        const BirkhoffResult r = birkhoff_average(id, shift, alpha, N, samples, ctx.seed);
        t.rows.push_back({id, fmt_double(r.time_avg.real()), fmt_double(r.time_avg.imag()), fmt_double(r.space_avg.real()),
                          fmt_double(r.space_avg.imag()), fmt_double(r.std_error), fmt_double(r.deterministic_bound)});
        const double gap = std::abs(r.time_avg - r.space_avg);
        const bool ok = gap <= 3.0 * r.std_error + r.deterministic_bound;
        rows.push_back({{"functional", id}, {"gap", gap}, {"allowed", 3.0 * r.std_error + r.deterministic_bound}, {"passed", ok}});
        std::cout << (ok ? "PASS " : "FAIL ") << id << " gap=" << fmt_double(gap) << "\n";
      }
      ctx.write_csv("torus_birkhoff.csv", t);
      ctx.write_json("torus_summary.json", {{"mode", mode}, {"N", N}, {"functionals", rows}});
      return 0;
    }
    if (mode == "orbit_vs_haar") {
      const FunctionSpec f = parse_function(j.at("target"));
      const auto pt = j.at("point").get<std::vector<double>>();
      if (pt.size() != 2) fail(ErrorKind::ConfigError, "point must be [sigma, t]");
      OrbitVsHaarOptions opt;
      opt.seed = ctx.seed;
      const SmoothingParam smooth = f.smoothing.value_or(SmoothingParam{});
      const OrbitTarget target = f.is_periodic() ? OrbitTarget{f.b} : OrbitTarget{f.spec};
      const std::int64_t N = j.value("N", std::int64_t{10000});
      const std::int64_t samples = j.value("samples", std::int64_t{10000});
      const auto r = orbit_vs_haar(target, {pt[0], pt[1]}, shift, f.is_periodic() ? f.alpha : alpha, N, samples, smooth, opt);
      CsvTable t{{"index", "orbit_value", "haar_value"}, {}};
      const std::size_t rows = std::max(r.orbit_values.size(), r.haar_values.size());
      for (std::size_t i = 0; i < rows; ++i) {
        t.rows.push_back({std::to_string(i), i < r.orbit_values.size() ? fmt_double(r.orbit_values[i]) : "",
                          i < r.haar_values.size() ? fmt_double(r.haar_values[i]) : ""});
      }
      ctx.write_csv("torus_orbit_haar.csv", t);
      ctx.write_json("torus_summary.json", {{"mode", mode}, {"ks", r.ks}, {"haar_tail_bound", r.haar_tail_bound}});
      std::cout << "ks=" << fmt_double(r.ks) << "\n";
      return 0;
    }
    fail(ErrorKind::ConfigError, "unknown torus mode '" + mode + "'");
  });
}

int cmd_mean_square(Context& ctx, const std::string& spec_path, double sigma0, double T, double step, double abs_tol) {
  const json spec_json = load_json(spec_path);
  const FunctionSpec f = parse_function(spec_json);
  ctx.hash = config_hash({{"command", "mean-square"}, {"spec", spec_json}, {"sigma0", sigma0}, {"T", T}, {"step", step}});
  double value = 0.0;
  if (!f.smoothing && (f.is_periodic() || f.spec.instance != Instance::Generic)) {
    const auto ev = build_evaluator(f, abs_tol);
    value = mean_square([&](ComplexPoint s) { return ev->at(s.sigma, static_cast<long double>(s.t)).value; }, sigma0, T, step);
  } else {
    value = mean_square([&](ComplexPoint s) { return evaluate_spec(f, s.sigma, s.t, abs_tol).value; }, sigma0, T, step);
  }
  json out{{"sigma0", sigma0}, {"T", T}, {"step", step}, {"mean_square", value}};
  ctx.write_json("mean_square.json", out);
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zetalab: periodic Hurwitz and Euler-product zeta lab"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  std::string out_flag;
  std::uint64_t seed = 1;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--seed", seed, "random seed recorded in every artifact");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", out_flag, "artifact directory (overrides ZETALAB_OUTPUT_DIR)");

  std::string spec_path, at, config_path, suite = "all", against, checkpoints;
  std::int64_t smoothed = 0, n_override = -1;
  double sigma_star1 = 2.0, abs_tol = 1e-10, sigma0 = 0.75, T = 1000.0, step = 0.05;
  double eps_override = std::numeric_limits<double>::quiet_NaN();
  bool strict = false;

  auto* eval = app.add_subcommand("eval", "evaluate a function at one point");
  eval->add_option("--spec", spec_path, "function spec (JSON)")->required();
  eval->add_option("--at", at, "sigma,t")->required();
  eval->add_option("--smoothed", smoothed, "use the smoothed series with this n");
  eval->add_option("--sigma-star1", sigma_star1, "smoothing exponent");
  eval->add_option("--abs-tol", abs_tol, "absolute tolerance");

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--suite", suite, "identities | claims | all");
  verify->add_option("--config", config_path, "suite parameters (JSON)");
  verify->add_option("--against", against, "earlier verify summary to compare with");
  verify->add_flag("--strict", strict, "exit 1 when any check fails");

  auto* scan_cmd = app.add_subcommand("scan", "count approximating shifts");
  scan_cmd->add_option("--config", config_path, "scan config (JSON)")->required();
  scan_cmd->add_option("--N", n_override, "override N");
  scan_cmd->add_option("--epsilon", eps_override, "override epsilon");

  auto* density = app.add_subcommand("density", "hit densities at checkpoints");
  density->add_option("--config", config_path, "scan config (JSON)")->required();
  density->add_option("--checkpoints", checkpoints, "comma-separated ascending N values")->required();

  auto* torus = app.add_subcommand("torus", "Haar sampling, Birkhoff averages, orbit vs Haar");
  torus->add_option("--config", config_path, "torus config (JSON)")->required();

  auto* ms = app.add_subcommand("mean-square", "(1/T) int_0^T |f(sigma0 + it)|^2 dt");
  ms->add_option("--spec", spec_path, "function spec (JSON)")->required();
  ms->add_option("--sigma0", sigma0, "abscissa")->required();
  ms->add_option("--T", T, "upper limit")->required();
  ms->add_option("--step", step, "quadrature step");
  ms->add_option("--abs-tol", abs_tol, "absolute tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("ConfigError", e.what());
    return 2;
  }

  ctx.seed = seed;
  ctx.workers = workers;
  if (!out_flag.empty()) {
    ctx.out_dir = out_flag;
  } else if (const char* env = std::getenv("ZETALAB_OUTPUT_DIR"); env && *env) {
    ctx.out_dir = env;
  } else {
    ctx.out_dir = "zetalab_out";
  }

  try {
    int rc = 0;
    if (eval->parsed()) {
      ctx.command = "eval";
      rc = cmd_eval(ctx, spec_path, at, smoothed, sigma_star1, abs_tol);
    } else if (verify->parsed()) {
      ctx.command = "verify";
      rc = cmd_verify(ctx, suite, config_path, against, strict);
    } else if (scan_cmd->parsed()) {
      ctx.command = "scan";
      rc = cmd_scan(ctx, config_path, n_override, eps_override);
    } else if (density->parsed()) {
      ctx.command = "density";
      rc = cmd_density(ctx, config_path, checkpoints);
    } else if (torus->parsed()) {
      ctx.command = "torus";
      rc = cmd_torus(ctx, config_path);
    } else if (ms->parsed()) {
      ctx.command = "mean-square";
      rc = cmd_mean_square(ctx, spec_path, sigma0, T, step, abs_tol);
    }
    ctx.write_run_info();
    return rc;
  } catch (const Error& e) {
    report_error(std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return 1;
  }
}
