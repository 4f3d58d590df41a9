#pragma once

// Config parsing and artifact output. Configs are JSON; every artifact carries
// the FNV-1a hash of the canonical config text and the seed.

#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "zetalab/evaluators.hpp"
#include "zetalab/grid.hpp"
#include "zetalab/matsumoto.hpp"
#include "zetalab/scanner.hpp"
#include "zetalab/special_functions.hpp"

namespace zetalab {

using json = nlohmann::json;

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Hash of the canonical (sorted-key, compact) serialization.
inline std::string config_hash(const json& cfg) { return hex64(fnv1a64(cfg.dump())); }

/// Shortest text that reads back to the same double.
inline std::string fmt_double(double x) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, origin + ": " + e.what());
  }
}

inline json load_json(const std::filesystem::path& path) { return parse_json_text(read_text(path), path.string()); }

/// Writes via a temporary file in the same directory and renames it into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) fail(ErrorKind::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::IoError, "cannot rename into " + path.string());
  }
}

/// CSV with a `# config_hash=...,seed=...` first line.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render(const std::string& hash, std::uint64_t seed) const {
    std::string s = "# config_hash=" + hash + ",seed=" + std::to_string(seed) + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    }
    return s;
  }
};

/// Reads the config hash back from an artifact (CSV header line or JSON key).
inline std::string artifact_hash(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const std::string key = "# config_hash=";
  if (text.rfind(key, 0) == 0) {
    const auto end = text.find_first_of(",\n", key.size());
    return text.substr(key.size(), end - key.size());
  }
  const json j = parse_json_text(text, path.string());
  if (!j.is_object() || !j.contains("config_hash")) fail(ErrorKind::ConfigError, path.string() + " has no config_hash");
  return j.at("config_hash").get<std::string>();
}

// ---------------------------------------------------------------------------
// Parsing. Any structural problem is a ConfigError.

namespace detail {

template <class F>
auto config_guard(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, what + ": " + e.what());
  }
}

}  // namespace detail

/// A number or a [re, im] pair.
inline cplx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::ConfigError, "expected a number or [re, im], got " + j.dump());
}

inline std::vector<cplx> parse_complex_list(const json& j) {
  if (!j.is_array()) fail(ErrorKind::ConfigError, "expected a list, got " + j.dump());
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(parse_complex(e));
  return out;
}

inline std::vector<LocalRoot> parse_roots(const json& j) {
  std::vector<LocalRoot> out;
  for (const auto& r : j) out.push_back({r.at("f").get<int>(), parse_complex(r.at("a"))});
  return out;
}

/// Function descriptor shared by eval, mean-square and scan:
///   {"kind": "riemann" | "chi4" | "periodic" | "matsumoto", ...}
struct FunctionSpec {
  std::string kind = "riemann";
  MatsumotoSpec spec = MatsumotoSpec::riemann();
  HurwitzParam alpha{1.0};
  PeriodicSequence b{std::vector<cplx>{cplx{1.0, 0.0}}};
  bool partial = false;                // remove the Euler factors at primes dividing a b
  std::optional<SmoothingParam> smoothing;

  bool is_periodic() const { return kind == "periodic"; }
};

inline FunctionSpec parse_function(const json& j) {
  return detail::config_guard("function spec", [&] {
    FunctionSpec f;
    f.kind = j.value("kind", std::string("riemann"));
    if (f.kind == "riemann") {
      f.spec = MatsumotoSpec::riemann();
    } else if (f.kind == "chi4") {
      f.spec = MatsumotoSpec::dirichlet_chi4();
    } else if (f.kind == "periodic") {
      f.alpha = HurwitzParam(j.at("alpha").get<double>(), j.value("transcendental", false));
      f.b = PeriodicSequence(parse_complex_list(j.at("B")));
    } else if (f.kind == "matsumoto") {
      MatsumotoSpec s;
      s.alpha0 = j.value("alpha0", 0.0);
      s.beta0 = j.value("beta0", 0.0);
      s.growth_constant = j.value("growth_constant", 1.0);
      s.sigma0 = j.value("sigma0", 0.75);
      if (j.contains("local_factors")) {
        for (const auto& [key, roots] : j.at("local_factors").items()) s.local_factors[std::stoull(key)] = parse_roots(roots);
      }
      if (j.contains("default_rule")) {
        FactorRule rule;
        rule.modulus = j.at("default_rule").at("modulus").get<std::uint64_t>();
        for (const auto& [key, roots] : j.at("default_rule").at("by_residue").items()) {
          rule.by_residue[std::stoull(key)] = parse_roots(roots);
        }
        s.default_rule = rule;
      }
      if (j.contains("declared_poles")) s.declared_poles = parse_complex_list(j.at("declared_poles"));
      if (j.contains("steuding")) {
        const auto& m = j.at("steuding");
        s.steuding = SteudingMeta{m.value("sigma_star", 0.5), m.value("kappa", 1.0), m.value("sigma_phi", 0.0)};
      }
      try {
        s.validate();
      } catch (const Error& e) {
        fail(ErrorKind::ConfigError, std::string("matsumoto spec: ") + e.what());
      }
      f.spec = s;
    } else {
      fail(ErrorKind::ConfigError, "unknown function kind '" + f.kind + "'");
    }
    f.partial = j.value("partial", false);
    if (j.contains("smoothed")) {
      const auto& sm = j.at("smoothed");
      f.smoothing = SmoothingParam(sm.at("n").get<std::int64_t>(), sm.value("sigma_star1", 2.0));
    }
    return f;
  });
}

/// Evaluator for the strip-capable scanner paths.
inline EvaluatorPtr build_evaluator(const FunctionSpec& f, double abs_tol, const RationalShift* shift = nullptr) {
  if (f.is_periodic()) {
    if (f.smoothing) return make_smoothed_periodic_evaluator(f.alpha, f.b, *f.smoothing, abs_tol);
    return make_periodic_evaluator(f.alpha, f.b, abs_tol);
  }
  if (f.smoothing) return make_smoothed_phi_evaluator(f.spec, *f.smoothing, abs_tol);
  if (f.partial) {
    if (!shift) fail(ErrorKind::ConfigError, "partial evaluator needs a shift");
    return make_partial_evaluator(f.spec, *shift, abs_tol);
  }
  return make_instance_evaluator(f.spec, abs_tol);
}

/// {"disk": {"center": [s, t], "radius": r}, "mesh": m}
/// {"rectangle": {"sigma": [lo, hi], "t": [lo, hi]}, "mesh": m}
inline CompactGrid parse_grid(const json& j) {
  return detail::config_guard("grid", [&] {
    const double mesh = j.value("mesh", 0.01);
    try {
      if (j.contains("disk")) {
        const auto& d = j.at("disk");
        return CompactGrid::disk(parse_complex(d.at("center")), d.at("radius").get<double>(), mesh);
      }
      if (j.contains("rectangle")) {
        const auto& r = j.at("rectangle");
        return CompactGrid::rectangle(r.at("sigma")[0].get<double>(), r.at("sigma")[1].get<double>(),
                                      r.at("t")[0].get<double>(), r.at("t")[1].get<double>(), mesh);
      }
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("grid: ") + e.what());
    }
    fail(ErrorKind::ConfigError, "grid needs a 'disk' or 'rectangle' entry");
  });
}

/// {"exp_poly": [c0, c1, ...]} | {"poly": [...]} | {"constant": c}
inline TargetSpec parse_target(const json& j) {
  return detail::config_guard("target", [&] {
    if (j.contains("exp_poly")) return TargetSpec::exp_poly(parse_complex_list(j.at("exp_poly")));
    if (j.contains("poly")) return TargetSpec::poly(parse_complex_list(j.at("poly")));
    if (j.contains("constant")) return TargetSpec::constant(parse_complex(j.at("constant")));
    fail(ErrorKind::ConfigError, "target needs 'exp_poly', 'poly' or 'constant'");
  });
}

inline RationalShift parse_shift(const json& j) {
  return detail::config_guard("shift", [&] {
    if (!j.is_array() || j.size() != 2) fail(ErrorKind::ConfigError, "shift must be [a, b]");
    try {
      return shift_from_rational(j[0].get<std::uint64_t>(), j[1].get<std::uint64_t>());
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("shift: ") + e.what());
    }
  });
}

/// Scan config:
///   {"N", "shift": [a, b], "epsilon", "abs_tol", "K1", "K2", "f1", "f2",
///    "phi": function, "zeta": function, "checkpoints"?, "block"?}
/// Only validation of the numbers happens here; evaluators are built lazily
/// by build_scan so that a bad epsilon is reported before any evaluation.
inline ScanConfig parse_scan_config(const json& j, std::size_t workers) {
  return detail::config_guard("scan config", [&] {
    ScanConfig c;
    c.N = j.at("N").get<std::int64_t>();
    c.epsilon = j.at("epsilon").get<double>();
    c.eval_budget.abs_tol = j.value("abs_tol", c.epsilon / 10.0);
    if (!(c.epsilon > 0.0)) fail(ErrorKind::ConfigError, "epsilon must be positive");
    if (!(c.eval_budget.abs_tol > 0.0) || c.eval_budget.abs_tol > c.epsilon / 10.0) {
      fail(ErrorKind::ConfigError, "abs_tol must lie in (0, epsilon/10]");
    }
    if (c.N < 0) fail(ErrorKind::ConfigError, "N must be non-negative");
    c.shift = parse_shift(j.at("shift"));
    c.K1 = parse_grid(j.at("K1"));
    c.K2 = parse_grid(j.at("K2"));
    c.f1 = parse_target(j.at("f1"));
    c.f2 = parse_target(j.at("f2"));
    if (j.contains("checkpoints")) c.checkpoints = j.at("checkpoints").get<std::vector<std::int64_t>>();
    c.block = j.value("block", std::int64_t{256});
    c.workers = workers;
    const FunctionSpec phi = parse_function(j.at("phi"));
    const FunctionSpec zeta = parse_function(j.at("zeta"));
    if (!zeta.is_periodic()) fail(ErrorKind::ConfigError, "zeta must be a periodic Hurwitz function");
    c.phi = build_evaluator(phi, c.eval_budget.abs_tol, &c.shift);
    c.zeta = build_evaluator(zeta, c.eval_budget.abs_tol, &c.shift);
    c.validate();
    return c;
  });
}

/// {"sigma": [lo, hi], "M": M, "levels": L, "mesh": m}
inline std::vector<CompactGrid> parse_exhaustion(const json& j) {
  return detail::config_guard("exhaustion", [&] {
    try {
      return make_exhaustion(j.at("sigma")[0].get<double>(), j.at("sigma")[1].get<double>(), j.at("M").get<double>(),
                             j.at("levels").get<int>(), j.value("mesh", 0.1));
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, std::string("exhaustion: ") + e.what());
    }
  });
}

struct Lemma9Job {
  Lemma9Config config;
  std::vector<std::int64_t> n_values;
};

inline Lemma9Job parse_lemma9(const json& j, std::size_t workers) {
  return detail::config_guard("lemma9 config", [&] {
    Lemma9Job job;
    Lemma9Config& c = job.config;
    const FunctionSpec phi = parse_function(j.at("phi"));
    const FunctionSpec zeta = parse_function(j.at("zeta"));
    if (phi.is_periodic() || !zeta.is_periodic()) fail(ErrorKind::ConfigError, "lemma9 needs an Euler-product phi and a periodic zeta");
    c.spec = phi.spec;
    c.alpha = zeta.alpha;
    c.b = zeta.b;
    c.shift = parse_shift(j.at("shift"));
    c.N = j.value("N", std::int64_t{32});
    c.sigma_star1_phi = j.value("sigma_star1_phi", 3.0);
    c.sigma_star1_zeta = j.value("sigma_star1_zeta", 2.0);
    c.abs_tol = j.value("abs_tol", 1e-10);
    c.exhaustion1 = parse_exhaustion(j.at("exhaustion1"));
    c.exhaustion2 = parse_exhaustion(j.at("exhaustion2"));
    c.workers = workers;
    job.n_values = j.value("n_values", std::vector<std::int64_t>{10, 100, 1000, 10000});
    return job;
  });
}

}  // namespace zetalab
