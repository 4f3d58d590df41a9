#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "zetalab/zetalab.hpp"

using namespace zetalab;
namespace fs = std::filesystem;

namespace {

const std::string kCli = ZETALAB_CLI;
const std::string kConfigs = ZETALAB_CONFIG_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zetalab_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST(Io, HashIsStableAndOrderInsensitive) {
  const json a = json::parse(R"({"x": 1, "y": [1, 2]})");
  const json b = json::parse(R"({"y": [1, 2], "x": 1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(json::parse(R"({"x": 2, "y": [1, 2]})")));
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
}

TEST(Io, DoubleFormattingRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) EXPECT_EQ(std::stod(fmt_double(x)), x);
}

TEST(Io, CsvHeaderCarriesHashAndSeed) {
  const CsvTable t{{"a", "b"}, {{"1", "2"}}};
  EXPECT_EQ(t.render("abc", 7), "# config_hash=abc,seed=7\na,b\n1,2\n");
  const fs::path dir = fresh_dir("csv");
  atomic_write(dir / "t.csv", t.render("abc", 7));
  EXPECT_EQ(artifact_hash(dir / "t.csv"), "abc");
  EXPECT_EQ(read_text(dir / "t.csv"), t.render("abc", 7));
}

TEST(Io, ParsingErrorsAreConfigErrors) {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind_of([] { parse_json_text("{oops", "inline"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_function(json::parse(R"({"kind": "nope"})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_grid(json::parse(R"({"disk": {"center": [0.8, 0]}})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { read_text("/nonexistent/file.json"); }), ErrorKind::IoError);
}

TEST(Io, BundledConfigsParse) {
  for (const char* name : {"scan_baseline.json", "scan_small.json", "scan_partial.json"}) {
    const ScanConfig cfg = parse_scan_config(load_json(kConfigs + "/" + name), 1);
    EXPECT_NO_THROW(cfg.validate()) << name;
  }
  for (const char* name : {"riemann.json", "chi4.json", "periodic.json", "matsumoto_example.json"}) {
    EXPECT_NO_THROW(parse_function(load_json(kConfigs + "/" + name))) << name;
  }
  const Lemma9Job job = parse_lemma9(load_json(kConfigs + "/lemma9.json"), 1);
  EXPECT_EQ(job.n_values, (std::vector<std::int64_t>{10, 100, 1000, 10000}));
}

TEST(Io, ComplexNumbersAcceptBothForms) {
  EXPECT_EQ(parse_complex(json(1.5)), cplx(1.5, 0.0));
  EXPECT_EQ(parse_complex(json::parse("[1, -2]")), cplx(1.0, -2.0));
  EXPECT_THROW(parse_complex(json::parse("[1, 2, 3]")), Error);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = fresh_dir("codes");
  const std::string out = "--output-dir " + dir.string();
  EXPECT_EQ(run("eval --spec " + kConfigs + "/riemann.json --at 0.8,0 " + out), 0);
  EXPECT_EQ(run("frobnicate " + out), 2);
  EXPECT_EQ(run("eval --spec " + kConfigs + "/riemann.json " + out), 2);  // missing --at
  EXPECT_EQ(run("eval --spec " + kConfigs + "/riemann.json --at 1,0 " + out), 3);  // pole
  EXPECT_EQ(run("eval --spec /nonexistent.json --at 2,0 " + out), 4);
  EXPECT_EQ(run("scan --config " + kConfigs + "/scan_small.json --epsilon -0.5 " + out), 2);
  write_file(dir / "broken.json", "{\"N\": ");
  EXPECT_EQ(run("scan --config " + (dir / "broken.json").string() + " " + out), 2);
}

TEST(Cli, ScanArtifactsAreByteIdentical) {
  const fs::path a = fresh_dir("scan_a");
  const fs::path b = fresh_dir("scan_b");
  const std::string cfg = "scan --config " + kConfigs + "/scan_small.json";
  ASSERT_EQ(run(cfg + " --workers 1 --output-dir " + a.string()), 0);
  ASSERT_EQ(run(cfg + " --workers 3 --output-dir " + b.string()), 0);
  for (const char* f : {"scan_summary.json", "scan_density.csv", "scan_hits.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
  }
  const json s = load_json(a / "scan_summary.json");
  EXPECT_EQ(s.at("hits").get<int>(), 14);
  EXPECT_EQ(s.at("density_den").get<int>(), 1001);
  EXPECT_EQ(s.at("seed").get<int>(), 1);
  EXPECT_EQ(artifact_hash(a / "scan_hits.csv"), s.at("config_hash").get<std::string>());
  EXPECT_TRUE(fs::exists(a / "scan_run_info.json"));
}

TEST(Cli, OutputDirPrecedence) {
  const fs::path env_dir = fresh_dir("env");
  const fs::path flag_dir = fresh_dir("flag");
  const std::string args = "eval --spec " + kConfigs + "/chi4.json --at 2,0";
  ASSERT_EQ(run(args, "ZETALAB_OUTPUT_DIR=" + env_dir.string()), 0);
  EXPECT_TRUE(fs::exists(env_dir / "eval.json"));
  ASSERT_EQ(run(args + " --output-dir " + flag_dir.string(), "ZETALAB_OUTPUT_DIR=" + env_dir.string()), 0);
  EXPECT_TRUE(fs::exists(flag_dir / "eval.json"));
  const json e = load_json(flag_dir / "eval.json");
  EXPECT_NEAR(e.at("value")[0].get<double>(), 0.91596559417721902, 1e-10);
}

TEST(Cli, VerifyAgainstRefusesForeignArtifacts) {
  const fs::path dir = fresh_dir("verify");
  const std::string out = " --output-dir " + dir.string();
  ASSERT_EQ(run("verify --suite identities" + out), 0);
  const fs::path first = dir / "verify_identities.json";
  ASSERT_TRUE(fs::exists(first));
  fs::copy_file(first, dir / "prev.json");
  EXPECT_EQ(run("verify --suite identities --against " + (dir / "prev.json").string() + out), 0);
  EXPECT_EQ(run("verify --suite identities --config " + kConfigs + "/verify.json --against " +
                (dir / "prev.json").string() + out),
            2);
}

TEST(Cli, DensityCheckpoints) {
  const fs::path dir = fresh_dir("density");
  ASSERT_EQ(run("density --config " + kConfigs + "/scan_small.json --checkpoints 10,100,1000 --output-dir " + dir.string()), 0);
  const std::string csv = read_text(dir / "density.csv");
  EXPECT_NE(csv.find("\n1000,14,"), std::string::npos);
  EXPECT_EQ(run("density --config " + kConfigs + "/scan_small.json --checkpoints 100,10 --output-dir " + dir.string()), 2);
}
