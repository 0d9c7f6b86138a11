#include "dtnlab/config.hpp"
#include "dtnlab/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dtn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dtnlab-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string error_of(const std::string& text) {
  try {
    validate_config(parse_config(text, "t.yaml"));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmall = R"(schema: 1
domain: {kind: unit-disk}
potential: {kind: constant, value: 1}
backend: exact
resolutions: [128]
times: {moduli: [0.1, 1, 10]}
checks:
  - submarkov
  - {type: domination, compare_potential: {kind: zero}}
  - {type: duhamel, size: 4}
)";

}  // namespace

TEST_CASE("config parses a full file") {
  const ExperimentConfig c = parse_config(R"(schema: 1
domain: {kind: annulus, r_inner: 0.5, r_outer: 1}
potential: {kind: constant, value: 2}
backend: fem
resolutions: [64, 128]
times: {min: 0.001, max: 10, per_decade: 2, angles: [0, 0.5]}
checks:
  - spectrum
  - {type: lplq_slope, name: l1inf, p: 1, q: inf, tolerance: 0.1}
  - {type: sector_holomorphy, angles: [0, 0.3]}
seed: 9
)",
                                          "x.yaml");
  CHECK(c.domain.kind == DomainKind::annulus);
  CHECK(c.backend == Backend::fem);
  CHECK(c.resolutions == std::vector<std::size_t>{64, 128});
  CHECK(c.times.moduli.size() == 9);
  CHECK(c.times.angles.size() == 2);
  REQUIRE(c.checks.size() == 3);
  CHECK(c.checks[1].name == "l1inf");
  CHECK(*c.checks[1].tolerance == 0.1);
  CHECK(std::isinf(c.checks[1].option("q", 0.0)));
  CHECK(c.checks[2].text_option("angles", "") == "0,0.29999999999999999");
  CHECK(c.seed == 9);
}

TEST_CASE("config errors name file, line and field") {
  CHECK(error_of("schema: 2\ndomain: {kind: unit-disk}\nchecks: [spectrum]\n").rfind("t.yaml:1:", 0) == 0);
  CHECK(error_of("schema: 1\nchecks: [spectrum]\n").find("domain: missing") != std::string::npos);
  const std::string unknown = error_of("schema: 1\nbogus: 3\ndomain: {kind: unit-disk}\nchecks: [spectrum]\n");
  CHECK(unknown.find("t.yaml:2:") == 0);
  CHECK(unknown.find("bogus") != std::string::npos);
  const std::string bad_type = error_of("schema: 1\ndomain: {kind: unit-disk}\nchecks:\n  - {type: nonsense}\n");
  CHECK(bad_type.find("t.yaml:4:") == 0);
  CHECK(bad_type.find("unknown check") != std::string::npos);
  CHECK(error_of("schema: 1\ndomain: {kind: unit-disk}\nchecks:\n  - {type: spectrum, tolerance: -1}\n").find("tolerance") != std::string::npos);
  CHECK(error_of("schema: 1\ndomain: {kind: unit-disk}\nchecks: []\n").find("checks") != std::string::npos);
  // The exact backend needs a circular domain.
  CHECK(error_of("schema: 1\ndomain: {kind: star-shaped, profile: {mean: 1, cos: [0, 0.1]}}\nchecks: [spectrum]\n")
            .find("backend") != std::string::npos);
  CHECK(error_of("schema: 1\ndomain: {kind: unit-disk}\nresolutions: [8]\nchecks: [spectrum]\n").find("resolutions") != std::string::npos);
  CHECK(error_of("schema: 1\ndomain: {kind: unit-disk}\ntimes: {moduli: [0.1, -1]}\nchecks: [spectrum]\n").find("times") != std::string::npos);
  CHECK(error_of(kSmall).empty());
}

TEST_CASE("unknown check options are rejected at run time") {
  ExperimentConfig c = parse_config("schema: 1\ndomain: {kind: unit-disk}\nresolutions: [32]\nchecks:\n  - {type: submarkov, colour: red}\n", "o.yaml");
  OperatorStore store(c, {}, nullptr);
  CHECK_THROWS_AS(run_check(c, c.checks[0], store, 1), ConfigError);
}

TEST_CASE("run writes reports; cache is reused; precedence of cache dirs") {
  const fs::path dir = scratch("run");
  ExperimentConfig c = parse_config(kSmall, "small.yaml");
  RunOptions o;
  o.output = dir / "out";
  o.cache = dir / "cache";
  const RunResult r = run_experiment(c, o);
  CHECK(r.exit_status == 0);
  CHECK(r.reports.size() == 3);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(fs::exists(dir / "out" / "reports" / "submarkov.json"));
  std::size_t cached = 0;
  for (const auto& e : fs::directory_iterator(dir / "cache")) cached += e.path().extension() == ".dtn";
  CHECK(cached == 2);  // V = 1 and V = 0 at n = 128

  // A corrupted entry is reported and rebuilt.
  const fs::path entry = fs::directory_iterator(dir / "cache")->path();
  { std::ofstream(entry, std::ios::trunc) << "junk"; }
  std::ostringstream log;
  o.log = &log;
  o.output = dir / "out2";
  CHECK(run_experiment(c, o).exit_status == 0);
  CHECK(log.str().find("stale cache entry") != std::string::npos);

  // Flag beats environment beats config.
  c.cache = "from-config";
  RunOptions none;
  ::setenv("DTNLAB_CACHE_DIR", "from-env", 1);
  CHECK(resolve_cache_dir(c, none) == "from-env");
  CHECK(resolve_cache_dir(c, o) == dir / "cache");
  ::unsetenv("DTNLAB_CACHE_DIR");
  CHECK(resolve_cache_dir(c, none) == "from-config");
}

TEST_CASE("failing check yields a failing report, not an abort") {
  const fs::path dir = scratch("fail");
  // Spectrum needs a rotational reference; a star-shaped FEM domain has none.
  ExperimentConfig c = parse_config(R"(schema: 1
domain: {kind: star-shaped, profile: {mean: 1, cos: [0, 0.1]}}
backend: fem
resolutions: [32]
checks: [spectrum, submarkov]
)",
                                    "s.yaml");
  RunOptions o;
  o.output = dir;
  const RunResult r = run_experiment(c, o);
  CHECK(r.exit_status == 1);
  REQUIRE(r.reports.size() == 2);
  CHECK_FALSE(r.reports[0].pass);
  CHECK(r.reports[0].measured.contains("error"));
  CHECK(r.reports[1].pass);
}

TEST_CASE("parallel and serial runs give identical bytes; sweep and merge") {
  const fs::path dir = scratch("det");
  const ExperimentConfig c = parse_config(kSmall, "small.yaml");
  RunOptions a, b;
  a.output = dir / "a";
  b.output = dir / "b";
  b.jobs = 3;
  run_experiment(c, a);
  run_experiment(c, b);
  for (const char* f : {"summary.json", "reports/domination.json", "reports/duhamel.json"}) {
    std::ifstream fa(dir / "a" / f, std::ios::binary), fb(dir / "b" / f, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  ExperimentConfig two = c;
  two.resolutions = {128, 256};
  RunOptions s;
  s.output = dir / "sweep";
  const RunResult sw = run_sweep(two, s);
  CHECK(sw.reports.size() == 6);
  CHECK(fs::exists(dir / "sweep" / "reports" / "submarkov@n256.json"));
  CHECK(merge_reports({dir / "a", dir / "sweep"}, dir / "merged") == 0);
  std::ifstream m(dir / "merged" / "summary.json");
  const auto j = nlohmann::json::parse(m);
  CHECK(j["checks"].size() == 9);
}

TEST_CASE("spectrum and kernel dumps") {
  const fs::path dir = scratch("dump");
  const ExperimentConfig c = parse_config(kSmall, "small.yaml");
  RunOptions o;
  o.output = dir;
  const auto spec = dump_spectrum(c, o);
  REQUIRE(spec.size() == 1);
  CHECK(spec[0].filename() == "spectrum_n128.csv");
  const auto k = dump_kernels(c, {KernelSliceSpec{0.5, 0.2, 8, "rho"}}, o);
  REQUIRE(k.size() == 1);
  CHECK(fs::exists(k[0]));
}
