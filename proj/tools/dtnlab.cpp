// dtnlab command line: assemble / spectrum / kernel / verify / sweep / report.

#include "dtnlab/config.hpp"
#include "dtnlab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string cache;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_seed) {
  cmd->add_option("-c,--config", c.config, "experiment YAML file")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", c.out, "output directory (overrides 'output:')");
  cmd->add_option("--cache", c.cache, "operator cache directory (overrides DTNLAB_CACHE_DIR and 'cache:')");
  if (with_seed) {
    cmd->add_option("--seed", c.seed, "RNG seed (overrides 'seed:')");
    cmd->add_option("-j,--jobs", c.jobs, "worker threads for independent checks")->check(CLI::Range(1u, 256u));
  }
}

dtn::RunOptions options_of(const Common& c, CLI::App* cmd) {
  dtn::RunOptions o;
  if (!c.out.empty()) o.output = c.out;
  if (!c.cache.empty()) o.cache = c.cache;
  if (cmd->count("--seed")) o.seed = c.seed;
  o.jobs = c.jobs;
  o.log = &std::cerr;
  return o;
}

void print_verdicts(const dtn::RunResult& r) {
  for (const auto& rep : r.reports) {
    std::cout << (rep.pass ? "PASS " : "FAIL ") << rep.name << "\n";
  }
  std::size_t failed = 0;
  for (const auto& rep : r.reports) failed += rep.pass ? 0 : 1;
  std::cout << r.reports.size() - failed << "/" << r.reports.size() << " checks passed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-to-Neumann semigroup lab"};
  app.require_subcommand(1);

  Common assemble_opts, spectrum_opts, kernel_opts, verify_opts, sweep_opts;
  auto* assemble = app.add_subcommand("assemble", "build the operator at every resolution and store it in the cache");
  add_common(assemble, assemble_opts, false);
  auto* spectrum = app.add_subcommand("spectrum", "write spectrum_n<N>.csv for every resolution");
  add_common(spectrum, spectrum_opts, false);
  auto* kernel = app.add_subcommand("kernel", "write kernel slices for the configured (t, theta) pairs");
  add_common(kernel, kernel_opts, false);
  double slice_t = 0.0;
  double slice_theta = 0.0;
  std::size_t slice_stride = 1;
  std::string slice_distance = "euclidean";
  kernel->add_option("-t,--time", slice_t, "|z| of a single slice (replaces 'kernel_slices:')");
  kernel->add_option("--theta", slice_theta, "arg z of that slice");
  kernel->add_option("--stride", slice_stride, "node stride")->check(CLI::PositiveNumber);
  kernel->add_option("--distance", slice_distance, "distance column")->check(CLI::IsMember({"euclidean", "rho"}));
  auto* verify = app.add_subcommand("verify", "run the configured checks and write reports");
  add_common(verify, verify_opts, true);
  auto* sweep = app.add_subcommand("sweep", "run the checks once per resolution");
  add_common(sweep, sweep_opts, true);
  auto* report = app.add_subcommand("report", "merge reports/*.json from output directories into summary.json");
  std::vector<std::string> inputs;
  std::string report_out;
  report->add_option("inputs", inputs, "output directories")->required()->check(CLI::ExistingDirectory);
  report->add_option("-o,--out", report_out, "directory for the merged summary.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*report) {
      std::vector<std::filesystem::path> dirs(inputs.begin(), inputs.end());
      const int failed = dtn::merge_reports(dirs, report_out);
      std::cout << "wrote " << (std::filesystem::path(report_out) / "summary.json").string() << " (" << failed
                << " failing)\n";
      return failed == 0 ? 0 : 1;
    }
    if (*assemble) {
      const auto cfg = dtn::load_config(assemble_opts.config);
      for (const auto& f : dtn::assemble_operators(cfg, options_of(assemble_opts, assemble))) {
        std::cout << f.string() << "\n";
      }
      return 0;
    }
    if (*spectrum) {
      const auto cfg = dtn::load_config(spectrum_opts.config);
      for (const auto& f : dtn::dump_spectrum(cfg, options_of(spectrum_opts, spectrum))) std::cout << f.string() << "\n";
      return 0;
    }
    if (*kernel) {
      const auto cfg = dtn::load_config(kernel_opts.config);
      std::vector<dtn::KernelSliceSpec> slices = cfg.kernel_slices;
      if (kernel->count("--time")) {
        if (!(slice_t > 0.0)) throw dtn::ConfigError("--time: must be > 0");
        slices = {dtn::KernelSliceSpec{slice_t, slice_theta, slice_stride, slice_distance}};
      }
      if (slices.empty()) throw dtn::ConfigError(cfg.source + ":1:1: kernel_slices: nothing to write (give --time)");
      for (const auto& f : dtn::dump_kernels(cfg, slices, options_of(kernel_opts, kernel))) std::cout << f.string() << "\n";
      return 0;
    }
    const bool is_sweep = static_cast<bool>(*sweep);
    Common& c = is_sweep ? sweep_opts : verify_opts;
    const auto cfg = dtn::load_config(c.config);
    const auto o = options_of(c, is_sweep ? sweep : verify);
    const dtn::RunResult r = is_sweep ? dtn::run_sweep(cfg, o) : dtn::run_experiment(cfg, o);
    print_verdicts(r);
    return r.exit_status;
  } catch (const dtn::ConfigError& e) {
    std::cerr << "dtnlab: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dtnlab: error: " << e.what() << "\n";
    return 3;
  }
}
