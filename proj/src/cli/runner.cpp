#include "dtnlab/runner.hpp"

#include "dtnlab/cache.hpp"
#include "dtnlab/lp_norm.hpp"
#include "dtnlab/mesh.hpp"
#include "dtnlab/rotational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace dtn {

namespace fs = std::filesystem;
using nlohmann::json;

// Operator store ---------------------------------------------------------------

struct OperatorStore::Impl {
  const ExperimentConfig& config;
  PlanarDomain domain;
  fs::path cache_dir;
  std::ostream* log;
  std::mutex mu;
  std::map<std::tuple<std::string, std::size_t, double>, std::shared_future<std::shared_ptr<const DtnOperator>>> ops;
  std::map<std::size_t, std::shared_ptr<const BoundarySpace>> boundaries;

  Impl(const ExperimentConfig& c, fs::path dir, std::ostream* l)
      : config(c), domain(c.build_domain()), cache_dir(std::move(dir)), log(l) {}

  void warn(const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(mu);
    *log << "dtnlab: warning: " << msg << "\n";
  }

  std::size_t max_mode(std::size_t nodes) const { return config.modes > 0 ? config.modes : nodes / 2 - 1; }

  Provenance provenance() const {
    return config.backend == Backend::exact ? Provenance::exact_spectral : Provenance::fem_schur;
  }

  std::string key(const PotentialField& V, std::size_t nodes) const {
    return operator_cache_key(domain, V, provenance(), nodes,
                              config.backend == Backend::exact ? max_mode(nodes) : 0);
  }

  std::shared_ptr<const DtnOperator> build(std::shared_ptr<const BoundarySpace> b, const PotentialField& V,
                                           std::size_t nodes) {
    const std::string k = key(V, nodes);
    fs::path file;
    if (!cache_dir.empty()) {
      file = cache_path(cache_dir, k);
      CacheLookup hit = load_operator(file, k, b, V);
      if (hit.status == CacheStatus::hit) return std::make_shared<const DtnOperator>(std::move(*hit.op));
      if (hit.status == CacheStatus::stale) warn("stale cache entry " + file.string() + " (" + hit.message + "), rebuilding");
    }
    DtnOperator op = config.backend == Backend::exact ? exact_rotational_dtn(b, V, max_mode(nodes))
                                                      : fem_dtn(domain, V, nodes);
    if (!file.empty()) {
      try {
        fs::create_directories(cache_dir);
        save_operator(file, k, op);
      } catch (const std::exception& e) {
        warn(std::string("could not write cache: ") + e.what());
      }
    }
    return std::make_shared<const DtnOperator>(std::move(op));
  }
};

OperatorStore::OperatorStore(const ExperimentConfig& config, fs::path cache_dir, std::ostream* log)
    : impl_(std::make_unique<Impl>(config, std::move(cache_dir), log)) {}

OperatorStore::~OperatorStore() = default;

std::shared_ptr<const BoundarySpace> OperatorStore::boundary(std::size_t nodes) {
  std::lock_guard lock(impl_->mu);
  auto& slot = impl_->boundaries[nodes];
  if (!slot) slot = std::make_shared<const BoundarySpace>(build_boundary_space(impl_->domain, nodes));
  return slot;
}

std::shared_ptr<const DtnOperator> OperatorStore::get(const PotentialSpec& spec, std::size_t nodes, double mode_factor) {
  const PotentialField V = spec.build();
  // The mode factor only changes kernel evaluation, not the eigenpairs.
  const auto key = std::make_tuple(V.describe(), nodes, mode_factor);
  std::promise<std::shared_ptr<const DtnOperator>> promise;
  std::shared_future<std::shared_ptr<const DtnOperator>> future;
  bool owner = false;
  {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->ops.find(key);
    if (it != impl_->ops.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      impl_->ops.emplace(key, future);
      owner = true;
    }
  }
  if (owner) {
    try {
      std::shared_ptr<const DtnOperator> op;
      if (mode_factor != 1.0) {
        DtnOperator copy = *get(spec, nodes, 1.0);
        copy.mode_factor = mode_factor;
        op = std::make_shared<const DtnOperator>(std::move(copy));
      } else {
        op = impl_->build(boundary(nodes), V, nodes);
      }
      promise.set_value(std::move(op));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

OperatorLevels OperatorStore::levels(const PotentialSpec& V) {
  const auto& res = impl_->config.resolutions;
  const std::size_t n = res.front();
  const std::size_t fine = res.size() > 1 ? res[1] : 2 * n;
  const double factor = impl_->config.backend == Backend::exact ? 2.0 : 1.0;
  return {get(V, n), get(V, fine, factor)};
}

fs::path OperatorStore::cache_file(const PotentialSpec& V, std::size_t nodes) const {
  if (impl_->cache_dir.empty()) return {};
  return cache_path(impl_->cache_dir, impl_->key(V.build(), nodes));
}

fs::path resolve_cache_dir(const ExperimentConfig& config, const RunOptions& options) {
  if (options.cache) return *options.cache;
  if (const char* env = std::getenv("DTNLAB_CACHE_DIR"); env && *env) return fs::path(env);
  return config.cache;
}

// Check dispatch ---------------------------------------------------------------

namespace {

std::size_t as_count(const CheckSpec& c, const std::string& key, double fallback) {
  const double v = c.option(key, fallback);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw ConfigError(c.source + ":" + std::to_string(c.line) + ":1: checks." + c.name + "." + key +
                      ": expected a positive integer");
  }
  return static_cast<std::size_t>(v);
}

int as_int(const CheckSpec& c, const std::string& key, double fallback) {
  const double v = c.option(key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e6) {
    throw ConfigError(c.source + ":" + std::to_string(c.line) + ":1: checks." + c.name + "." + key +
                      ": expected an integer");
  }
  return static_cast<int>(v);
}

DistanceKind as_distance(const CheckSpec& c) {
  const std::string d = c.text_option("distance", "euclidean");
  if (d == "euclidean") return DistanceKind::euclidean;
  if (d == "rho") return DistanceKind::rho;
  throw ConfigError(c.source + ":" + std::to_string(c.line) + ":1: checks." + c.name +
                    ".distance: expected euclidean or rho, got '" + d + "'");
}

bool as_bool(const CheckSpec& c, const std::string& key, bool fallback) {
  const std::string v = c.text_option(key, fallback ? "true" : "false");
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(c.source + ":" + std::to_string(c.line) + ":1: checks." + c.name + "." + key +
                    ": expected true or false");
}

std::vector<double> check_times(const ExperimentConfig& cfg, const CheckSpec& c) {
  return c.times ? *c.times : cfg.times.moduli;
}

SweepGrid check_grid(const ExperimentConfig& cfg, const CheckSpec& c) {
  const TimeGridSpec& g = c.grid ? *c.grid : cfg.times;
  SweepGrid s;
  s.moduli = c.times && !c.grid ? *c.times : g.moduli;
  s.angles = g.angles;
  s.pair_stride = g.pair_stride;
  return s;
}

/// Disk or annulus eigenvalues with multiplicity, ascending.
Eigen::VectorXd rotational_reference(const PlanarDomain& domain, double c, std::size_t count) {
  std::vector<double> radii;
  for (std::size_t i = 0; i < domain.component_count(); ++i) radii.push_back(domain.circle_radius(i));
  std::sort(radii.begin(), radii.end());
  const RotationalSpectrum spec(radii, c);
  std::vector<double> values;
  const auto blocks = spec.modes(count + 2);
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    for (Eigen::Index k = 0; k < blocks[m].values.size(); ++k) {
      values.push_back(blocks[m].values[k]);
      if (m > 0) values.push_back(blocks[m].values[k]);
    }
  }
  std::sort(values.begin(), values.end());
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k) out[static_cast<Eigen::Index>(k)] = values[k];
  return out;
}

/// Decides V₁ ≤ V₂ by sampling both over the domain (boundary sweep of radii).
bool potential_below(const PlanarDomain& domain, const PotentialField& a, const PotentialField& b) {
  bool below = true;
  bool above = true;
  const double r_lo = domain.kind() == DomainKind::annulus ? domain.spec().r_inner : 0.0;
  for (int i = 0; i <= 32; ++i) {
    const double s = i / 32.0;
    for (int j = 0; j < 32; ++j) {
      const double th = 2.0 * std::numbers::pi * j / 32.0;
      const double R = domain.boundary_radius(domain.component_count() - 1, th);
      const double r = r_lo + s * (R - r_lo);
      const Eigen::Vector2d p(r * std::cos(th), r * std::sin(th));
      const double va = a(p);
      const double vb = b(p);
      below = below && va <= vb + 1e-14;
      above = above && vb <= va + 1e-14;
    }
  }
  if (!below && !above) throw std::invalid_argument("domination: potentials are not ordered");
  return below;
}

std::vector<double> parse_list(const CheckSpec& c, const std::string& key, std::vector<double> fallback) {
  auto it = c.options.find(key);
  if (it == c.options.end()) return fallback;
  std::vector<double> out;
  std::string text = it->second;
  for (char& ch : text) {
    if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
  }
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(c.source + ":" + std::to_string(c.line) + ":1: checks." + c.name + "." + key +
                        ": expected a list of numbers");
    }
  }
  return out;
}

}  // namespace

VerificationReport run_check(const ExperimentConfig& cfg, const CheckSpec& c, OperatorStore& store, std::uint64_t seed) {
  const std::string& t = c.type;
  const auto tol = [&](double fallback) { return c.tolerance.value_or(fallback); };
  VerificationReport r;

  if (t == "spectrum") {
    c.expect_options({"count"});
    const PlanarDomain domain = cfg.build_domain();
    if (!domain.is_circular() || !cfg.potential.build().is_constant()) {
      throw std::invalid_argument("spectrum: reference eigenvalues need a disk or annulus with constant V");
    }
    const std::size_t count = as_count(c, "count", 17);
    std::vector<std::shared_ptr<const DtnOperator>> ops;
    for (std::size_t n : cfg.resolutions) ops.push_back(store.get(cfg.potential, n));
    r = spectrum_check(ops, rotational_reference(domain, cfg.potential.build().constant_value(), count), count,
                       tol(0.02));
  } else if (t == "coercivity") {
    c.expect_options({"samples", "omega"});
    auto b = store.boundary(cfg.resolutions.front());
    auto mesh = std::make_shared<const InteriorMesh>(build_interior_mesh(*b));
    const StiffnessSystem sys = assemble_system(mesh, b, cfg.potential.build());
    r = coercivity_check(sys, as_count(c, "samples", 64), c.option("omega", 1.0), seed);
  } else if (t == "poisson_sup_ratio") {
    c.expect_options({"distance", "cos_power", "stability"});
    const SweepGrid grid = check_grid(cfg, c);
    const bool complex = std::any_of(grid.angles.begin(), grid.angles.end(), [](double a) { return a != 0.0; });
    BoundSpec spec = complex ? BoundSpec::complex_time() : BoundSpec::real_time();
    spec.cos_power = c.option("cos_power", spec.cos_power);
    r = poisson_sup_ratio(store.levels(cfg.potential), grid, spec, as_distance(c), tol(c.option("stability", 0.2)));
  } else if (t == "domination") {
    c.expect_options({});
    const PotentialSpec other = c.compare_potential.value_or(PotentialSpec{});
    const bool first = potential_below(cfg.build_domain(), cfg.potential.build(), other.build());
    const std::size_t n = cfg.resolutions.front();
    auto a = store.get(cfg.potential, n);
    auto b = store.get(other, n);
    r = first ? domination_check(*a, *b, check_times(cfg, c), tol(1e-8))
              : domination_check(*b, *a, check_times(cfg, c), tol(1e-8));
  } else if (t == "submarkov") {
    c.expect_options({"equality_tolerance"});
    r = submarkov_check(*store.get(cfg.potential, cfg.resolutions.front()), check_times(cfg, c), tol(1e-8),
                        c.option("equality_tolerance", 1e-6));
  } else if (t == "lplq_slope") {
    c.expect_options({"p", "q", "two_sided"});
    r = lplq_slope(*store.get(cfg.potential, cfg.resolutions.front()), c.option("p", 1.0), c.option("q", kInf),
                   check_times(cfg, c), tol(0.15), as_bool(c, "two_sided", false));
  } else if (t == "commutator_growth") {
    c.expect_options({"witnesses", "order", "cos_power", "stability"});
    r = commutator_growth_check(store.levels(cfg.potential), as_count(c, "witnesses", 50), check_grid(cfg, c),
                                as_int(c, "order", 2), c.option("cos_power", 0.0), seed,
                                tol(c.option("stability", 0.2)));
  } else if (t == "derivative_bound") {
    c.expect_options({"k", "l", "stability"});
    r = derivative_bound_check(store.levels(cfg.potential), check_grid(cfg, c), as_int(c, "k", 1), as_int(c, "l", 0),
                               tol(c.option("stability", 0.2)));
  } else if (t == "convolution") {
    c.expect_options({"nodes", "row_stride"});
    const std::size_t n = as_count(c, "nodes", static_cast<double>(cfg.resolutions.front()));
    r = convolution_check(*store.boundary(n), check_times(cfg, c), as_count(c, "row_stride", 1), tol(2.0));
  } else if (t == "sector_holomorphy") {
    c.expect_options({"angles", "stability"});
    const SweepGrid grid = check_grid(cfg, c);
    const std::vector<double> angles = parse_list(c, "angles", grid.angles);
    r = sector_holomorphy_sweep(store.levels(cfg.potential), angles, grid.moduli, tol(c.option("stability", 0.2)));
  } else if (t == "subordination") {
    c.expect_options({"values", "eigenvectors"});
    const std::vector<double> values = parse_list(c, "values", {0.0, 0.5, 1.0, 2.0, 5.0});
    r = subordination_check(*store.get(cfg.potential, cfg.resolutions.front()), values, check_times(cfg, c),
                            tol(1e-8), as_count(c, "eigenvectors", 16));
  } else if (t == "duhamel") {
    c.expect_options({"size", "order", "nodes", "tolerances"});
    const int order = as_int(c, "order", 2);
    std::vector<double> tols = parse_list(c, "tolerances", {1e-10, 1e-8});
    if (c.tolerance) tols.assign(static_cast<std::size_t>(std::max(order, 1)), *c.tolerance);
    while (static_cast<int>(tols.size()) < order) tols.push_back(tols.back());
    r = duhamel_check(as_int(c, "size", 4), order, as_int(c, "nodes", 64), seed, tols);
  } else if (t == "metric") {
    c.expect_options({"nodes", "oracle_samples"});
    const std::size_t n = as_count(c, "nodes", 64);
    r = metric_check(*store.boundary(n), as_count(c, "oracle_samples", 10000), seed, tol(0.02));
  } else {
    throw std::invalid_argument("unknown check type '" + t + "'");
  }
  r.name = c.name;
  return r;
}

// Runs -------------------------------------------------------------------------

namespace {

fs::path output_dir(const ExperimentConfig& cfg, const RunOptions& o) { return o.output.value_or(cfg.output); }

std::uint64_t seed_of(const ExperimentConfig& cfg, const RunOptions& o) { return o.seed.value_or(cfg.seed); }

VerificationReport failed_report(const CheckSpec& c, const std::string& error) {
  VerificationReport r;
  r.check = c.type;
  r.name = c.name;
  r.pass = false;
  r.backend = "none";
  r.inputs = c.type + "|" + c.name + "|error";
  r.measured = {{"error", error}};
  r.notes.push_back("check raised: " + error);
  return r;
}

std::vector<VerificationReport> run_checks(const ExperimentConfig& cfg, const std::vector<CheckSpec>& checks,
                                           OperatorStore& store, std::uint64_t seed, unsigned jobs) {
  std::vector<VerificationReport> out(checks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      try {
        out[i] = run_check(cfg, checks[i], store, seed);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        out[i] = failed_report(checks[i], e.what());
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(checks.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::future<void>> pool;
    for (unsigned k = 0; k < n; ++k) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

std::string number_label(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

RunResult finish(std::vector<VerificationReport> reports, const fs::path& out) {
  RunResult res;
  res.files = emit_report(reports, out);
  res.exit_status = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
  res.reports = std::move(reports);
  return res;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& o) {
  validate_config(cfg);
  OperatorStore store(cfg, resolve_cache_dir(cfg, o), o.log);
  const fs::path out = output_dir(cfg, o);
  RunResult res = finish(run_checks(cfg, cfg.checks, store, seed_of(cfg, o), o.jobs), out);
  if (!cfg.kernel_slices.empty()) {
    const auto files = dump_kernels(cfg, cfg.kernel_slices, o);
    res.files.insert(res.files.end(), files.begin(), files.end());
  }
  return res;
}

RunResult run_sweep(const ExperimentConfig& cfg, const RunOptions& o) {
  validate_config(cfg);
  const fs::path cache = resolve_cache_dir(cfg, o);
  std::vector<VerificationReport> all;
  for (std::size_t n : cfg.resolutions) {
    ExperimentConfig level = cfg;
    level.resolutions = {n};
    OperatorStore store(level, cache, o.log);
    std::vector<CheckSpec> checks = level.checks;
    for (auto& c : checks) c.name += "@n" + std::to_string(n);
    auto reports = run_checks(level, checks, store, seed_of(cfg, o), o.jobs);
    all.insert(all.end(), std::make_move_iterator(reports.begin()), std::make_move_iterator(reports.end()));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return finish(std::move(all), output_dir(cfg, o));
}

std::vector<fs::path> assemble_operators(const ExperimentConfig& cfg, const RunOptions& o) {
  const fs::path cache = resolve_cache_dir(cfg, o);
  if (cache.empty()) throw ConfigError(cfg.source + ":1:1: cache: assemble needs a cache directory (--cache, DTNLAB_CACHE_DIR or 'cache:')");
  OperatorStore store(cfg, cache, o.log);
  std::vector<fs::path> files;
  for (std::size_t n : cfg.resolutions) {
    store.get(cfg.potential, n);
    files.push_back(store.cache_file(cfg.potential, n));
  }
  return files;
}

std::vector<fs::path> dump_spectrum(const ExperimentConfig& cfg, const RunOptions& o) {
  OperatorStore store(cfg, resolve_cache_dir(cfg, o), o.log);
  const fs::path out = output_dir(cfg, o);
  fs::create_directories(out);
  std::vector<fs::path> files;
  for (std::size_t n : cfg.resolutions) {
    auto op = store.get(cfg.potential, n);
    const fs::path file = out / ("spectrum_n" + std::to_string(n) + ".csv");
    std::ofstream f(file);
    if (!f) throw std::runtime_error("cannot write " + file.string());
    f << "index,eigenvalue\n";
    char buf[64];
    for (Eigen::Index k = 0; k < op->eigenvalues.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", op->eigenvalues[k]);
      f << k << "," << buf << "\n";
    }
    files.push_back(file);
  }
  return files;
}

std::vector<fs::path> dump_kernels(const ExperimentConfig& cfg, const std::vector<KernelSliceSpec>& slices,
                                   const RunOptions& o) {
  OperatorStore store(cfg, resolve_cache_dir(cfg, o), o.log);
  const fs::path dir = output_dir(cfg, o) / "kernels";
  fs::create_directories(dir);
  const std::size_t n = cfg.resolutions.front();
  auto op = store.get(cfg.potential, n);
  std::vector<fs::path> files;
  for (const auto& s : slices) {
    const DistanceKind d = s.distance == "rho" ? DistanceKind::rho : DistanceKind::euclidean;
    const KernelMatrix K = kernel_matrix(*op, ComplexTime::polar(s.t, s.theta));
    const fs::path file = dir / ("kernel_n" + std::to_string(n) + "_t" + number_label(s.t) + "_theta" +
                                 number_label(s.theta) + ".csv");
    write_kernel_csv(file, K, *op->boundary, strided_pairs(*op->boundary, s.stride), d);
    files.push_back(file);
  }
  return files;
}

int merge_reports(const std::vector<fs::path>& inputs, const fs::path& out) {
  std::map<std::string, json> by_name;
  for (const auto& dir : inputs) {
    const fs::path reports = dir / "reports";
    if (!fs::is_directory(reports)) throw std::runtime_error("no reports directory in " + dir.string());
    for (const auto& entry : fs::directory_iterator(reports)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream f(entry.path());
      json j = json::parse(f);
      const std::string name = j.at("name").get<std::string>();
      by_name[name] = std::move(j);
    }
  }
  json list = json::array();
  int passed = 0;
  int failed = 0;
  for (auto& [name, j] : by_name) {
    (j.at("verdict") == "pass" ? passed : failed) += 1;
    list.push_back(std::move(j));
  }
  fs::create_directories(out);
  std::ofstream f(out / "summary.json");
  if (!f) throw std::runtime_error("cannot write " + (out / "summary.json").string());
  f << json{{"checks", list}, {"passed", passed}, {"failed", failed}}.dump(2) << "\n";
  return failed;
}

}  // namespace dtn
