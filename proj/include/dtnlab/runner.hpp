#pragma once

#include "dtnlab/config.hpp"
#include "dtnlab/dtn.hpp"
#include "dtnlab/verify.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dtn {

/// Command-line overrides. Cache directory precedence: flag, then the
/// DTNLAB_CACHE_DIR environment variable, then the config.
struct RunOptions {
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> cache;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::ostream* log = nullptr;  // diagnostics (cache warnings); null → silent
};

/// Builds or loads operators for one config. Thread-safe; each distinct
/// (potential, nodes, mode factor) is built once.
class OperatorStore {
 public:
  OperatorStore(const ExperimentConfig& config, std::filesystem::path cache_dir, std::ostream* log);
  ~OperatorStore();
  OperatorStore(const OperatorStore&) = delete;
  OperatorStore& operator=(const OperatorStore&) = delete;

  std::shared_ptr<const DtnOperator> get(const PotentialSpec& V, std::size_t nodes, double mode_factor = 1.0);
  /// Base operator at resolutions[0] plus resolutions[1] (or twice the nodes),
  /// exact operators with doubled mode factor on the refined level.
  OperatorLevels levels(const PotentialSpec& V);
  /// Boundary for `nodes` nodes per component.
  std::shared_ptr<const BoundarySpace> boundary(std::size_t nodes);
  /// Cache file for an operator, empty if caching is off.
  std::filesystem::path cache_file(const PotentialSpec& V, std::size_t nodes) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct RunResult {
  std::vector<VerificationReport> reports;
  std::vector<std::filesystem::path> files;
  int exit_status = 0;  // 0 iff every verdict passes
};

/// Cache directory after applying the override precedence.
std::filesystem::path resolve_cache_dir(const ExperimentConfig& config, const RunOptions& options);

/// Runs one configured check against the store.
VerificationReport run_check(const ExperimentConfig& config, const CheckSpec& check, OperatorStore& store,
                             std::uint64_t seed);

/// Builds or loads the operators, runs every check (in parallel over `jobs`
/// workers, merged in check-name order), writes the reports and kernel slices.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Runs every check once per configured resolution (labels get "@n<N>").
RunResult run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

/// Builds (or loads) and caches the operator at every resolution; returns the cache files.
std::vector<std::filesystem::path> assemble_operators(const ExperimentConfig& config, const RunOptions& options = {});

/// <out>/spectrum_n<N>.csv with columns index,eigenvalue for every resolution.
std::vector<std::filesystem::path> dump_spectrum(const ExperimentConfig& config, const RunOptions& options = {});

/// Kernel slices <out>/kernels/kernel_n<N>_t<t>_theta<θ>.csv at resolutions[0].
std::vector<std::filesystem::path> dump_kernels(const ExperimentConfig& config,
                                                const std::vector<KernelSliceSpec>& slices,
                                                const RunOptions& options = {});

/// Reads reports/*.json from each directory and writes a merged, sorted
/// <out>/summary.json. Returns the number of failing checks.
int merge_reports(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out);

}  // namespace dtn
