#pragma once

#include "dtnlab/domain.hpp"
#include "dtnlab/potential.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtn {

inline constexpr int kConfigSchema = 1;

/// Parse or validation failure; the message starts with "<source>:<line>:<column>: <field>".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend { exact, fem };

std::string to_string(Backend b);

struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double value = 0.0;
  std::vector<double> samples;
  double r_max = 1.0;

  [[nodiscard]] PotentialField build() const;
};

struct TimeGridSpec {
  std::vector<double> moduli;
  std::vector<double> angles{0.0};
  std::size_t pair_stride = 1;
};

/// One requested check. `options` holds the remaining scalar keys
/// (e.g. p, q, k, l, witnesses, distance) as text; the runner converts them.
struct CheckSpec {
  std::string name;
  std::string type;
  std::optional<double> tolerance;
  std::optional<std::vector<double>> times;
  std::optional<TimeGridSpec> grid;
  std::optional<PotentialSpec> compare_potential;
  std::map<std::string, std::string> options;
  std::string source;
  int line = 0;

  /// Numeric option; throws ConfigError naming the check line if not a number.
  [[nodiscard]] double option(const std::string& key, double fallback) const;
  [[nodiscard]] std::string text_option(const std::string& key, const std::string& fallback) const;
  /// Fails for keys outside `allowed`.
  void expect_options(const std::vector<std::string>& allowed) const;
};

struct KernelSliceSpec {
  double t = 1.0;
  double theta = 0.0;
  std::size_t stride = 1;
  std::string distance = "euclidean";
};

struct ExperimentConfig {
  int schema = kConfigSchema;
  std::string source = "<config>";
  DomainSpec domain;
  PotentialSpec potential;
  Backend backend = Backend::exact;
  std::vector<std::size_t> resolutions{256};
  std::size_t modes = 0;  // exact backend: highest Fourier mode, 0 → n/2 − 1
  TimeGridSpec times;
  std::vector<CheckSpec> checks;
  std::vector<KernelSliceSpec> kernel_slices;
  std::filesystem::path output = "dtnlab-out";
  std::filesystem::path cache;  // empty → no cache
  std::uint64_t seed = 1;
  /// Source line of each parsed field path ("backend", "checks[1].tolerance", ...).
  std::map<std::string, int> lines;

  [[nodiscard]] PlanarDomain build_domain() const { return make_domain(domain); }
};

/// Check types accepted in `checks[].type`.
const std::vector<std::string>& known_check_types();

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& file);

/// Cross-field invariants: at least one check, exact backend only for circular
/// domains with constant V, tolerances > 0, times in the sector. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

}  // namespace dtn
