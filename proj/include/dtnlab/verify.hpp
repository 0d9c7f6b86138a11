#pragma once

#include "dtnlab/boundary.hpp"
#include "dtnlab/dtn.hpp"
#include "dtnlab/fem.hpp"
#include "dtnlab/kernel_io.hpp"
#include "dtnlab/semigroup.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace dtn {

/// Exponents of the Poisson-type bound c (cos θ)^{−cos_power} (|z|∧1)^{−time_exponent}
/// e^{−λ_1 Re z} / (1 + dist/|z|)^{poisson_exponent}.
struct BoundSpec {
  int d = 2;
  double poisson_exponent = 2.0;
  double time_exponent = 1.0;
  double cos_power = 0.0;
  /// Smallest eigenvalue of the operator under test when left NaN.
  double eigenvalue_shift = std::numeric_limits<double>::quiet_NaN();

  /// Real-time bound in dimension d: exponents d and d − 1, no angular factor.
  static BoundSpec real_time(int d = 2);
  /// Complex-time bound: adds the (cos θ)^{−2d(d+1)} factor.
  static BoundSpec complex_time(int d = 2);
  void validate() const;
};

/// Times |z| e^{iθ} for every modulus and angle, plus node-pair subsampling.
struct SweepGrid {
  std::vector<double> moduli;
  std::vector<double> angles{0.0};
  std::size_t pair_stride = 1;

  /// per_decade log-spaced moduli covering [lo, hi] including both ends.
  static SweepGrid log_spaced(double lo, double hi, int per_decade, std::vector<double> angles = {0.0});
  /// Geometric midpoints inserted between consecutive moduli (density doubled).
  /// Angles are kept: checks report per-angle values, so refinement compares rays.
  [[nodiscard]] SweepGrid refined() const;
  /// Throws std::invalid_argument on an empty grid, nonpositive modulus, or an
  /// angle outside the sector (cos θ < 0.01).
  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Base operator plus its refinement (doubled nodes, doubled mode factor for
/// exact operators). Stability verdicts compare the two.
struct OperatorLevels {
  std::shared_ptr<const DtnOperator> base;
  std::shared_ptr<const DtnOperator> refined;
};

/// Rebuilds op on a doubled node set: exact operators also double the mode
/// factor, FEM operators are remeshed.
std::shared_ptr<const DtnOperator> refine_operator(const DtnOperator& op);
OperatorLevels make_levels(std::shared_ptr<const DtnOperator> op);

/// Canonical text for an operator: domain, potential, backend, nodes, modes.
std::string describe_operator(const DtnOperator& op);

/// Columns plus numeric rows, written as plot-data CSV next to the report.
struct PlotTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct VerificationReport {
  std::string check;
  /// Label used for file names and ordering; defaults to `check`.
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json measured = nlohmann::json::object();
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json grid = nlohmann::json::object();
  std::string backend;
  /// Canonical description of everything the result depends on.
  std::string inputs;
  std::vector<PlotTable> tables;
  std::vector<std::string> notes;

  /// Git blob hash of `inputs`.
  [[nodiscard]] std::string input_hash() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Relative change |b − a| / max(|a|, |b|), 0 when both vanish.
double relative_change(double a, double b);

/// Least-squares slope of log y against log x. Throws std::invalid_argument for
/// fewer than 4 points or nonpositive data.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Operator checks --------------------------------------------------------------

/// Relative eigenvalue errors against `reference` for the first `count`
/// eigenvalues (λ = 0 compared absolutely) at every resolution. Passes when
/// the finest error is ≤ tolerance and errors decrease with resolution.
VerificationReport spectrum_check(const std::vector<std::shared_ptr<const DtnOperator>>& resolutions,
                                  const Eigen::VectorXd& reference, std::size_t count, double tolerance = 0.02);

/// Coercivity margin μ at fixed ω over harmonic extensions; passes when μ > 0.
VerificationReport coercivity_check(const StiffnessSystem& sys, std::size_t samples, double omega = 1.0,
                                    std::uint64_t seed = 7);

// Semigroup checks -------------------------------------------------------------

/// C* = sup |K_z(x,y)| (1 + dist/|z|)^p (|z|∧1)^{time_exp} e^{λ_1 Re z} (cos θ)^{cos_power}
/// per angle ray and overall, on both levels (the refined level uses the refined grid).
/// Passes when finite and the relative change is < stability (default 0.2).
/// For real times it also reports min t · K_t(x, x) at the smallest t.
VerificationReport poisson_sup_ratio(const OperatorLevels& levels, const SweepGrid& grid, const BoundSpec& spec,
                                     DistanceKind distance = DistanceKind::euclidean, double stability = 0.2);

/// min (K^{V₁}_t − K^{V₂}_t) and min K^{V₂}_t ≥ −tolerance over times; also the
/// trace comparison Σ e^{−tλ_k(V₂)} ≤ Σ e^{−tλ_k(V₁)}.
VerificationReport domination_check(const DtnOperator& op_v1, const DtnOperator& op_v2,
                                    const std::vector<double>& times, double tolerance = 1e-8);

/// Row quadrature sums of the discrete kernel ≤ 1 + tolerance, = 1 within
/// equality_tolerance for V = 0, entries ≥ −tolerance.
VerificationReport submarkov_check(const DtnOperator& op, const std::vector<double>& times, double tolerance = 1e-8,
                                   double equality_tolerance = 1e-6);

/// Fitted log-log slope of ‖S_t‖_{p→q} against −(d−1)(1/p − 1/q). One-sided
/// (slope ≥ expected − tolerance) unless two_sided.
VerificationReport lplq_slope(const DtnOperator& op, double p, double q, const std::vector<double>& times,
                              double tolerance = 0.15, bool two_sided = false, int d = 2);

/// For every witness g: sup over z of max_{a,b} |(g_a − g_b)^order K_z(a,b)| (cos θ)^{cos_power} / |z|.
/// Witness descriptions are drawn once (seeded) and realized on each level.
VerificationReport commutator_growth_check(const OperatorLevels& levels, std::size_t witnesses,
                                           const SweepGrid& grid, int order = 2, double cos_power = 0.0,
                                           std::uint64_t seed = 1, double stability = 0.2);

/// Weighted sup of |∂_s^k ∂_s^ℓ K_z| with weight
/// (cos θ)^{4d(d+1)+k+ℓ} |z|^{d−1+k+ℓ} e^{−2|z|} (1 + |x−y|/|z|)^d.
VerificationReport derivative_bound_check(const OperatorLevels& levels, const SweepGrid& grid, int k, int l,
                                          double stability = 0.2, int d = 2);

/// Smallest c(t) with Σ_z w_z P_t(x,z) P_t(z,y) ≤ c(t) P_t(x,y), P_t(x,y) = (t∧1)^{−(d−1)}(1 + |x−y|/t)^{−d};
/// rows x are subsampled by `row_stride`. Passes when max c / min c < uniformity.
VerificationReport convolution_check(const BoundarySpace& b, const std::vector<double>& times,
                                     std::size_t row_stride = 1, double uniformity = 2.0, int d = 2);

/// Discrete L₁ → L₁ norm (max column quadrature sum of |K_z|) swept along
/// rays at the given angles; per-angle sup must be finite and refinement-stable.
/// Throws std::invalid_argument for angles with cos θ < 0.01.
VerificationReport sector_holomorphy_sweep(const OperatorLevels& levels, const std::vector<double>& angles,
                                           const std::vector<double>& times, double stability = 0.2);

/// Scalar identity ∫ μ_t(s) e^{−s a²} ds = e^{−ta} plus the operator round trip
/// e^{−tP} φ_k against subordinated e^{−sP²} for the eigenvectors.
VerificationReport subordination_check(const DtnOperator& op, const std::vector<double>& values,
                                       const std::vector<double>& times, double tolerance = 1e-8,
                                       std::size_t eigenvectors = 16);

/// Duhamel residuals for random symmetric A, diagonal B of the given size, for
/// orders 1..max_order, plus the commuting case.
VerificationReport duhamel_check(int size, int max_order, int nodes, std::uint64_t seed,
                                 const std::vector<double>& tolerances);

/// Metric axioms, ρ ≤ 3D, cross-component ρ ≥ 1, same-component ρ = geodesic,
/// metric equivalence constant, and the oracle gap on cross-component anchors.
VerificationReport metric_check(const BoundarySpace& b, std::size_t oracle_samples, std::uint64_t seed,
                                double gap_tolerance = 0.02);

/// Reports sorted by label, then serialized deterministically.
nlohmann::json summarize(std::vector<VerificationReport> reports);

/// Writes <dir>/summary.json, <dir>/reports/<label>.json and
/// <dir>/plots/<label>.<table>.csv. Returns the paths written, in order.
/// Throws std::runtime_error if the directory is not writable.
std::vector<std::filesystem::path> emit_report(const std::vector<VerificationReport>& reports,
                                               const std::filesystem::path& dir);

void write_table_csv(const std::filesystem::path& file, const PlotTable& table);

}  // namespace dtn
