#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace dtn {

enum class DomainKind { unit_disk, annulus, star_shaped };

/// Radial profile r(θ) = mean + Σ_k (cos_k cos kθ + sin_k sin kθ), k starting at 1.
struct RadialProfile {
  double mean = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  [[nodiscard]] double operator()(double theta) const;
  [[nodiscard]] double derivative(double theta) const;
  /// Minimum over a dense angular sample.
  [[nodiscard]] double sampled_minimum(std::size_t samples = 4096) const;
};

/// Input description accepted by make_domain.
struct DomainSpec {
  DomainKind kind = DomainKind::unit_disk;
  double r_inner = 0.0;
  double r_outer = 0.0;
  RadialProfile profile;
};

/// Bounded planar domain with smooth boundary. Each boundary component is
/// parametrized counterclockwise by θ ∈ [0, 2π); for the annulus component 0
/// is the inner circle and component 1 the outer one.
class PlanarDomain {
 public:
  [[nodiscard]] DomainKind kind() const { return spec_.kind; }
  [[nodiscard]] const DomainSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t component_count() const {
    return spec_.kind == DomainKind::annulus ? 2 : 1;
  }

  /// Distance from the origin of the boundary point at angle θ.
  [[nodiscard]] double boundary_radius(std::size_t component, double theta) const;
  [[nodiscard]] Eigen::Vector2d boundary_point(std::size_t component, double theta) const;
  /// |γ'(θ)| for the counterclockwise parametrization.
  [[nodiscard]] double boundary_speed(std::size_t component, double theta) const;
  /// Exact radius of a circular component; throws for star-shaped boundaries.
  [[nodiscard]] double circle_radius(std::size_t component) const;
  [[nodiscard]] bool is_circular() const { return spec_.kind != DomainKind::star_shaped; }

  [[nodiscard]] double area() const;
  /// Canonical text used for cache keys and report hashes.
  [[nodiscard]] std::string describe() const;

 private:
  friend PlanarDomain make_domain(const DomainSpec& spec);
  explicit PlanarDomain(DomainSpec spec) : spec_(std::move(spec)) {}
  DomainSpec spec_;
};

/// Validates the description. Throws std::invalid_argument for nonpositive or
/// misordered radii, non-finite profile coefficients, or a profile that is not
/// strictly positive (a radial graph that reaches the origin is not a smooth
/// Jordan curve).
PlanarDomain make_domain(const DomainSpec& spec);

PlanarDomain unit_disk();
PlanarDomain annulus(double r_inner, double r_outer);
PlanarDomain star_shaped(RadialProfile profile);

}  // namespace dtn
