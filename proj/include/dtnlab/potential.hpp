#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace dtn {

enum class PotentialKind { zero, constant, radial, general };

/// Potential V on the domain. Radial profiles are sampled on a uniform grid in
/// r ∈ [0, r_max] and interpolated linearly; general potentials carry a label
/// that identifies them in cache keys.
class PotentialField {
 public:
  static PotentialField zero();
  static PotentialField constant(double c);
  static PotentialField radial(std::vector<double> samples, double r_max);
  static PotentialField general(std::function<double(double, double)> fn, std::string label);

  [[nodiscard]] PotentialKind kind() const { return kind_; }
  [[nodiscard]] double operator()(const Eigen::Vector2d& p) const;
  [[nodiscard]] bool is_constant() const { return kind_ == PotentialKind::zero || kind_ == PotentialKind::constant; }
  [[nodiscard]] double constant_value() const { return kind_ == PotentialKind::constant ? value_ : 0.0; }
  [[nodiscard]] std::string describe() const;

 private:
  PotentialKind kind_ = PotentialKind::zero;
  double value_ = 0.0;
  double r_max_ = 1.0;
  std::vector<double> samples_;
  std::function<double(double, double)> fn_;
  std::string label_;
};

}  // namespace dtn
