#include "dtnlab/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dtn {

double RadialProfile::operator()(double theta) const {
  double r = mean;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) r += cos_coeffs[k] * std::cos((k + 1.0) * theta);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k) r += sin_coeffs[k] * std::sin((k + 1.0) * theta);
  return r;
}

double RadialProfile::derivative(double theta) const {
  double dr = 0.0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    dr -= (k + 1.0) * cos_coeffs[k] * std::sin((k + 1.0) * theta);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    dr += (k + 1.0) * sin_coeffs[k] * std::cos((k + 1.0) * theta);
  return dr;
}

double RadialProfile::sampled_minimum(std::size_t samples) const {
  double lo = (*this)(0.0);
  for (std::size_t i = 1; i < samples; ++i)
    lo = std::min(lo, (*this)(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples)));
  return lo;
}

double PlanarDomain::boundary_radius(std::size_t component, double theta) const {
  switch (spec_.kind) {
    case DomainKind::unit_disk:
      return 1.0;
    case DomainKind::annulus:
      return component == 0 ? spec_.r_inner : spec_.r_outer;
    case DomainKind::star_shaped:
      return spec_.profile(theta);
  }
  return 1.0;
}

Eigen::Vector2d PlanarDomain::boundary_point(std::size_t component, double theta) const {
  const double r = boundary_radius(component, theta);
  return {r * std::cos(theta), r * std::sin(theta)};
}

double PlanarDomain::boundary_speed(std::size_t component, double theta) const {
  if (spec_.kind != DomainKind::star_shaped) return boundary_radius(component, theta);
  const double r = spec_.profile(theta);
  const double dr = spec_.profile.derivative(theta);
  return std::hypot(r, dr);
}

double PlanarDomain::circle_radius(std::size_t component) const {
  if (spec_.kind == DomainKind::star_shaped)
    throw std::logic_error("circle_radius: star-shaped boundary is not a circle");
  return boundary_radius(component, 0.0);
}

double PlanarDomain::area() const {
  constexpr double pi = std::numbers::pi;
  switch (spec_.kind) {
    case DomainKind::unit_disk:
      return pi;
    case DomainKind::annulus:
      return pi * (spec_.r_outer * spec_.r_outer - spec_.r_inner * spec_.r_inner);
    case DomainKind::star_shaped: {
      // ½∫ r(θ)² dθ with orthogonality of the Fourier modes
      double s = spec_.profile.mean * spec_.profile.mean;
      for (double c : spec_.profile.cos_coeffs) s += 0.5 * c * c;
      for (double c : spec_.profile.sin_coeffs) s += 0.5 * c * c;
      return pi * s;
    }
  }
  return 0.0;
}

std::string PlanarDomain::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (spec_.kind) {
    case DomainKind::unit_disk:
      os << "unit-disk";
      break;
    case DomainKind::annulus:
      os << "annulus(" << spec_.r_inner << "," << spec_.r_outer << ")";
      break;
    case DomainKind::star_shaped:
      os << "star(" << spec_.profile.mean << ";cos";
      for (double c : spec_.profile.cos_coeffs) os << "," << c;
      os << ";sin";
      for (double c : spec_.profile.sin_coeffs) os << "," << c;
      os << ")";
      break;
  }
  return os.str();
}

PlanarDomain make_domain(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::unit_disk:
      break;
    case DomainKind::annulus:
      if (!(std::isfinite(spec.r_inner) && std::isfinite(spec.r_outer)) || spec.r_inner <= 0.0)
        throw std::invalid_argument("annulus: radii must be positive and finite");
      if (spec.r_inner >= spec.r_outer)
        throw std::invalid_argument("annulus: r_inner must be smaller than r_outer");
      break;
    case DomainKind::star_shaped: {
      auto finite = [](const std::vector<double>& v) {
        for (double c : v)
          if (!std::isfinite(c)) return false;
        return true;
      };
      if (!std::isfinite(spec.profile.mean) || !finite(spec.profile.cos_coeffs) ||
          !finite(spec.profile.sin_coeffs))
        throw std::invalid_argument("star-shaped: profile coefficients must be finite");
      const double lo = spec.profile.sampled_minimum();
      if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "star-shaped: radial profile must stay positive (sampled minimum " << lo << ")";
        throw std::invalid_argument(os.str());
      }
      break;
    }
  }
  return PlanarDomain(spec);
}

PlanarDomain unit_disk() { return make_domain(DomainSpec{}); }

PlanarDomain annulus(double r_inner, double r_outer) {
  DomainSpec s;
  s.kind = DomainKind::annulus;
  s.r_inner = r_inner;
  s.r_outer = r_outer;
  return make_domain(s);
}

PlanarDomain star_shaped(RadialProfile profile) {
  DomainSpec s;
  s.kind = DomainKind::star_shaped;
  s.profile = std::move(profile);
  return make_domain(s);
}

}  // namespace dtn
