#include "dtnlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dtn {

PotentialField PotentialField::zero() { return PotentialField{}; }

PotentialField PotentialField::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("constant potential must be finite");
  if (c == 0.0) return zero();
  PotentialField v;
  v.kind_ = PotentialKind::constant;
  v.value_ = c;
  return v;
}

PotentialField PotentialField::radial(std::vector<double> samples, double r_max) {
  if (samples.size() < 2) throw std::invalid_argument("radial potential needs at least two samples");
  if (!(r_max > 0.0)) throw std::invalid_argument("radial potential: r_max must be positive");
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("radial potential samples must be finite");
  PotentialField v;
  v.kind_ = PotentialKind::radial;
  v.samples_ = std::move(samples);
  v.r_max_ = r_max;
  return v;
}

PotentialField PotentialField::general(std::function<double(double, double)> fn, std::string label) {
  if (!fn) throw std::invalid_argument("general potential needs a callable");
  PotentialField v;
  v.kind_ = PotentialKind::general;
  v.fn_ = std::move(fn);
  v.label_ = std::move(label);
  return v;
}

double PotentialField::operator()(const Eigen::Vector2d& p) const {
  switch (kind_) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::constant:
      return value_;
    case PotentialKind::radial: {
      const double pos = std::clamp(p.norm() / r_max_, 0.0, 1.0) * static_cast<double>(samples_.size() - 1);
      const auto i = std::min(static_cast<std::size_t>(pos), samples_.size() - 2);
      const double f = pos - static_cast<double>(i);
      return (1.0 - f) * samples_[i] + f * samples_[i + 1];
    }
    case PotentialKind::general:
      return fn_(p.x(), p.y());
  }
  return 0.0;
}

std::string PotentialField::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case PotentialKind::zero:
      os << "zero";
      break;
    case PotentialKind::constant:
      os << "constant(" << value_ << ")";
      break;
    case PotentialKind::radial:
      os << "radial(" << r_max_;
      for (double s : samples_) os << "," << s;
      os << ")";
      break;
    case PotentialKind::general:
      os << "general(" << label_ << ")";
      break;
  }
  return os.str();
}

}  // namespace dtn
