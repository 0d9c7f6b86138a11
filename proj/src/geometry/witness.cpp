#include "dtnlab/boundary.hpp"

#include "geometry_detail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtn {

WitnessSpec draw_witness_spec(const BoundarySpace& b, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t nc = b.component_count();

  WitnessSpec w;
  w.order = k;
  w.family = unit(rng) < 0.6 ? WitnessSpec::Family::cone : WitnessSpec::Family::fourier;
  w.component = std::min(nc - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(nc)));
  w.center = unit(rng);
  if (unit(rng) < 0.5) w.clip = unit(rng) * b.diameter[w.component];
  w.slope = unit(rng);
  w.offsets.resize(nc);
  for (double& o : w.offsets) o = unit(rng) < 0.5 ? std::round(unit(rng)) : unit(rng);
  w.fourier.resize(nc);
  for (auto& coeffs : w.fourier) {
    coeffs.resize(12);
    for (std::size_t m = 0; m < 6; ++m) {
      const double decay = 1.0 / static_cast<double>((m + 1) * (m + 1));
      coeffs[2 * m] = normal(rng) * decay;
      coeffs[2 * m + 1] = normal(rng) * decay;
    }
  }
  if (k > 1) {
    // averaging width of order one in arc length, independent of the mesh
    const double h = b.circumference[w.component] / static_cast<double>(b.nodes_per_component);
    const double width = 0.2 + 0.8 * unit(rng);
    w.smoothing_passes = std::min(400, static_cast<int>(std::ceil((width / h) * (width / h))));
  }
  return w;
}

LipschitzWitness realize_witness(const BoundarySpace& b, const WitnessSpec& spec) {
  if (spec.offsets.size() != b.component_count())
    throw std::invalid_argument("realize_witness: one offset per boundary component required");
  if (spec.slope < 0.0 || spec.slope > 1.0)
    throw std::invalid_argument("realize_witness: slope must lie in [0, 1]");
  const int k = std::max(1, spec.order);
  LipschitzWitness g;
  g.order = k;
  g.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()));

  Eigen::VectorXd shape = Eigen::VectorXd::Zero(g.values.size());
  for (std::size_t c = 0; c < b.component_count(); ++c) {
    const std::size_t lo = b.component_begin[c];
    const std::size_t hi = b.component_begin[c + 1];
    const double L = b.circumference[c];
    for (std::size_t a = lo; a < hi; ++a) {
      const auto ia = static_cast<Eigen::Index>(a);
      double v = 0.0;
      if (spec.family == WitnessSpec::Family::cone) {
        if (c == spec.component) {
          const double d = std::abs(b.arc_position[ia] - spec.center * L);
          v = std::min(std::min(d, L - d), spec.clip);
        }
      } else if (c < spec.fourier.size()) {
        const auto& coeffs = spec.fourier[c];
        const double theta = b.angles[ia];
        for (std::size_t m = 0; 2 * m + 1 < coeffs.size(); ++m)
          v += coeffs[2 * m] * std::cos((m + 1.0) * theta) + coeffs[2 * m + 1] * std::sin((m + 1.0) * theta);
      }
      shape[ia] = v;
    }
    const std::size_t n = hi - lo;
    Eigen::VectorXd tmp(static_cast<Eigen::Index>(n));
    for (int pass = 0; pass < spec.smoothing_passes; ++pass) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto prev = static_cast<Eigen::Index>(lo + (i + n - 1) % n);
        const auto next = static_cast<Eigen::Index>(lo + (i + 1) % n);
        tmp[static_cast<Eigen::Index>(i)] =
            0.25 * shape[prev] + 0.5 * shape[static_cast<Eigen::Index>(lo + i)] + 0.25 * shape[next];
      }
      shape.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(n)) = tmp;
    }
    const double sup = detail::component_derivative_sup(b, shape, c, k);
    auto seg = shape.segment(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(n));
    if (sup > 0.0) seg /= sup;
    seg.array() -= shape[static_cast<Eigen::Index>(lo)];
  }

  const double budget = b.D * (1.0 - spec.slope);
  for (std::size_t c = 0; c < b.component_count(); ++c) {
    const std::size_t lo = b.component_begin[c];
    const std::size_t hi = b.component_begin[c + 1];
    const double offset = budget * std::clamp(spec.offsets[c], 0.0, 1.0);
    for (std::size_t a = lo; a < hi; ++a) {
      const auto ia = static_cast<Eigen::Index>(a);
      g.values[ia] = offset + spec.slope * shape[ia];
    }
  }
  const double lhs = witness_constraint(b, g.values, k);
  if (lhs > b.D) g.values *= b.D / lhs;  // rounding only
  for (NodeIndex anchor : b.anchors) g.anchor_offsets.push_back(g.values[static_cast<Eigen::Index>(anchor)]);
  return g;
}

double rho_oracle_sample(const BoundarySpace& b, NodeIndex x, NodeIndex y, std::size_t n_samples, int k,
                         std::uint64_t seed) {
  if (x >= b.size() || y >= b.size()) throw std::out_of_range("rho_oracle_sample: node index");
  if (x == y) return 0.0;
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const LipschitzWitness g = realize_witness(b, draw_witness_spec(b, k, rng));
    best = std::max(best, std::abs(g.values[static_cast<Eigen::Index>(x)] -
                                   g.values[static_cast<Eigen::Index>(y)]));
  }
  return best;
}

}  // namespace dtn
