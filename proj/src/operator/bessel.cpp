#include "dtnlab/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace dtn {

std::vector<double> bessel_i_ratios(std::size_t count, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_i_ratios: argument must be positive");
  std::vector<double> r(count);
  const auto start = count + 40 + static_cast<std::size_t>(4.0 * x);
  double ratio = 0.0;
  for (std::size_t m = start; m-- > 0;) {
    ratio = 1.0 / (2.0 * static_cast<double>(m + 1) / x + ratio);
    if (m < count) r[m] = ratio;
  }
  return r;
}

std::vector<double> bessel_k_ratios(std::size_t count, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_k_ratios: argument must be positive");
  std::vector<double> r(count);
  if (count == 0) return r;
  // K_{m+1} = K_{m-1} + (2m/x) K_m  ⇒  r_m = 1/r_{m-1} + 2m/x
  double ratio = std::cyl_bessel_k(1.0, x) / std::cyl_bessel_k(0.0, x);
  r[0] = ratio;
  for (std::size_t m = 1; m < count; ++m) {
    ratio = 1.0 / ratio + 2.0 * static_cast<double>(m) / x;
    r[m] = ratio;
  }
  return r;
}

double disk_mode_eigenvalue(std::size_t m, double c) {
  if (c < 0.0) throw std::invalid_argument("disk_mode_eigenvalue: potential must be nonnegative");
  const auto md = static_cast<double>(m);
  if (c == 0.0) return md;
  const double x = std::sqrt(c);
  // I_m'(x) = I_{m+1}(x) + (m/x) I_m(x)
  return md + x * bessel_i_ratios(m + 1, x)[m];
}

}  // namespace dtn
