#pragma once

#include <cstddef>
#include <vector>

namespace dtn {

/// r_m = I_{m+1}(x) / I_m(x) for m = 0..count-1 by backward recurrence.
std::vector<double> bessel_i_ratios(std::size_t count, double x);

/// r_m = K_{m+1}(x) / K_m(x) for m = 0..count-1 by forward recurrence.
std::vector<double> bessel_k_ratios(std::size_t count, double x);

/// Eigenvalue of the unit-disk DtN operator for Fourier mode m and constant
/// potential c ≥ 0: √c I_m'(√c) / I_m(√c), which is m for c = 0.
double disk_mode_eigenvalue(std::size_t m, double c);

}  // namespace dtn
