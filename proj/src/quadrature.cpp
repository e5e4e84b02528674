#include "eplag/quadrature.hpp"

namespace eplag::quad {

std::vector<double> simpson_weights(std::size_t samples, double h) {
  if (samples < 3 || samples % 2 == 0) {
    throw Error(Errc::GridMismatch, "Simpson weights need an odd sample count >= 3");
  }
  std::vector<double> w(samples, 0.0);
  for (std::size_t k = 0; k < samples; ++k) {
    if (k == 0 || k + 1 == samples) {
      w[k] = h / 3.0;
    } else {
      w[k] = (k % 2 ? 4.0 : 2.0) * h / 3.0;
    }
  }
  return w;
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) {
    if (n == 2) out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  // even nodes: plain composite Simpson
  for (std::size_t k = 2; k < n; k += 2) {
    out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  }
  // odd nodes: last interval from the quadratic through the three nearest nodes
  out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (std::size_t k = 3; k < n; k += 2) {
    out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
  }
  return out;
}

}  // namespace eplag::quad
