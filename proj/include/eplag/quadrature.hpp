#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eplag/error.hpp"

namespace eplag::quad {

/// Composite Simpson rule on `panels` uniform panels (rounded up to even).
template <class F>
double simpson(F&& f, double a, double b, std::size_t panels) {
  if (panels < 2) panels = 2;
  if (panels % 2) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double odd = 0.0, even = 0.0;
  for (std::size_t k = 1; k < panels; ++k) {
    const double v = f(a + h * static_cast<double>(k));
    (k % 2 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// Simpson weights for samples on a uniform grid with an even number of
/// intervals (odd sample count).
std::vector<double> simpson_weights(std::size_t samples, double h);

/// Running integrals I_k = int_{t_0}^{t_k} f on a uniform grid: composite
/// Simpson on the even prefix plus a three-point end correction on odd k.
std::vector<double> cumulative_simpson(std::span<const double> f, double h);

}  // namespace eplag::quad
