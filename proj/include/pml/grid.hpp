#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pml {

// Uniform cell-centered grid on [a, b] with nx cells.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  std::size_t nx = 1;

  Grid1D() = default;
  Grid1D(double a_, double b_, std::size_t nx_) : a(a_), b(b_), nx(nx_) {
    if (!(b > a) || nx == 0) throw std::invalid_argument("Grid1D: bad domain");
  }

  double dx() const { return (b - a) / static_cast<double>(nx); }
  // Center of cell i, i in [0, nx).
  double center(std::size_t i) const {
    return a + (static_cast<double>(i) + 0.5) * dx();
  }
  // Interface f, f in [0, nx]; interface f sits left of cell f.
  double interface(std::size_t f) const {
    return a + static_cast<double>(f) * dx();
  }
  std::vector<double> centers() const {
    std::vector<double> xs(nx);
    for (std::size_t i = 0; i < nx; ++i) xs[i] = center(i);
    return xs;
  }
};

// Cell averages of a field at a given time.
struct GridField {
  Grid1D grid;
  std::vector<double> values;
  double time = 0.0;
};

}  // namespace pml
