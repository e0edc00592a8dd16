#include "pml/eno.hpp"

#include <cmath>
#include <stdexcept>

namespace pml {

namespace {

// prod_{l != j} (r - l + shift) / (j - l) over l = 0..k-1.
double lagrange_weight(int k, int r, int j, double shift) {
  double w = 1.0;
  for (int l = 0; l < k; ++l) {
    if (l == j) continue;
    w *= (static_cast<double>(r - l) + shift) / static_cast<double>(j - l);
  }
  return w;
}

// sum_{m != j} prod_{l != j,m} (r - l + shift) / prod_{l != j} (j - l).
double lagrange_deriv_weight(int k, int r, int j, double shift) {
  double num = 0.0;
  for (int m = 0; m < k; ++m) {
    if (m == j) continue;
    double p = 1.0;
    for (int l = 0; l < k; ++l) {
      if (l == j || l == m) continue;
      p *= static_cast<double>(r - l) + shift;
    }
    num += p;
  }
  double den = 1.0;
  for (int l = 0; l < k; ++l)
    if (l != j) den *= static_cast<double>(j - l);
  return num / den;
}

}  // namespace

EnoTables eno_tables(int k, double dx) {
  if (k < 1 || k > 6) throw std::invalid_argument("eno_tables: k must be in [1,6]");
  if (!(dx > 0.0)) throw std::invalid_argument("eno_tables: dx must be > 0");
  EnoTables t;
  t.k = k;
  t.dx = dx;
  t.C.assign(k + 1, std::vector<double>(k));
  t.D.assign(k, std::vector<double>(k));
  t.Dbar.assign(k + 1, std::vector<double>(k));
  for (int r = 0; r <= k; ++r)
    for (int j = 0; j < k; ++j) {
      t.C[r][j] = lagrange_weight(k, r, j, -0.5);
      t.Dbar[r][j] = lagrange_deriv_weight(k, r, j, -0.5) / dx;
      if (r < k) t.D[r][j] = lagrange_deriv_weight(k, r, j, 0.0) / dx;
    }
  return t;
}

int eno_stencil(std::span<const double> extended, std::size_t i, int k) {
  if (k < 1) throw std::invalid_argument("eno_stencil: k must be >= 1");
  if (i < static_cast<std::size_t>(k - 1) ||
      i + static_cast<std::size_t>(k) > extended.size())
    throw std::invalid_argument("eno_stencil: missing ghost cells");
  // Top Newton divided difference of the width+1 points starting at `start`
  // (equidistant abscissae, unit spacing).
  auto top_diff = [&extended](std::size_t start, int width) {
    std::vector<double> col(width + 1);
    for (int j = 0; j <= width; ++j)
      col[j] = extended[start + static_cast<std::size_t>(j)];
    for (int lvl = 1; lvl <= width; ++lvl)
      for (int j = width; j >= lvl; --j)
        col[j] = (col[j] - col[j - 1]) / static_cast<double>(lvl);
    return col[width];
  };
  // Grow the stencil [left, left+width] from {i}, extending to the side
  // whose divided difference is smaller in magnitude.
  std::size_t left = i;
  for (int width = 1; width < k; ++width) {
    if (std::abs(top_diff(left - 1, width)) < std::abs(top_diff(left, width)))
      --left;
  }
  return static_cast<int>(i - left);
}

namespace {

void check_extended(std::span<const double> extended, std::size_t nx, int k) {
  if (extended.size() != nx + 2 * static_cast<std::size_t>(k))
    throw std::invalid_argument("reconstruct: extended array must have k ghosts per side");
}

}  // namespace

InterfaceRecon reconstruct(std::span<const double> extended, std::size_t nx,
                           const EnoTables& tables) {
  const int k = tables.k;
  check_extended(extended, nx, k);
  InterfaceRecon out;
  out.minus.assign(nx + 1, 0.0);
  out.plus.assign(nx + 1, 0.0);
  // cell c (interior index, ghosts at c < 0 and c >= nx) lives at extended
  // index c + k; it feeds plus[c] from its left edge and minus[c+1] from its
  // right edge.
  for (long c = -1; c <= static_cast<long>(nx); ++c) {
    const std::size_t ie = static_cast<std::size_t>(c + k);
    const int r = eno_stencil(extended, ie, k);
    double left_edge = 0.0, right_edge = 0.0;
    for (int j = 0; j < k; ++j) {
      const double v = extended[ie - static_cast<std::size_t>(r) +
                                static_cast<std::size_t>(j)];
      left_edge += v * tables.C[r][j];
      right_edge += v * tables.C[r + 1][j];
    }
    if (c >= 0 && c < static_cast<long>(nx))
      out.plus[static_cast<std::size_t>(c)] = left_edge;
    if (c == static_cast<long>(nx)) out.plus[nx] = left_edge;
    if (c >= 0 && c < static_cast<long>(nx))
      out.minus[static_cast<std::size_t>(c) + 1] = right_edge;
    if (c == -1) out.minus[0] = right_edge;
  }
  return out;
}

DerivRecon reconstruct_derivative(std::span<const double> extended,
                                  std::size_t nx, const EnoTables& tables,
                                  bool centered) {
  const int k = tables.k;
  check_extended(extended, nx, k);
  DerivRecon out;
  out.minus.assign(nx + 1, 0.0);
  out.plus.assign(nx + 1, 0.0);
  out.center.assign(nx, 0.0);
  const int r_centered = (k - 1) / 2;
  for (long c = -1; c <= static_cast<long>(nx); ++c) {
    const std::size_t ie = static_cast<std::size_t>(c + k);
    const int r = centered ? r_centered : eno_stencil(extended, ie, k);
    double left_edge = 0.0, right_edge = 0.0, at_center = 0.0;
    for (int j = 0; j < k; ++j) {
      const double v = extended[ie - static_cast<std::size_t>(r) +
                                static_cast<std::size_t>(j)];
      left_edge += v * tables.Dbar[r][j];
      right_edge += v * tables.Dbar[r + 1][j];
      at_center += v * tables.D[r][j];
    }
    if (c >= 0 && c < static_cast<long>(nx)) {
      out.plus[static_cast<std::size_t>(c)] = left_edge;
      out.center[static_cast<std::size_t>(c)] = at_center;
    }
    if (c == static_cast<long>(nx)) out.plus[nx] = left_edge;
    if (c >= 0 && c < static_cast<long>(nx))
      out.minus[static_cast<std::size_t>(c) + 1] = right_edge;
    if (c == -1) out.minus[0] = right_edge;
  }
  return out;
}

std::vector<double> extend_dirichlet(std::span<const double> values, int ghosts,
                                     double ua, double ub) {
  std::vector<double> out;
  out.reserve(values.size() + 2 * static_cast<std::size_t>(ghosts));
  out.insert(out.end(), static_cast<std::size_t>(ghosts), ua);
  out.insert(out.end(), values.begin(), values.end());
  out.insert(out.end(), static_cast<std::size_t>(ghosts), ub);
  return out;
}

}  // namespace pml
