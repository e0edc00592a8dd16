#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pml {

// Lagrange reconstruction/differentiation tables for equidistant stencils
// of k points (polynomial degree k-1), stencil offsets r = 0..k-1 plus the
// extra row r = k used for the right-edge lookup at offset r+1.
//
//   C[r][j]    = prod_{l != j} (r - l - 1/2) / (j - l)          (k+1) x k
//   D[r][j]    = (1/dx) sum_{m != j} prod_{l != j,m} (r - l)
//                        / prod_{l != j} (j - l)                 k    x k
//   Dbar[r][j] = like D with (r - l - 1/2) in the numerator     (k+1) x k
//
// Value of the interpolant of cell i with offset r at its left edge uses
// row C[r], at its right edge row C[r+1]; same row convention for Dbar.
struct EnoTables {
  int k = 0;
  double dx = 1.0;
  std::vector<std::vector<double>> C;     // (k+1) x k
  std::vector<std::vector<double>> D;     // k x k, carries the 1/dx factor
  std::vector<std::vector<double>> Dbar;  // (k+1) x k, carries the 1/dx factor
};

// 1 <= k <= 6, dx > 0. Rows of C sum to 1, rows of D and Dbar sum to 0.
EnoTables eno_tables(int k, double dx);

// ENO stencil offset R(i) for the cell at extended index i: start from the
// single-cell stencil {i} and greedily extend to the side with the smaller
// |Newton divided difference|. Needs k-1 neighbours on each side of i.
int eno_stencil(std::span<const double> extended, std::size_t i, int k);

// Interface values at the nx+1 interfaces of the interior cells.
// minus[f] comes from the cell left of interface f, plus[f] from the right.
struct InterfaceRecon {
  std::vector<double> minus;
  std::vector<double> plus;
};

// Derivative reconstruction at interfaces plus cell-centered derivatives.
struct DerivRecon {
  std::vector<double> minus;   // nx+1
  std::vector<double> plus;    // nx+1
  std::vector<double> center;  // nx
};

// `extended` holds nx interior cell values padded with `k` ghost cells on
// each side (size nx + 2k), ghosts already filled per the boundary data.
InterfaceRecon reconstruct(std::span<const double> extended, std::size_t nx,
                           const EnoTables& tables);

// centered = true forces r = floor((k-1)/2) instead of the ENO choice.
DerivRecon reconstruct_derivative(std::span<const double> extended,
                                  std::size_t nx, const EnoTables& tables,
                                  bool centered);

// Pad interior values with `ghosts` copies of ua on the left and ub on the
// right (Dirichlet data held constant across the ghost layer).
std::vector<double> extend_dirichlet(std::span<const double> values, int ghosts,
                                     double ua, double ub);

}  // namespace pml
