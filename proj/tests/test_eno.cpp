#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "pml/eno.hpp"
#include "pml/grid.hpp"
#include "pml/rng.hpp"
#include "support.hpp"

using namespace pml;

namespace {

// Exact rational evaluation of the table formulas; factors are carried as
// integers 2(r - l) + twice_shift so halves stay exact.
double rational_c(int k, int r, int j, int twice_shift) {
  long long num = 1, den = 1;
  for (int l = 0; l < k; ++l) {
    if (l == j) continue;
    num *= 2 * (r - l) + twice_shift;
    den *= 2 * (j - l);
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double rational_d(int k, int r, int j, int twice_shift) {
  if (k == 1) return 0.0;
  long long num = 0;
  for (int m = 0; m < k; ++m) {
    if (m == j) continue;
    long long p = 1;
    for (int l = 0; l < k; ++l) {
      if (l == j || l == m) continue;
      p *= 2 * (r - l) + twice_shift;
    }
    num += p;
  }
  long long den = 1;
  for (int l = 0; l < k; ++l)
    if (l != j) den *= (j - l);
  for (int i = 0; i < k - 2; ++i) den *= 2;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<double> poly_extended(const Grid1D& grid, int k,
                                  const std::vector<double>& coeffs) {
  std::vector<double> ext(grid.nx + 2 * k);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const double x =
        grid.a + (static_cast<double>(i) - k + 0.5) * grid.dx();
    double v = 0.0, xp = 1.0;
    for (const double c : coeffs) {
      v += c * xp;
      xp *= x;
    }
    ext[i] = v;
  }
  return ext;
}

}  // namespace

TEST_CASE("eno_tables matches the rational oracle, k = 1..6") {
  for (int k = 1; k <= 6; ++k) {
    const double dx = 0.25;
    const EnoTables t = eno_tables(k, dx);
    for (int r = 0; r <= k; ++r) {
      for (int j = 0; j < k; ++j) {
        CHECK(t.C[r][j] ==
              doctest::Approx(rational_c(k, r, j, -1)).epsilon(1e-14));
        CHECK(t.Dbar[r][j] ==
              doctest::Approx(rational_d(k, r, j, -1) / dx).epsilon(1e-13));
        if (r < k)
          CHECK(t.D[r][j] ==
                doctest::Approx(rational_d(k, r, j, 0) / dx).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("eno_tables row sums") {
  for (int k = 1; k <= 6; ++k) {
    const EnoTables t = eno_tables(k, 0.02);
    for (int r = 0; r <= k; ++r) {
      double c = 0.0, db = 0.0, d = 0.0;
      for (int j = 0; j < k; ++j) {
        c += t.C[r][j];
        db += t.Dbar[r][j];
        if (r < k) d += t.D[r][j];
      }
      CHECK(c == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(db) <= 1e-11);  // rows carry the 1/dx = 50 factor
      if (r < k) CHECK(std::abs(d) <= 1e-11);
    }
  }
}

TEST_CASE("eno_tables pinned small cases") {
  const EnoTables k1 = eno_tables(1, 1.0);
  CHECK(k1.C[0][0] == 1.0);
  CHECK(k1.C[1][0] == 1.0);  // empty products are 1
  const EnoTables k2 = eno_tables(2, 1.0);
  CHECK(k2.C[0][0] == doctest::Approx(1.5));
  CHECK(k2.C[0][1] == doctest::Approx(-0.5));
  CHECK(k2.C[1][0] == doctest::Approx(0.5));
  CHECK(k2.C[1][1] == doctest::Approx(0.5));
  CHECK(k2.D[0][0] == doctest::Approx(-1.0));  // forward difference
  CHECK(k2.D[0][1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(eno_tables(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(eno_tables(7, 1.0), std::invalid_argument);
}

TEST_CASE("eno_stencil avoids a discontinuity") {
  const int k = 3;
  // step with the jump between extended cells 5 and 6
  std::vector<double> ext(12, 0.0);
  for (std::size_t i = 6; i < ext.size(); ++i) ext[i] = 1.0;
  // cell left of the jump: fully left-biased stencil
  CHECK(eno_stencil(ext, 5, k) == k - 1);
  // cell right of the jump: fully right-biased stencil
  CHECK(eno_stencil(ext, 6, k) == 0);
  // smooth data admits any stencil; constant reconstruction is exact anyway
  const std::vector<double> flat(12, 3.25);
  const int r = eno_stencil(flat, 5, k);
  CHECK(r >= 0);
  CHECK(r <= k - 1);
}

TEST_CASE("reconstruction is exact on polynomials of degree k-1") {
  const CounterRng rng(5);
  for (int k = 1; k <= 6; ++k) {
    const Grid1D grid(-1.0, 1.0, 20);
    const EnoTables tables = eno_tables(k, grid.dx());
    std::vector<double> coeffs(k);
    for (int c = 0; c < k; ++c)
      coeffs[c] = 2.0 * rng.uniform(1, 10 * k + c) - 1.0;
    const std::vector<double> ext = poly_extended(grid, k, coeffs);
    const InterfaceRecon rec = reconstruct(ext, grid.nx, tables);
    for (std::size_t f = 0; f <= grid.nx; ++f) {
      const double x = grid.interface(f);
      double v = 0.0, xp = 1.0;
      for (const double c : coeffs) {
        v += c * xp;
        xp *= x;
      }
      CHECK(rec.minus[f] == doctest::Approx(v).epsilon(1e-12));
      CHECK(rec.plus[f] == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant field reconstructs to the constant") {
  const int k = 3;
  const Grid1D grid(0.0, 1.0, 10);
  const EnoTables tables = eno_tables(k, grid.dx());
  const std::vector<double> ext(grid.nx + 2 * k, 7.5);
  const InterfaceRecon rec = reconstruct(ext, grid.nx, tables);
  const DerivRecon der = reconstruct_derivative(ext, grid.nx, tables, true);
  for (std::size_t f = 0; f <= grid.nx; ++f) {
    CHECK(rec.minus[f] == doctest::Approx(7.5).epsilon(1e-14));
    CHECK(rec.plus[f] == doctest::Approx(7.5).epsilon(1e-14));
    CHECK(std::abs(der.minus[f]) <= 1e-12);
    CHECK(std::abs(der.plus[f]) <= 1e-12);
  }
}

TEST_CASE("derivative reconstruction: linear and quadratic data") {
  const int k = 3;
  const Grid1D grid(-1.0, 1.0, 16);
  const EnoTables tables = eno_tables(k, grid.dx());
  // linear, slope -2.5
  const std::vector<double> lin = poly_extended(grid, k, {0.3, -2.5});
  const DerivRecon dl = reconstruct_derivative(lin, grid.nx, tables, true);
  for (std::size_t f = 0; f <= grid.nx; ++f) {
    CHECK(dl.minus[f] == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(dl.plus[f] == doctest::Approx(-2.5).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < grid.nx; ++i)
    CHECK(dl.center[i] == doctest::Approx(-2.5).epsilon(1e-12));
  // quadratic x^2: derivative 2x at interfaces, exact for k = 3
  const std::vector<double> quad = poly_extended(grid, k, {0.0, 0.0, 1.0});
  const DerivRecon dq = reconstruct_derivative(quad, grid.nx, tables, true);
  for (std::size_t f = 0; f <= grid.nx; ++f) {
    const double x = grid.interface(f);
    CHECK(dq.minus[f] == doctest::Approx(2.0 * x).epsilon(1e-11));
    CHECK(dq.plus[f] == doctest::Approx(2.0 * x).epsilon(1e-11));
  }
}

TEST_CASE("third-order convergence on sin(x)") {
  const int k = 3;
  auto max_err = [&](std::size_t nx) {
    const Grid1D grid(0.0, 1.0, nx);
    const EnoTables tables = eno_tables(k, grid.dx());
    std::vector<double> ext(nx + 2 * k);
    for (std::size_t i = 0; i < ext.size(); ++i)
      ext[i] = std::sin(grid.a + (static_cast<double>(i) - k + 0.5) * grid.dx());
    const InterfaceRecon rec = reconstruct(ext, nx, tables);
    double err = 0.0;
    for (std::size_t f = 0; f <= nx; ++f)
      err = std::max(err, std::abs(rec.minus[f] - std::sin(grid.interface(f))));
    return err;
  };
  const double e1 = max_err(100), e2 = max_err(200);
  CHECK(e1 / e2 >= 6.0);  // ~2^3 with a safety margin
  CHECK(e1 <= 1e-6);
}

TEST_CASE("extend_dirichlet") {
  const std::vector<double> v = {1.0, 2.0, 3.0};
  const std::vector<double> ext = extend_dirichlet(v, 2, -1.0, 9.0);
  CHECK(ext == std::vector<double>{-1.0, -1.0, 1.0, 2.0, 3.0, 9.0, 9.0});
}
