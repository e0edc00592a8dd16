#include "pml/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pml/barenblatt.hpp"
#include "pml/eno.hpp"
#include "pml/harness.hpp"
#include "pml/kde.hpp"
#include "pml/particle.hpp"
#include "pml/relaxation.hpp"
#include "pml/rng.hpp"

namespace pml {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---- exact rational arithmetic for the table oracle ----------------------

struct Fraction {
  long long num = 0;
  long long den = 1;

  static long long gcd(long long a, long long b) {
    while (b != 0) {
      const long long t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  }
  static Fraction make(long long n, long long d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = gcd(n == 0 ? 1 : n, d);
    return {n / g, d / g};
  }
  Fraction operator*(Fraction o) const {
    return make(num * o.num, den * o.den);
  }
  Fraction operator+(Fraction o) const {
    return make(num * o.den + o.num * den, den * o.den);
  }
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

// prod_{l != j} (2(r - l) + twice_shift) / (2 (j - l)), exact.
Fraction rational_weight(int k, int r, int j, int twice_shift) {
  Fraction w{1, 1};
  for (int l = 0; l < k; ++l) {
    if (l == j) continue;
    w = w * Fraction::make(2 * (r - l) + twice_shift, 2 * (j - l));
  }
  return w;
}

// sum_{m != j} prod_{l != j,m} (r - l + twice_shift/2) / prod_{l != j} (j - l);
// each factor is carried as the integer 2(r - l) + twice_shift, the k-2
// halvings collected into one power of two.
Fraction rational_deriv_weight(int k, int r, int j, int twice_shift) {
  if (k == 1) return {0, 1};
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
  long long scale = 1;
  for (int i = 0; i < k - 2; ++i) scale *= 2;
  return Fraction::make(num, den * scale);
}

// ---- helpers --------------------------------------------------------------

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double grid_mass(const GridField& f) {
  double acc = 0.0;
  for (const double v : f.values) acc += v;
  return acc * f.grid.dx();
}

// ---- criteria -------------------------------------------------------------

CriterionResult criterion_eno_tables() {
  CriterionResult res{1, "eno-table-oracle", true, ""};
  double worst = 0.0;
  for (int k = 1; k <= 3 && res.passed; ++k) {
    const EnoTables t = eno_tables(k, 1.0);
    for (int r = 0; r <= k; ++r) {
      double crow = 0.0, dbrow = 0.0, drow = 0.0;
      for (int j = 0; j < k; ++j) {
        const double c_oracle = rational_weight(k, r, j, -1).value();
        const double db_oracle = rational_deriv_weight(k, r, j, -1).value();
        worst = std::max(worst, std::abs(t.C[r][j] - c_oracle));
        worst = std::max(worst, std::abs(t.Dbar[r][j] - db_oracle));
        crow += t.C[r][j];
        dbrow += t.Dbar[r][j];
        if (r < k) {
          const double d_oracle = rational_deriv_weight(k, r, j, 0).value();
          worst = std::max(worst, std::abs(t.D[r][j] - d_oracle));
          drow += t.D[r][j];
        }
      }
      if (std::abs(crow - 1.0) > 1e-14 || std::abs(dbrow) > 1e-14 ||
          (r < k && std::abs(drow) > 1e-14))
        res.passed = false;
    }
  }
  if (worst > 1e-14) res.passed = false;
  res.detail = "max |table - rational oracle| = " + fmt(worst);
  return res;
}

CriterionResult criterion_reconstruction(std::uint64_t seed) {
  CriterionResult res{2, "reconstruction-exactness", true, ""};
  const CounterRng rng(seed);
  const int k = 3;
  const std::size_t nx = 24;
  const Grid1D grid(-1.0, 1.0, nx);
  const EnoTables tables = eno_tables(k, grid.dx());
  double worst_val = 0.0, worst_der = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const double c0 = 2.0 * rng.uniform(7, 3 * trial) - 1.0;
    const double c1 = 2.0 * rng.uniform(7, 3 * trial + 1) - 1.0;
    const double c2 = 2.0 * rng.uniform(7, 3 * trial + 2) - 1.0;
    auto p = [&](double x) { return c0 + c1 * x + c2 * x * x; };
    auto dp = [&](double x) { return c1 + 2.0 * c2 * x; };
    std::vector<double> ext(nx + 2 * k);
    for (std::size_t i = 0; i < ext.size(); ++i)
      ext[i] = p(grid.a + (static_cast<double>(i) - k + 0.5) * grid.dx());
    const InterfaceRecon rec = reconstruct(ext, nx, tables);
    const DerivRecon der = reconstruct_derivative(ext, nx, tables, true);
    const DerivRecon der_eno = reconstruct_derivative(ext, nx, tables, false);
    for (std::size_t f = 0; f <= nx; ++f) {
      const double x = grid.interface(f);
      worst_val = std::max({worst_val, std::abs(rec.minus[f] - p(x)),
                            std::abs(rec.plus[f] - p(x))});
      worst_der = std::max({worst_der, std::abs(der.minus[f] - dp(x)),
                            std::abs(der.plus[f] - dp(x)),
                            std::abs(der_eno.minus[f] - dp(x))});
    }
    for (std::size_t i = 0; i < nx; ++i)
      worst_der = std::max(worst_der, std::abs(der.center[i] - dp(grid.center(i))));
  }
  res.passed = worst_val <= 1e-12 && worst_der <= 1e-10;
  res.detail = "max value err " + fmt(worst_val) + ", max derivative err " +
               fmt(worst_der);
  return res;
}

CriterionResult criterion_rk_order() {
  CriterionResult res{3, "rk-order", true, ""};
  const RkTableau tab = RkTableau::ssp3();
  auto integrate = [&tab](double dt) {
    double u = 1.0;
    const auto nt = static_cast<std::size_t>(std::round(1.0 / dt));
    std::vector<double> f(tab.stages);
    for (std::size_t s = 0; s < nt; ++s) {
      for (std::size_t st = 0; st < tab.stages; ++st) {
        double stage = u;
        for (std::size_t l = 0; l < st; ++l) stage += dt * tab.a[st][l] * f[l];
        f[st] = -stage;
      }
      for (std::size_t st = 0; st < tab.stages; ++st) u += dt * tab.b[st] * f[st];
    }
    return std::abs(u - std::exp(-1.0));
  };
  const double e1 = integrate(1e-2), e2 = integrate(5e-3), e3 = integrate(2.5e-3);
  const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
  res.passed = o1 >= 2.7 && o1 <= 3.3 && o2 >= 2.7 && o2 <= 3.3;
  res.detail = "orders " + fmt(o1) + ", " + fmt(o2);
  return res;
}

double barenblatt_det_final_l2(std::size_t nx, std::vector<double>* errs,
                               double* mass_drift) {
  TestCase tc = make_test_case(TestCaseId::Barenblatt, Scale::Desk);
  RelaxationConfig rc;
  rc.grid = Grid1D(tc.grid.a, tc.grid.b, nx);
  rc.beta = tc.beta;
  rc.T = tc.T;
  rc.phi = tc.phi;
  rc.c_stab = tc.c_stab;
  rc.snapshot_times = tc.figure_times;
  const RelaxationResult rr = run_relaxation(rc, tc.init);
  double final_err = 0.0;
  for (const GridField& f : rr.snapshots) {
    const double e = lp_error(f, exact_field(f.grid, f.time), 2);
    if (errs) errs->push_back(e);
    final_err = e;
  }
  if (mass_drift) {
    const double m0 = grid_mass(rr.snapshots.front());
    *mass_drift = std::abs(grid_mass(rr.snapshots.back()) - m0) / m0;
  }
  return final_err;
}

CriterionResult criterion_barenblatt_det() {
  CriterionResult res{4, "barenblatt-deterministic", true, ""};
  std::vector<double> errs;
  double mass_drift = 0.0;
  const double coarse = barenblatt_det_final_l2(100, &errs, &mass_drift);
  const double max_err = *std::max_element(errs.begin(), errs.end());
  const double fine = barenblatt_det_final_l2(200, nullptr, nullptr);
  res.passed = max_err <= 0.02 && fine < coarse && mass_drift <= 1e-8;
  res.detail = "max L2 err " + fmt(max_err) + ", dx/2 err " + fmt(fine) +
               " vs " + fmt(coarse) + ", mass drift " + fmt(mass_drift);
  return res;
}

double barenblatt_prob_final_l2(std::size_t n, std::uint64_t seed) {
  const TestCase tc = make_test_case(TestCaseId::Barenblatt, Scale::Desk);
  ParticleConfig pc;
  pc.n = n;
  pc.dt = tc.dt_prob;
  pc.T = tc.T;
  pc.beta = tc.beta;
  pc.init = tc.init;
  pc.seed = seed;
  const ParticleRunResult pr = run_particles(pc);
  const ParticleSnapshot& last = pr.snapshots.back();
  const GridField est =
      estimate_density(last.positions, last.bandwidth.epsilon, tc.grid);
  return lp_error(est, exact_field(tc.grid, tc.T), 2);
}

CriterionResult criterion_barenblatt_prob(std::uint64_t seed) {
  CriterionResult res{5, "barenblatt-probabilistic", true, ""};
  std::vector<double> big, small;
  for (std::uint64_t s = 0; s < 5; ++s) {
    big.push_back(barenblatt_prob_final_l2(5000, seed + s));
    small.push_back(barenblatt_prob_final_l2(500, seed + s));
  }
  const double med_big = median(big), med_small = median(small);
  res.passed = med_big <= 0.05 && med_big < med_small;
  res.detail = "median L2 err " + fmt(med_big) + " (n=5000) vs " +
               fmt(med_small) + " (n=500)";
  return res;
}

CriterionResult criterion_bandwidth_recovery(std::uint64_t seed) {
  CriterionResult res{6, "bandwidth-recovery", true, ""};
  const std::size_t n = 10000;
  const double target = std::pow(4.0 / (3.0 * static_cast<double>(n)), 0.2);
  const DensitySpec gauss = DensitySpec::gaussian_mixture({1.0}, {0.0}, {1.0});
  std::vector<double> eps;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CounterRng rng(seed + 17 * s);
    const Sample sample{density_sample(gauss, n, rng)};
    eps.push_back(solve_the_equation_bandwidth(sample).epsilon);
  }
  const double med = median(eps);
  res.passed = std::abs(med - target) <= 0.2 * target;
  res.detail = "median eps " + fmt(med) + ", Gaussian optimum " + fmt(target);
  return res;
}

CriterionResult criterion_kde_bruteforce(std::uint64_t seed) {
  CriterionResult res{7, "kde-brute-force-equivalence", true, ""};
  const std::size_t n = 2000;
  const CounterRng rng(seed);
  const std::vector<double> positions =
      density_sample(DensitySpec::gaussian_mixture(
                         {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, {-4.0, 0.0, 4.0},
                         {0.1, 0.2, 0.3}),
                     n, rng);
  const double eps = silverman_bandwidth(Sample{positions});
  const std::vector<double> exact =
      interaction_density(positions, eps, PairSumMode::Exact);
  const std::vector<double> truncated =
      interaction_density(positions, eps, PairSumMode::Truncated);
  const std::vector<double> binned =
      interaction_density(positions, eps, PairSumMode::Binned);
  const double peak = *std::max_element(exact.begin(), exact.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max({worst, std::abs(truncated[i] - exact[i]) / peak,
                      std::abs(binned[i] - exact[i]) / peak});
  res.passed = worst <= 1e-3;
  res.detail = "max relative deviation " + fmt(worst);
  return res;
}

struct Tc1Outcome {
  RunReport report;
  std::vector<std::filesystem::path> files;
};

Tc1Outcome run_tc1(std::uint64_t seed, const std::filesystem::path& dir) {
  const TestCase tc = make_test_case(TestCaseId::TC1, Scale::Desk);
  Tc1Outcome out;
  out.report =
      run_test_case(tc, {Method::Particle, Method::Relaxation}, seed);
  out.files = export_csv(out.report, dir);
  return out;
}

CriterionResult criterion_heaviside_cross(const RunReport& rep) {
  CriterionResult res{8, "heaviside-cross-validation", true, ""};
  const ErrorSeries& es = rep.errors.front();
  const double max_l2 = *std::max_element(es.l2.begin(), es.l2.end());

  const MethodFields* particle = nullptr;
  const MethodFields* relax = nullptr;
  for (const MethodFields& mf : rep.snapshots) {
    if (mf.method == Method::Particle) particle = &mf;
    if (mf.method == Method::Relaxation) relax = &mf;
  }
  double worst_mass = 0.0;
  for (const MethodFields* mf : {particle, relax})
    for (const GridField& f : mf->fields)
      worst_mass = std::max(worst_mass, std::abs(grid_mass(f) - 1.0));
  const AttractingSetCheck ap =
      attracting_set_check(particle->fields.back(), rep.tc.u_c, 0.03);
  const AttractingSetCheck ar =
      attracting_set_check(relax->fields.back(), rep.tc.u_c, 0.03);
  res.passed =
      max_l2 <= 0.1 && worst_mass <= 0.01 && ap.in_set && ar.in_set;
  res.detail = "max L2 diff " + fmt(max_l2) + ", max mass drift " +
               fmt(worst_mass) + ", attracting set " +
               (ap.in_set ? "yes" : "no") + "/" + (ar.in_set ? "yes" : "no") +
               " (excess " + fmt(ap.excess) + "/" + fmt(ar.excess) + ")";
  return res;
}

CriterionResult criterion_freezing(std::uint64_t seed) {
  CriterionResult res{9, "freezing-diagnostic", true, ""};
  const TestCase tc = make_test_case(TestCaseId::TC1, Scale::Desk);
  ParticleConfig pc;
  pc.n = tc.n_particles;
  pc.dt = tc.dt_prob;
  pc.T = tc.T;
  pc.beta = tc.beta;
  pc.init = tc.init;
  pc.seed = seed;
  bool froze = false;
  double freeze_time = -1.0;
  std::vector<double> frozen_positions;
  bool constant_after = true;
  run_particles(pc, [&](const ParticleEnsemble& ens) {
    if (!ens.frozen) return;
    if (!froze) {
      froze = true;
      freeze_time = ens.time;
      frozen_positions = ens.positions;
    } else if (ens.positions != frozen_positions) {
      constant_after = false;
    }
  });
  res.passed = constant_after;
  res.detail = froze ? "froze at t = " + fmt(freeze_time) +
                           (constant_after ? ", positions constant after"
                                           : ", positions moved after")
                     : "never froze (vacuously constant)";
  return res;
}

CriterionResult criterion_determinism(const Tc1Outcome& first,
                                      std::uint64_t seed,
                                      const std::filesystem::path& dir) {
  CriterionResult res{10, "determinism", true, ""};
  const Tc1Outcome second = run_tc1(seed, dir);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool identical = first.files.size() == second.files.size();
  for (std::size_t i = 0; identical && i < first.files.size(); ++i)
    identical = slurp(first.files[i]) == slurp(second.files[i]);
  res.passed = identical;
  res.detail = identical ? "repeated run CSVs byte-identical"
                         : "repeated run CSVs differ";
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_eno_tables());
  out.push_back(criterion_reconstruction(seed));
  out.push_back(criterion_rk_order());
  out.push_back(criterion_barenblatt_det());
  out.push_back(criterion_barenblatt_prob(seed));
  out.push_back(criterion_bandwidth_recovery(seed));
  out.push_back(criterion_kde_bruteforce(seed));

  const auto tmp = std::filesystem::temp_directory_path() / "pml_acceptance";
  const Tc1Outcome first = run_tc1(seed, tmp / "run_a");
  out.push_back(criterion_heaviside_cross(first.report));
  out.push_back(criterion_freezing(seed));
  out.push_back(criterion_determinism(first, seed, tmp / "run_b"));
  return out;
}

int report_acceptance(const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const CriterionResult& r : results) {
    std::printf("%s %2d %-28s %s\n", r.passed ? "PASS" : "FAIL", r.index,
                r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failures;
  }
  return failures;
}

}  // namespace pml
