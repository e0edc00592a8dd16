#include "pml/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pml/barenblatt.hpp"

namespace pml {

std::string to_string(TestCaseId id) {
  switch (id) {
    case TestCaseId::Barenblatt: return "barenblatt";
    case TestCaseId::TC1: return "tc1";
    case TestCaseId::TC2: return "tc2";
    case TestCaseId::TC3: return "tc3";
    case TestCaseId::TC4: return "tc4";
    default: return "tc5";
  }
}

std::string to_string(Scale scale) {
  return scale == Scale::Paper ? "paper" : "desk";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Particle: return "particle";
    case Method::Relaxation: return "relaxation";
    default: return "exact";
  }
}

TestCaseId test_case_from_string(const std::string& s) {
  if (s == "barenblatt") return TestCaseId::Barenblatt;
  if (s == "tc1") return TestCaseId::TC1;
  if (s == "tc2") return TestCaseId::TC2;
  if (s == "tc3") return TestCaseId::TC3;
  if (s == "tc4") return TestCaseId::TC4;
  if (s == "tc5") return TestCaseId::TC5;
  throw std::invalid_argument("unknown test case: " + s);
}

Scale scale_from_string(const std::string& s) {
  if (s == "paper") return Scale::Paper;
  if (s == "desk") return Scale::Desk;
  throw std::invalid_argument("unknown scale: " + s);
}

Method method_from_string(const std::string& s) {
  if (s == "particle") return Method::Particle;
  if (s == "relaxation") return Method::Relaxation;
  if (s == "exact") return Method::Exact;
  throw std::invalid_argument("unknown method: " + s);
}

namespace {

BetaSpec pme_m3_beta() {
  // beta(u) = 2 u |u|^2, so that (1/2) beta(u)'' matches the classical PME
  // d^2/dx^2 u^3 solved exactly by the Barenblatt-Pattle formulas.
  return BetaSpec::tabulated(
      [](double u) { return 2.0 * u * std::abs(u) * std::abs(u); }, 0.0, 0.0,
      "pme-m3");
}

DensitySpec trimodal() {
  return DensitySpec::gaussian_mixture({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                                       {-4.0, 0.0, 4.0}, {0.1, 0.2, 0.3});
}

}  // namespace

TestCase make_test_case(TestCaseId id, Scale scale) {
  TestCase tc;
  tc.id = id;
  tc.scale = scale;

  double a = 0.0, b = 0.0;
  switch (id) {
    case TestCaseId::Barenblatt:
      a = -2.5; b = 2.5; tc.T = 1.5;
      tc.beta = pme_m3_beta();
      tc.init = DensitySpec::barenblatt_translated(3.0);
      tc.phi = 1.1;  // subcharacteristic bound: sup beta' = 6 max(u0)^2 = 1.11
      tc.figure_times = {0.0, 0.5, 1.0, 1.5};
      break;
    case TestCaseId::TC1:
      a = -7.0; b = 7.0; tc.T = 0.6; tc.u_c = 0.15;
      tc.init = trimodal();
      tc.figure_times = {0.0, 0.3, 0.6};
      break;
    case TestCaseId::TC2:
      a = -8.5; b = 8.5; tc.T = 4.0; tc.u_c = 0.08;
      tc.init = trimodal();
      tc.figure_times = {0.0, 2.0, 4.0};
      break;
    case TestCaseId::TC3:
      a = -2.5; b = 2.0; tc.T = 0.5; tc.u_c = 0.3;
      tc.init = DensitySpec::normal_uniform_mixture();
      tc.figure_times = {0.0, 0.1, 0.5};
      break;
    case TestCaseId::TC4:
      a = -1.5; b = 3.5; tc.T = 0.6; tc.u_c = 0.3;
      tc.init = DensitySpec::uniform_mixture(
          {0.2, 0.3, 0.5}, {{0.0, 1.0}, {-0.2, 0.2}, {1.2, 2.0}});
      tc.figure_times = {0.0, 0.1, 0.6};
      break;
    case TestCaseId::TC5:
      a = -2.0; b = 2.0; tc.T = 0.45; tc.u_c = 0.35;
      tc.init = DensitySpec::sqrt_density();
      tc.figure_times = {0.0, 0.04, 0.45};
      break;
  }
  if (id != TestCaseId::Barenblatt) tc.beta = BetaSpec::heaviside(tc.u_c);

  const double dx = scale == Scale::Paper ? 0.02 : 0.05;
  tc.grid = Grid1D(a, b, static_cast<std::size_t>(std::round((b - a) / dx)));
  tc.c_stab = 0.01;
  if (scale == Scale::Paper) {
    tc.dt_prob = 2e-4;
    tc.dt_det = 4e-6;
    tc.n_particles = 50000;
  } else {
    tc.dt_prob = 1e-3;
    tc.dt_det = tc.c_stab * dx * dx;
    tc.n_particles = 5000;
  }
  return tc;
}

double lp_error(const GridField& fa, const GridField& fb, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("lp_error: p must be 1 or 2");
  if (fa.grid.nx != fb.grid.nx || fa.grid.a != fb.grid.a ||
      fa.grid.b != fb.grid.b)
    throw std::invalid_argument("lp_error: grid mismatch");
  const double dx = fa.grid.dx();
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.values.size(); ++i) {
    const double d = std::abs(fa.values[i] - fb.values[i]);
    acc += (p == 1 ? d : d * d) * dx;
  }
  return p == 1 ? acc : std::sqrt(acc);
}

AttractingSetCheck attracting_set_check(const GridField& field, double u_c,
                                        double tol) {
  if (!(u_c > 0.0))
    throw std::invalid_argument("attracting_set_check: u_c must be > 0");
  AttractingSetCheck out;
  const double dx = field.grid.dx();
  double peak = 0.0;
  for (const double v : field.values) {
    out.mass += v * dx;
    peak = std::max(peak, v);
  }
  out.excess = std::max(0.0, peak - u_c);
  out.in_set = std::abs(out.mass - 1.0) <= tol && peak <= u_c + tol;
  return out;
}

GridField exact_field(const Grid1D& grid, double t) {
  GridField f{grid, std::vector<double>(grid.nx), t};
  for (std::size_t i = 0; i < grid.nx; ++i)
    f.values[i] = barenblatt_translated(t, grid.center(i));
  return f;
}

RunReport run_test_case(const TestCase& tc, const std::set<Method>& methods,
                        std::uint64_t seed) {
  const bool want_p = methods.count(Method::Particle) > 0;
  const bool want_r = methods.count(Method::Relaxation) > 0;
  const bool want_e = methods.count(Method::Exact) > 0;
  if (methods.empty())
    throw std::invalid_argument("run_test_case: no methods requested");
  if (want_e && tc.id != TestCaseId::Barenblatt)
    throw std::invalid_argument(
        "run_test_case: exact solution only available for the Barenblatt case");

  RunReport rep;
  rep.tc = tc;
  rep.seed = seed;

  const auto nt = static_cast<std::size_t>(std::round(tc.T / tc.dt_prob));
  std::vector<double> prob_times(nt + 1);
  for (std::size_t k = 0; k <= nt; ++k)
    prob_times[k] = tc.dt_prob * static_cast<double>(k);

  // deterministic fields aligned with the probabilistic steps
  std::vector<GridField> relax_fields;
  if (want_r) {
    RelaxationConfig rc;
    rc.grid = tc.grid;
    rc.beta = tc.beta;
    rc.T = tc.T;
    rc.phi = tc.phi;
    rc.c_stab = tc.c_stab;
    rc.snapshot_times = prob_times;
    RelaxationResult rr = run_relaxation(rc, tc.init);
    if (rr.blew_up) throw std::runtime_error("run_test_case: relaxation blew up");
    relax_fields = std::move(rr.snapshots);
    if (relax_fields.size() != nt + 1)
      throw std::runtime_error("run_test_case: snapshot alignment failed");

    MethodFields mf{Method::Relaxation, {}};
    for (const double t : tc.figure_times)
      mf.fields.push_back(relax_fields[static_cast<std::size_t>(
          std::round(t / tc.dt_prob))]);
    rep.snapshots.push_back(std::move(mf));
  }

  auto exact_at = [&tc](double t) { return exact_field(tc.grid, t); };

  std::vector<GridField> particle_fields;  // one per probabilistic step
  if (want_p) {
    ParticleConfig pc;
    pc.n = tc.n_particles;
    pc.dt = tc.dt_prob;
    pc.T = tc.T;
    pc.beta = tc.beta;
    pc.init = tc.init;
    pc.seed = seed;
    pc.snapshot_times = tc.figure_times;

    particle_fields.reserve(nt + 1);
    rep.bandwidths.reserve(nt + 1);
    particle_fields.emplace_back();  // filled from the step-0 snapshot below
    const auto on_step = [&](const ParticleEnsemble& ens) {
      particle_fields.push_back(
          estimate_density(ens.positions, ens.bandwidth.epsilon, tc.grid));
      particle_fields.back().time = ens.time;
      rep.bandwidths.push_back(ens.bandwidth);
      if (ens.frozen && rep.freeze_time < 0.0) {
        rep.particle_frozen = true;
        rep.freeze_time = ens.time;
      }
    };
    ParticleRunResult pr = run_particles(pc, on_step);

    const ParticleSnapshot& s0 = pr.snapshots.front();
    particle_fields.front() =
        estimate_density(s0.positions, s0.bandwidth.epsilon, tc.grid);
    rep.bandwidths.insert(rep.bandwidths.begin(), s0.bandwidth);

    MethodFields mf{Method::Particle, {}};
    for (const ParticleSnapshot& s : pr.snapshots)
      mf.fields.push_back(
          estimate_density(s.positions, s.bandwidth.epsilon, tc.grid));
    for (std::size_t i = 0; i < pr.snapshots.size(); ++i)
      mf.fields[i].time = pr.snapshots[i].time;
    rep.snapshots.push_back(std::move(mf));
  }

  if (want_e) {
    MethodFields mf{Method::Exact, {}};
    for (const double t : tc.figure_times) mf.fields.push_back(exact_at(t));
    rep.snapshots.push_back(std::move(mf));
  }

  auto add_series = [&](Method ma, Method mb, auto&& field_a, auto&& field_b) {
    ErrorSeries es;
    es.a = ma;
    es.b = mb;
    es.times = prob_times;
    es.l1.reserve(nt + 1);
    es.l2.reserve(nt + 1);
    for (std::size_t k = 0; k <= nt; ++k) {
      const GridField fa = field_a(k);
      const GridField fb = field_b(k);
      es.l1.push_back(lp_error(fa, fb, 1));
      es.l2.push_back(lp_error(fa, fb, 2));
    }
    rep.errors.push_back(std::move(es));
  };
  const auto particle_at = [&](std::size_t k) { return particle_fields[k]; };
  const auto relax_at = [&](std::size_t k) { return relax_fields[k]; };
  const auto exact_at_step = [&](std::size_t k) {
    return exact_at(prob_times[k]);
  };
  if (want_p && want_r)
    add_series(Method::Particle, Method::Relaxation, particle_at, relax_at);
  if (want_p && want_e)
    add_series(Method::Particle, Method::Exact, particle_at, exact_at_step);
  if (want_r && want_e)
    add_series(Method::Relaxation, Method::Exact, relax_at, exact_at_step);
  return rep;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<std::filesystem::path> export_csv(
    const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string base =
      to_string(report.tc.id) + "_" + to_string(report.tc.scale);
  std::vector<std::filesystem::path> written;

  for (const MethodFields& mf : report.snapshots) {
    const auto path = dir / (base + "_" + to_string(mf.method) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_csv: cannot write " + path.string());
    out << "x,u\n";
    for (const GridField& f : mf.fields) {
      out << "# t " << fmt(f.time) << " grid " << fmt(f.grid.a) << " "
          << fmt(f.grid.b) << " " << f.grid.nx << "\n";
      for (std::size_t i = 0; i < f.values.size(); ++i)
        out << fmt(f.grid.center(i)) << "," << fmt(f.values[i]) << "\n";
    }
    written.push_back(path);
  }

  const auto epath = dir / (base + "_errors.csv");
  std::ofstream out(epath);
  if (!out) throw std::runtime_error("export_csv: cannot write " + epath.string());
  out << "t";
  for (const ErrorSeries& es : report.errors) {
    const std::string pair = to_string(es.a) + "_" + to_string(es.b);
    out << ",l1_" << pair << ",l2_" << pair;
  }
  out << "\n";
  const std::size_t rows =
      report.errors.empty() ? 0 : report.errors.front().times.size();
  for (std::size_t k = 0; k < rows; ++k) {
    out << fmt(report.errors.front().times[k]);
    for (const ErrorSeries& es : report.errors)
      out << "," << fmt(es.l1[k]) << "," << fmt(es.l2[k]);
    out << "\n";
  }
  written.push_back(epath);
  return written;
}

std::vector<GridField> import_snapshots_csv(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw std::runtime_error("import_snapshots_csv: cannot read " +
                             file.string());
  std::vector<GridField> fields;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "x,u") continue;
    if (line.rfind("# t ", 0) == 0) {
      std::istringstream hs(line.substr(4));
      double t = 0.0, a = 0.0, b = 0.0;
      std::string kw;
      std::size_t nx = 0;
      hs >> t >> kw >> a >> b >> nx;
      GridField f;
      f.grid = Grid1D(a, b, nx);
      f.time = t;
      f.values.reserve(nx);
      fields.push_back(std::move(f));
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || fields.empty())
      throw std::runtime_error("import_snapshots_csv: malformed line: " + line);
    fields.back().values.push_back(std::stod(line.substr(comma + 1)));
  }
  return fields;
}

std::map<std::string, std::string> parse_config(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("parse_config: cannot read " + file.string());
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string()
                                      : s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = value;
  }
  return out;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed,
                           std::uint64_t fallback) {
  if (explicit_seed) return *explicit_seed;
  if (const char* env = std::getenv("PML_SEED"))
    return std::stoull(env);
  return fallback;
}

}  // namespace pml
