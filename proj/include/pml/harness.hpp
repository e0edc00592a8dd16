#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pml/grid.hpp"
#include "pml/kde.hpp"
#include "pml/particle.hpp"
#include "pml/relaxation.hpp"

namespace pml {

enum class TestCaseId { Barenblatt, TC1, TC2, TC3, TC4, TC5 };
enum class Scale { Paper, Desk };
enum class Method { Particle, Relaxation, Exact };

std::string to_string(TestCaseId id);
std::string to_string(Scale scale);
std::string to_string(Method method);
TestCaseId test_case_from_string(const std::string& s);
Scale scale_from_string(const std::string& s);
Method method_from_string(const std::string& s);

struct TestCase {
  TestCaseId id = TestCaseId::Barenblatt;
  Scale scale = Scale::Desk;
  BetaSpec beta;
  DensitySpec init;
  Grid1D grid;
  double T = 0.0;
  double dt_prob = 0.0;
  double dt_det = 0.0;  // informational; the solver derives dt from c_stab
  std::size_t n_particles = 0;
  double u_c = 0.0;  // 0 for the PME case
  double phi = 1.0;
  double c_stab = 0.01;
  std::vector<double> figure_times;  // snapshot times shown in the figures
};

// Registry of the six test cases at either scale. Paper scale carries the
// published parameters verbatim; Desk scale shrinks n / steps / resolution.
TestCase make_test_case(TestCaseId id, Scale scale);

// (sum_i |fa - fb|^p dx)^(1/p), p in {1, 2}; grids must coincide.
double lp_error(const GridField& fa, const GridField& fb, int p);

struct AttractingSetCheck {
  bool in_set = false;
  double mass = 0.0;
  double excess = 0.0;  // max(0, max value - u_c)
};

// Membership test for {f | integral f = 1, |f| <= u_c} up to tol.
AttractingSetCheck attracting_set_check(const GridField& field, double u_c,
                                        double tol);

struct ErrorSeries {
  Method a = Method::Particle;
  Method b = Method::Relaxation;
  std::vector<double> times;
  std::vector<double> l1;
  std::vector<double> l2;
};

struct MethodFields {
  Method method = Method::Relaxation;
  std::vector<GridField> fields;  // at the test case's figure times
};

struct RunReport {
  TestCase tc;
  std::uint64_t seed = 0;
  std::vector<MethodFields> snapshots;
  std::vector<ErrorSeries> errors;  // sampled at every probabilistic step
  std::vector<BandwidthReport> bandwidths;  // one per probabilistic step
  bool particle_frozen = false;
  double freeze_time = -1.0;
};

// Run the requested methods on the shared grid/time layout of tc. Exact is
// only available for the Barenblatt case. Errors are recorded at every
// probabilistic time step for each requested method pair.
RunReport run_test_case(const TestCase& tc, const std::set<Method>& methods,
                        std::uint64_t seed);

// One snapshot CSV per method (blocks of "x,u" rows per time) and one
// errors CSV; everything printed with 17 significant digits.
std::vector<std::filesystem::path> export_csv(
    const RunReport& report, const std::filesystem::path& dir);

// Round-trip reader for the snapshot CSVs written by export_csv.
std::vector<GridField> import_snapshots_csv(const std::filesystem::path& file);

// "key = value" lines; '#' starts a comment; later keys win.
std::map<std::string, std::string> parse_config(
    const std::filesystem::path& file);

// Exact Barenblatt-translated (m=3) field at time t on the given grid.
GridField exact_field(const Grid1D& grid, double t);

// Seed precedence: explicit value if set, else PML_SEED, else fallback.
std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed,
                           std::uint64_t fallback = 1234);

}  // namespace pml
