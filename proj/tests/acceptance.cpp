// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria. `acceptance 4 7` runs a subset.

#include "oracles.hpp"

#include "dtnlab/bessel.hpp"
#include "dtnlab/config.hpp"
#include "dtnlab/lp_norm.hpp"
#include "dtnlab/runner.hpp"
#include "dtnlab/verify.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#ifndef DTNLAB_SOURCE_DIR
#define DTNLAB_SOURCE_DIR "."
#endif

using namespace dtn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::shared_ptr<const BoundarySpace> disk_boundary(std::size_t n) {
  return std::make_shared<const BoundarySpace>(build_boundary_space(unit_disk(), n));
}

std::shared_ptr<const DtnOperator> exact_disk(std::size_t n, double c = 0.0) {
  return std::make_shared<const DtnOperator>(exact_rotational_dtn(
      disk_boundary(n), c == 0.0 ? PotentialField::zero() : PotentialField::constant(c), n / 2 - 1));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. FEM Steklov spectrum of the disk: 0, 1, 1, ..., 8, 8.
Outcome disk_spectrum() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::shared_ptr<const DtnOperator>> ops;
  for (std::size_t n : {128u, 256u}) {
    ops.push_back(std::make_shared<const DtnOperator>(fem_dtn(unit_disk(), PotentialField::zero(), n)));
  }
  Eigen::VectorXd ref(17);
  ref[0] = 0.0;
  for (int k = 1; k <= 8; ++k) ref[2 * k - 1] = ref[2 * k] = k;
  const VerificationReport r = spectrum_check(ops, ref, 17, 0.02);
  const double secs = seconds_since(t0);
  const double coarse = r.measured["resolutions"][0]["max_relative_error"];
  const double fine = r.measured["finest_error"];
  return {r.pass && secs <= 60.0, "error n=128 " + fmt("%.3e", coarse) + ", n=256 " + fmt("%.3e", fine) +
                                      " (tol 2e-2, decreasing), " + fmt("%.1f s", secs) + " (limit 60 s)"};
}

// 2. V = 1: FEM modes 0..4 against the radial shooting oracle.
Outcome bessel_spectrum() {
  const DtnOperator op = fem_dtn(unit_disk(), PotentialField::constant(1.0), 256);
  double worst = 0.0;
  for (int m = 0; m <= 4; ++m) {
    const double ref = oracle::radial_shooting_disk(m, 1.0);
    // Mode m sits at sorted positions 2m − 1 and 2m (m ≥ 1), 0 for m = 0.
    for (int idx : m == 0 ? std::vector<int>{0} : std::vector<int>{2 * m - 1, 2 * m}) {
      worst = std::max(worst, std::abs(op.eigenvalues[idx] - ref) / ref);
    }
  }
  return {worst <= 0.02, "max relative error modes 0..4 " + fmt("%.3e", worst) + " (tol 2e-2)"};
}

// 3. Exact kernel against the closed-form Poisson kernel, t ≥ 0.1.
Outcome poisson_identity() {
  const auto op = exact_disk(256);
  const BoundarySpace& b = *op->boundary;
  double worst = 0.0;
  for (double t : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const KernelMatrix K = kernel_matrix(*op, t);
    for (Eigen::Index x = 0; x < K.size(); ++x)
      for (Eigen::Index y = 0; y < K.size(); ++y)
        worst = std::max(worst, std::abs(K.values(x, y) - oracle::disk_poisson_kernel(t, b.angles[x] - b.angles[y])));
  }
  return {worst <= 1e-10, "max |K − P| " + fmt("%.3e", worst) + " (tol 1e-10)"};
}

// 4. Real-time Poisson bound: finite, refinement-stable, diagonal → 1/π.
Outcome real_time_bound() {
  const OperatorLevels lv = make_levels(exact_disk(512));
  const VerificationReport r =
      poisson_sup_ratio(lv, SweepGrid::log_spaced(1e-3, 10, 6), BoundSpec::real_time(), DistanceKind::euclidean, 0.2);
  const double c = r.measured["C_star"], cr = r.measured["C_star_refined"];
  const double dmin = r.measured["diagonal_t_K_min"], dmax = r.measured["diagonal_t_K_max"];
  const double diag = std::max(std::abs(dmin * std::numbers::pi - 1), std::abs(dmax * std::numbers::pi - 1));
  return {r.pass && diag <= 0.01, "C* " + fmt("%.5f", c) + ", refined " + fmt("%.5f", cr) + " (change < 20%), " +
                                      "t K_t(x,x) at t=1e-3 off 1/pi by " + fmt("%.2e", diag) + " (tol 1e-2)"};
}

// 5. Complex-time bound with the (cos θ)^24 weight on four rays.
Outcome complex_time_bound() {
  const OperatorLevels lv = make_levels(exact_disk(512));
  BoundSpec spec = BoundSpec::complex_time();
  spec.cos_power = 24.0;
  const double pi = std::numbers::pi;
  const VerificationReport r = poisson_sup_ratio(
      lv, SweepGrid::log_spaced(1e-3, 10, 4, {0.0, pi / 6, pi / 4, pi / 3}), spec, DistanceKind::euclidean, 0.2);
  std::string rays;
  for (const auto& [angle, v] : r.measured["rays"].items()) {
    if (!rays.empty()) rays += ", ";
    rays += angle + ": " + fmt("%.3e", v["base"].get<double>()) + " (" +
            fmt("%.1e", v["relative_change"].get<double>()) + ")";
  }
  return {r.pass, "per-ray C* (refinement change) " + rays};
}

// 6. Domination K⁰ ≥ K¹ on one FEM mesh.
Outcome domination() {
  const DtnOperator v0 = fem_dtn(unit_disk(), PotentialField::zero(), 128);
  const DtnOperator v1 = fem_dtn(unit_disk(), PotentialField::constant(1.0), 128);
  const VerificationReport r = domination_check(v0, v1, {0.1, 1.0, 10.0}, 1e-8);
  const double d = r.measured["min_difference"], k = r.measured["min_kernel_V2"];
  return {r.pass, "min(K0 − K1) " + fmt("%.3e", d) + ", min K1 " + fmt("%.3e", k) + " (tol −1e-8)"};
}

// 7. Sub-Markov row sums.
Outcome submarkov() {
  const DtnOperator v0 = fem_dtn(unit_disk(), PotentialField::zero(), 128);
  const DtnOperator v1 = fem_dtn(unit_disk(), PotentialField::constant(1.0), 128);
  const VerificationReport r0 = submarkov_check(v0, {0.1, 1.0, 10.0}, 1e-8, 1e-6);
  const VerificationReport r1 = submarkov_check(v1, {1.0}, 1e-8, 1e-6);
  const double dev = r0.measured["max_deviation_from_one"];
  const double row = r1.measured["max_row_sum"];
  return {r0.pass && r1.pass && row < 1.0, "V=0 |row − 1| " + fmt("%.2e", dev) + " (tol 1e-6), V=1 max row at t=1 " +
                                               fmt("%.6f", row) + " (< 1)"};
}

// 8. ‖S_t‖_{1→∞} ~ t^{−1} for small t.
Outcome l1_linf_slope() {
  const auto op = exact_disk(512);
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(std::pow(10.0, -3 + 0.25 * i));
  const VerificationReport r = lplq_slope(*op, 1.0, kInf, times, 0.1, true);
  const double s = r.measured["slope"];
  return {r.pass, "slope " + fmt("%.4f", s) + " (expected −1 ± 0.1)"};
}

// 9. Duhamel identity on random 4×4 matrices.
Outcome duhamel() {
  const VerificationReport r = duhamel_check(4, 2, 64, 2024, {1e-10, 1e-8});
  std::string d;
  for (const auto& o : r.measured["orders"]) {
    d += "n=" + std::to_string(o["order"].get<int>()) + " " + fmt("%.2e", o["residual"].get<double>()) + ", ";
  }
  d += "commuting " + fmt("%.1e", r.measured["commuting_residual"].get<double>());
  return {r.pass, d + " (tol 1e-10, 1e-8, exact 0)"};
}

// 10. Second commutators grow at most linearly in t.
Outcome commutator_growth() {
  const OperatorLevels lv = make_levels(exact_disk(256));
  const VerificationReport r = commutator_growth_check(lv, 50, SweepGrid::log_spaced(1e-3, 1, 4), 2, 0.0, 17, 0.2);
  const double c = r.measured["c_prime"], cr = r.measured["c_prime_refined"];
  const double w = r.measured["worst_witness_change"];
  return {r.pass, "sup ‖δ²S_t‖/t " + fmt("%.5f", c) + ", refined " + fmt("%.5f", cr) + ", worst witness change " +
                      fmt("%.2e", w) + " (< 20%)"};
}

// 11. Subordination, scalar and operator.
Outcome subordination() {
  const auto op = exact_disk(128);
  const VerificationReport r = subordination_check(*op, {0.0, 0.5, 1.0, 5.0}, {0.1, 1.0}, 1e-8, 16);
  const double s = r.measured["scalar_max_error"], o = r.measured["operator_max_error"];
  return {r.pass, "scalar " + fmt("%.2e", s) + ", operator " + fmt("%.2e", o) + " (tol 1e-8)"};
}

// 12. Metric machinery on the annulus.
Outcome metric() {
  const BoundarySpace b = build_boundary_space(annulus(0.5, 1.0), 48);
  const VerificationReport r = metric_check(b, 10000, 3, 0.02);
  const double gap = r.measured["oracle_gap"], gap_c = r.measured["oracle_gap_coarse"];
  return {r.pass, "oracle gap " + fmt("%.2e", gap_c) + " at 1000 samples, " + fmt("%.2e", gap) +
                      " at 10000 (nonnegative, < 2e-2); axioms " + (r.pass ? "hold" : "violated")};
}

// 13. Derivative bounds, (k, ℓ) ∈ {(1,0), (0,1), (1,1)}.
Outcome derivative_bounds() {
  const OperatorLevels lv = make_levels(exact_disk(256));
  const SweepGrid g = SweepGrid::log_spaced(1e-2, 10, 4);
  bool ok = true;
  std::string d;
  for (auto [k, l] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
    const VerificationReport r = derivative_bound_check(lv, g, k, l, 0.2);
    ok = ok && r.pass;
    d += "(" + std::to_string(k) + "," + std::to_string(l) + ") " + fmt("%.4f", r.measured["sup_ratio"].get<double>()) +
         " change " + fmt("%.2e", r.measured["relative_change"].get<double>()) + "; ";
  }
  return {ok, d + "stability < 20%"};
}

// 14. Convolution of Poisson profiles on the circle.
Outcome convolution() {
  const BoundarySpace b = build_boundary_space(unit_disk(), 4096);
  std::vector<double> times;
  for (int i = 0; i <= 12; ++i) times.push_back(std::pow(10.0, -2 + 0.25 * i));
  const VerificationReport r = convolution_check(b, times, 512, 2.0);
  const double lo = r.measured["c_min"], hi = r.measured["c_max"], v = r.measured["variation"];
  return {r.pass, "c(t) in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "], max/min " + fmt("%.4f", v) +
                      " (limit 2)"};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".json") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), dir).string()] = s.str();
  }
  return out;
}

// 15. Two runs of the full suite give byte-identical reports.
Outcome determinism() {
  const fs::path cfg_file = fs::path(DTNLAB_SOURCE_DIR) / "configs" / "suite.yaml";
  const ExperimentConfig cfg = load_config(cfg_file);
  const fs::path root = fs::temp_directory_path() / "dtnlab-acceptance-determinism";
  fs::remove_all(root);
  RunOptions a, b;
  a.output = root / "first";
  b.output = root / "second";
  b.jobs = 2;
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult ra = run_experiment(cfg, a);
  const double secs = seconds_since(t0);
  run_experiment(cfg, b);
  const auto fa = read_tree(root / "first"), fb = read_tree(root / "second");
  const bool same = !fa.empty() && fa == fb;
  std::size_t passed = 0;
  for (const auto& r : ra.reports) passed += r.pass ? 1 : 0;
  return {same && secs <= 600.0, std::to_string(fa.size()) + " JSON files " + (same ? "identical" : "DIFFER") +
                                     " (serial vs 2 workers), one suite run " + fmt("%.1f s", secs) +
                                     " (target 600 s); suite verdicts " + std::to_string(passed) + "/" +
                                     std::to_string(ra.reports.size()) + " pass"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"disk DtN spectrum (FEM)", disk_spectrum},
      {"Bessel-potential spectrum (FEM vs shooting)", bessel_spectrum},
      {"exact kernel = Poisson kernel", poisson_identity},
      {"real-time Poisson bound", real_time_bound},
      {"complex-time Poisson bound", complex_time_bound},
      {"domination V=0 over V=1", domination},
      {"sub-Markov row sums", submarkov},
      {"L1 -> Linf scaling", l1_linf_slope},
      {"Duhamel identity", duhamel},
      {"commutator growth", commutator_growth},
      {"subordination", subordination},
      {"metric module", metric},
      {"derivative bounds", derivative_bounds},
      {"Poisson convolution stability", convolution},
      {"determinism of the verify suite", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("raised: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed;
}
