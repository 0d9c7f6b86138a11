#include "dtnlab/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace dtn;
using Catch::Approx;

namespace {

std::shared_ptr<const DtnOperator> disk_op(std::size_t n) {
  auto b = std::make_shared<const BoundarySpace>(build_boundary_space(unit_disk(), n));
  return std::make_shared<const DtnOperator>(exact_rotational_dtn(b, PotentialField::zero(), n / 2 - 1));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("sweep grid construction and validation") {
  const SweepGrid g = SweepGrid::log_spaced(1e-3, 10, 2);
  CHECK(g.moduli.front() == Approx(1e-3));
  CHECK(g.moduli.back() == Approx(10.0));
  CHECK(g.moduli.size() == 9);
  const SweepGrid r = g.refined();
  CHECK(r.moduli.size() == 17);
  CHECK(r.moduli[1] == Approx(std::sqrt(g.moduli[0] * g.moduli[1])));
  SweepGrid bad = g;
  bad.angles = {1.565};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.angles = {0.0};
  bad.moduli = {};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("loglog slope recovers a power law") {
  std::vector<double> x, y;
  for (int i = 0; i < 8; ++i) {
    x.push_back(std::pow(10.0, -3 + 0.25 * i));
    y.push_back(3.0 * std::pow(x.back(), -1.5));
  }
  CHECK(loglog_slope(x, y) == Approx(-1.5));
  CHECK_THROWS(loglog_slope({1, 2}, {1, 2}));
}

TEST_CASE("poisson sup ratio: rho and euclidean distances give the same verdict") {
  const OperatorLevels lv = make_levels(disk_op(128));
  const SweepGrid g = SweepGrid::log_spaced(1e-2, 10, 3);
  const VerificationReport e = poisson_sup_ratio(lv, g, BoundSpec::real_time(), DistanceKind::euclidean);
  const VerificationReport r = poisson_sup_ratio(lv, g, BoundSpec::real_time(), DistanceKind::rho);
  CHECK(e.pass);
  CHECK(r.pass == e.pass);
  // Chord ≤ arc ≤ (π/2) chord on the circle, so the constants are comparable.
  const double ce = e.measured["C_star"], cr = r.measured["C_star"];
  CHECK(cr >= ce * (1 - 1e-12));
  CHECK(cr <= ce * std::pow(std::numbers::pi / 2, 2) * 1.01);
}

TEST_CASE("poisson sup ratio needs two decades") {
  const OperatorLevels lv = make_levels(disk_op(32));
  CHECK_THROWS(poisson_sup_ratio(lv, SweepGrid::log_spaced(0.5, 2, 4), BoundSpec::real_time()));
}

TEST_CASE("domination and submarkov on the exact disk") {
  // Truncation keeps the kernel positive only once e^{−t n/2} is negligible:
  // at 64 nodes and t = 0.1 the truncated sum dips below zero.
  auto b = std::make_shared<const BoundarySpace>(build_boundary_space(unit_disk(), 128));
  const DtnOperator v0 = exact_rotational_dtn(b, PotentialField::zero(), 63);
  const DtnOperator v1 = exact_rotational_dtn(b, PotentialField::constant(1.0), 63);
  CHECK(domination_check(v0, v1, {0.1, 1.0}).pass);
  // Reversed order violates domination.
  CHECK_FALSE(domination_check(v1, v0, {0.1, 1.0}).pass);
  const VerificationReport s0 = submarkov_check(v0, {0.1, 1.0});
  const VerificationReport s1 = submarkov_check(v1, {0.1, 1.0});
  CHECK(s0.pass);
  CHECK(s1.pass);
  CHECK(s1.measured["strictly_submarkov"] == true);
}

TEST_CASE("metric check on the annulus") {
  const BoundarySpace b = build_boundary_space(annulus(0.5, 1.0), 24);
  const VerificationReport r = metric_check(b, 2000, 1);
  CHECK(r.measured["symmetric"] == true);
  CHECK(r.measured["same_component_is_geodesic"] == true);
  CHECK(r.measured["cross_component_at_least_one"] == true);
  CHECK(r.measured["triangle_max_violation"].get<double>() <= 1e-12);
}

TEST_CASE("bound spec exponents") {
  const BoundSpec real = BoundSpec::real_time();
  CHECK(real.poisson_exponent == 2.0);
  CHECK(real.time_exponent == 1.0);
  CHECK(real.cos_power == 0.0);
  CHECK(BoundSpec::complex_time(2).cos_power == 12.0);
  BoundSpec bad;
  bad.d = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("reports are sorted and serialized deterministically") {
  VerificationReport a, b;
  a.check = "zeta";
  a.name = "zeta";
  a.pass = true;
  a.inputs = "a";
  a.measured = {{"x", 0.1}};
  b.check = "alpha";
  b.pass = false;
  b.inputs = "b";
  b.tables.push_back({"t", {"u", "v"}, {{1.0, 2.5}}});
  const auto dir = std::filesystem::temp_directory_path() / "dtnlab-test-report";
  std::filesystem::remove_all(dir);
  const auto files = emit_report({a, b}, dir);
  const nlohmann::json s = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(s["checks"][0]["name"] == "alpha");
  CHECK(s["passed"] == 1);
  CHECK(s["failed"] == 1);
  CHECK(s["checks"][1]["input_hash"] == a.input_hash());
  CHECK(slurp(dir / "plots" / "alpha.t.csv") == "u,v\n1,2.5\n");
  const auto again = std::filesystem::temp_directory_path() / "dtnlab-test-report2";
  std::filesystem::remove_all(again);
  emit_report({b, a}, again);
  CHECK(slurp(dir / "summary.json") == slurp(again / "summary.json"));
}
