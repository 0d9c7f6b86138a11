#include "dtnlab/verify.hpp"

#include "dtnlab/cache.hpp"
#include "dtnlab/commutator.hpp"
#include "dtnlab/lp_norm.hpp"
#include "dtnlab/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dtn {

using nlohmann::json;

namespace {

constexpr double kMinSectorCos = 0.01;

bool finite(double v) { return std::isfinite(v); }

std::vector<NodeIndex> subsample(const BoundarySpace& b, std::size_t stride) {
  std::vector<NodeIndex> idx;
  for (NodeIndex a = 0; a < b.size(); a += std::max<std::size_t>(stride, 1)) idx.push_back(a);
  return idx;
}

Eigen::MatrixXd distance_matrix(const BoundarySpace& b, const std::vector<NodeIndex>& idx, DistanceKind kind) {
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd D(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      D(i, j) = i == j ? 0.0 : node_distance(b, idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)], kind);
  return D;
}

ComplexTime time_at(double modulus, double theta) {
  return theta == 0.0 ? ComplexTime(modulus) : ComplexTime::polar(modulus, theta);
}

std::string angle_key(double theta) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << theta;
  return os.str();
}

void check_angle(double theta, const char* who) {
  if (!(std::cos(theta) >= kMinSectorCos) || !(std::abs(theta) < std::numbers::pi / 2)) {
    std::ostringstream os;
    os << who << ": angle " << theta << " is outside the sector (need cos θ >= " << kMinSectorCos << ")";
    throw std::invalid_argument(os.str());
  }
}

std::string level_inputs(const OperatorLevels& levels) {
  std::string s = describe_operator(*levels.base);
  if (levels.refined) s += " || " + describe_operator(*levels.refined);
  return s;
}

void require_levels(const OperatorLevels& levels, const char* who) {
  if (!levels.base || !levels.refined)
    throw std::invalid_argument(std::string(who) + ": both base and refined operators are required");
}

}  // namespace

// Specs, grids and helpers ---------------------------------------------------------------

BoundSpec BoundSpec::real_time(int d) {
  BoundSpec s;
  s.d = d;
  s.poisson_exponent = d;
  s.time_exponent = d - 1;
  s.cos_power = 0.0;
  return s;
}

BoundSpec BoundSpec::complex_time(int d) {
  BoundSpec s = real_time(d);
  s.cos_power = 2.0 * d * (d + 1);
  return s;
}

void BoundSpec::validate() const {
  if (d < 2) throw std::invalid_argument("BoundSpec: dimension d must be >= 2");
  if (poisson_exponent != d || time_exponent != d - 1)
    throw std::invalid_argument("BoundSpec: exponents must be d and d - 1");
  if (!(cos_power >= 0.0)) throw std::invalid_argument("BoundSpec: cos_power must be >= 0");
}

SweepGrid SweepGrid::log_spaced(double lo, double hi, int per_decade, std::vector<double> angles) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1)
    throw std::invalid_argument("SweepGrid::log_spaced: need 0 < lo <= hi and per_decade >= 1");
  SweepGrid g;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade - 1e-9)));
  for (int i = 0; i <= steps; ++i) g.moduli.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / steps));
  if (hi == lo) g.moduli = {lo};
  g.angles = std::move(angles);
  return g;
}

SweepGrid SweepGrid::refined() const {
  SweepGrid g = *this;
  g.moduli.clear();
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (i > 0) g.moduli.push_back(std::sqrt(moduli[i - 1] * moduli[i]));
    g.moduli.push_back(moduli[i]);
  }
  return g;
}

void SweepGrid::validate() const {
  if (moduli.empty() || angles.empty()) throw std::invalid_argument("SweepGrid: empty grid");
  for (double r : moduli)
    if (!(r > 0.0) || !finite(r)) throw std::invalid_argument("SweepGrid: moduli must be positive and finite");
  for (double a : angles) check_angle(a, "SweepGrid");
  if (pair_stride == 0) throw std::invalid_argument("SweepGrid: pair_stride must be >= 1");
}

json SweepGrid::to_json() const {
  return json{{"moduli", moduli}, {"angles", angles}, {"pair_stride", pair_stride}};
}

std::shared_ptr<const DtnOperator> refine_operator(const DtnOperator& op) {
  const std::size_t n = 2 * op.boundary->nodes_per_component;
  if (op.provenance == Provenance::exact_spectral) {
    auto b = std::make_shared<const BoundarySpace>(build_boundary_space(op.boundary->domain, n));
    DtnOperator r = exact_rotational_dtn(b, op.potential, n / 2 - 1);
    r.mode_factor = 2.0 * op.mode_factor;
    return std::make_shared<const DtnOperator>(std::move(r));
  }
  return std::make_shared<const DtnOperator>(fem_dtn(op.boundary->domain, op.potential, n));
}

OperatorLevels make_levels(std::shared_ptr<const DtnOperator> op) {
  OperatorLevels l;
  l.refined = refine_operator(*op);
  l.base = std::move(op);
  return l;
}

std::string describe_operator(const DtnOperator& op) {
  std::ostringstream os;
  os.precision(17);
  os << op.boundary->domain.describe() << "|" << op.potential.describe() << "|" << to_string(op.provenance)
     << "|n=" << op.boundary->nodes_per_component << "|rank=" << op.rank() << "|mode_factor=" << op.mode_factor;
  return os.str();
}

std::string VerificationReport::input_hash() const { return content_hash(inputs); }

json VerificationReport::to_json() const {
  json j;
  j["check"] = check;
  j["name"] = name.empty() ? check : name;
  j["params"] = params;
  j["measured"] = measured;
  j["tolerance"] = tolerance;
  j["verdict"] = pass ? "pass" : "fail";
  j["grid"] = grid;
  j["backend"] = backend;
  j["input_hash"] = input_hash();
  if (!notes.empty()) j["notes"] = notes;
  return j;
}

double relative_change(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(b - a) / s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4) throw std::invalid_argument("loglog_slope: need at least 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: data must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) throw std::invalid_argument("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

// Operator checks ------------------------------------------------------------------------

VerificationReport spectrum_check(const std::vector<std::shared_ptr<const DtnOperator>>& resolutions,
                                  const Eigen::VectorXd& reference, std::size_t count, double tolerance) {
  if (resolutions.empty()) throw std::invalid_argument("spectrum_check: no operators");
  if (static_cast<std::size_t>(reference.size()) < count) throw std::invalid_argument("spectrum_check: short reference");
  VerificationReport r;
  r.check = "spectrum";
  r.tolerance = tolerance;
  r.backend = to_string(resolutions.front()->provenance);
  r.params = {{"count", count}};
  PlotTable table{"spectrum", {"nodes", "index", "computed", "reference"}, {}};
  std::vector<double> errors;
  json per;
  for (const auto& op : resolutions) {
    if (op->rank() < count) throw std::invalid_argument("spectrum_check: operator has fewer eigenvalues than count");
    double worst = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double ref = reference[static_cast<Eigen::Index>(k)];
      const double got = op->eigenvalues[static_cast<Eigen::Index>(k)];
      const double err = std::abs(ref) > 1e-12 ? std::abs(got - ref) / std::abs(ref) : std::abs(got - ref);
      worst = std::max(worst, err);
      table.rows.push_back({static_cast<double>(op->boundary->nodes_per_component), static_cast<double>(k), got, ref});
    }
    errors.push_back(worst);
    per.push_back({{"nodes", op->boundary->nodes_per_component}, {"max_relative_error", worst}});
    r.inputs += describe_operator(*op) + ";";
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
  r.measured = {{"resolutions", per}, {"finest_error", errors.back()}, {"decreasing", decreasing}};
  r.pass = errors.back() <= tolerance && decreasing;
  r.tables.push_back(std::move(table));
  return r;
}

VerificationReport coercivity_check(const StiffnessSystem& sys, std::size_t samples, double omega,
                                    std::uint64_t seed) {
  const CoercivityMargin m = coercivity_margin(sys, samples, omega, seed);
  VerificationReport r;
  r.check = "coercivity";
  r.backend = "fem-schur";
  r.params = {{"samples", samples}, {"omega", omega}, {"seed", seed}};
  r.measured = {{"mu", m.mu}};
  r.tolerance = 0.0;
  r.pass = m.mu > 0.0;
  r.inputs = sys.boundary->domain.describe() + "|" + sys.potential.describe() + "|" + r.params.dump();
  return r;
}

// Semigroup checks -----------------------------------------------------------------------

namespace {

struct RaySweep {
  std::map<std::string, double> sup_by_angle;
  std::vector<std::pair<double, double>> rays;  // (theta, sup) in grid order
  double overall = 0.0;
  double diag_min = std::numeric_limits<double>::quiet_NaN();
  double diag_max = std::numeric_limits<double>::quiet_NaN();
  PlotTable table;
};

RaySweep poisson_sweep(const DtnOperator& op, const SweepGrid& grid, const BoundSpec& spec, DistanceKind kind) {
  const double lambda1 = std::isnan(spec.eigenvalue_shift) ? op.ground_eigenvalue() : spec.eigenvalue_shift;
  const std::vector<NodeIndex> idx = subsample(*op.boundary, grid.pair_stride);
  const Eigen::MatrixXd D = distance_matrix(*op.boundary, idx, kind);
  const double r_min = *std::min_element(grid.moduli.begin(), grid.moduli.end());
  RaySweep out;
  out.table = {"poisson_sup_ratio", {"nodes", "t", "theta", "sup_ratio"}, {}};
  for (double theta : grid.angles) {
    double sup = 0.0;
    for (double r : grid.moduli) {
      const ComplexTime z = time_at(r, theta);
      const KernelMatrix K = kernel_matrix(op, z);
      const double w = std::pow(std::min(r, 1.0), spec.time_exponent) * std::exp(lambda1 * z.real()) *
                       std::pow(std::cos(theta), spec.cos_power);
      double s = 0.0;
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const double v = std::abs(K.values(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j])));
          s = std::max(s, v * std::pow(1.0 + D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / r,
                                       spec.poisson_exponent) * w);
        }
      if (theta == 0.0 && r == r_min) {
        const Eigen::VectorXd diag = K.values.diagonal().real() * r;
        out.diag_min = diag.minCoeff();
        out.diag_max = diag.maxCoeff();
      }
      out.table.rows.push_back({static_cast<double>(op.boundary->nodes_per_component), r, theta, s});
      sup = std::max(sup, s);
    }
    out.sup_by_angle[angle_key(theta)] = sup;
    out.rays.emplace_back(theta, sup);
    out.overall = std::max(out.overall, sup);
  }
  return out;
}

}  // namespace

VerificationReport poisson_sup_ratio(const OperatorLevels& levels, const SweepGrid& grid, const BoundSpec& spec,
                                     DistanceKind distance, double stability) {
  require_levels(levels, "poisson_sup_ratio");
  grid.validate();
  spec.validate();
  if (grid.moduli.size() < 2 || grid.moduli.back() / grid.moduli.front() < 100.0)
    throw std::invalid_argument("poisson_sup_ratio: grid must cover at least two decades");
  const RaySweep a = poisson_sweep(*levels.base, grid, spec, distance);
  const RaySweep b = poisson_sweep(*levels.refined, grid.refined(), spec, distance);

  VerificationReport r;
  r.check = "poisson_sup_ratio";
  r.backend = to_string(levels.base->provenance);
  r.tolerance = stability;
  r.grid = grid.to_json();
  r.params = {{"d", spec.d},
              {"cos_power", spec.cos_power},
              {"distance", to_string(distance)},
              {"lambda_1", levels.base->ground_eigenvalue()}};
  bool ok = finite(a.overall) && finite(b.overall);
  json rays = json::object();
  for (const auto& [key, va] : a.sup_by_angle) {
    const double vb = b.sup_by_angle.at(key);
    const double change = relative_change(va, vb);
    ok = ok && finite(va) && finite(vb) && change < stability;
    rays[key] = {{"base", va}, {"refined", vb}, {"relative_change", change}};
  }
  r.measured = {{"C_star", a.overall}, {"C_star_refined", b.overall}, {"rays", rays}};
  // Reported only: the smallest integer power of cos θ whose constant is
  // still stable under refinement.
  if (a.rays.size() > 1) {
    const auto reweighted = [&](const RaySweep& s, double power) {
      double c = 0.0;
      for (const auto& [theta, sup] : s.rays) c = std::max(c, sup * std::pow(std::cos(theta), power - spec.cos_power));
      return c;
    };
    json smallest = nullptr;
    for (int p = 0; p <= static_cast<int>(std::ceil(spec.cos_power)); ++p) {
      const double ca = reweighted(a, p), cb = reweighted(b, p);
      if (finite(ca) && finite(cb) && relative_change(ca, cb) < stability) {
        smallest = p;
        break;
      }
    }
    r.measured["smallest_stable_cos_power"] = smallest;
  }
  if (!std::isnan(a.diag_min)) {
    r.measured["diagonal_t_K_min"] = a.diag_min;
    r.measured["diagonal_t_K_max"] = a.diag_max;
    r.measured["diagonal_t_K_refined"] = b.diag_min;
  }
  r.pass = ok;
  r.inputs = level_inputs(levels) + "|" + r.params.dump() + "|" + r.grid.dump();
  r.tables.push_back(a.table);
  r.tables.back().rows.insert(r.tables.back().rows.end(), b.table.rows.begin(), b.table.rows.end());
  return r;
}

VerificationReport domination_check(const DtnOperator& op_v1, const DtnOperator& op_v2,
                                    const std::vector<double>& times, double tolerance) {
  if (op_v1.size() != op_v2.size() || (op_v1.weights() - op_v2.weights()).cwiseAbs().maxCoeff() > 1e-12 ||
      op_v1.provenance != op_v2.provenance)
    throw std::invalid_argument("domination_check: operators must share the boundary mesh and backend");
  if (times.empty()) throw std::invalid_argument("domination_check: no times");
  VerificationReport r;
  r.check = "domination";
  r.backend = to_string(op_v1.provenance);
  r.tolerance = tolerance;
  r.params = {{"times", times}, {"V1", op_v1.potential.describe()}, {"V2", op_v2.potential.describe()}};
  PlotTable table{"domination", {"t", "min_difference", "min_kernel_V2", "trace_V1", "trace_V2"}, {}};
  double min_diff = kInf, min_k2 = kInf;
  bool trace_ok = true;
  const KernelOptions eig{KernelEvaluation::eigenpairs};
  for (double t : times) {
    const Eigen::MatrixXd K1 = kernel_matrix(op_v1, t, eig).real();
    const Eigen::MatrixXd K2 = kernel_matrix(op_v2, t, eig).real();
    const double d = (K1 - K2).minCoeff();
    const double k2 = K2.minCoeff();
    const double tr1 = (-t * op_v1.eigenvalues.array()).exp().sum();
    const double tr2 = (-t * op_v2.eigenvalues.array()).exp().sum();
    trace_ok = trace_ok && tr2 <= tr1 * (1.0 + 1e-12);
    min_diff = std::min(min_diff, d);
    min_k2 = std::min(min_k2, k2);
    table.rows.push_back({t, d, k2, tr1, tr2});
  }
  r.measured = {{"min_difference", min_diff}, {"min_kernel_V2", min_k2}, {"trace_comparison", trace_ok}};
  r.pass = min_diff >= -tolerance && min_k2 >= -tolerance && trace_ok;
  r.inputs = describe_operator(op_v1) + "||" + describe_operator(op_v2) + "|" + r.params.dump();
  r.tables.push_back(std::move(table));
  return r;
}

VerificationReport submarkov_check(const DtnOperator& op, const std::vector<double>& times, double tolerance,
                                   double equality_tolerance) {
  if (times.empty()) throw std::invalid_argument("submarkov_check: no times");
  const bool zero_potential = op.potential.kind() == PotentialKind::zero;
  VerificationReport r;
  r.check = "submarkov";
  r.backend = to_string(op.provenance);
  r.tolerance = tolerance;
  r.params = {{"times", times}, {"equality_tolerance", equality_tolerance}, {"zero_potential", zero_potential}};
  PlotTable table{"submarkov", {"t", "max_row_sum", "min_row_sum", "min_entry"}, {}};
  double max_row = -kInf, min_row = kInf, min_entry = kInf, max_dev = 0.0;
  json rows = json::array();
  const KernelOptions eig{KernelEvaluation::eigenpairs};
  for (double t : times) {
    const Eigen::MatrixXd K = kernel_matrix(op, t, eig).real();
    const Eigen::VectorXd sums = K * op.weights();
    max_row = std::max(max_row, sums.maxCoeff());
    min_row = std::min(min_row, sums.minCoeff());
    min_entry = std::min(min_entry, K.minCoeff());
    max_dev = std::max(max_dev, (sums.array() - 1.0).abs().maxCoeff());
    rows.push_back({{"t", t}, {"max_row_sum", sums.maxCoeff()}, {"min_row_sum", sums.minCoeff()}});
    table.rows.push_back({t, sums.maxCoeff(), sums.minCoeff(), K.minCoeff()});
  }
  r.measured = {{"max_row_sum", max_row},
                {"min_row_sum", min_row},
                {"min_entry", min_entry},
                {"max_deviation_from_one", max_dev},
                {"per_time", rows}};
  // A nonzero potential must lose mass: rows strictly below one.
  const bool strict = zero_potential || max_row < 1.0;
  r.measured["strictly_submarkov"] = !zero_potential && max_row < 1.0;
  r.pass = max_row <= 1.0 + tolerance && min_entry >= -tolerance && strict &&
           (!zero_potential || max_dev <= equality_tolerance);
  r.inputs = describe_operator(op) + "|" + r.params.dump();
  r.tables.push_back(std::move(table));
  return r;
}

VerificationReport lplq_slope(const DtnOperator& op, double p, double q, const std::vector<double>& times,
                              double tolerance, bool two_sided, int d) {
  if (!(1.0 <= p && p <= q)) throw std::invalid_argument("lplq_slope: need 1 <= p <= q <= ∞");
  if (times.size() < 4) throw std::invalid_argument("lplq_slope: degenerate fit, need at least 4 times");
  const double inv_p = 1.0 / p;
  const double inv_q = q == kInf ? 0.0 : 1.0 / q;
  const double expected = -(d - 1) * (inv_p - inv_q);
  VerificationReport r;
  r.check = "lplq_slope";
  r.backend = to_string(op.provenance);
  r.tolerance = tolerance;
  r.params = {{"p", p}, {"q", q == kInf ? json("inf") : json(q)}, {"times", times}, {"two_sided", two_sided}};
  PlotTable table{"lplq_slope", {"t", "norm"}, {}};
  std::vector<double> norms;
  bool exact = true;
  // The 1 → ∞ norm is the pointwise sup of the kernel; others need quadrature
  // and therefore act on the discrete operator.
  const KernelOptions opts{p == 1.0 && q == kInf ? KernelEvaluation::automatic : KernelEvaluation::eigenpairs};
  for (double t : times) {
    const KernelMatrix K = kernel_matrix(op, t, opts);
    const OperatorNormResult n = operator_norm(K.values, op.weights(), p, q);
    exact = exact && n.exact;
    norms.push_back(n.value);
    table.rows.push_back({t, n.value});
  }
  const double slope = loglog_slope(times, norms);
  r.measured = {{"slope", slope}, {"expected_slope", expected}, {"norms_exact", exact}, {"norms", norms}};
  r.pass = slope >= expected - tolerance && (!two_sided || slope <= expected + tolerance);
  r.inputs = describe_operator(op) + "|" + r.params.dump();
  r.tables.push_back(std::move(table));
  return r;
}

namespace {

double commutator_sweep(const DtnOperator& op, const std::vector<WitnessSpec>& specs, const SweepGrid& grid,
                        int order, double cos_power, std::vector<double>& per_witness, PlotTable& table) {
  std::vector<LipschitzWitness> gs;
  for (const WitnessSpec& s : specs) gs.push_back(realize_witness(*op.boundary, s));
  per_witness.assign(gs.size(), 0.0);
  const std::vector<NodeIndex> idx = subsample(*op.boundary, grid.pair_stride);
  for (double theta : grid.angles)
    for (double r : grid.moduli) {
      const ComplexTime z = time_at(r, theta);
      const Eigen::MatrixXd absK = kernel_matrix(op, z).values.cwiseAbs();
      const double w = std::pow(std::cos(theta), cos_power) / r;
      double worst = 0.0;
      for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        const Eigen::VectorXd& g = gs[gi].values;
        double M = 0.0;
        for (NodeIndex b : idx)
          for (NodeIndex a : idx) {
            const double diff = g[static_cast<Eigen::Index>(a)] - g[static_cast<Eigen::Index>(b)];
            M = std::max(M, std::pow(std::abs(diff), order) *
                                absK(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
          }
        per_witness[gi] = std::max(per_witness[gi], M * w);
        worst = std::max(worst, M * w);
      }
      table.rows.push_back({static_cast<double>(op.boundary->nodes_per_component), r, theta, worst});
    }
  return *std::max_element(per_witness.begin(), per_witness.end());
}

}  // namespace

VerificationReport commutator_growth_check(const OperatorLevels& levels, std::size_t witnesses,
                                           const SweepGrid& grid, int order, double cos_power, std::uint64_t seed,
                                           double stability) {
  require_levels(levels, "commutator_growth_check");
  if (witnesses == 0) throw std::invalid_argument("commutator_growth_check: empty witness sample");
  grid.validate();
  for (double r : grid.moduli)
    if (r > 1.0) throw std::invalid_argument("commutator_growth_check: times must satisfy |z| <= 1");
  std::mt19937_64 rng(seed);
  std::vector<WitnessSpec> specs;
  for (std::size_t i = 0; i < witnesses; ++i) specs.push_back(draw_witness_spec(*levels.base->boundary, 1, rng));

  PlotTable table{"commutator_growth", {"nodes", "t", "theta", "max_ratio"}, {}};
  std::vector<double> pa, pb;
  const double ca = commutator_sweep(*levels.base, specs, grid, order, cos_power, pa, table);
  const double cb = commutator_sweep(*levels.refined, specs, grid.refined(), order, cos_power, pb, table);
  double worst_change = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) worst_change = std::max(worst_change, relative_change(pa[i], pb[i]));

  VerificationReport r;
  r.check = "commutator_growth";
  r.backend = to_string(levels.base->provenance);
  r.tolerance = stability;
  r.grid = grid.to_json();
  r.params = {{"witnesses", witnesses}, {"order", order}, {"cos_power", cos_power}, {"seed", seed}};
  r.measured = {{"c_prime", ca}, {"c_prime_refined", cb}, {"relative_change", relative_change(ca, cb)},
                {"worst_witness_change", worst_change}};
  r.pass = finite(ca) && finite(cb) && relative_change(ca, cb) < stability;
  r.inputs = level_inputs(levels) + "|" + r.params.dump() + "|" + r.grid.dump();
  r.tables.push_back(std::move(table));
  return r;
}

namespace {

double derivative_sweep(const DtnOperator& op, const SweepGrid& grid, int k, int l, int d, PlotTable& table) {
  const std::vector<NodeIndex> idx = subsample(*op.boundary, grid.pair_stride);
  const Eigen::MatrixXd D = distance_matrix(*op.boundary, idx, DistanceKind::euclidean);
  const KernelOptions opts{KernelEvaluation::automatic, k, l};
  double sup = 0.0;
  for (double theta : grid.angles)
    for (double r : grid.moduli) {
      const ComplexTime z = time_at(r, theta);
      const KernelMatrix K = kernel_matrix(op, z, opts);
      const double w = std::pow(std::cos(theta), 4.0 * d * (d + 1) + k + l) * std::pow(r, d - 1 + k + l) *
                       std::exp(-2.0 * r);
      double s = 0.0;
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
          s = std::max(s, std::abs(K.values(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]))) *
                              std::pow(1.0 + D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / r, d) * w);
      table.rows.push_back({static_cast<double>(op.boundary->nodes_per_component), r, theta, s});
      sup = std::max(sup, s);
    }
  return sup;
}

}  // namespace

VerificationReport derivative_bound_check(const OperatorLevels& levels, const SweepGrid& grid, int k, int l,
                                          double stability, int d) {
  require_levels(levels, "derivative_bound_check");
  grid.validate();
  if (k < 0 || l < 0 || k + l > 2) throw std::invalid_argument("derivative_bound_check: need k + ℓ <= 2");
  PlotTable table{"derivative_bound", {"nodes", "t", "theta", "sup_ratio"}, {}};
  const double a = derivative_sweep(*levels.base, grid, k, l, d, table);
  const double b = derivative_sweep(*levels.refined, grid.refined(), k, l, d, table);
  VerificationReport r;
  r.check = "derivative_bound";
  r.backend = to_string(levels.base->provenance);
  r.tolerance = stability;
  r.grid = grid.to_json();
  r.params = {{"k", k}, {"l", l}, {"d", d}};
  r.measured = {{"sup_ratio", a}, {"sup_ratio_refined", b}, {"relative_change", relative_change(a, b)}};
  r.pass = finite(a) && finite(b) && relative_change(a, b) < stability;
  r.inputs = level_inputs(levels) + "|" + r.params.dump() + "|" + r.grid.dump();
  r.tables.push_back(std::move(table));
  return r;
}

VerificationReport convolution_check(const BoundarySpace& b, const std::vector<double>& times, std::size_t row_stride,
                                     double uniformity, int d) {
  if (times.empty()) throw std::invalid_argument("convolution_check: no times");
  const Eigen::Index n = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd E(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) E(a, c) = b.euclidean(static_cast<NodeIndex>(a), static_cast<NodeIndex>(c));
  const std::vector<NodeIndex> rows = subsample(b, row_stride);
  PlotTable table{"convolution", {"t", "c"}, {}};
  std::vector<double> cs;
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("convolution_check: times must be positive");
    const double pre = std::pow(std::min(t, 1.0), -(d - 1));
    const Eigen::MatrixXd P = pre * (1.0 + E.array() / t).pow(-d).matrix();
    Eigen::MatrixXd Psub(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) Psub.row(static_cast<Eigen::Index>(i)) = P.row(static_cast<Eigen::Index>(rows[i]));
    const Eigen::MatrixXd I = (Psub * b.weights.asDiagonal()) * P;
    double c = 0.0;
    for (Eigen::Index i = 0; i < I.rows(); ++i)
      for (Eigen::Index y = 0; y < n; ++y) c = std::max(c, I(i, y) / Psub(i, y));
    cs.push_back(c);
    table.rows.push_back({t, c});
  }
  const double cmax = *std::max_element(cs.begin(), cs.end());
  const double cmin = *std::min_element(cs.begin(), cs.end());
  VerificationReport r;
  r.check = "convolution";
  r.backend = "quadrature";
  r.tolerance = uniformity;
  r.params = {{"times", times}, {"row_stride", row_stride}, {"d", d}};
  r.measured = {{"c_max", cmax}, {"c_min", cmin}, {"variation", cmax / cmin}, {"c", cs}};
  r.pass = finite(cmax) && cmin > 0.0 && cmax / cmin < uniformity;
  std::ostringstream os;
  os << b.domain.describe() << "|n=" << b.nodes_per_component << "|" << r.params.dump();
  r.inputs = os.str();
  r.tables.push_back(std::move(table));
  return r;
}

namespace {

std::map<std::string, double> sector_sweep(const DtnOperator& op, const std::vector<double>& angles,
                                           const std::vector<double>& times, PlotTable& table) {
  std::map<std::string, double> out;
  const KernelOptions eig{KernelEvaluation::eigenpairs};
  for (double theta : angles) {
    double sup = 0.0;
    for (double r : times) {
      const KernelMatrix K = kernel_matrix(op, time_at(r, theta), eig);
      const double norm = (op.weights().transpose() * K.values.cwiseAbs()).maxCoeff();
      sup = std::max(sup, norm);
      table.rows.push_back({static_cast<double>(op.boundary->nodes_per_component), r, theta, norm});
    }
    out[angle_key(theta)] = sup;
  }
  return out;
}

}  // namespace

VerificationReport sector_holomorphy_sweep(const OperatorLevels& levels, const std::vector<double>& angles,
                                           const std::vector<double>& times, double stability) {
  require_levels(levels, "sector_holomorphy_sweep");
  if (angles.empty() || times.empty()) throw std::invalid_argument("sector_holomorphy_sweep: empty sweep");
  for (double a : angles) check_angle(a, "sector_holomorphy_sweep");
  PlotTable table{"sector_holomorphy", {"nodes", "t", "theta", "l1_norm"}, {}};
  const auto a = sector_sweep(*levels.base, angles, times, table);
  const auto b = sector_sweep(*levels.refined, angles, times, table);
  VerificationReport r;
  r.check = "sector_holomorphy";
  r.backend = to_string(levels.base->provenance);
  r.tolerance = stability;
  r.params = {{"angles", angles}, {"times", times}};
  bool ok = true;
  json rays = json::object();
  double fitted_power = 0.0;
  const double ref = a.count(angle_key(0.0)) ? a.at(angle_key(0.0)) : std::numeric_limits<double>::quiet_NaN();
  for (double theta : angles) {
    const std::string key = angle_key(theta);
    const double change = relative_change(a.at(key), b.at(key));
    ok = ok && finite(a.at(key)) && finite(b.at(key)) && change < stability;
    rays[key] = {{"sup_l1_norm", a.at(key)}, {"sup_l1_norm_refined", b.at(key)}, {"relative_change", change}};
    if (theta != 0.0 && std::isfinite(ref) && a.at(key) > ref)
      fitted_power = std::max(fitted_power, std::log(a.at(key) / ref) / -std::log(std::cos(theta)));
  }
  r.measured = {{"rays", rays}, {"fitted_cos_power", fitted_power}};
  r.pass = ok;
  r.inputs = level_inputs(levels) + "|" + r.params.dump();
  r.tables.push_back(std::move(table));
  return r;
}

VerificationReport subordination_check(const DtnOperator& op, const std::vector<double>& values,
                                       const std::vector<double>& times, double tolerance, std::size_t eigenvectors) {
  VerificationReport r;
  r.check = "subordination";
  r.backend = to_string(op.provenance);
  r.tolerance = tolerance;
  r.params = {{"values", values}, {"times", times}, {"eigenvectors", eigenvectors}};
  double scalar_err = 0.0, op_err = 0.0;
  for (double a : values)
    for (double t : times) scalar_err = std::max(scalar_err, std::abs(subordinated_exponential(t, a).value - std::exp(-t * a)));
  const std::size_t count = std::min(eigenvectors, op.rank());
  for (double t : times)
    for (std::size_t k = 0; k < count; ++k) {
      const Eigen::VectorXcd phi = op.eigenvectors.col(static_cast<Eigen::Index>(k)).cast<Complex>();
      const Eigen::VectorXcd via = subordinate(op, 1, t, phi).value;
      const Eigen::VectorXcd direct = power_semigroup(op, 1, t, phi);
      op_err = std::max(op_err, (via - direct).cwiseAbs().maxCoeff());
    }
  r.measured = {{"scalar_max_error", scalar_err}, {"operator_max_error", op_err}, {"c_0", subordination_moment(0.0)}};
  r.pass = scalar_err <= tolerance && op_err <= tolerance;
  r.inputs = describe_operator(op) + "|" + r.params.dump();
  return r;
}

VerificationReport duhamel_check(int size, int max_order, int nodes, std::uint64_t seed,
                                 const std::vector<double>& tolerances) {
  if (static_cast<int>(tolerances.size()) < max_order) throw std::invalid_argument("duhamel_check: tolerance per order");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd A(size, size), B = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) A(i, j) = normal(rng);
  A = (0.5 * (A + A.transpose())).eval();
  for (int i = 0; i < size; ++i) B(i, i) = normal(rng);
  VerificationReport r;
  r.check = "duhamel";
  r.backend = "matrix";
  r.tolerance = tolerances.front();
  r.params = {{"size", size}, {"max_order", max_order}, {"nodes", nodes}, {"seed", seed}, {"tolerances", tolerances}};
  bool ok = true;
  json per = json::array();
  for (int n = 1; n <= max_order; ++n) {
    const DuhamelResult d = duhamel_residual(A, B, 1.0, n, nodes);
    ok = ok && d.residual <= tolerances[static_cast<std::size_t>(n - 1)];
    per.push_back({{"order", n}, {"residual", d.residual}, {"direct_norm", d.direct_norm}});
  }
  const Eigen::MatrixXd Ad = A.diagonal().asDiagonal();
  const double commuting = duhamel_residual(Ad, B, 1.0, 1, nodes).residual;
  ok = ok && commuting == 0.0;
  r.measured = {{"orders", per}, {"commuting_residual", commuting}};
  r.pass = ok;
  r.inputs = r.params.dump();
  return r;
}

VerificationReport metric_check(const BoundarySpace& b, std::size_t oracle_samples, std::uint64_t seed,
                                double gap_tolerance) {
  const Eigen::Index n = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) R(x, y) = rho_distance(b, static_cast<NodeIndex>(x), static_cast<NodeIndex>(y));
  const double eps = 1e-12 * b.D;
  bool symmetric = (R - R.transpose()).cwiseAbs().maxCoeff() == 0.0;
  bool identity = true, geodesic = true, bounded = R.maxCoeff() <= 3.0 * b.D, cross = true;
  double triangle_violation = 0.0;
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) {
      if ((x == y) != (R(x, y) == 0.0)) identity = false;
      const bool same = b.component_id[static_cast<std::size_t>(x)] == b.component_id[static_cast<std::size_t>(y)];
      if (same && R(x, y) != geodesic_distance(b, static_cast<NodeIndex>(x), static_cast<NodeIndex>(y))) geodesic = false;
      if (!same && R(x, y) < 1.0) cross = false;
      for (Eigen::Index w = 0; w < n; ++w) triangle_violation = std::max(triangle_violation, R(x, y) - R(x, w) - R(w, y));
    }
  VerificationReport r;
  r.check = "metric";
  r.backend = "boundary";
  r.tolerance = gap_tolerance;
  r.params = {{"oracle_samples", oracle_samples}, {"seed", seed}};
  r.measured = {{"symmetric", symmetric},
                {"identity_of_indiscernibles", identity},
                {"triangle_max_violation", triangle_violation},
                {"max_rho_over_D", R.maxCoeff() / b.D},
                {"same_component_is_geodesic", geodesic},
                {"cross_component_at_least_one", cross},
                {"equivalence_constant", metric_equivalence_constant(b)},
                {"D", b.D}};
  bool ok = symmetric && identity && geodesic && bounded && cross && triangle_violation <= eps;
  if (b.component_count() > 1) {
    const NodeIndex x = b.anchors[0], y = b.anchors[1];
    const double rho = R(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    const double coarse = rho_oracle_sample(b, x, y, std::max<std::size_t>(oracle_samples / 10, 1), 1, seed);
    const double fine = rho_oracle_sample(b, x, y, oracle_samples, 1, seed);
    const double gap_c = (rho - coarse) / rho, gap_f = (rho - fine) / rho;
    r.measured["oracle_gap_coarse"] = gap_c;
    r.measured["oracle_gap"] = gap_f;
    ok = ok && gap_f >= 0.0 && gap_f <= gap_c && gap_f < gap_tolerance;
  }
  r.pass = ok;
  std::ostringstream os;
  os << b.domain.describe() << "|n=" << b.nodes_per_component << "|" << r.params.dump();
  r.inputs = os.str();
  return r;
}

}  // namespace dtn
