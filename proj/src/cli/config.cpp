#include "dtnlab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace dtn {

std::string to_string(Backend b) { return b == Backend::exact ? "exact" : "fem"; }

PotentialField PotentialSpec::build() const {
  switch (kind) {
    case PotentialKind::zero: return PotentialField::zero();
    case PotentialKind::constant: return PotentialField::constant(value);
    case PotentialKind::radial: return PotentialField::radial(samples, r_max);
    case PotentialKind::general: break;
  }
  throw std::invalid_argument("PotentialSpec: general potentials are available through the library API only");
}

namespace {

[[noreturn]] void check_fail(const CheckSpec& c, const std::string& key, const std::string& msg) {
  std::ostringstream os;
  os << c.source << ":" << c.line << ":1: checks." << c.name << "." << key << ": " << msg;
  throw ConfigError(os.str());
}

}  // namespace

double CheckSpec::option(const std::string& key, double fallback) const {
  const auto it = options.find(key);
  if (it == options.end()) return fallback;
  const std::string& t = it->second;
  if (t == "inf" || t == ".inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  check_fail(*this, key, "'" + t + "' is not a number");
}

std::string CheckSpec::text_option(const std::string& key, const std::string& fallback) const {
  const auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

void CheckSpec::expect_options(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : options)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      check_fail(*this, key, "unknown option for " + type + " (expected: " + (list.empty() ? "none" : list) + ")");
    }
}

const std::vector<std::string>& known_check_types() {
  static const std::vector<std::string> types = {
      "commutator_growth", "convolution", "coercivity",        "derivative_bound", "domination",
      "duhamel",           "lplq_slope",  "metric",            "poisson_sup_ratio", "sector_holomorphy",
      "spectrum",          "submarkov",   "subordination"};
  return types;
}

namespace {

struct Parser {
  std::string source;
  ExperimentConfig* cfg;

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) const {
    std::ostringstream os;
    const YAML::Mark m = node.Mark();
    os << source << ":" << (m.line >= 0 ? m.line + 1 : 0) << ":" << (m.column >= 0 ? m.column + 1 : 0) << ": "
       << field << ": " << msg;
    throw ConfigError(os.str());
  }

  void mark(const YAML::Node& node, const std::string& field) const {
    cfg->lines[field] = node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
  }

  void check_keys(const YAML::Node& node, const std::string& field, const std::set<std::string>& allowed) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(kv.first, field.empty() ? key : field + "." + key, "unknown key (expected one of: " + list + ")");
      }
    }
  }

  double number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    mark(node, field);
    const std::string text = node.Scalar();
    if (text == "inf" || text == ".inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      fail(node, field, "'" + text + "' is not a number");
    }
  }

  std::size_t count(const YAML::Node& node, const std::string& field) const {
    const double v = number(node, field);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e12) fail(node, field, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    mark(node, field);
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence()) fail(node, field, "expected a list of numbers");
    mark(node, field);
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  DomainSpec domain(const YAML::Node& node) const {
    check_keys(node, "domain", {"kind", "r_inner", "r_outer", "profile"});
    mark(node, "domain");
    DomainSpec d;
    if (!node["kind"]) fail(node, "domain.kind", "missing (unit-disk, annulus or star-shaped)");
    const std::string kind = text(node["kind"], "domain.kind");
    if (kind == "unit-disk") {
      d.kind = DomainKind::unit_disk;
    } else if (kind == "annulus") {
      d.kind = DomainKind::annulus;
      if (!node["r_inner"] || !node["r_outer"]) fail(node, "domain", "annulus needs r_inner and r_outer");
      d.r_inner = number(node["r_inner"], "domain.r_inner");
      d.r_outer = number(node["r_outer"], "domain.r_outer");
    } else if (kind == "star-shaped") {
      d.kind = DomainKind::star_shaped;
      const YAML::Node p = node["profile"];
      if (!p) fail(node, "domain.profile", "star-shaped domains need a profile");
      check_keys(p, "domain.profile", {"mean", "cos", "sin"});
      if (p["mean"]) d.profile.mean = number(p["mean"], "domain.profile.mean");
      if (p["cos"]) d.profile.cos_coeffs = numbers(p["cos"], "domain.profile.cos");
      if (p["sin"]) d.profile.sin_coeffs = numbers(p["sin"], "domain.profile.sin");
    } else {
      fail(node["kind"], "domain.kind", "unknown kind '" + kind + "' (unit-disk, annulus, star-shaped)");
    }
    try {
      (void)make_domain(d);
    } catch (const std::invalid_argument& e) {
      fail(node, "domain", e.what());
    }
    return d;
  }

  PotentialSpec potential(const YAML::Node& node, const std::string& field) const {
    check_keys(node, field, {"kind", "value", "samples", "r_max"});
    mark(node, field);
    PotentialSpec p;
    const std::string kind = node["kind"] ? text(node["kind"], field + ".kind") : "zero";
    if (kind == "zero") {
      p.kind = PotentialKind::zero;
    } else if (kind == "constant") {
      p.kind = PotentialKind::constant;
      if (!node["value"]) fail(node, field + ".value", "constant potential needs a value");
      p.value = number(node["value"], field + ".value");
      if (!(p.value >= 0.0) || !std::isfinite(p.value)) fail(node["value"], field + ".value", "must be finite and >= 0");
    } else if (kind == "radial") {
      p.kind = PotentialKind::radial;
      if (!node["samples"]) fail(node, field + ".samples", "radial potential needs samples");
      p.samples = numbers(node["samples"], field + ".samples");
      if (node["r_max"]) p.r_max = number(node["r_max"], field + ".r_max");
      if (p.samples.size() < 2) fail(node["samples"], field + ".samples", "need at least two samples");
      for (double v : p.samples)
        if (!(v >= 0.0) || !std::isfinite(v)) fail(node["samples"], field + ".samples", "samples must be finite and >= 0");
      if (!(p.r_max > 0.0)) fail(node, field + ".r_max", "must be > 0");
    } else {
      fail(node["kind"], field + ".kind", "unknown kind '" + kind + "' (zero, constant, radial)");
    }
    return p;
  }

  TimeGridSpec grid(const YAML::Node& node, const std::string& field) const {
    check_keys(node, field, {"moduli", "min", "max", "per_decade", "angles", "pair_stride"});
    mark(node, field);
    TimeGridSpec g;
    if (node["moduli"]) {
      g.moduli = numbers(node["moduli"], field + ".moduli");
    } else if (node["min"] && node["max"]) {
      const double lo = number(node["min"], field + ".min");
      const double hi = number(node["max"], field + ".max");
      const double per = node["per_decade"] ? number(node["per_decade"], field + ".per_decade") : 6.0;
      if (!(lo > 0.0) || !(hi >= lo)) fail(node, field, "need 0 < min <= max");
      if (!(per >= 1.0)) fail(node, field + ".per_decade", "must be >= 1");
      const int steps = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per - 1e-9)));
      for (int i = 0; i <= steps; ++i) g.moduli.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / steps));
    } else {
      fail(node, field, "give either moduli: [...] or min/max/per_decade");
    }
    if (node["angles"]) g.angles = numbers(node["angles"], field + ".angles");
    if (node["pair_stride"]) g.pair_stride = std::max<std::size_t>(1, count(node["pair_stride"], field + ".pair_stride"));
    for (double r : g.moduli)
      if (!(r > 0.0) || !std::isfinite(r)) fail(node, field + ".moduli", "moduli must be positive and finite");
    for (double a : g.angles)
      if (!(std::cos(a) >= 0.01) || !(std::abs(a) < std::numbers::pi / 2))
        fail(node, field + ".angles", "angle " + std::to_string(a) + " is outside the sector |θ| < π/2 (cos θ >= 0.01)");
    return g;
  }

  CheckSpec check(const YAML::Node& node, std::size_t index) const {
    const std::string field = "checks[" + std::to_string(index) + "]";
    CheckSpec c;
    c.source = source;
    c.line = node.Mark().line + 1;
    if (node.IsScalar()) {
      c.type = text(node, field);
    } else {
      if (!node.IsMap()) fail(node, field, "expected a check name or mapping");
      if (!node["type"]) fail(node, field + ".type", "missing");
      c.type = text(node["type"], field + ".type");
      for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        const std::string f = field + "." + key;
        if (key == "type") continue;
        if (key == "name") c.name = text(kv.second, f);
        else if (key == "tolerance") c.tolerance = number(kv.second, f);
        else if (key == "times") c.times = numbers(kv.second, f);
        else if (key == "grid") c.grid = grid(kv.second, f);
        else if (key == "compare_potential") c.compare_potential = potential(kv.second, f);
        else if (kv.second.IsSequence()) {
          std::string joined;
          for (double v : numbers(kv.second, f)) {
            std::ostringstream os;
            os.precision(17);
            os << v;
            joined += (joined.empty() ? "" : ",") + os.str();
          }
          c.options[key] = joined;
        } else c.options[key] = text(kv.second, f);
      }
    }
    const auto& types = known_check_types();
    if (std::find(types.begin(), types.end(), c.type) == types.end()) {
      std::string list;
      for (const auto& t : types) list += (list.empty() ? "" : ", ") + t;
      fail(node, field + ".type", "unknown check '" + c.type + "' (known: " + list + ")");
    }
    if (c.name.empty()) c.name = c.type;
    if (c.tolerance && !(*c.tolerance > 0.0)) fail(node["tolerance"], field + ".tolerance", "tolerance must be > 0");
    return c;
  }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  cfg.source = source;
  Parser p{source, &cfg};
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": syntax: " << e.msg;
    throw ConfigError(os.str());
  }
  if (!root || !root.IsMap()) throw ConfigError(source + ":1:1: config: expected a mapping at top level");
  p.check_keys(root, "", {"schema", "domain", "potential", "backend", "resolutions", "modes", "times", "checks",
                          "kernel_slices", "output", "cache", "seed"});
  if (!root["schema"]) p.fail(root, "schema", "missing (current schema is " + std::to_string(kConfigSchema) + ")");
  cfg.schema = static_cast<int>(p.count(root["schema"], "schema"));
  if (cfg.schema != kConfigSchema)
    p.fail(root["schema"], "schema", "unsupported schema " + std::to_string(cfg.schema) + " (expected " +
                                         std::to_string(kConfigSchema) + ")");
  if (!root["domain"]) p.fail(root, "domain", "missing");
  cfg.domain = p.domain(root["domain"]);
  if (root["potential"]) cfg.potential = p.potential(root["potential"], "potential");
  if (root["backend"]) {
    const std::string b = p.text(root["backend"], "backend");
    if (b == "exact") cfg.backend = Backend::exact;
    else if (b == "fem") cfg.backend = Backend::fem;
    else p.fail(root["backend"], "backend", "unknown backend '" + b + "' (exact, fem)");
  }
  if (root["resolutions"]) {
    const YAML::Node r = root["resolutions"];
    if (!r.IsSequence() || r.size() == 0) p.fail(r, "resolutions", "expected a nonempty list of node counts");
    cfg.resolutions.clear();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string f = "resolutions[" + std::to_string(i) + "]";
      const std::size_t n = p.count(r[i], f);
      if (n < 16) p.fail(r[i], f, "at least 16 nodes per component");
      cfg.resolutions.push_back(n);
    }
    p.mark(r, "resolutions");
  }
  if (root["modes"]) cfg.modes = p.count(root["modes"], "modes");
  if (root["times"]) cfg.times = p.grid(root["times"], "times");
  else cfg.times.moduli = {0.1, 1.0, 10.0};
  if (!root["checks"] || !root["checks"].IsSequence()) p.fail(root, "checks", "expected a list of checks");
  p.mark(root["checks"], "checks");
  for (std::size_t i = 0; i < root["checks"].size(); ++i) cfg.checks.push_back(p.check(root["checks"][i], i));
  if (root["kernel_slices"]) {
    const YAML::Node ks = root["kernel_slices"];
    if (!ks.IsSequence()) p.fail(ks, "kernel_slices", "expected a list");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const std::string f = "kernel_slices[" + std::to_string(i) + "]";
      p.check_keys(ks[i], f, {"t", "theta", "stride", "distance"});
      KernelSliceSpec s;
      if (ks[i]["t"]) s.t = p.number(ks[i]["t"], f + ".t");
      if (ks[i]["theta"]) s.theta = p.number(ks[i]["theta"], f + ".theta");
      if (ks[i]["stride"]) s.stride = std::max<std::size_t>(1, p.count(ks[i]["stride"], f + ".stride"));
      if (ks[i]["distance"]) s.distance = p.text(ks[i]["distance"], f + ".distance");
      if (!(s.t > 0.0)) p.fail(ks[i], f + ".t", "must be > 0");
      if (!(std::cos(s.theta) >= 0.01)) p.fail(ks[i], f + ".theta", "outside the sector");
      if (s.distance != "euclidean" && s.distance != "rho") p.fail(ks[i], f + ".distance", "euclidean or rho");
      cfg.kernel_slices.push_back(s);
    }
  }
  if (root["output"]) cfg.output = p.text(root["output"], "output");
  if (root["cache"]) cfg.cache = p.text(root["cache"], "cache");
  if (root["seed"]) cfg.seed = static_cast<std::uint64_t>(p.count(root["seed"], "seed"));
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ConfigError(file.string() + ":0:0: config: cannot open file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), file.string());
}

void validate_config(const ExperimentConfig& c) {
  auto fail = [&](const std::string& field, const std::string& msg) {
    const auto it = c.lines.find(field);
    std::ostringstream os;
    os << c.source << ":" << (it == c.lines.end() ? 0 : it->second) << ":1: " << field << ": " << msg;
    throw ConfigError(os.str());
  };
  if (c.checks.empty()) fail("checks", "at least one check is required");
  if (c.backend == Backend::exact) {
    if (c.domain.kind == DomainKind::star_shaped)
      fail("backend", "the exact backend needs the unit disk or an annulus; use backend: fem");
    if (c.potential.kind != PotentialKind::zero && c.potential.kind != PotentialKind::constant)
      fail("backend", "the exact backend needs a zero or constant potential; use backend: fem");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const CheckSpec& k = c.checks[i];
    const std::string f = "checks[" + std::to_string(i) + "]";
    if (k.tolerance && !(*k.tolerance > 0.0)) fail(f + ".tolerance", "tolerance must be > 0");
    if (!names.insert(k.name).second) fail(f + ".name", "duplicate check name '" + k.name + "'");
    if (k.times)
      for (double t : *k.times)
        if (!(t > 0.0)) fail(f + ".times", "times must be > 0");
  }
}

}  // namespace dtn
