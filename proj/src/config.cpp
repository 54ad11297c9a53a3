#include "wavecascade/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wavecascade/diagnostics.hpp"
#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Ctx {
  const std::string& key;
  const std::string& value;
  int line;

  [[noreturn]] void fail(const std::string& reason) const { throw ConfigError(key, line, reason); }

  double real() const {
    if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || std::isnan(v)) {
      fail("expected a number, got '" + value + "'");
    }
    return v;
  }
  double positive() const {
    const double v = real();
    if (!(v > 0.0) || !std::isfinite(v)) fail("must be a positive finite number");
    return v;
  }
  double nonnegative() const {
    const double v = real();
    if (!(v >= 0.0) || !std::isfinite(v)) fail("must be a nonnegative finite number");
    return v;
  }
  long long integer() const {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      fail("expected an integer, got '" + value + "'");
    }
    return v;
  }
  std::size_t count(long long min) const {
    const long long v = integer();
    if (v < min) fail("must be an integer >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }
  std::vector<std::string> items() const {
    std::vector<std::string> out;
    if (trim(value).empty() || value == "auto" || value == "none") return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail("empty list item");
      out.push_back(item);
    }
    return out;
  }
  std::vector<double> reals(bool must_be_positive) const {
    std::vector<double> out;
    for (const auto& item : items()) {
      const Ctx sub{key, item, line};
      out.push_back(must_be_positive ? sub.positive() : sub.nonnegative());
    }
    return out;
  }
  std::string choice(std::initializer_list<const char*> options) const {
    for (const char* o : options) {
      if (value == o) return value;
    }
    std::string list;
    for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    fail("must be one of " + list + ", got '" + value + "'");
  }
};

using Setter = std::function<void(RunConfig&, const Ctx&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dispersion.kind",
       [](RunConfig& c, const Ctx& x) { c.dispersion_kind = x.choice({"power_law", "mixed_power"}); }},
      {"dispersion.alpha",
       [](RunConfig& c, const Ctx& x) {
         const double a = x.real();
         if (!(a > 1.0 && a <= 2.0)) {
           x.fail("alpha must lie in (1, 2]; exponents outside this range are not admissible");
         }
         c.alpha = a;
       }},
      {"dispersion.beta",
       [](RunConfig& c, const Ctx& x) {
         const double b = x.real();
         if (!(b > 1.0 && b <= 2.0)) x.fail("beta must lie in (1, 2]");
         c.beta = b;
       }},
      {"dispersion.constants.c_omega_lower",
       [](RunConfig& c, const Ctx& x) { c.c_omega_lower = x.positive(); }},
      {"dispersion.constants.c_omega_upper",
       [](RunConfig& c, const Ctx& x) { c.c_omega_upper = x.positive(); }},
      {"dispersion.constants.c_mho", [](RunConfig& c, const Ctx& x) { c.c_mho = x.positive(); }},
      {"dispersion.constants.iota",
       [](RunConfig& c, const Ctx& x) {
         const double v = x.real();
         if (!(v >= 0.0 && v <= 1.0)) x.fail("iota must lie in [0, 1]");
         c.iota = v;
       }},
      {"dispersion.constants.alpha_prime",
       [](RunConfig& c, const Ctx& x) {
         const double v = x.real();
         if (!(v > 1.0 && v <= 2.0)) x.fail("alpha_prime must lie in (1, 2]");
         c.alpha_prime = v;
       }},
      {"grid.n_nodes", [](RunConfig& c, const Ctx& x) { c.n_nodes = x.count(2); }},
      {"grid.omega_max", [](RunConfig& c, const Ctx& x) { c.omega_max = x.positive(); }},
      {"kernel.c_q", [](RunConfig& c, const Ctx& x) { c.c_q = x.positive(); }},
      {"kernel.cutoff",
       [](RunConfig& c, const Ctx& x) {
         const double v = x.real();
         if (!(v > 1.0)) x.fail("cut-off n must exceed 1 (or be inf)");
         c.cutoff = v;
       }},
      {"kernel.truncation",
       [](RunConfig& c, const Ctx& x) {
         c.truncation = x.choice({"closed", "resonant"}) == "closed" ? Truncation::kClosed
                                                                     : Truncation::kResonant;
       }},
      {"kernel.memory_budget_mb",
       [](RunConfig& c, const Ctx& x) { c.memory_budget_mb = x.count(1); }},
      {"kernel.table_cache", [](RunConfig& c, const Ctx& x) { c.table_cache = x.value; }},
      {"kernel.oracle.tail_cut",
       [](RunConfig& c, const Ctx& x) {
         const double v = x.real();
         if (!(v >= 100.0) || !std::isfinite(v)) x.fail("tail_cut must be >= 100");
         c.oracle_tail_cut = v;
       }},
      {"kernel.oracle.tol", [](RunConfig& c, const Ctx& x) { c.oracle_tol = x.positive(); }},
      {"kernel.oracle.samples", [](RunConfig& c, const Ctx& x) { c.oracle_samples = x.count(1); }},
      {"initial.preset",
       [](RunConfig& c, const Ctx& x) {
         c.initial_preset = x.choice({"gaussian_bump", "ring", "file"});
       }},
      {"initial.center", [](RunConfig& c, const Ctx& x) { c.initial_center = x.nonnegative(); }},
      {"initial.width", [](RunConfig& c, const Ctx& x) { c.initial_width = x.positive(); }},
      {"initial.amplitude",
       [](RunConfig& c, const Ctx& x) { c.initial_amplitude = x.nonnegative(); }},
      {"initial.ring_radius",
       [](RunConfig& c, const Ctx& x) { c.initial_ring_radius = x.nonnegative(); }},
      {"initial.file", [](RunConfig& c, const Ctx& x) { c.initial_file = x.value; }},
      {"integrator.scheme",
       [](RunConfig& c, const Ctx& x) {
         c.scheme = x.choice({"rk4", "euler"}) == "rk4" ? Scheme::kRk4 : Scheme::kEuler;
       }},
      {"integrator.dt0", [](RunConfig& c, const Ctx& x) { c.dt0 = x.positive(); }},
      {"integrator.dt_max",
       [](RunConfig& c, const Ctx& x) {
         const double v = x.real();
         if (!(v > 0.0)) x.fail("must be positive (or inf)");
         c.dt_max = v;
       }},
      {"integrator.safety", [](RunConfig& c, const Ctx& x) { c.safety = x.positive(); }},
      {"integrator.t_end", [](RunConfig& c, const Ctx& x) { c.t_end = x.nonnegative(); }},
      {"integrator.output_every",
       [](RunConfig& c, const Ctx& x) { c.output_every = x.count(1); }},
      {"integrator.floor", [](RunConfig& c, const Ctx& x) { c.floor_rel = x.nonnegative(); }},
      {"integrator.chunks",
       [](RunConfig& c, const Ctx& x) { c.chunks = static_cast<int>(x.count(1)); }},
      {"integrator.max_steps", [](RunConfig& c, const Ctx& x) { c.max_steps = x.count(1); }},
      {"diagnostics.band_radii",
       [](RunConfig& c, const Ctx& x) { c.band_radii = x.reals(true); }},
      {"diagnostics.deltas", [](RunConfig& c, const Ctx& x) { c.deltas = x.reals(true); }},
      {"diagnostics.test_functions",
       [](RunConfig& c, const Ctx& x) {
         auto ids = x.items();
         for (const auto& id : ids) {
           try {
             test_functions::parse(id);
           } catch (const ContractError& e) {
             x.fail(e.what());
           }
         }
         c.test_functions = std::move(ids);
       }},
      {"diagnostics.mass_thresholds",
       [](RunConfig& c, const Ctx& x) { c.mass_thresholds = x.reals(false); }},
      {"diagnostics.transient_fraction",
       [](RunConfig& c, const Ctx& x) {
         const double v = x.real();
         if (!(v >= 0.0 && v < 1.0)) x.fail("must lie in [0, 1)");
         c.transient_fraction = v;
       }},
      {"geometry.cap_configurations",
       [](RunConfig& c, const Ctx& x) { c.cap_configurations = x.count(2); }},
      {"geometry.cap_points", [](RunConfig& c, const Ctx& x) { c.cap_points = x.count(1); }},
      {"geometry.vcone_samples",
       [](RunConfig& c, const Ctx& x) { c.vcone_samples = x.count(2); }},
      {"geometry.manifold_pairs",
       [](RunConfig& c, const Ctx& x) { c.manifold_pairs = x.count(1); }},
      {"geometry.manifold_samples",
       [](RunConfig& c, const Ctx& x) { c.manifold_samples = x.count(2); }},
      {"geometry.manifold_eps", [](RunConfig& c, const Ctx& x) { c.manifold_eps = x.positive(); }},
      {"rng.seed",
       [](RunConfig& c, const Ctx& x) {
         std::uint64_t v = 0;
         const auto [ptr, ec] =
             std::from_chars(x.value.data(), x.value.data() + x.value.size(), v);
         if (ec != std::errc() || ptr != x.value.data() + x.value.size()) {
           x.fail("expected an unsigned 64-bit integer");
         }
         c.seed = v;
       }},
      {"threads", [](RunConfig& c, const Ctx& x) { c.threads = static_cast<int>(x.count(0)); }},
  };
  return table;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double v : xs) s += (s.empty() ? "" : ", ") + fmt(v);
  return s.empty() ? "auto" : s;
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& v : xs) s += (s.empty() ? "" : ", ") + v;
  return s.empty() ? "none" : s;
}

}  // namespace

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   int line) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError(key, line, "unknown key");
  if (value.empty()) throw ConfigError(key, line, "missing value");
  it->second(config, Ctx{key, value, line});
}

void validate(const RunConfig& c) {
  if (c.dispersion_kind == "mixed_power" && c.beta < c.alpha) {
    throw ConfigError("dispersion.beta", 0, "mixed_power needs beta >= alpha");
  }
  if (c.initial_preset == "file" && c.initial_file.empty()) {
    throw ConfigError("initial.file", 0, "preset 'file' needs a file path");
  }
  if (c.n_nodes > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("grid.n_nodes", 0, "too many nodes");
  }
  try {
    make_dispersion(c);
  } catch (const DomainError& e) {
    throw ConfigError("dispersion", 0, e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("", line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("", line, "missing key");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError(key, line, "duplicate key (first set on line " +
                                       std::to_string(prev->second) + ")");
    }
    seen[key] = line;
    apply_setting(config, key, value, line);
  }
  validate(config);
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string RunConfig::to_text() const {
  std::ostringstream o;
  const auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) o << key << " = " << fmt(*v) << '\n';
  };
  o << "dispersion.kind = " << dispersion_kind << '\n'
    << "dispersion.alpha = " << fmt(alpha) << '\n';
  if (dispersion_kind == "mixed_power") o << "dispersion.beta = " << fmt(beta) << '\n';
  opt("dispersion.constants.c_omega_lower", c_omega_lower);
  opt("dispersion.constants.c_omega_upper", c_omega_upper);
  opt("dispersion.constants.c_mho", c_mho);
  opt("dispersion.constants.iota", iota);
  opt("dispersion.constants.alpha_prime", alpha_prime);
  o << "grid.n_nodes = " << n_nodes << '\n'
    << "grid.omega_max = " << fmt(omega_max) << '\n'
    << "kernel.c_q = " << fmt(c_q) << '\n'
    << "kernel.cutoff = " << fmt(cutoff) << '\n'
    << "kernel.truncation = " << (truncation == Truncation::kClosed ? "closed" : "resonant")
    << '\n'
    << "kernel.memory_budget_mb = " << memory_budget_mb << '\n';
  if (!table_cache.empty()) o << "kernel.table_cache = " << table_cache << '\n';
  o << "kernel.oracle.tail_cut = " << fmt(oracle_tail_cut) << '\n'
    << "kernel.oracle.tol = " << fmt(oracle_tol) << '\n'
    << "kernel.oracle.samples = " << oracle_samples << '\n'
    << "initial.preset = " << initial_preset << '\n'
    << "initial.center = " << fmt(initial_center) << '\n'
    << "initial.width = " << fmt(initial_width) << '\n'
    << "initial.amplitude = " << fmt(initial_amplitude) << '\n'
    << "initial.ring_radius = " << fmt(initial_ring_radius) << '\n';
  if (!initial_file.empty()) o << "initial.file = " << initial_file << '\n';
  o << "integrator.scheme = " << (scheme == Scheme::kRk4 ? "rk4" : "euler") << '\n'
    << "integrator.dt0 = " << fmt(dt0) << '\n'
    << "integrator.dt_max = " << fmt(dt_max) << '\n'
    << "integrator.safety = " << fmt(safety) << '\n'
    << "integrator.t_end = " << fmt(t_end) << '\n'
    << "integrator.output_every = " << output_every << '\n'
    << "integrator.floor = " << fmt(floor_rel) << '\n'
    << "integrator.chunks = " << chunks << '\n'
    << "integrator.max_steps = " << max_steps << '\n'
    << "diagnostics.band_radii = " << join(band_radii) << '\n'
    << "diagnostics.deltas = " << join(deltas) << '\n'
    << "diagnostics.test_functions = " << join(test_functions) << '\n'
    << "diagnostics.mass_thresholds = "
    << (mass_thresholds.empty() ? std::string("none") : join(mass_thresholds)) << '\n'
    << "diagnostics.transient_fraction = " << fmt(transient_fraction) << '\n'
    << "geometry.cap_configurations = " << cap_configurations << '\n'
    << "geometry.cap_points = " << cap_points << '\n'
    << "geometry.vcone_samples = " << vcone_samples << '\n'
    << "geometry.manifold_pairs = " << manifold_pairs << '\n'
    << "geometry.manifold_samples = " << manifold_samples << '\n'
    << "geometry.manifold_eps = " << fmt(manifold_eps) << '\n'
    << "rng.seed = " << seed << '\n'
    << "threads = " << threads << '\n';
  return o.str();
}

DispersionRelation make_dispersion(const RunConfig& c) {
  DispersionRelation base = c.dispersion_kind == "mixed_power"
                                ? DispersionRelation::mixed_power(c.alpha, c.beta)
                                : DispersionRelation::power_law(c.alpha);
  if (!c.c_omega_lower && !c.c_omega_upper && !c.c_mho && !c.iota && !c.alpha_prime) return base;
  GrowthConstants k = base.constants();
  if (c.c_omega_lower) k.c_omega_lower = *c.c_omega_lower;
  if (c.c_omega_upper) k.c_omega_upper = *c.c_omega_upper;
  if (c.c_mho) k.c_mho = *c.c_mho;
  if (c.iota) k.iota = *c.iota;
  if (c.alpha_prime) k.alpha_prime = *c.alpha_prime;
  return DispersionRelation::custom([base](double r) { return base.omega(r); },
                                    [base](double r) { return base.omega_prime(r); }, k,
                                    base.mho(0.0), base.name());
}

KernelBuildOptions make_build_options(const RunConfig& c) {
  KernelBuildOptions o;
  o.truncation = c.truncation;
  o.memory_budget_bytes = c.memory_budget_mb << 20;
  return o;
}

EvolveOptions make_evolve_options(const RunConfig& c) {
  EvolveOptions o;
  o.dt0 = c.dt0;
  o.dt_max = c.dt_max;
  o.safety = c.safety;
  o.floor_rel = c.floor_rel;
  o.output_every = c.output_every;
  o.max_steps = c.max_steps;
  o.step.scheme = c.scheme;
  o.step.parallel.chunks = c.chunks;
  o.step.parallel.threads = c.threads;
  return o;
}

}  // namespace wavecascade
