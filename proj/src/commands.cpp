#include "wavecascade/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavecascade/collision_kernel.hpp"
#include "wavecascade/errors.hpp"
#include "wavecascade/kernel_table.hpp"
#include "wavecascade/resonance_geometry.hpp"
#include "wavecascade/spectral_solver.hpp"

namespace wavecascade {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckRow row(std::string name, double value, double reference, double tolerance) {
  const double err = std::abs(value - reference);
  return {std::move(name), value, reference, err, tolerance, err <= tolerance};
}

bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

void print_checks(std::ostream& out, const std::vector<CheckRow>& rows) {
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(14)
      << "value" << std::setw(14) << "reference" << std::setw(12) << "error" << std::setw(12)
      << "tolerance" << "result\n";
  out << std::setprecision(6);
  for (const auto& r : rows) {
    out << std::setw(static_cast<int>(width)) << r.name << "  " << std::setw(14) << r.value
        << std::setw(14) << r.reference << std::setw(12) << r.error << std::setw(12)
        << r.tolerance << (r.pass ? "ok" : "FAILED") << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

std::vector<CheckRow> kernel_checks(const RunConfig& config) {
  std::vector<CheckRow> rows;
  constexpr double pi = std::numbers::pi;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> radius(0.1, 5.0);

  // Arbitrary quadruples: the oracle against the eight-term closed form, and
  // (pi/4) min only where that reduction holds.
  double worst = 0.0, worst_min = 0.0;
  std::size_t reducible = 0;
  for (std::size_t s = 0; s < config.oracle_samples; ++s) {
    const double a = radius(rng), b = radius(rng), c = radius(rng), d = radius(rng);
    const auto q = sine_integral_oracle(a, b, c, d, config.oracle_tail_cut);
    worst = std::max(worst, std::abs(q.value - eight_term_expansion(a, b, c, d)));
    if (min_identity_holds(a, b, c, d)) {
      ++reducible;
      worst_min = std::max(worst_min, std::abs(q.value - min_identity(a, b, c, d)));
    }
  }
  const std::string count = std::to_string(config.oracle_samples);
  rows.push_back({"sine integral vs eight-term form, " + count + " quadruples (max error)", worst,
                  0.0, worst, config.oracle_tol, worst <= config.oracle_tol});
  rows.push_back({"sine integral vs (pi/4) min, " + std::to_string(reducible) + " of " + count +
                      " with max+min <= middle sum (max error)",
                  worst_min, 0.0, worst_min, config.oracle_tol, worst_min <= config.oracle_tol});

  // Resonant quadruples of a convex dispersion always admit the reduction.
  const auto convex = DispersionRelation::power_law(1.5);
  std::uniform_real_distribution<double> omega(0.0, 4.0);
  double worst_res = 0.0;
  std::size_t outside = 0;
  for (std::size_t s = 0; s < config.oracle_samples; ++s) {
    const double w1 = omega(rng), w2 = omega(rng), w3 = omega(rng);
    const double w = w1 + w2 - w3;
    if (w <= 0.0) continue;
    const double a = convex.invert(w1), b = convex.invert(w2);
    const double c = convex.invert(w3), d = convex.invert(w);
    if (!min_identity_holds(a, b, c, d)) {
      ++outside;
      continue;
    }
    const auto q = sine_integral_oracle(a, b, c, d, config.oracle_tail_cut);
    worst_res = std::max(worst_res, std::abs(q.value - min_identity(a, b, c, d)));
  }
  rows.push_back(row("resonant quadruples outside the min reduction, alpha=1.5",
                     static_cast<double>(outside), 0.0, 0.0));
  rows.push_back({"resonant sine integral vs (pi/4) min, alpha=1.5 (max error)", worst_res, 0.0,
                  worst_res, config.oracle_tol, worst_res <= config.oracle_tol});

  double worst8 = 0.0;
  for (int s = 0; s < 10'000; ++s) {
    const double a = radius(rng), b = radius(rng), c = radius(rng), d = radius(rng);
    if (!min_identity_holds(a, b, c, d)) continue;
    const double closed = pi / 4.0 * std::min({a, b, c, d});
    worst8 = std::max(worst8, std::abs(eight_term_expansion(a, b, c, d) - closed));
    worst8 = std::max(worst8, std::abs(eight_term_expansion(d, c, a, b) - closed));
  }
  rows.push_back({"eight-term form vs (pi/4) min where it applies (max error)", worst8, 0.0,
                  worst8, 1e-12, worst8 <= 1e-12});
  rows.push_back(row("sine integral (0.7,2.1,1.3,0.9)",
                     sine_integral_oracle(0.7, 2.1, 1.3, 0.9, config.oracle_tail_cut).value,
                     pi / 10.0, config.oracle_tol));
  rows.push_back(row("sine integral (1,2,3,10)",
                     sine_integral_oracle(1, 2, 3, 10, config.oracle_tail_cut).value, 0.0,
                     config.oracle_tol));

  const auto equal = sine_integral_oracle(1, 1, 1, 1, config.oracle_tail_cut);
  rows.push_back(row("sine integral (1,1,1,1)", equal.value, pi / 4.0, config.oracle_tol));
  const auto zero = sine_integral_oracle(0, 1, 1, 1, config.oracle_tail_cut);
  rows.push_back(row("sine integral (0,1,1,1)", zero.value, 0.0, 1e-6));
  const auto mixed = sine_integral_oracle(0.5, 1.5, 0.8, 1.2, config.oracle_tail_cut);
  rows.push_back(row("sine integral (0.5,1.5,0.8,1.2)", mixed.value, pi / 8.0, config.oracle_tol));

  const auto quad = DispersionRelation::power_law(2.0);
  rows.push_back(row("cutoff kernel, alpha=2, w=w1=w2=1", cutoff_kernel(KernelWeights(), quad, 1, 1, 1),
                     0.5, 1e-15));
  rows.push_back(row("xi weight, alpha=2, all w=1", xi_weight(quad, 1, 1, 1, 1), 1.0 / 16.0, 1e-15));
  return rows;
}

std::vector<CheckRow> geometry_checks(const RunConfig& config) {
  std::vector<CheckRow> rows;
  std::uint64_t stream = config.seed;

  for (double q : {0.05, 0.1, 0.2}) {
    for (long long caps : {10LL, 44LL, 100LL}) {
      const double exact = cap_coverage_expectation(q, caps);
      const auto est = monte_carlo_cap_coverage(q, caps, config.cap_configurations,
                                                config.cap_points, stream++);
      // Binomial error of the exact coverage keeps 3 sigma meaningful when
      // every probe lands in a cap.
      const double n = static_cast<double>(config.cap_configurations * config.cap_points);
      const double sigma = std::max(est.sigma, std::sqrt(exact * (1.0 - exact) / n));
      std::ostringstream name;
      name << "cap coverage q=" << q << " N=" << caps << " (3 sigma)";
      rows.push_back(row(name.str(), est.mean, exact, 3.0 * sigma));
    }
  }
  const auto least = static_cast<double>(least_covering_caps(0.1));
  rows.push_back(row("least N with 0.9^N < 0.01", least, 44.0, 0.0));

  const std::pair<double, double> cones[] = {{1.0, 0.0}, {1.0, 0.5}, {1.0, 0.8}, {2.0, 0.5},
                                             {0.5, 0.1}};
  for (const auto& [big_r, rho] : cones) {
    const auto est = monte_carlo_vcone(big_r, rho, config.vcone_samples, stream++);
    std::ostringstream name;
    name << "vcone R=" << big_r << " rho=" << rho << " (3 sigma)";
    rows.push_back(row(name.str(), est.mean, vcone(big_r, rho), 3.0 * est.sigma));
  }

  rows.push_back(row("expanded radius (0.1, 1)", expanded_radius(0.1, 1.0).value, 1.16588, 1e-5));
  for (double r : {1.0 / 1000, 1.0 / 500, 1.0 / 100, 1.0 / 10}) {
    const auto e = expanded_radius(r, 1.0);
    std::ostringstream name;
    name << "expanded radius > R at r=" << r;
    rows.push_back({name.str(), e.value, 1.0, e.value - 1.0, 0.0, e.grows});
  }

  for (int k = 1; k <= 9; ++k) {
    const double alpha = 1.0 + 0.1 * k;
    const auto d = DispersionRelation::power_law(alpha);
    double worst = 0.0;
    bool inside = true, bracketed = true;
    double s_at_1 = 0.0;
    for (double big_r : {0.5, 1.0, 2.0}) {
      const auto root = digamma_root(d, big_r);
      worst = std::max(worst, root.residual);
      inside = inside && root.s0 > 1.0 && root.s0 < 2.0;
      bracketed = bracketed && root.f_lo < root.target && root.target < root.f_hi;
      if (big_r == 1.0) s_at_1 = root.s0;
    }
    std::ostringstream name;
    name << "spreading root alpha=" << alpha << " (s0 at R=1, max residual)";
    rows.push_back({name.str(), s_at_1, 0.0, worst, 1e-10, worst <= 1e-10 && inside && bracketed});
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const auto draw_pair = [&] {
    while (true) {
      const Vec3 k2(box(rng), box(rng), box(rng));
      const Vec3 k3(box(rng), box(rng), box(rng));
      if ((k2 + k3).norm() > 0.1) return std::pair{k2, k3};
    }
  };
  const std::vector<std::vector<double>> polys = {{1.0}, {0.0, 1.0}, {0.0, 0.0, 1.0},
                                                  {1.0, -1.0, 0.0, 0.5, 1.0}};
  const auto quad = DispersionRelation::power_law(2.0);
  double worst_sphere = 0.0;
  for (std::size_t p = 0; p < config.manifold_pairs; ++p) {
    const auto [k2, k3] = draw_pair();
    const ResonanceManifold m(quad, k2, k3);
    for (const auto& c : polys) {
      const auto f = [&c](double u) {
        double s = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) s = s * u + c[i];
        return s;
      };
      const double exact = sphere_polynomial_oracle(k2, k3, c);
      const double got = manifold_quadrature(m, f).value;
      worst_sphere = std::max(worst_sphere, std::abs(got - exact) / std::abs(exact));
    }
  }
  rows.push_back({"manifold quadrature vs sphere, alpha=2 (max rel error)", worst_sphere, 0.0,
                  worst_sphere, 1e-6, worst_sphere <= 1e-6});

  const auto d15 = DispersionRelation::power_law(1.5);
  double worst_mc = 0.0;
  for (std::size_t p = 0; p < config.manifold_pairs; ++p) {
    const auto [k2, k3] = draw_pair();
    const ResonanceManifold m(d15, k2, k3);
    for (const auto& f : std::vector<std::function<double(double)>>{
             [](double) { return 1.0; }, [](double u) { return 1.0 + u * u; }}) {
      const double got = manifold_quadrature(m, f).value;
      const auto mc = mollified_delta_estimate(m, f, config.manifold_eps, config.manifold_samples,
                                               stream++);
      worst_mc = std::max(worst_mc, std::abs(got - mc.mean) / std::abs(mc.mean));
    }
  }
  rows.push_back({"manifold quadrature vs mollified delta, alpha=1.5 (max rel error)", worst_mc,
                  0.0, worst_mc, 0.01, worst_mc <= 0.01});
  return rows;
}

void write_series_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records,
                      const std::vector<SpectrumState>* spectra, std::size_t n_nodes,
                      const DiagnosticsPlan& plan, bool header_only) {
  out << "time,mass,energy";
  for (double r : plan.band_radii) out << ",band_energy_R" << num(r);
  for (double d : plan.deltas) out << ",low_mass_d" << num(d);
  for (double w : plan.concentration_thresholds) out << ",mass_fraction_below_w" << num(w);
  for (const auto& tf : plan.test_functions) out << ",production_" << tf.id;
  if (spectra) {
    for (std::size_t i = 0; i < n_nodes; ++i) out << ",g_" << i;
  }
  out << '\n';
  if (header_only) return;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    out << num(r.time) << ',' << num(r.mass) << ',' << num(r.energy);
    for (const auto& [_, v] : r.band_energy) out << ',' << num(v);
    for (const auto& [_, v] : r.low_mass) out << ',' << num(v);
    for (const auto& [_, v] : r.mass_fraction_below) out << ',' << num(v);
    for (const auto& [_, v] : r.convex_production) out << ',' << num(v);
    if (spectra) {
      for (double g : (*spectra)[k].g) out << ',' << num(g);
    }
    out << '\n';
  }
}

std::vector<DiagnosticsRecord> read_series_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("series: missing header");
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 3 || cols[0] != "time" || cols[1] != "mass" || cols[2] != "energy") {
    throw IoError("series: header must start with time,mass,energy");
  }
  const auto param = [](const std::string& col, const std::string& prefix) {
    const std::string text = col.substr(prefix.size());
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
      throw IoError("series: bad column name '" + col + "'");
    }
    return x;
  };
  std::vector<DiagnosticsRecord> out;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      // strtod, unlike stod, accepts subnormal values
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw IoError("series line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      v.push_back(x);
    }
    if (v.size() != cols.size()) {
      throw IoError("series line " + std::to_string(line_no) + ": expected " +
                    std::to_string(cols.size()) + " columns, got " + std::to_string(v.size()));
    }
    DiagnosticsRecord r;
    r.time = v[0];
    r.mass = v[1];
    r.energy = v[2];
    for (std::size_t c = 3; c < cols.size(); ++c) {
      const std::string& name = cols[c];
      if (name.starts_with("band_energy_R")) {
        r.band_energy.emplace_back(param(name, "band_energy_R"), v[c]);
      } else if (name.starts_with("low_mass_d")) {
        r.low_mass.emplace_back(param(name, "low_mass_d"), v[c]);
      } else if (name.starts_with("mass_fraction_below_w")) {
        r.mass_fraction_below.emplace_back(param(name, "mass_fraction_below_w"), v[c]);
      } else if (name.starts_with("production_")) {
        r.convex_production.emplace_back(name.substr(11), v[c]);
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

SpectrumState make_initial_state(const RunConfig& c, const OmegaGrid& grid) {
  if (c.initial_preset == "gaussian_bump") {
    return gaussian_bump(grid, c.initial_center, c.initial_width, c.initial_amplitude);
  }
  if (c.initial_preset == "ring") {
    return ring_profile(grid, c.initial_ring_radius, c.initial_width, c.initial_amplitude);
  }
  std::ifstream in(c.initial_file);
  if (!in) throw IoError("cannot read initial data '" + c.initial_file + "'");
  std::vector<double> omega, g;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double w = 0.0, v = 0.0;
    if (!(ss >> w)) continue;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) {
      throw IoError(c.initial_file + ":" + std::to_string(line_no) + ": expected 'omega g'");
    }
    if (!omega.empty() && !(w > omega.back())) {
      throw IoError(c.initial_file + ":" + std::to_string(line_no) +
                    ": omega values must increase");
    }
    if (v < 0.0) throw IoError(c.initial_file + ":" + std::to_string(line_no) + ": negative g");
    omega.push_back(w);
    g.push_back(v);
  }
  if (omega.size() < 2) throw IoError(c.initial_file + ": need at least two samples");
  return interpolate_table(grid, omega, g);
}

DiagnosticsPlan make_plan(const RunConfig& c, const OmegaGrid& grid,
                          const SpectrumState& initial) {
  DiagnosticsPlan plan;
  plan.band_radii = c.band_radii;
  if (plan.band_radii.empty()) plan.band_radii = {support_percentile_radius(grid, initial)};
  plan.deltas = c.deltas;
  if (plan.deltas.empty()) {
    plan.deltas = {std::sqrt(grid.omega(std::min<std::size_t>(4, grid.size() - 1)))};
  }
  for (const auto& id : c.test_functions) plan.test_functions.push_back(test_functions::parse(id));
  plan.concentration_thresholds = c.mass_thresholds;
  return plan;
}

int cmd_simulate(const RunConfig& config, const SimulateOptions& options, std::ostream& log) {
  const auto d = make_dispersion(config);
  const auto grid = OmegaGrid::from_max(d, config.n_nodes, config.omega_max);
  const KernelWeights kw(config.c_q, config.cutoff);
  const auto build = make_build_options(config);

  std::optional<KernelTable> table;
  if (!config.table_cache.empty() && std::filesystem::exists(config.table_cache)) {
    try {
      table = KernelTable::load(config.table_cache, kw, grid, build);
      log << "loaded kernel table from " << config.table_cache << '\n';
    } catch (const ContractError& e) {
      log << "ignoring table cache: " << e.what() << '\n';
    }
  }
  if (!table) {
    table = KernelTable::build(kw, grid, build);
    if (!config.table_cache.empty()) table->save(config.table_cache);
  }
  log << "kernel table: " << table->size() << " entries on " << grid.size() << " nodes\n";

  const auto initial = make_initial_state(config, grid);
  const auto plan = make_plan(config, grid, initial);

  RunConfig effective = config;
  effective.band_radii = plan.band_radii;
  effective.deltas = plan.deltas;

  std::filesystem::create_directories(options.out_dir);
  open_out(options.out_dir / "config.txt") << effective.to_text();

  EvolveResult result;
  const bool evolving = config.t_end > 0.0;
  auto evolve_opts = make_evolve_options(config);
  evolve_opts.keep_spectra = options.dump_spectrum;
  if (evolving) {
    result = evolve(*table, initial, config.t_end, plan, evolve_opts);
  } else {
    result.records.push_back(make_record(*table, initial, plan));
    result.final_state = initial;
  }
  {
    auto csv = open_out(options.out_dir / "series.csv");
    write_series_csv(csv, result.records, options.dump_spectrum ? &result.spectra : nullptr,
                     grid.size(), plan, !evolving);
    if (!csv) throw IoError("failed writing '" + (options.out_dir / "series.csv").string() + "'");
  }

  CascadeReportOptions ropt;
  ropt.transient_fraction = config.transient_fraction;
  const auto report = cascade_report(result.records, ropt);
  const bool conserved = report.mass_drift <= 1e-10 && report.energy_drift <= 1e-10;

  nlohmann::json summary;
  summary["table_entries"] = table->size();
  summary["table_fingerprint"] = table->fingerprint();
  summary["accepted_steps"] = result.accepted_steps;
  summary["halvings"] = result.halvings;
  summary["reached_end"] = result.reached_end;
  summary["t_final"] = result.final_state.time;
  summary["initial_mass"] = result.records.front().mass;
  summary["initial_energy"] = result.records.front().energy;
  summary["final_mass"] = result.records.back().mass;
  summary["final_energy"] = result.records.back().energy;
  summary["conservation_ok"] = conserved;
  summary["report"] = report.to_json();
  open_out(options.out_dir / "summary.json") << summary.dump(2) << '\n';

  log << "steps " << result.accepted_steps << ", halvings " << result.halvings
      << ", mass drift " << report.mass_drift << ", energy drift " << report.energy_drift
      << '\n';
  if (!conserved) {
    log << "conservation check failed\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_verify_kernel(const RunConfig& config, std::ostream& out) {
  const auto rows = kernel_checks(config);
  print_checks(out, rows);
  return all_pass(rows) ? kExitOk : kExitCheckFailed;
}

int cmd_verify_geometry(const RunConfig& config, std::ostream& out) {
  const auto rows = geometry_checks(config);
  print_checks(out, rows);
  return all_pass(rows) ? kExitOk : kExitCheckFailed;
}

int cmd_report(const std::filesystem::path& series, const RunConfig& config,
               const std::optional<std::filesystem::path>& out_dir, std::ostream& out) {
  std::ifstream in(series);
  if (!in) throw IoError("cannot read series '" + series.string() + "'");
  const auto records = read_series_csv(in);
  if (records.empty()) throw IoError("series '" + series.string() + "' has no records");
  CascadeReportOptions ropt;
  ropt.transient_fraction = config.transient_fraction;
  const auto text = cascade_report(records, ropt).to_json().dump(2);
  out << text << '\n';
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    open_out(*out_dir / "report.json") << text << '\n';
  }
  return kExitOk;
}

}  // namespace wavecascade
