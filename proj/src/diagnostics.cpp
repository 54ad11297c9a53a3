#include "wavecascade/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavecascade/errors.hpp"

namespace wavecascade {

namespace test_functions {

namespace {

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& id) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ContractError("test function '" + id + "': bad number '" + text + "'");
  }
  return v;
}

}  // namespace

TestFunction constant(double c) {
  return {"constant:" + fmt(c), [c](double) { return c; }};
}

TestFunction linear() {
  return {"linear", [](double w) { return w; }};
}

TestFunction square() {
  return {"square", [](double w) { return w * w; }};
}

TestFunction cutoff_below(double c) {
  return {"cutoff:" + fmt(c), [c](double w) { return std::max(c - w, 0.0); }};
}

TestFunction smooth_cutoff_below(double c, double eps) {
  if (!(eps > 0.0)) throw ContractError("smooth_cutoff: eps must be positive");
  return {"smooth_cutoff:" + fmt(c) + ":" + fmt(eps), [c, eps](double w) {
            const double z = (c - w) / eps;
            // softplus, written to avoid overflow for large z
            return eps * (std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))));
          }};
}

TestFunction ramp_above(double c) {
  return {"ramp:" + fmt(c), [c](double w) { return std::max(w - c, 0.0); }};
}

TestFunction inverse_cutoff(double theta) {
  if (!(theta > 0.0)) throw ContractError("inverse_cutoff: theta must be positive");
  return {"inverse_cutoff:" + fmt(theta),
          [theta](double w) { return std::max(1.0 - theta * w, 0.0); }};
}

TestFunction parse(const std::string& id) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto colon = id.find(':', start);
    parts.push_back(id.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const std::string& head = parts.front();
  const auto arg = [&](std::size_t k) { return parse_number(parts.at(k), id); };
  if (head == "linear" && parts.size() == 1) return linear();
  if (head == "square" && parts.size() == 1) return square();
  if (head == "constant" && parts.size() == 2) return constant(arg(1));
  if (head == "cutoff" && parts.size() == 2) return cutoff_below(arg(1));
  if (head == "ramp" && parts.size() == 2) return ramp_above(arg(1));
  if (head == "inverse_cutoff" && parts.size() == 2) return inverse_cutoff(arg(1));
  if (head == "smooth_cutoff" && parts.size() == 3) return smooth_cutoff_below(arg(1), arg(2));
  throw ContractError("unknown test function '" + id + "'");
}

}  // namespace test_functions

namespace {

void check_grid(const OmegaGrid& grid, const SpectrumState& state) {
  if (state.g.size() != grid.size()) {
    throw ContractError("state has " + std::to_string(state.g.size()) +
                        " nodes but the grid has " + std::to_string(grid.size()));
  }
}

std::vector<double> sample(const OmegaGrid& grid, const TestFunction& tf) {
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    phi[i] = tf.phi(grid.omega(i));
    if (!std::isfinite(phi[i])) {
      throw ContractError("test function '" + tf.id + "' is not finite at omega = " +
                          std::to_string(grid.omega(i)));
    }
  }
  return phi;
}

}  // namespace

double mass(const OmegaGrid& grid, const SpectrumState& state) {
  check_grid(grid, state);
  double s = 0.0;
  for (double g : state.g) s += g;
  return s * grid.spacing();
}

double energy(const OmegaGrid& grid, const SpectrumState& state) {
  check_grid(grid, state);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += state.g[i] * grid.omega(i);
  return s * grid.spacing();
}

double band_energy(const OmegaGrid& grid, const SpectrumState& state, double radius) {
  check_grid(grid, state);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size() && grid.radius(i) <= radius; ++i) {
    s += state.g[i] * grid.omega(i);
  }
  return s * grid.spacing();
}

double low_mass(const OmegaGrid& grid, const SpectrumState& state, double delta) {
  check_grid(grid, state);
  const double cap = delta * delta;
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size() && grid.omega(i) <= cap; ++i) s += state.g[i];
  return s * grid.spacing();
}

double mass_fraction_below(const OmegaGrid& grid, const SpectrumState& state, double threshold) {
  const double total = mass(grid, state);
  if (total == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size() && grid.omega(i) <= threshold; ++i) s += state.g[i];
  return s * grid.spacing() / total;
}

double support_percentile_radius(const OmegaGrid& grid, const SpectrumState& state,
                                 double percentile, double rel_threshold) {
  check_grid(grid, state);
  if (!(percentile >= 0.0 && percentile <= 1.0)) {
    throw DomainError("support_percentile_radius: percentile must lie in [0, 1]");
  }
  const double gmax = *std::max_element(state.g.begin(), state.g.end());
  std::vector<double> radii;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (gmax > 0.0 && state.g[i] > rel_threshold * gmax) radii.push_back(grid.radius(i));
  }
  if (radii.empty()) throw DomainError("support_percentile_radius: state has empty support");
  const auto k = static_cast<std::size_t>(percentile * static_cast<double>(radii.size() - 1) + 0.5);
  return radii[k];
}

double convexity_defect(const OmegaGrid& grid, const TestFunction& tf) {
  const auto phi = sample(grid, tf);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
    worst = std::max(worst, -(phi[i - 1] - 2.0 * phi[i] + phi[i + 1]));
  }
  return worst;
}

double weak_form_production(const KernelTable& table, const SpectrumState& state,
                            const TestFunction& tf) {
  const OmegaGrid& grid = table.grid();
  check_grid(grid, state);
  const auto phi = sample(grid, tf);
  const auto& g = state.g;
  const double h = grid.spacing();
  double s = 0.0;
  for (const KernelEntry& e : table.entries()) {
    const double bracket = (phi[e.l] - phi[e.i]) + (phi[e.m] - phi[e.j]);
    s += e.weight * g[e.i] * g[e.j] * g[e.l] * bracket;
  }
  return s * h * h * h;
}

double production_scale(const KernelTable& table, const SpectrumState& state,
                        const TestFunction& tf) {
  const OmegaGrid& grid = table.grid();
  check_grid(grid, state);
  const auto phi = sample(grid, tf);
  const auto& g = state.g;
  const double h = grid.spacing();
  double s = 0.0;
  for (const KernelEntry& e : table.entries()) {
    const double size = std::abs(phi[e.i]) + std::abs(phi[e.j]) + std::abs(phi[e.l]) +
                        std::abs(phi[e.m]);
    s += std::abs(e.weight * g[e.i] * g[e.j] * g[e.l]) * size;
  }
  return s * h * h * h;
}

double convex_production(const KernelTable& table, const SpectrumState& state,
                         const TestFunction& tf) {
  const auto phi = sample(table.grid(), tf);
  double scale = 1.0;
  for (double p : phi) scale = std::max(scale, std::abs(p));
  const double defect = convexity_defect(table.grid(), tf);
  if (defect > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "test function '" << tf.id << "' is not convex on the grid (second difference "
        << -defect << ")";
    throw ContractError(msg.str());
  }
  return weak_form_production(table, state, tf);
}

DiagnosticsRecord make_record(const KernelTable& table, const SpectrumState& state,
                              const DiagnosticsPlan& plan) {
  const OmegaGrid& grid = table.grid();
  DiagnosticsRecord rec;
  rec.time = state.time;
  rec.mass = mass(grid, state);
  rec.energy = energy(grid, state);
  for (double r : plan.band_radii) rec.band_energy.emplace_back(r, band_energy(grid, state, r));
  for (double d : plan.deltas) rec.low_mass.emplace_back(d, low_mass(grid, state, d));
  for (const auto& tf : plan.test_functions) {
    rec.convex_production.emplace_back(tf.id, convex_production(table, state, tf));
  }
  for (double w : plan.concentration_thresholds) {
    rec.mass_fraction_below.emplace_back(w, mass_fraction_below(grid, state, w));
  }
  return rec;
}

double kendall_tau(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  // Index has no ties, so tau-b = (C - D) / sqrt(n0 (n0 - T_values)).
  long long concordant_minus_discordant = 0;
  long long tied_values = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (values[b] > values[a]) {
        ++concordant_minus_discordant;
      } else if (values[b] < values[a]) {
        --concordant_minus_discordant;
      } else {
        ++tied_values;
      }
    }
  }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double denom = std::sqrt(n0 * (n0 - static_cast<double>(tied_values)));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(concordant_minus_discordant) / denom;
}

const char* to_string(Trend t) {
  switch (t) {
    case Trend::kDecreasing:
      return "decreasing";
    case Trend::kIncreasing:
      return "increasing";
    case Trend::kFlat:
      break;
  }
  return "flat";
}

namespace {

TrendSummary summarize(const std::string& quantity, double parameter,
                       const std::vector<double>& values, const CascadeReportOptions& opt) {
  TrendSummary t;
  t.quantity = quantity;
  t.parameter = parameter;
  t.kendall_tau = kendall_tau(values);
  t.first = values.front();
  t.last = values.back();
  t.relative_change = t.first != 0.0 ? (t.last - t.first) / std::abs(t.first) : 0.0;
  const double scale = std::max({std::abs(t.first), std::abs(t.last),
                                 std::numeric_limits<double>::min()});
  const bool moved = std::abs(t.last - t.first) > opt.flat_change * scale;
  if (moved && t.kendall_tau <= -opt.tau_threshold) {
    t.trend = Trend::kDecreasing;
  } else if (moved && t.kendall_tau >= opt.tau_threshold) {
    t.trend = Trend::kIncreasing;
  }
  return t;
}

nlohmann::json trend_json(const TrendSummary& t) {
  return {{"parameter", t.parameter},          {"kendall_tau", t.kendall_tau},
          {"first", t.first},                  {"last", t.last},
          {"relative_change", t.relative_change}, {"trend", to_string(t.trend)}};
}

}  // namespace

CascadeReport cascade_report(std::span<const DiagnosticsRecord> series,
                             const CascadeReportOptions& options) {
  if (series.empty()) throw ContractError("cascade_report: empty series");
  if (!(options.transient_fraction >= 0.0 && options.transient_fraction < 1.0)) {
    throw ContractError("cascade_report: transient_fraction must lie in [0, 1)");
  }
  CascadeReport rep;
  rep.records = series.size();
  rep.discarded = static_cast<std::size_t>(
      std::floor(options.transient_fraction * static_cast<double>(series.size())));
  const auto kept = series.subspan(rep.discarded);
  rep.t_first = kept.front().time;
  rep.t_last = kept.back().time;

  const double m0 = series.front().mass, e0 = series.front().energy;
  for (const auto& r : series) {
    if (m0 != 0.0) rep.mass_drift = std::max(rep.mass_drift, std::abs(r.mass - m0) / m0);
    if (e0 != 0.0) rep.energy_drift = std::max(rep.energy_drift, std::abs(r.energy - e0) / e0);
  }

  const auto& head = kept.front();
  std::vector<double> values(kept.size());
  const auto column = [&](auto&& pick) {
    for (std::size_t k = 0; k < kept.size(); ++k) values[k] = pick(kept[k]);
    return values;
  };
  for (std::size_t c = 0; c < head.band_energy.size(); ++c) {
    column([c](const DiagnosticsRecord& r) { return r.band_energy.at(c).second; });
    rep.band_energy.push_back(summarize("band_energy", head.band_energy[c].first, values, options));
  }
  for (std::size_t c = 0; c < head.low_mass.size(); ++c) {
    column([c](const DiagnosticsRecord& r) { return r.low_mass.at(c).second; });
    rep.low_mass.push_back(summarize("low_mass", head.low_mass[c].first, values, options));
  }
  for (std::size_t c = 0; c < head.mass_fraction_below.size(); ++c) {
    column([c](const DiagnosticsRecord& r) { return r.mass_fraction_below.at(c).second; });
    rep.mass_fraction_below.push_back(
        summarize("mass_fraction_below", head.mass_fraction_below[c].first, values, options));
  }
  for (std::size_t c = 0; c < head.convex_production.size(); ++c) {
    column([c](const DiagnosticsRecord& r) { return r.convex_production.at(c).second; });
    auto t = summarize(head.convex_production[c].first, 0.0, values, options);
    rep.convex_production.push_back(std::move(t));
  }
  return rep;
}

nlohmann::json CascadeReport::to_json() const {
  nlohmann::json j;
  j["records"] = records;
  j["discarded"] = discarded;
  j["t_first"] = t_first;
  j["t_last"] = t_last;
  j["mass_drift"] = mass_drift;
  j["energy_drift"] = energy_drift;
  const auto list = [](const std::vector<TrendSummary>& ts) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& t : ts) a.push_back(trend_json(t));
    return a;
  };
  j["band_energy"] = list(band_energy);
  j["low_mass"] = list(low_mass);
  j["mass_fraction_below"] = list(mass_fraction_below);
  nlohmann::json prod = nlohmann::json::object();
  for (const auto& t : convex_production) {
    auto e = trend_json(t);
    e.erase("parameter");
    prod[t.quantity] = e;
  }
  j["convex_production"] = prod;
  return j;
}

}  // namespace wavecascade
