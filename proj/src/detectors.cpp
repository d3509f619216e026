#include "vcsim/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace vcsim {

namespace {

// Linear interpolation of a sampled quantity at offset frac in [0, 1]
// between samples k and k+1.
double interp(const Series& s, std::size_t k, double frac) {
  return s.values[k] + frac * (s.values[k + 1] - s.values[k]);
}

// Root offset of the segment (d[k], d[k+1]) assuming a sign change.
double root_frac(const Series& d, std::size_t k) {
  double a = d.values[k];
  double b = d.values[k + 1];
  if (a == b) return 0.0;
  return a / (a - b);
}

bool scannable(const Series& s) { return s.size() >= 3; }

// Largest interior rate magnitude; used to scale default tolerances.
double rate_scale(const Series& d) {
  double scale = 1.0;
  for (std::size_t k = first_central(d.size(), 1); k <= last_central(d.size(), 1); ++k) {
    scale = std::max(scale, std::abs(d.values[k]));
  }
  return scale;
}

}  // namespace

std::vector<Event> detect_max_vg(const Series& vg_cum, const Series& va_cum,
                                 const Series& vl_cum, double tol) {
  require_same_grid(vg_cum, va_cum);
  require_same_grid(vg_cum, vl_cum);
  std::vector<Event> events;
  if (!scannable(vg_cum)) return events;

  Series d = derivative(vg_cum, 1);
  Series va_rate = derivative(va_cum, 1);
  Series vl_rate = derivative(vl_cum, 1);
  std::size_t lo = first_central(d.size(), 1);
  std::size_t hi = last_central(d.size(), 1);

  for (std::size_t k = lo; k < hi; ++k) {
    if (!(d.values[k] >= 0.0 && d.values[k + 1] < 0.0)) continue;
    double frac = d.values[k] == 0.0 ? 0.0 : root_frac(d, k);
    Event ev;
    ev.kind = DetectorKind::max_vg;
    // Attribute the peak to whichever bracketing sample holds more value.
    ev.tick = vg_cum.values[k + 1] > vg_cum.values[k] ? static_cast<std::int64_t>(k + 1)
                                                      : static_cast<std::int64_t>(k);
    ev.time = d.time_at(k) + frac * d.dt;
    double va_at = interp(va_rate, k, frac);
    double vl_at = interp(vl_rate, k, frac);
    double gap = std::abs(va_at - vl_at);
    ev.witness["bracket_lo"] = static_cast<double>(k);
    ev.witness["bracket_hi"] = static_cast<double>(k + 1);
    ev.witness["va_rate"] = va_at;
    ev.witness["vl_rate"] = vl_at;
    ev.witness["gap"] = gap;
    ev.witness["consistent"] = gap <= tol ? 1.0 : 0.0;
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<Event> detect_stable_market(const Series& va_cum, const Series& vl_cum,
                                        double tol) {
  require_same_grid(va_cum, vl_cum);
  std::vector<Event> events;
  if (!scannable(va_cum)) return events;

  Series va_rate = derivative(va_cum, 1);
  Series vl_rate = derivative(vl_cum, 1);
  std::size_t lo = first_central(va_rate.size(), 1);
  std::size_t hi = last_central(va_rate.size(), 1);

  std::size_t k = lo;
  while (k <= hi) {
    if (std::abs(va_rate.values[k] - vl_rate.values[k]) > tol) {
      ++k;
      continue;
    }
    std::size_t run_end = k;
    while (run_end + 1 <= hi &&
           std::abs(va_rate.values[run_end + 1] - vl_rate.values[run_end + 1]) <= tol) {
      ++run_end;
    }
    Event ev;
    ev.kind = DetectorKind::stable_market;
    ev.tick = static_cast<std::int64_t>(k);
    ev.time = va_rate.time_at(k);
    ev.witness["va_rate"] = va_rate.values[k];
    ev.witness["vl_rate"] = vl_rate.values[k];
    ev.witness["gap"] = std::abs(va_rate.values[k] - vl_rate.values[k]);
    ev.witness["run_end"] = static_cast<double>(run_end);
    events.push_back(std::move(ev));
    k = run_end + 1;
  }
  return events;
}

std::optional<Event> detect_subsidy_cross(const Series& ve_gov_cum,
                                          const Series& vg_nat_cum) {
  require_same_grid(ve_gov_cum, vg_nat_cum);
  if (!scannable(ve_gov_cum)) return std::nullopt;

  Series gov_rate = derivative(ve_gov_cum, 1);
  Series nat_rate = derivative(vg_nat_cum, 1);
  std::size_t lo = first_central(gov_rate.size(), 1);
  std::size_t hi = last_central(gov_rate.size(), 1);

  Series gap;
  gap.t0 = gov_rate.t0;
  gap.dt = gov_rate.dt;
  gap.values.resize(gov_rate.size());
  for (std::size_t k = 0; k < gap.size(); ++k) {
    gap.values[k] = gov_rate.values[k] - nat_rate.values[k];
  }

  for (std::size_t k = lo; k <= hi; ++k) {
    bool hit = false;
    double frac = 0.0;
    std::int64_t tick = 0;
    if (gap.values[k] == 0.0) {
      hit = true;
      tick = static_cast<std::int64_t>(k);
    } else if (k < hi && gap.values[k] * gap.values[k + 1] < 0.0) {
      hit = true;
      frac = root_frac(gap, k);
      tick = static_cast<std::int64_t>(k + 1);
    }
    if (!hit) continue;

    Event ev;
    ev.kind = DetectorKind::subsidy_cross;
    ev.tick = tick;
    ev.time = gap.time_at(k) + frac * gap.dt;
    bool segment = frac > 0.0;
    double gov_at = segment ? interp(gov_rate, k, frac) : gov_rate.values[k];
    double nat_at = segment ? interp(nat_rate, k, frac) : nat_rate.values[k];
    ev.witness["bracket_lo"] = static_cast<double>(k);
    ev.witness["bracket_hi"] = static_cast<double>(segment ? k + 1 : k);
    ev.witness["gov_rate"] = gov_at;
    ev.witness["natural_rate"] = nat_at;
    ev.witness["gap"] = gov_at - nat_at;
    return ev;
  }
  return std::nullopt;
}

std::vector<Event> detect_gov_optimum(const Series& vg_gov_cum,
                                      const Series& vg_cit_cum) {
  require_same_grid(vg_gov_cum, vg_cit_cum);
  std::vector<Event> events;
  if (!scannable(vg_gov_cum)) return events;

  Series gov_rate = derivative(vg_gov_cum, 1);
  Series cit_rate = derivative(vg_cit_cum, 1);
  std::size_t lo = first_central(gov_rate.size(), 1);
  std::size_t hi = last_central(gov_rate.size(), 1);

  Series total;
  total.t0 = gov_rate.t0;
  total.dt = gov_rate.dt;
  total.values.resize(gov_rate.size());
  bool all_zero = true;
  for (std::size_t k = 0; k < total.size(); ++k) {
    total.values[k] = gov_rate.values[k] + cit_rate.values[k];
    if (k >= lo && k <= hi && total.values[k] != 0.0) all_zero = false;
  }

  if (all_zero) {
    Event ev;
    ev.kind = DetectorKind::gov_optimum;
    ev.tick = static_cast<std::int64_t>(lo);
    ev.time = total.time_at(lo);
    ev.witness["degenerate_plateau"] = 1.0;
    ev.witness["gov_rate"] = gov_rate.values[lo];
    ev.witness["citizen_rate"] = cit_rate.values[lo];
    events.push_back(std::move(ev));
    return events;
  }

  std::size_t k = lo;
  while (k <= hi) {
    if (total.values[k] == 0.0) {
      Event ev;
      ev.kind = DetectorKind::gov_optimum;
      ev.tick = static_cast<std::int64_t>(k);
      ev.time = total.time_at(k);
      ev.witness["bracket_lo"] = static_cast<double>(k);
      ev.witness["bracket_hi"] = static_cast<double>(k);
      ev.witness["gov_rate"] = gov_rate.values[k];
      ev.witness["citizen_rate"] = cit_rate.values[k];
      ev.witness["sum"] = 0.0;
      events.push_back(std::move(ev));
      while (k <= hi && total.values[k] == 0.0) ++k;  // one event per zero run
      continue;
    }
    if (k < hi && total.values[k] * total.values[k + 1] < 0.0) {
      double frac = root_frac(total, k);
      Event ev;
      ev.kind = DetectorKind::gov_optimum;
      ev.tick = static_cast<std::int64_t>(k + 1);
      ev.time = total.time_at(k) + frac * total.dt;
      ev.witness["bracket_lo"] = static_cast<double>(k);
      ev.witness["bracket_hi"] = static_cast<double>(k + 1);
      ev.witness["gov_rate"] = interp(gov_rate, k, frac);
      ev.witness["citizen_rate"] = interp(cit_rate, k, frac);
      ev.witness["sum"] = interp(total, k, frac);
      events.push_back(std::move(ev));
    }
    ++k;
  }
  return events;
}

Series cycle_cumulative_series(const ScenarioAst& ast, const CycleSeries& cycle,
                               FlowKind flow) {
  const std::vector<ValueAmount>* column = nullptr;
  switch (flow) {
    case FlowKind::added: column = &cycle.added; break;
    case FlowKind::extracted: column = &cycle.extracted; break;
    case FlowKind::lost: column = &cycle.lost; break;
  }
  Series per_tick;
  per_tick.t0 = 0.0;
  per_tick.dt = static_cast<double>(ast.dt_micro) / ValueAmount::kScale;
  per_tick.values.reserve(column->size());
  for (ValueAmount v : *column) per_tick.values.push_back(v.to_double());
  return cumulative(per_tick);
}

Series cycle_gained_cumulative_series(const ScenarioAst& ast, const CycleSeries& cycle) {
  Series per_tick;
  per_tick.t0 = 0.0;
  per_tick.dt = static_cast<double>(ast.dt_micro) / ValueAmount::kScale;
  per_tick.values.reserve(cycle.gained.size());
  for (ValueAmount v : cycle.gained) per_tick.values.push_back(v.to_double());
  return cumulative(per_tick);
}

std::vector<Event> run_scenario_detectors(const ScenarioAst& ast,
                                          const SimulationResult& result) {
  std::vector<Event> events;
  auto cycle_series = [&](const std::string& id) -> const CycleSeries& {
    for (const CycleSeries& c : result.cycles) {
      if (c.cycle_id == id) return c;
    }
    throw std::invalid_argument("detector refers to unknown cycle '" + id + "'");
  };

  double dt = static_cast<double>(ast.dt_micro) / ValueAmount::kScale;
  for (const DetectorDecl& det : ast.detectors) {
    switch (det.kind) {
      case DetectorKind::max_vg: {
        const CycleSeries& c = cycle_series(det.cycles[0]);
        Series vg = cycle_gained_cumulative_series(ast, c);
        Series va = cycle_cumulative_series(ast, c, FlowKind::added);
        Series vl = cycle_cumulative_series(ast, c, FlowKind::lost);
        if (!scannable(vg)) break;
        double scale = std::max(rate_scale(derivative(va, 1)),
                                rate_scale(derivative(vl, 1)));
        double tol = 10.0 * dt * dt * scale;
        for (Event& ev : detect_max_vg(vg, va, vl, tol)) events.push_back(std::move(ev));
        break;
      }
      case DetectorKind::stable_market: {
        const CycleSeries& c = cycle_series(det.cycles[0]);
        Series va = cycle_cumulative_series(ast, c, FlowKind::added);
        Series vl = cycle_cumulative_series(ast, c, FlowKind::lost);
        if (!scannable(va)) break;
        double scale = std::max(rate_scale(derivative(va, 1)),
                                rate_scale(derivative(vl, 1)));
        double tol = 10.0 * dt * dt * scale;
        for (Event& ev : detect_stable_market(va, vl, tol)) events.push_back(std::move(ev));
        break;
      }
      case DetectorKind::subsidy_cross: {
        Series veg = cycle_cumulative_series(ast, cycle_series(det.cycles[0]),
                                             FlowKind::extracted);
        Series vgn = cycle_gained_cumulative_series(ast, cycle_series(det.cycles[1]));
        if (auto ev = detect_subsidy_cross(veg, vgn)) events.push_back(std::move(*ev));
        break;
      }
      case DetectorKind::gov_optimum: {
        Series vgg = cycle_gained_cumulative_series(ast, cycle_series(det.cycles[0]));
        Series vgc = cycle_gained_cumulative_series(ast, cycle_series(det.cycles[1]));
        for (Event& ev : detect_gov_optimum(vgg, vgc)) events.push_back(std::move(ev));
        break;
      }
    }
  }
  return events;
}

}  // namespace vcsim
