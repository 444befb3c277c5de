#include "imbue/energy.hpp"

#include "imbue/errors.hpp"

namespace imbue::energy {

void EnergyTable::validate() const {
  const auto& p = power;
  for (double w : {p.program_exclude_uw, p.program_include_uw, p.include_literal0_uw, p.exclude_literal0_uw,
                   p.otherwise_uw}) {
    if (w < 0.0) throw ConfigError("power entries must be non-negative");
  }
  if (!(p.include_literal0_uw > p.exclude_literal0_uw)) {
    throw ConfigError("include x literal '0' power must exceed exclude x literal '0' power");
  }
  if (csa_energy_j < 0.0) throw ConfigError("CSA energy must be non-negative");
  if (!(t_read_ns > 0.0) || t_sense_ns < 0.0 || t_discharge_ns < 0.0) throw ConfigError("invalid phase timings");
}

void ScheduleConfig::validate(const EnergyTable& table) const {
  if (cycle_ns < table.t_read_ns) throw ConfigError("cycle time must cover the read pulse");
}

double datapoint_energy(const MeanEventCounts& c, const EnergyTable& table) {
  const auto& p = table.power;
  const double t = table.t_read_ns * 1e-9;
  const double reads_uw = c.include_literal0 * p.include_literal0_uw + c.exclude_literal0 * p.exclude_literal0_uw +
                          (c.include_literal1 + c.exclude_literal1) * p.otherwise_uw;
  return reads_uw * 1e-6 * t + c.csa_evaluations * table.csa_energy_j;
}

double datapoint_energy(const EventCounts& counts, const EnergyTable& table) {
  return datapoint_energy(MeanEventCounts::from(counts), table);
}

double datapoint_latency(std::size_t columns, const ScheduleConfig& schedule) {
  if (columns == 0) return 0.0;
  const std::size_t par = schedule.parallelism == 0 ? columns : schedule.parallelism;
  const std::size_t cycles = (columns + par - 1) / par;
  return static_cast<double>(cycles) * schedule.cycle_ns * 1e-9;
}

double datapoint_latency(const xbar::CrossbarLayout& layout, const ScheduleConfig& schedule) {
  return datapoint_latency(layout.column_count(), schedule);
}

double tops_per_joule(std::uint64_t ta_count, double energy_j) {
  if (!(energy_j > 0.0)) throw MetricError("TopJ^-1 is undefined for non-positive energy");
  return static_cast<double>(ta_count) / energy_j / 1e12;
}

double compare_baseline(double energy_j, double baseline_energy_j) {
  if (!(energy_j > 0.0) || !(baseline_energy_j > 0.0)) throw MetricError("energies must be positive to compare");
  return baseline_energy_j / energy_j;
}

MeanEventCounts analytic_counts(std::uint64_t includes, std::uint64_t ta_cells, std::uint64_t csa_evaluations,
                                double literal_zero_fraction) {
  if (includes > ta_cells) throw ConfigError("include count exceeds TA cell count");
  if (literal_zero_fraction < 0.0 || literal_zero_fraction > 1.0) {
    throw ConfigError("literal-zero fraction must be in [0, 1]");
  }
  const double inc = static_cast<double>(includes);
  const double exc = static_cast<double>(ta_cells - includes);
  MeanEventCounts c;
  c.include_literal0 = inc * literal_zero_fraction;
  c.exclude_literal0 = exc * literal_zero_fraction;
  c.include_literal1 = inc * (1.0 - literal_zero_fraction);
  c.exclude_literal1 = exc * (1.0 - literal_zero_fraction);
  c.csa_evaluations = static_cast<double>(csa_evaluations);
  return c;
}

EnergyReport make_report(std::string dataset, std::size_t classes, std::size_t clauses_total, std::uint64_t ta_cells,
                         std::uint64_t includes, std::uint64_t csas, std::uint64_t columns, double energy_j,
                         double latency_s, std::optional<double> accuracy) {
  EnergyReport r;
  r.dataset = std::move(dataset);
  r.classes = classes;
  r.clauses_total = clauses_total;
  r.ta_cells = ta_cells;
  r.includes = includes;
  r.csas = csas;
  r.columns = columns;
  r.accuracy = accuracy;
  r.energy_j = energy_j;
  r.latency_s = latency_s;
  r.tops_per_joule = tops_per_joule(ta_cells, energy_j);
  return r;
}

}  // namespace imbue::energy
