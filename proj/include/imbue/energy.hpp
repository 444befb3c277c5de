#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imbue/crossbar.hpp"
#include "imbue/device_model.hpp"
#include "imbue/events.hpp"

namespace imbue::energy {

struct EnergyTable {
  device::PowerTable power;
  double csa_energy_j = 0.0;  // per CSA evaluation
  double t_read_ns = 35.0;
  double t_sense_ns = 20.0;
  double t_discharge_ns = 5.0;

  /// Throws ConfigError unless powers are non-negative and an include read
  /// at literal '0' costs more than an exclude read.
  void validate() const;
};

struct ScheduleConfig {
  std::size_t parallelism = 0;  // columns read per cycle; 0 = all columns at once
  double cycle_ns = 40.0;       // read pulse (sense enable overlaps it) + discharge

  void validate(const EnergyTable& table = {}) const;
};

/// sum_kind count(kind) x P(kind) x t_read + n_CSA x E_CSA, in joules.
double datapoint_energy(const EventCounts& counts, const EnergyTable& table = {});
double datapoint_energy(const MeanEventCounts& counts, const EnergyTable& table = {});

/// ceil(columns / parallelism) x cycle time, in seconds.
double datapoint_latency(std::size_t columns, const ScheduleConfig& schedule = {});
double datapoint_latency(const xbar::CrossbarLayout& layout, const ScheduleConfig& schedule = {});

/// TA cells per joule, in units of 1e12. Throws MetricError if energy <= 0.
double tops_per_joule(std::uint64_t ta_count, double energy_j);

/// baseline / energy. Throws MetricError on non-positive inputs.
double compare_baseline(double energy_j, double baseline_energy_j);

/// Expected counts when every cell is read once and a fraction
/// `literal_zero_fraction` of the literals each cell sees are '0'.
MeanEventCounts analytic_counts(std::uint64_t includes, std::uint64_t ta_cells, std::uint64_t csa_evaluations,
                                double literal_zero_fraction = 0.5);

struct EnergyReport {
  std::string dataset;
  std::size_t classes = 0;
  std::size_t clauses_total = 0;
  std::uint64_t ta_cells = 0;
  std::uint64_t includes = 0;
  std::uint64_t csas = 0;     // ceil(cells / W)
  std::uint64_t columns = 0;  // clause-aligned partial columns
  std::optional<double> accuracy;
  double energy_j = 0.0;
  double latency_s = 0.0;
  double tops_per_joule = 0.0;

  double include_ratio() const { return ta_cells ? static_cast<double>(includes) / static_cast<double>(ta_cells) : 0.0; }
};

/// Fills the derived metric from energy and cell count.
EnergyReport make_report(std::string dataset, std::size_t classes, std::size_t clauses_total, std::uint64_t ta_cells,
                         std::uint64_t includes, std::uint64_t csas, std::uint64_t columns, double energy_j,
                         double latency_s, std::optional<double> accuracy = std::nullopt);

}  // namespace imbue::energy
