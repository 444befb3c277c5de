#pragma once

// In-memory inference path. Each clause's K TA cells are split into
// P = ceil(K / W) partial-clause columns of at most W cells. A column read
// sums the cell currents on the column line; the sense resistor turns the
// sum into a voltage and the CSA compares it against a reference. The CSA
// fires when some included literal is '0', so the partial clause is the
// inverted CSA bit. Full clauses are the AND of their partials, and up/down
// counters accumulate polarity-weighted votes per class.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imbue/device_model.hpp"
#include "imbue/events.hpp"
#include "imbue/rng.hpp"
#include "imbue/tm_core.hpp"

namespace imbue::xbar {

/// Input-referred CSA offset sigma suggested by the sensing-amplifier process
/// variation study (RESET Out1 standard deviation, 0.216 mV).
inline constexpr double kCornerCsaOffsetSigmaV = 0.216e-3;

struct AnalogConfig {
  device::ReadVoltages volts;
  double r_sense_ohm = 100.0;
  std::optional<double> ref_volt_v;  // unset: midpoint rule for column_width
  std::size_t column_width = 32;
  double t_read_ns = 35.0;
  double t_sense_ns = 20.0;
  double t_discharge_ns = 5.0;
  double csa_offset_sigma_v = 0.0;

  /// Configured reference, or the midpoint rule at column_width.
  double reference_v(const device::CellNominal& table = device::CellNominal::paper_table()) const;

  /// Throws ConfigError on non-physical values or when the reference does
  /// not separate the worst all-exclude column from a single include.
  void validate(const device::CellNominal& table = device::CellNominal::paper_table()) const;
};

/// R_sense x (W * I_exclude + I_include) / 2 using nominal literal-'0' currents.
double midpoint_reference_v(std::size_t width, double r_sense_ohm,
                            const device::CellNominal& table = device::CellNominal::paper_table());

/// R_sense x (I_include - W * I_exclude); negative means the CSA cannot
/// separate a single include from a full all-exclude column.
double nominal_margin_v(std::size_t width, double r_sense_ohm,
                        const device::CellNominal& table = device::CellNominal::paper_table());

struct Column {
  std::size_t cls = 0;
  std::size_t clause = 0;
  std::size_t partial = 0;
  std::size_t literal_begin = 0;  // [begin, end) literal slice of the clause
  std::size_t literal_end = 0;
  std::size_t first_cell = 0;     // global cell id of slot 0

  std::size_t size() const { return literal_end - literal_begin; }
};

struct CellRef {
  std::size_t cls = 0;
  std::size_t clause = 0;
  std::size_t literal = 0;
  bool include = false;

  friend bool operator==(const CellRef&, const CellRef&) = default;
};

/// Assignment of every TA cell of a model to a (column, slot). Columns are
/// ordered class-major, then clause, then partial; global cell ids run
/// column by column.
class CrossbarLayout {
 public:
  CrossbarLayout() = default;

  std::size_t column_width() const { return width_; }
  std::size_t partials_per_clause() const { return partials_; }
  std::size_t column_count() const { return columns_.size(); }
  std::size_t cell_count() const { return model_.ta_cell_count(); }
  /// ceil(cells / W): CSAs needed if columns were packed densely.
  std::size_t packed_csa_count() const { return (cell_count() + width_ - 1) / width_; }

  const tm::TMModel& model() const { return model_; }
  std::span<const Column> columns() const { return columns_; }
  const Column& column(std::size_t c) const { return columns_[c]; }
  /// Columns of (cls, clause), in partial order.
  std::span<const Column> clause_columns(std::size_t cls, std::size_t clause) const;

  CellRef cell(std::size_t column, std::size_t slot) const;

  friend CrossbarLayout map_model(const tm::TMModel& model, std::size_t width);

 private:
  tm::TMModel model_;
  std::size_t width_ = 0;
  std::size_t partials_ = 0;
  std::vector<Column> columns_;
};

/// Splits each clause into ceil(K / W) contiguous partial columns.
/// Throws ConfigError if W == 0.
CrossbarLayout map_model(const tm::TMModel& model, std::size_t width);

/// One device per global cell id.
using DeviceArray = std::vector<device::DeviceInstance>;

DeviceArray nominal_devices(const CrossbarLayout& layout,
                            const device::CellNominal& table = device::CellNominal::paper_table());
DeviceArray sample_devices(const CrossbarLayout& layout, const device::VariationParams& params, Rng& rng);

/// KCL sum of the column's cell currents in uA. Adds the column's cell reads
/// to `events` when given. Throws LayoutError if devices do not cover it.
double column_current(const CrossbarLayout& layout, std::size_t column, const tm::BoolSample& sample,
                      std::span<const device::DeviceInstance> devices, const AnalogConfig& config,
                      EventCounts* events = nullptr);

/// CSA decision: 1 iff current x R_sense + offset > reference.
bool sense(double current_ua, const AnalogConfig& config, double offset_v = 0.0);

/// Partial clause bit = NOT sense(column current). Draws a CSA offset from
/// N(0, csa_offset_sigma) when the sigma is non-zero.
bool partial_clause_eval(const CrossbarLayout& layout, std::size_t column, const tm::BoolSample& sample,
                         std::span<const device::DeviceInstance> devices, const AnalogConfig& config, Rng& rng,
                         EventCounts* events = nullptr);

/// AND of the partial bits. Throws ConfigError on an empty list.
bool full_clause_eval(std::span<const std::uint8_t> partial_bits);

struct InferenceTrace {
  std::vector<double> column_current_ua;
  std::vector<std::uint8_t> csa_bits;
  std::vector<std::uint8_t> partial_bits;
  std::vector<std::uint8_t> clause_bits;  // one per (class, clause)
  tm::ClassSums class_sums;
  std::size_t predicted = 0;
  EventCounts events;
};

InferenceTrace crossbar_infer(const CrossbarLayout& layout, std::span<const device::DeviceInstance> devices,
                              const tm::BoolSample& sample, const AnalogConfig& config, Rng& rng);

/// Same decision path without materializing the trace.
std::size_t crossbar_predict(const CrossbarLayout& layout, std::span<const device::DeviceInstance> devices,
                             const tm::BoolSample& sample, const AnalogConfig& config, Rng& rng,
                             EventCounts* events = nullptr);

struct MarginReport {
  std::size_t width = 0;
  double reference_v = 0.0;
  double nominal_margin_v = 0.0;
  bool feasible = false;
  std::size_t trials = 0;
  std::size_t false_fires = 0;  // all-exclude column crossed the reference
  std::size_t misses = 0;       // single-include column stayed below it

  double false_fire_rate() const { return trials ? static_cast<double>(false_fires) / trials : 0.0; }
  double miss_rate() const { return trials ? static_cast<double>(misses) / trials : 0.0; }
  /// Per-column decision error probability, both worst cases weighted equally.
  double error_rate() const { return trials ? 0.5 * (false_fire_rate() + miss_rate()) : 0.0; }
};

/// Nominal margin plus a Monte Carlo estimate of worst-case CSA decision
/// errors: an all-exclude column with every literal '0', and a column holding
/// one include at literal '0' with the remaining W-1 excludes at literal '1'.
/// Each trial draws fresh devices and offsets from stream `trial` of `seed`.
MarginReport margin_analysis(const AnalogConfig& config, std::size_t width, const device::VariationParams& variation,
                             std::size_t trials, std::uint64_t seed);

}  // namespace imbue::xbar
