#pragma once

// Behavioral 1T1R cell model. A cell stores one TA action as a resistive
// state: LRS = include, HRS = exclude. Reads apply a literal-dependent
// voltage and the cell contributes V/R to its column line.
//
// Units: voltages in V, resistances in kOhm, currents in uA, powers in uW,
// durations in ns, energies in J.

#include <array>
#include <cstdint>

#include "imbue/rng.hpp"

namespace imbue::device {

/// One row of the literal/action -> (voltage, resistance, current) table.
struct CellNominalRow {
  bool literal = false;
  bool include = false;
  double read_voltage_v = 0.0;
  double reported_resistance_kohm = 0.0;  // as tabulated (rounded)
  double current_ua = 0.0;

  /// V / I. Only meaningful for rows with a non-zero read voltage.
  double effective_resistance_kohm() const { return 1e3 * read_voltage_v / current_ua; }
};

/// Nominal read behavior of the 1T1R cell for all four (literal, action) pairs.
struct CellNominal {
  std::array<CellNominalRow, 4> rows{};

  const CellNominalRow& at(bool literal, bool include) const;

  static CellNominal paper_table();
};

/// Read voltages applied to the row lines per literal value.
struct ReadVoltages {
  double literal0_v = 0.2;
  double literal1_v = 0.0;
};

/// Sampled device. Resistance = anchor (device-to-device draw) x drift
/// (cycle-to-cycle multiplier, 1 on a fresh device).
struct DeviceInstance {
  double lrs_anchor_kohm = 0.0;
  double hrs_anchor_kohm = 0.0;
  double lrs_drift = 1.0;
  double hrs_drift = 1.0;
  bool include = false;  // currently stored action

  double r_lrs_kohm() const { return lrs_anchor_kohm * lrs_drift; }
  double r_hrs_kohm() const { return hrs_anchor_kohm * hrs_drift; }
  double resistance_kohm(bool include_state) const { return include_state ? r_lrs_kohm() : r_hrs_kohm(); }

  /// Throws DeviceModelError unless 0 < R_LRS < R_HRS.
  void validate() const;

  /// Device whose literal-'0' reads reproduce the nominal table currents exactly.
  static DeviceInstance nominal(const CellNominal& table = CellNominal::paper_table());

  friend bool operator==(const DeviceInstance&, const DeviceInstance&) = default;
};

/// Distribution of one resistive state.
struct StateDistribution {
  double mean_kohm = 0.0;
  double min_kohm = 0.0;
  double max_kohm = 0.0;
  double sigma_kohm = 0.0;  // spread of the underlying Gaussian before truncation
  double c2c_step = 0.0;    // max relative change per cycle
  double c2c_band = 0.0;    // max relative excursion of the drift from 1

  void validate(const char* name) const;
};

struct VariationParams {
  StateDistribution lrs;
  StateDistribution hrs;

  void validate() const;

  /// Bare-crossbar statistics: HRS 31..155 kOhm (mean 65.56), LRS 1.55..1.67
  /// kOhm (mean 1.64); C2C steps of 5% (HRS) and 1% (LRS). sigma = range / 6.
  static VariationParams paper_crossbar();

  /// The same relative spread, rescaled so the means sit at the nominal 1T1R
  /// effective resistances. Used for crossbar reads.
  static VariationParams paper_1t1r(const CellNominal& table = CellNominal::paper_table());

  /// Degenerate distributions at the nominal effective resistances.
  static VariationParams nominal(const CellNominal& table = CellNominal::paper_table());

  /// Multiplies every sigma, C2C step and C2C band by `factor`.
  VariationParams scaled(double factor) const;
};

/// Gaussian truncated to [min, max] whose location is solved so the
/// truncated mean equals the requested mean.
class TruncatedNormal {
 public:
  explicit TruncatedNormal(const StateDistribution& dist);

  double operator()(Rng& rng) const;
  double location() const { return location_; }
  /// Analytic mean of the truncated distribution.
  double mean() const;

 private:
  double location_ = 0.0;
  double sigma_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double fixed_ = 0.0;  // value returned when sigma == 0
};

class D2DSampler {
 public:
  explicit D2DSampler(const VariationParams& params);
  DeviceInstance operator()(Rng& rng) const;

 private:
  TruncatedNormal lrs_;
  TruncatedNormal hrs_;
};

/// Fresh device drawn from the device-to-device distributions.
DeviceInstance sample_d2d(const VariationParams& params, Rng& rng);

/// One cycle of cycle-to-cycle drift: each resistance moves by a factor
/// (1 +- u), u ~ U[0, step], sign equiprobable, clamped to the C2C band and to
/// the absolute range. A step that would break R_LRS < R_HRS is dropped.
DeviceInstance step_c2c(const DeviceInstance& device, const VariationParams& params, Rng& rng);

/// Static power per operation kind.
struct PowerTable {
  double program_exclude_uw = 54.54;
  double program_include_uw = 215.1;
  double include_literal0_uw = 14.37;
  double exclude_literal0_uw = 0.3772;
  double otherwise_uw = 0.0;

  double read_power_uw(bool literal, bool include) const;
  double program_power_uw(bool include) const { return include ? program_include_uw : program_exclude_uw; }
};

enum class PulseKind { kSet, kReset };

struct ProgramPulse {
  PulseKind kind = PulseKind::kSet;
  double amplitude_v = 1.0;
  double duration_ns = 35.0;

  static ProgramPulse set(double duration_ns = 35.0) { return {PulseKind::kSet, 1.0, duration_ns}; }
  static ProgramPulse reset(double duration_ns = 35.0) { return {PulseKind::kReset, -2.5, duration_ns}; }
};

struct ProgramEvent {
  bool switched = false;
  double energy_j = 0.0;
  double duration_s = 0.0;
};

struct ProgramOptions {
  double switching_threshold_ns = 35.0;
  PowerTable power;
};

/// Applies `pulse` to program `target_include`. SET programs include, RESET
/// programs exclude; anything else throws InvalidPulseError. The cell takes
/// the target state iff the pulse lasts at least the switching threshold.
/// Energy is the programming power times the pulse duration.
ProgramEvent program_cell(DeviceInstance& device, bool target_include, const ProgramPulse& pulse,
                          const ProgramOptions& options = {});

/// As above; on a successful switch the device also takes one C2C step.
ProgramEvent program_cell(DeviceInstance& device, bool target_include, const ProgramPulse& pulse,
                          const VariationParams& params, Rng& rng, const ProgramOptions& options = {});

/// Read current of a cell. With zero read voltage the table's residual
/// current is returned instead of Ohm's law.
double cell_current(bool literal, bool include, const DeviceInstance& device, const ReadVoltages& volts = {},
                    const CellNominal& table = CellNominal::paper_table());

/// Tabulated read current.
double cell_current(bool literal, bool include, const CellNominal& table);

/// Energy of one cell read lasting `t_read_ns`.
double read_event_energy(bool literal, bool include, double t_read_ns = 35.0, const PowerTable& power = {});

}  // namespace imbue::device
