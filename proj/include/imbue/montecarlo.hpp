#pragma once

// Variation experiments: cycle-to-cycle walks, device-to-device spreads,
// programming pulse sweeps, CSA margin stress and end-to-end accuracy under
// variation. Every experiment is a pure function of its spec and seed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbue/crossbar.hpp"
#include "imbue/dataset.hpp"
#include "imbue/device_model.hpp"
#include "imbue/tm_core.hpp"

namespace imbue::mc {

enum class ExperimentKind { kC2C, kD2D, kPulseSweep, kMargin, kAccuracy };

std::string to_string(ExperimentKind kind);
/// Accepts c2c, d2d, pulse-sweep, margin, accuracy. Throws ConfigError.
ExperimentKind parse_kind(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kD2D;
  std::size_t trials = 1;
  std::size_t cycles = 1000;
  std::size_t rows = 10;
  std::size_t cols = 10;
  std::size_t bins = 20;
  std::vector<double> durations_ns;
  /// Unset: bare-crossbar statistics for c2c/d2d/pulse-sweep, 1T1R-scaled
  /// statistics for margin/accuracy.
  std::optional<device::VariationParams> variation;
  xbar::AnalogConfig analog;
  std::optional<std::uint64_t> seed;

  device::VariationParams resolved_variation() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

/// Equal-width histogram over [min, max]; a single bin when all values match.
Histogram make_histogram(std::span<const double> values, std::size_t bins);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion. Always contains k / n.
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.96);

struct C2CResult {
  Histogram hrs;
  Histogram lrs;
  std::vector<double> hrs_series_kohm;  // read after RESET, one per cycle
  std::vector<double> lrs_series_kohm;  // read after SET, one per cycle
};

/// Single device, `cycles` x (RESET, READ, SET, READ), one C2C step per cycle.
C2CResult run_c2c(const ExperimentSpec& spec);

struct D2DResult {
  Histogram hrs;
  Histogram lrs;
  std::vector<double> hrs_kohm;
  std::vector<double> lrs_kohm;
};

/// rows x cols fresh devices per trial: SET all and read, RESET all and read.
D2DResult run_d2d(const ExperimentSpec& spec);

struct PulseSweepRow {
  double duration_ns = 0.0;
  bool switched = false;
  double energy_j = 0.0;
  double final_resistance_kohm = 0.0;
};

/// SET pulse of each duration applied to a fresh HRS device. A zero duration
/// applies no pulse. Throws ConfigError on an empty list.
std::vector<PulseSweepRow> run_pulse_sweep(std::span<const double> durations_ns,
                                           const device::VariationParams& params = device::VariationParams::paper_crossbar(),
                                           const device::ProgramOptions& options = {});

struct MarginStressResult {
  xbar::MarginReport report;
  Interval false_fire_ci;
  Interval miss_ci;
};

MarginStressResult run_margin_stress(const ExperimentSpec& spec);

struct AccuracyResult {
  double digital_accuracy = 0.0;
  std::vector<double> trial_accuracy;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per trial: fresh D2D devices for every cell, full-dataset crossbar inference.
AccuracyResult run_accuracy_under_variation(const tm::TMModel& model, const LabeledSet& data,
                                            const ExperimentSpec& spec);

}  // namespace imbue::mc
