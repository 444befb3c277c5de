#include "imbue/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "imbue/errors.hpp"
#include "imbue/parallel.hpp"
#include "imbue/rng.hpp"

namespace imbue::mc {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kC2C: return "c2c";
    case ExperimentKind::kD2D: return "d2d";
    case ExperimentKind::kPulseSweep: return "pulse-sweep";
    case ExperimentKind::kMargin: return "margin";
    case ExperimentKind::kAccuracy: return "accuracy";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : {ExperimentKind::kC2C, ExperimentKind::kD2D, ExperimentKind::kPulseSweep, ExperimentKind::kMargin,
                 ExperimentKind::kAccuracy}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + name + "' (expected c2c, d2d, pulse-sweep, margin or accuracy)");
}

device::VariationParams ExperimentSpec::resolved_variation() const {
  if (variation) return *variation;
  if (kind == ExperimentKind::kMargin || kind == ExperimentKind::kAccuracy) {
    return device::VariationParams::paper_1t1r();
  }
  return device::VariationParams::paper_crossbar();
}

void ExperimentSpec::validate() const {
  if (!seed) throw ConfigError("seed: an explicit seed is required");
  if (trials == 0) throw ConfigError("trials: must be >= 1");
  if (bins == 0) throw ConfigError("bins: must be >= 1");
  if (kind == ExperimentKind::kC2C && cycles == 0) throw ConfigError("cycles: must be >= 1");
  if (kind == ExperimentKind::kD2D && (rows == 0 || cols == 0)) throw ConfigError("rows/cols: must be >= 1");
  if (kind == ExperimentKind::kPulseSweep) {
    if (durations_ns.empty()) throw ConfigError("durations: must list at least one pulse duration");
    for (double d : durations_ns) {
      if (d < 0.0) throw ConfigError("durations: must be non-negative");
    }
  }
  if (kind == ExperimentKind::kMargin && analog.column_width == 0) throw ConfigError("column_width: must be >= 1");
  resolved_variation().validate();
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  Histogram h;
  h.samples = values.size();
  if (values.empty()) return h;
  h.min = *std::min_element(values.begin(), values.end());
  h.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  h.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - h.mean) * (v - h.mean);
  h.stddev = std::sqrt(ss / static_cast<double>(values.size()));

  if (h.max == h.min) {
    h.mean = h.min;
    h.stddev = 0.0;
    h.edges = {h.min, h.max};
    h.counts = {values.size()};
    return h;
  }
  h.edges.resize(bins + 1);
  const double width = (h.max - h.min) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = h.min + width * static_cast<double>(i);
  h.edges.back() = h.max;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - h.min) / width);
    ++h.counts[std::min(idx, bins - 1)];
  }
  return h;
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

namespace {

device::DeviceInstance fresh_device(const device::VariationParams& params) {
  device::DeviceInstance d;
  d.lrs_anchor_kohm = params.lrs.mean_kohm;
  d.hrs_anchor_kohm = params.hrs.mean_kohm;
  return d;
}

}  // namespace

C2CResult run_c2c(const ExperimentSpec& spec) {
  spec.validate();
  const auto params = spec.resolved_variation();
  C2CResult r;
  r.hrs_series_kohm.reserve(spec.trials * spec.cycles);
  r.lrs_series_kohm.reserve(spec.trials * spec.cycles);
  for (std::size_t t = 0; t < spec.trials; ++t) {
    Rng rng = make_stream(*spec.seed, t);
    auto dev = fresh_device(params);
    for (std::size_t c = 0; c < spec.cycles; ++c) {
      device::program_cell(dev, false, device::ProgramPulse::reset());
      r.hrs_series_kohm.push_back(dev.resistance_kohm(dev.include));
      device::program_cell(dev, true, device::ProgramPulse::set());
      r.lrs_series_kohm.push_back(dev.resistance_kohm(dev.include));
      const bool state = dev.include;
      dev = device::step_c2c(dev, params, rng);
      dev.include = state;
    }
  }
  r.hrs = make_histogram(r.hrs_series_kohm, spec.bins);
  r.lrs = make_histogram(r.lrs_series_kohm, spec.bins);
  return r;
}

D2DResult run_d2d(const ExperimentSpec& spec) {
  spec.validate();
  const device::D2DSampler sampler(spec.resolved_variation());
  const std::size_t per_trial = spec.rows * spec.cols;
  D2DResult r;
  r.hrs_kohm.resize(spec.trials * per_trial);
  r.lrs_kohm.resize(spec.trials * per_trial);
  for (std::size_t t = 0; t < spec.trials; ++t) {
    Rng rng = make_stream(*spec.seed, t);
    std::vector<device::DeviceInstance> devices;
    devices.reserve(per_trial);
    for (std::size_t i = 0; i < per_trial; ++i) devices.push_back(sampler(rng));
    for (std::size_t i = 0; i < per_trial; ++i) {
      device::program_cell(devices[i], true, device::ProgramPulse::set());
      r.lrs_kohm[t * per_trial + i] = devices[i].resistance_kohm(devices[i].include);
    }
    for (std::size_t i = 0; i < per_trial; ++i) {
      device::program_cell(devices[i], false, device::ProgramPulse::reset());
      r.hrs_kohm[t * per_trial + i] = devices[i].resistance_kohm(devices[i].include);
    }
  }
  r.hrs = make_histogram(r.hrs_kohm, spec.bins);
  r.lrs = make_histogram(r.lrs_kohm, spec.bins);
  return r;
}

std::vector<PulseSweepRow> run_pulse_sweep(std::span<const double> durations_ns, const device::VariationParams& params,
                                           const device::ProgramOptions& options) {
  if (durations_ns.empty()) throw ConfigError("pulse sweep needs at least one duration");
  std::vector<PulseSweepRow> rows;
  rows.reserve(durations_ns.size());
  for (double d : durations_ns) {
    if (d < 0.0) throw ConfigError("pulse duration must be non-negative");
    auto dev = fresh_device(params);
    PulseSweepRow row;
    row.duration_ns = d;
    if (d > 0.0) {
      const auto ev = device::program_cell(dev, true, device::ProgramPulse::set(d), options);
      row.switched = ev.switched;
      row.energy_j = ev.energy_j;
    }
    row.final_resistance_kohm = dev.resistance_kohm(dev.include);
    rows.push_back(row);
  }
  return rows;
}

MarginStressResult run_margin_stress(const ExperimentSpec& spec) {
  spec.validate();
  MarginStressResult r;
  r.report = xbar::margin_analysis(spec.analog, spec.analog.column_width, spec.resolved_variation(), spec.trials,
                                   *spec.seed);
  r.false_fire_ci = wilson_interval(r.report.false_fires, r.report.trials);
  r.miss_ci = wilson_interval(r.report.misses, r.report.trials);
  return r;
}

AccuracyResult run_accuracy_under_variation(const tm::TMModel& model, const LabeledSet& data,
                                            const ExperimentSpec& spec) {
  spec.validate();
  if (data.size() == 0) throw ConfigError("accuracy experiment needs a non-empty dataset");
  const auto params = spec.resolved_variation();
  const auto layout = xbar::map_model(model, spec.analog.column_width);
  AccuracyResult r;
  r.digital_accuracy = accuracy(data, [&](const tm::BoolSample& s) { return tm::infer(s, model); });
  r.trial_accuracy.resize(spec.trials);
  parallel_for(spec.trials, [&](std::size_t t) {
    Rng rng = make_stream(*spec.seed, t);
    const auto devices = xbar::sample_devices(layout, params, rng);
    r.trial_accuracy[t] = accuracy(
        data, [&](const tm::BoolSample& s) { return xbar::crossbar_predict(layout, devices, s, spec.analog, rng); });
  });
  r.min = *std::min_element(r.trial_accuracy.begin(), r.trial_accuracy.end());
  r.max = *std::max_element(r.trial_accuracy.begin(), r.trial_accuracy.end());
  double sum = 0.0;
  for (double a : r.trial_accuracy) sum += a;
  r.mean = sum / static_cast<double>(r.trial_accuracy.size());
  return r;
}

}  // namespace imbue::mc
