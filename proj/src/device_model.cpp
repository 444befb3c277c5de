#include "imbue/device_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imbue/errors.hpp"

namespace imbue::device {
namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Mean of N(mu, sigma) truncated to [lo, hi].
double truncated_mean(double mu, double sigma, double lo, double hi) {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  const double z = normal_cdf(b) - normal_cdf(a);
  if (z < 1e-300) return mu < lo ? lo : hi;
  return mu + sigma * (normal_pdf(a) - normal_pdf(b)) / z;
}

StateDistribution rescale(StateDistribution d, double factor) {
  d.mean_kohm *= factor;
  d.min_kohm *= factor;
  d.max_kohm *= factor;
  d.sigma_kohm *= factor;
  return d;
}

StateDistribution degenerate(double value_kohm) {
  return {value_kohm, value_kohm * 0.5, value_kohm * 1.5, 0.0, 0.0, 0.0};
}

}  // namespace

const CellNominalRow& CellNominal::at(bool literal, bool include) const {
  for (const auto& r : rows) {
    if (r.literal == literal && r.include == include) return r;
  }
  throw DeviceModelError("nominal cell table has no row for this literal/action pair");
}

CellNominal CellNominal::paper_table() {
  CellNominal t;
  t.rows = {{
      {false, true, 0.2, 2.5, 76.07},
      {false, false, 0.2, 105.8, 1.89},
      {true, true, 0.0, 7.6, 137e-9},
      {true, false, 0.0, 33.6, 9.9e-9},
  }};
  return t;
}

void DeviceInstance::validate() const {
  const double lrs = r_lrs_kohm();
  const double hrs = r_hrs_kohm();
  if (!(lrs > 0.0) || !(hrs > 0.0)) throw DeviceModelError("device resistance must be positive");
  if (!(lrs < hrs)) {
    throw DeviceModelError("device has R_LRS " + std::to_string(lrs) + " >= R_HRS " + std::to_string(hrs));
  }
}

DeviceInstance DeviceInstance::nominal(const CellNominal& table) {
  DeviceInstance d;
  d.lrs_anchor_kohm = table.at(false, true).effective_resistance_kohm();
  d.hrs_anchor_kohm = table.at(false, false).effective_resistance_kohm();
  return d;
}

void StateDistribution::validate(const char* name) const {
  const std::string n(name);
  if (!(min_kohm > 0.0)) throw ConfigError(n + " minimum resistance must be positive");
  if (!(min_kohm < max_kohm)) throw ConfigError(n + " range is degenerate (min >= max)");
  if (mean_kohm < min_kohm || mean_kohm > max_kohm) throw ConfigError(n + " mean lies outside its range");
  if (sigma_kohm < 0.0) throw ConfigError(n + " sigma must be non-negative");
  if (sigma_kohm > 0.0 && (mean_kohm == min_kohm || mean_kohm == max_kohm)) {
    throw ConfigError(n + " mean sits on a range bound; truncated Gaussian cannot reach it");
  }
  if (c2c_step < 0.0 || c2c_band < 0.0) throw ConfigError(n + " C2C bounds must be non-negative");
  if (c2c_step >= 1.0 || c2c_band >= 1.0) throw ConfigError(n + " C2C bounds must be below 1");
}

void VariationParams::validate() const {
  lrs.validate("LRS");
  hrs.validate("HRS");
  if (!(lrs.mean_kohm < hrs.mean_kohm)) throw ConfigError("LRS mean must be below HRS mean");
}

VariationParams VariationParams::paper_crossbar() {
  VariationParams p;
  p.lrs = {1.64, 1.55, 1.67, (1.67 - 1.55) / 6.0, 0.01, 0.01};
  p.hrs = {65.56, 31.0, 155.0, (155.0 - 31.0) / 6.0, 0.05, 0.05};
  return p;
}

VariationParams VariationParams::paper_1t1r(const CellNominal& table) {
  const auto bare = paper_crossbar();
  const double lrs = table.at(false, true).effective_resistance_kohm();
  const double hrs = table.at(false, false).effective_resistance_kohm();
  VariationParams p;
  p.lrs = rescale(bare.lrs, lrs / bare.lrs.mean_kohm);
  p.hrs = rescale(bare.hrs, hrs / bare.hrs.mean_kohm);
  return p;
}

VariationParams VariationParams::nominal(const CellNominal& table) {
  VariationParams p;
  p.lrs = degenerate(table.at(false, true).effective_resistance_kohm());
  p.hrs = degenerate(table.at(false, false).effective_resistance_kohm());
  return p;
}

VariationParams VariationParams::scaled(double factor) const {
  if (factor < 0.0) throw ConfigError("variation scale factor must be non-negative");
  VariationParams p = *this;
  for (auto* d : {&p.lrs, &p.hrs}) {
    d->sigma_kohm *= factor;
    d->c2c_step *= factor;
    d->c2c_band *= factor;
  }
  return p;
}

TruncatedNormal::TruncatedNormal(const StateDistribution& dist)
    : sigma_(dist.sigma_kohm), lo_(dist.min_kohm), hi_(dist.max_kohm), fixed_(dist.mean_kohm) {
  dist.validate("state");
  if (sigma_ == 0.0) {
    location_ = dist.mean_kohm;
    return;
  }
  // Truncated mean is increasing in the location; bisect for the target.
  double lo = dist.min_kohm - 10.0 * sigma_ - (hi_ - lo_);
  double hi = dist.max_kohm + 10.0 * sigma_ + (hi_ - lo_);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_mean(mid, sigma_, lo_, hi_) < dist.mean_kohm) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  location_ = 0.5 * (lo + hi);
  const double acceptance = normal_cdf((hi_ - location_) / sigma_) - normal_cdf((lo_ - location_) / sigma_);
  if (acceptance < 1e-6) throw ConfigError("truncated Gaussian keeps too little mass inside its range");
}

double TruncatedNormal::operator()(Rng& rng) const {
  if (sigma_ == 0.0) return fixed_;
  std::normal_distribution<double> normal(location_, sigma_);
  for (;;) {
    const double x = normal(rng);
    if (x >= lo_ && x <= hi_) return x;
  }
}

double TruncatedNormal::mean() const {
  if (sigma_ == 0.0) return fixed_;
  return truncated_mean(location_, sigma_, lo_, hi_);
}

D2DSampler::D2DSampler(const VariationParams& params)
    : lrs_((params.validate(), params.lrs)), hrs_(params.hrs) {}

DeviceInstance D2DSampler::operator()(Rng& rng) const {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    DeviceInstance d;
    d.lrs_anchor_kohm = lrs_(rng);
    d.hrs_anchor_kohm = hrs_(rng);
    if (d.lrs_anchor_kohm < d.hrs_anchor_kohm) return d;
  }
  throw DeviceModelError("LRS and HRS distributions overlap too much to draw an ordered device");
}

DeviceInstance sample_d2d(const VariationParams& params, Rng& rng) { return D2DSampler(params)(rng); }

DeviceInstance step_c2c(const DeviceInstance& device, const VariationParams& params, Rng& rng) {
  DeviceInstance next = device;
  auto step = [&rng](double drift, double anchor, const StateDistribution& dist) {
    std::uniform_real_distribution<double> mag(0.0, dist.c2c_step);
    const double u = mag(rng);
    const bool up = (rng() & 1U) != 0;
    if (dist.c2c_step == 0.0) return drift;
    double d = drift * (up ? 1.0 + u : 1.0 - u);
    d = std::clamp(d, 1.0 - dist.c2c_band, 1.0 + dist.c2c_band);
    return std::clamp(anchor * d, dist.min_kohm, dist.max_kohm) / anchor;
  };
  next.lrs_drift = step(device.lrs_drift, device.lrs_anchor_kohm, params.lrs);
  next.hrs_drift = step(device.hrs_drift, device.hrs_anchor_kohm, params.hrs);
  if (!(next.r_lrs_kohm() < next.r_hrs_kohm())) return device;
  return next;
}

double PowerTable::read_power_uw(bool literal, bool include) const {
  if (literal) return otherwise_uw;
  return include ? include_literal0_uw : exclude_literal0_uw;
}

ProgramEvent program_cell(DeviceInstance& device, bool target_include, const ProgramPulse& pulse,
                          const ProgramOptions& options) {
  if (!(pulse.duration_ns > 0.0)) throw InvalidPulseError("programming pulse duration must be positive");
  if (pulse.kind == PulseKind::kSet && !(pulse.amplitude_v > 0.0)) {
    throw InvalidPulseError("SET pulse needs a positive amplitude");
  }
  if (pulse.kind == PulseKind::kReset && !(pulse.amplitude_v < 0.0)) {
    throw InvalidPulseError("RESET pulse needs a negative amplitude");
  }
  const bool is_set = pulse.kind == PulseKind::kSet;
  if (is_set != target_include) {
    throw InvalidPulseError(target_include ? "programming include requires a SET pulse"
                                           : "programming exclude requires a RESET pulse");
  }
  ProgramEvent ev;
  ev.switched = pulse.duration_ns >= options.switching_threshold_ns;
  ev.duration_s = pulse.duration_ns * 1e-9;
  ev.energy_j = options.power.program_power_uw(target_include) * 1e-6 * ev.duration_s;
  if (ev.switched) device.include = target_include;
  return ev;
}

ProgramEvent program_cell(DeviceInstance& device, bool target_include, const ProgramPulse& pulse,
                          const VariationParams& params, Rng& rng, const ProgramOptions& options) {
  auto ev = program_cell(device, target_include, pulse, options);
  if (ev.switched) {
    const bool state = device.include;
    device = step_c2c(device, params, rng);
    device.include = state;
  }
  return ev;
}

double cell_current(bool literal, bool include, const DeviceInstance& device, const ReadVoltages& volts,
                    const CellNominal& table) {
  const double r = device.resistance_kohm(include);
  if (!(r > 0.0)) throw DeviceModelError("cell resistance must be positive");
  const double v = literal ? volts.literal1_v : volts.literal0_v;
  if (v == 0.0) return table.at(literal, include).current_ua;
  return 1e3 * v / r;
}

double cell_current(bool literal, bool include, const CellNominal& table) {
  return table.at(literal, include).current_ua;
}

double read_event_energy(bool literal, bool include, double t_read_ns, const PowerTable& power) {
  return power.read_power_uw(literal, include) * 1e-6 * t_read_ns * 1e-9;
}

}  // namespace imbue::device
