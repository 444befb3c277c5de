#include "imbue/crossbar.hpp"

#include <string>

#include "imbue/errors.hpp"

namespace imbue::xbar {

double midpoint_reference_v(std::size_t width, double r_sense_ohm, const device::CellNominal& table) {
  const double i_exclude = table.at(false, false).current_ua;
  const double i_include = table.at(false, true).current_ua;
  return r_sense_ohm * 1e-6 * (static_cast<double>(width) * i_exclude + i_include) / 2.0;
}

double nominal_margin_v(std::size_t width, double r_sense_ohm, const device::CellNominal& table) {
  const double i_exclude = table.at(false, false).current_ua;
  const double i_include = table.at(false, true).current_ua;
  return r_sense_ohm * 1e-6 * (i_include - static_cast<double>(width) * i_exclude);
}

double AnalogConfig::reference_v(const device::CellNominal& table) const {
  return ref_volt_v ? *ref_volt_v : midpoint_reference_v(column_width, r_sense_ohm, table);
}

void AnalogConfig::validate(const device::CellNominal& table) const {
  if (column_width == 0) throw ConfigError("column width must be >= 1");
  if (!(r_sense_ohm > 0.0)) throw ConfigError("sense resistance must be positive");
  if (!(volts.literal0_v > 0.0) || volts.literal1_v < 0.0) throw ConfigError("read voltages are not physical");
  if (!(t_read_ns > 0.0) || !(t_sense_ns > 0.0) || t_discharge_ns < 0.0) throw ConfigError("timings must be positive");
  if (csa_offset_sigma_v < 0.0) throw ConfigError("CSA offset sigma must be non-negative");
  const double low = r_sense_ohm * 1e-6 * static_cast<double>(column_width) * table.at(false, false).current_ua;
  const double high = r_sense_ohm * 1e-6 * table.at(false, true).current_ua;
  const double ref = reference_v(table);
  if (!(ref > low && ref < high)) {
    throw ConfigError("reference voltage " + std::to_string(ref * 1e3) + " mV does not separate a " +
                      std::to_string(column_width) + "-cell all-exclude column (" + std::to_string(low * 1e3) +
                      " mV) from a single include (" + std::to_string(high * 1e3) + " mV)");
  }
}

std::span<const Column> CrossbarLayout::clause_columns(std::size_t cls, std::size_t clause) const {
  const std::size_t first = (cls * model_.clauses_per_class() + clause) * partials_;
  return std::span<const Column>(columns_).subspan(first, partials_);
}

CellRef CrossbarLayout::cell(std::size_t column, std::size_t slot) const {
  const auto& col = columns_.at(column);
  if (slot >= col.size()) throw LayoutError("slot " + std::to_string(slot) + " is outside column " + std::to_string(column));
  const std::size_t literal = col.literal_begin + slot;
  return {col.cls, col.clause, literal, model_.actions(col.cls, col.clause).get(literal)};
}

CrossbarLayout map_model(const tm::TMModel& model, std::size_t width) {
  if (width == 0) throw ConfigError("column width must be >= 1");
  CrossbarLayout layout;
  layout.model_ = model;
  layout.width_ = width;
  const std::size_t k = model.literal_count();
  layout.partials_ = (k + width - 1) / width;
  layout.columns_.reserve(model.clause_count() * layout.partials_);
  std::size_t cell = 0;
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    for (std::size_t j = 0; j < model.clauses_per_class(); ++j) {
      for (std::size_t p = 0; p < layout.partials_; ++p) {
        Column col{c, j, p, p * width, std::min(k, (p + 1) * width), cell};
        cell += col.size();
        layout.columns_.push_back(col);
      }
    }
  }
  return layout;
}

DeviceArray nominal_devices(const CrossbarLayout& layout, const device::CellNominal& table) {
  return DeviceArray(layout.cell_count(), device::DeviceInstance::nominal(table));
}

DeviceArray sample_devices(const CrossbarLayout& layout, const device::VariationParams& params, Rng& rng) {
  const device::D2DSampler sampler(params);
  DeviceArray out;
  out.reserve(layout.cell_count());
  for (std::size_t i = 0; i < layout.cell_count(); ++i) out.push_back(sampler(rng));
  return out;
}

double column_current(const CrossbarLayout& layout, std::size_t column, const tm::BoolSample& sample,
                      std::span<const device::DeviceInstance> devices, const AnalogConfig& config,
                      EventCounts* events) {
  const auto& col = layout.column(column);
  if (col.first_cell + col.size() > devices.size()) {
    throw LayoutError("no device for column " + std::to_string(column) + " (have " + std::to_string(devices.size()) +
                      " devices)");
  }
  if (sample.size() != layout.model().literal_count()) {
    throw ConfigError("sample has " + std::to_string(sample.size()) + " literals, layout expects " +
                      std::to_string(layout.model().literal_count()));
  }
  const auto& actions = layout.model().actions(col.cls, col.clause);
  double sum = 0.0;
  for (std::size_t s = 0; s < col.size(); ++s) {
    const std::size_t k = col.literal_begin + s;
    const bool literal = sample.literal(k);
    const bool include = actions.get(k);
    sum += device::cell_current(literal, include, devices[col.first_cell + s], config.volts);
    if (events != nullptr) {
      if (literal) {
        ++(include ? events->include_literal1 : events->exclude_literal1);
      } else {
        ++(include ? events->include_literal0 : events->exclude_literal0);
      }
    }
  }
  return sum;
}

bool sense(double current_ua, const AnalogConfig& config, double offset_v) {
  return current_ua * 1e-6 * config.r_sense_ohm + offset_v > config.reference_v();
}

namespace {

double draw_offset(const AnalogConfig& config, Rng& rng) {
  if (config.csa_offset_sigma_v == 0.0) return 0.0;
  std::normal_distribution<double> offset(0.0, config.csa_offset_sigma_v);
  return offset(rng);
}

}  // namespace

bool partial_clause_eval(const CrossbarLayout& layout, std::size_t column, const tm::BoolSample& sample,
                         std::span<const device::DeviceInstance> devices, const AnalogConfig& config, Rng& rng,
                         EventCounts* events) {
  const double current = column_current(layout, column, sample, devices, config, events);
  if (events != nullptr) ++events->csa_evaluations;
  return !sense(current, config, draw_offset(config, rng));
}

bool full_clause_eval(std::span<const std::uint8_t> partial_bits) {
  if (partial_bits.empty()) throw ConfigError("a clause needs at least one partial");
  for (auto b : partial_bits) {
    if (b == 0) return false;
  }
  return true;
}

InferenceTrace crossbar_infer(const CrossbarLayout& layout, std::span<const device::DeviceInstance> devices,
                              const tm::BoolSample& sample, const AnalogConfig& config, Rng& rng) {
  const auto& model = layout.model();
  const double ref = config.reference_v();
  InferenceTrace t;
  const std::size_t n = layout.column_count();
  t.column_current_ua.resize(n);
  t.csa_bits.resize(n);
  t.partial_bits.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    t.column_current_ua[c] = column_current(layout, c, sample, devices, config, &t.events);
    ++t.events.csa_evaluations;
    const bool fired = t.column_current_ua[c] * 1e-6 * config.r_sense_ohm + draw_offset(config, rng) > ref;
    t.csa_bits[c] = fired ? 1 : 0;
    t.partial_bits[c] = fired ? 0 : 1;
  }
  const std::size_t p = layout.partials_per_clause();
  t.clause_bits.resize(model.clause_count());
  t.class_sums.assign(model.num_classes(), 0);
  for (std::size_t i = 0; i < model.clause_count(); ++i) {
    const bool out = full_clause_eval(std::span<const std::uint8_t>(t.partial_bits).subspan(i * p, p));
    t.clause_bits[i] = out ? 1 : 0;
    const std::size_t cls = i / model.clauses_per_class();
    const std::size_t j = i % model.clauses_per_class();
    if (out) t.class_sums[cls] += static_cast<int>(model.polarity(cls, j));
  }
  t.predicted = tm::infer(t.class_sums);
  return t;
}

std::size_t crossbar_predict(const CrossbarLayout& layout, std::span<const device::DeviceInstance> devices,
                             const tm::BoolSample& sample, const AnalogConfig& config, Rng& rng,
                             EventCounts* events) {
  const auto& model = layout.model();
  const double ref = config.reference_v();
  const std::size_t p = layout.partials_per_clause();
  tm::ClassSums sums(model.num_classes(), 0);
  for (std::size_t i = 0; i < model.clause_count(); ++i) {
    bool out = true;
    for (std::size_t q = 0; q < p; ++q) {
      const std::size_t c = i * p + q;
      const double current = column_current(layout, c, sample, devices, config, events);
      if (events != nullptr) ++events->csa_evaluations;
      if (current * 1e-6 * config.r_sense_ohm + draw_offset(config, rng) > ref) out = false;
    }
    const std::size_t cls = i / model.clauses_per_class();
    if (out) sums[cls] += static_cast<int>(model.polarity(cls, i % model.clauses_per_class()));
  }
  return tm::infer(sums);
}

MarginReport margin_analysis(const AnalogConfig& config, std::size_t width, const device::VariationParams& variation,
                             std::size_t trials, std::uint64_t seed) {
  if (width == 0) throw ConfigError("column width must be >= 1");
  if (trials == 0) throw ConfigError("margin analysis needs at least one trial");
  const auto table = device::CellNominal::paper_table();
  MarginReport r;
  r.width = width;
  r.trials = trials;
  r.reference_v = config.ref_volt_v ? *config.ref_volt_v : midpoint_reference_v(width, config.r_sense_ohm, table);
  r.nominal_margin_v = nominal_margin_v(width, config.r_sense_ohm, table);
  r.feasible = r.nominal_margin_v > 0.0;

  const device::D2DSampler sampler(variation);
  const double v0 = config.volts.literal0_v;
  const double leak = device::cell_current(true, false, table);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_stream(seed, t);
    // All-exclude column, every literal '0'.
    double all_exclude = 0.0;
    for (std::size_t i = 0; i < width; ++i) all_exclude += 1e3 * v0 / sampler(rng).r_hrs_kohm();
    // One include at literal '0'; the rest exclude at literal '1'.
    const double one_include = 1e3 * v0 / sampler(rng).r_lrs_kohm() + static_cast<double>(width - 1) * leak;
    const double off_a = draw_offset(config, rng);
    const double off_b = draw_offset(config, rng);
    if (all_exclude * 1e-6 * config.r_sense_ohm + off_a > r.reference_v) ++r.false_fires;
    if (!(one_include * 1e-6 * config.r_sense_ohm + off_b > r.reference_v)) ++r.misses;
  }
  return r;
}

}  // namespace imbue::xbar
