#pragma once

#include <cstdint>

namespace imbue {

/// Per-datapoint tallies of energy-relevant events.
struct EventCounts {
  std::uint64_t include_literal0 = 0;
  std::uint64_t exclude_literal0 = 0;
  std::uint64_t include_literal1 = 0;
  std::uint64_t exclude_literal1 = 0;
  std::uint64_t csa_evaluations = 0;
  std::uint64_t program_include = 0;
  std::uint64_t program_exclude = 0;

  std::uint64_t cell_reads() const { return include_literal0 + exclude_literal0 + include_literal1 + exclude_literal1; }

  EventCounts& operator+=(const EventCounts& o) {
    include_literal0 += o.include_literal0;
    exclude_literal0 += o.exclude_literal0;
    include_literal1 += o.include_literal1;
    exclude_literal1 += o.exclude_literal1;
    csa_evaluations += o.csa_evaluations;
    program_include += o.program_include;
    program_exclude += o.program_exclude;
    return *this;
  }

  friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

/// Event counts averaged over many datapoints (fractional).
struct MeanEventCounts {
  double include_literal0 = 0.0;
  double exclude_literal0 = 0.0;
  double include_literal1 = 0.0;
  double exclude_literal1 = 0.0;
  double csa_evaluations = 0.0;
  double program_include = 0.0;
  double program_exclude = 0.0;

  static MeanEventCounts from(const EventCounts& c, double datapoints = 1.0) {
    return {static_cast<double>(c.include_literal0) / datapoints, static_cast<double>(c.exclude_literal0) / datapoints,
            static_cast<double>(c.include_literal1) / datapoints, static_cast<double>(c.exclude_literal1) / datapoints,
            static_cast<double>(c.csa_evaluations) / datapoints,  static_cast<double>(c.program_include) / datapoints,
            static_cast<double>(c.program_exclude) / datapoints};
  }
};

}  // namespace imbue
