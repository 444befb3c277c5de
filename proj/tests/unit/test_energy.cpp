#include <cmath>

#include "doctest.h"
#include "imbue/energy.hpp"
#include "imbue/errors.hpp"

using namespace imbue;
using namespace imbue::energy;

namespace {
// hand-computed per-event energies, uW x ns -> fJ
constexpr double kIncludeZeroFj = 14.37 * 35.0;
constexpr double kExcludeZeroFj = 0.3772 * 35.0;
}  // namespace

TEST_CASE("datapoint energy from counts") {
  EventCounts c;
  CHECK(datapoint_energy(c) == 0.0);
  c.include_literal0 = 1;
  CHECK(datapoint_energy(c) * 1e15 == doctest::Approx(502.95).epsilon(1e-12));

  EventCounts noisy_xor;
  noisy_xor.include_literal0 = 24;
  noisy_xor.exclude_literal0 = 264;
  const double e = datapoint_energy(noisy_xor);
  CHECK(e * 1e15 == doctest::Approx(24 * kIncludeZeroFj + 264 * kExcludeZeroFj));
  CHECK(e * 1e12 == doctest::Approx(15.56).epsilon(0.002));
  CHECK(std::round(e * 1e9 * 100.0) / 100.0 == doctest::Approx(0.02));
}

TEST_CASE("energy is linear in each count") {
  EventCounts base;
  base.include_literal0 = 10;
  base.exclude_literal0 = 50;
  base.include_literal1 = 7;
  base.exclude_literal1 = 9;
  base.csa_evaluations = 4;
  EnergyTable t;
  t.csa_energy_j = 2e-15;
  const double e0 = datapoint_energy(base, t);

  EventCounts plus = base;
  ++plus.include_literal0;
  CHECK(datapoint_energy(plus, t) - e0 == doctest::Approx(kIncludeZeroFj * 1e-15).epsilon(1e-9));
  plus = base;
  ++plus.exclude_literal0;
  CHECK(datapoint_energy(plus, t) - e0 == doctest::Approx(kExcludeZeroFj * 1e-15).epsilon(1e-9));
  plus = base;
  ++plus.include_literal1;
  CHECK(datapoint_energy(plus, t) == e0);
  plus = base;
  ++plus.csa_evaluations;
  CHECK(datapoint_energy(plus, t) - e0 == doctest::Approx(2e-15).epsilon(1e-9));

  // mean counts agree with integer counts
  CHECK(datapoint_energy(MeanEventCounts::from(base), t) == doctest::Approx(e0));
}

TEST_CASE("include reads dominate") {
  EventCounts a, b;
  a.include_literal0 = 1;
  a.exclude_literal0 = 99;
  b.exclude_literal0 = 100;
  CHECK(datapoint_energy(a) > datapoint_energy(b));
  CHECK(kIncludeZeroFj / kExcludeZeroFj == doctest::Approx(38.1).epsilon(0.01));
}

TEST_CASE("latency schedule") {
  CHECK(datapoint_latency(24) * 1e9 == doctest::Approx(40.0));
  ScheduleConfig two;
  two.parallelism = 2;
  CHECK(datapoint_latency(24, two) * 1e9 == doctest::Approx(480.0));
  CHECK(datapoint_latency(0) == 0.0);
  double last = 1e300;
  for (std::size_t p = 1; p <= 30; ++p) {
    ScheduleConfig s;
    s.parallelism = p;
    const double l = datapoint_latency(24, s);
    CHECK(l <= last);
    last = l;
  }
  ScheduleConfig too_short;
  too_short.cycle_ns = 30.0;
  CHECK_THROWS_AS(too_short.validate(), ConfigError);
}

TEST_CASE("TopJ and baseline ratios") {
  CHECK(tops_per_joule(7840000, 23.66e-9) == doctest::Approx(331.36).epsilon(1e-4));
  CHECK(tops_per_joule(3136000, 13.9e-9) == doctest::Approx(225.6).epsilon(0.002));
  CHECK(tops_per_joule(1, 1.0) == doctest::Approx(1e-12));
  CHECK_THROWS_AS(tops_per_joule(10, 0.0), MetricError);

  CHECK(compare_baseline(13.9e-9, 50.01e-9) == doctest::Approx(3.5978).epsilon(1e-4));
  CHECK(compare_baseline(23.66e-9, 125.03e-9) == doctest::Approx(5.2844).epsilon(1e-4));
  CHECK(compare_baseline(1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(compare_baseline(0.0, 1.0), MetricError);
  CHECK_THROWS_AS(compare_baseline(1.0, -1.0), MetricError);
}

TEST_CASE("analytic counts") {
  const auto m = analytic_counts(48, 576, 18, 0.5);
  CHECK(m.include_literal0 == doctest::Approx(24.0));
  CHECK(m.exclude_literal0 == doctest::Approx(264.0));
  CHECK(m.include_literal1 + m.exclude_literal1 == doctest::Approx(288.0));
  CHECK(m.csa_evaluations == 18.0);
  CHECK_THROWS_AS(analytic_counts(10, 5, 1), ConfigError);
  CHECK_THROWS_AS(analytic_counts(1, 5, 1, 1.5), ConfigError);
}

TEST_CASE("report rows") {
  const auto r = make_report("fmnist", 10, 5000, 7840000, 25742, 245000, 245000, 23.66e-9, 40e-9, 0.8767);
  CHECK(r.tops_per_joule == doctest::Approx(331.36).epsilon(1e-4));
  CHECK(100.0 * r.include_ratio() == doctest::Approx(0.328).epsilon(0.01));
}

TEST_CASE("energy table validation") {
  EnergyTable t;
  CHECK_NOTHROW(t.validate());
  t.power.exclude_literal0_uw = -1.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = EnergyTable{};
  t.power.exclude_literal0_uw = 20.0;  // exclude read dearer than include read
  CHECK_THROWS_AS(t.validate(), ConfigError);
}
