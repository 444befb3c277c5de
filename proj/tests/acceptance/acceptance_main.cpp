// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "imbue/crossbar.hpp"
#include "imbue/dataset.hpp"
#include "imbue/device_model.hpp"
#include "imbue/energy.hpp"
#include "imbue/io.hpp"
#include "imbue/montecarlo.hpp"
#include "imbue/trainer.hpp"
#include "test_util.hpp"

using namespace imbue;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

tm::BoolSample sample_from_index(std::uint64_t x, std::size_t features) {
  std::vector<std::uint8_t> fb(features);
  for (std::size_t i = 0; i < features; ++i) fb[i] = (x >> i) & 1U;
  return tm::BoolSample::from_feature_bits(fb);
}

// 1. Crossbar inference with nominal devices equals the digital model.
Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> classes(1, 4), half_j(1, 8), features(1, 32);
  std::uniform_real_distribution<double> density(0.0, 0.3);
  Rng xrng(1);
  std::size_t models = 0, samples = 0, mismatches = 0;
  for (int t = 0; t < 24; ++t) {
    const std::size_t m = classes(rng);
    const std::size_t j = 2 * half_j(rng);
    const std::size_t f = t == 0 ? 32 : features(rng);  // always cover K = 64
    const auto model = testing::random_model(m, j, 2 * f, density(rng), rng);
    ++models;
    for (std::size_t w : {4, 8, 32}) {
      xbar::AnalogConfig c;
      c.column_width = w;
      const auto layout = xbar::map_model(model, w);
      const auto devices = xbar::nominal_devices(layout);
      const bool exhaustive = f <= 13;
      const std::uint64_t n = exhaustive ? (std::uint64_t{1} << f) : 10000;
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto s = exhaustive ? sample_from_index(i, f)
                                  : tm::BoolSample::from_feature_bits(testing::random_bits(f, rng));
        if (xbar::crossbar_predict(layout, devices, s, c, xrng) != testing::oracle_predict(model, s)) ++mismatches;
        ++samples;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {mismatches == 0 && secs < 60.0, std::to_string(models) + " models x W{4,8,32}, " + std::to_string(samples) +
                                              " samples, " + std::to_string(mismatches) + " mismatches, " +
                                              fmt("%.1f s", secs)};
}

// 2. Partial clause bit == NOT(exists include AND literal 0), W <= 10.
Outcome partial_brute_force() {
  std::mt19937_64 rng(77);
  std::size_t checked = 0, mismatches = 0;
  Rng xrng(2);
  for (std::size_t w = 1; w <= 10; ++w) {
    xbar::AnalogConfig c;
    c.column_width = w;
    const std::uint64_t space = std::uint64_t{1} << (2 * w);
    const bool sampled = space > (std::uint64_t{1} << 16);
    const std::uint64_t n = sampled ? (std::uint64_t{1} << 16) : space;
    // K = 2W so column 0 carries exactly the W feature literals and every
    // literal pattern is reachable.
    std::map<std::uint64_t, std::pair<xbar::CrossbarLayout, xbar::DeviceArray>> cache;
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t combo = sampled ? std::uniform_int_distribution<std::uint64_t>(0, space - 1)(rng) : i;
      const std::uint64_t a = combo & ((std::uint64_t{1} << w) - 1);
      const std::uint64_t x = combo >> w;
      auto it = cache.find(a);
      if (it == cache.end()) {
        std::vector<std::uint8_t> acts(2 * w, 0);
        for (std::size_t k = 0; k < w; ++k) acts[k] = (a >> k) & 1U;
        std::vector<BitVector> av{BitVector::from_bits(acts), BitVector(2 * w)};
        const tm::TMModel model(1, 2, 2 * w, av, {tm::Polarity::kPositive, tm::Polarity::kNegative});
        auto layout = xbar::map_model(model, w);
        auto devices = xbar::nominal_devices(layout);
        it = cache.emplace(a, std::make_pair(std::move(layout), std::move(devices))).first;
      }
      bool expected = true;
      for (std::size_t k = 0; k < w; ++k) {
        if (((a >> k) & 1U) && !((x >> k) & 1U)) expected = false;
      }
      const auto s = sample_from_index(x, w);
      if (xbar::partial_clause_eval(it->second.first, 0, s, it->second.second, c, xrng) != expected) ++mismatches;
      ++checked;
    }
  }
  return {mismatches == 0, "W=1..10, " + std::to_string(checked) + " (literal, action) patterns, " +
                               std::to_string(mismatches) + " mismatches"};
}

// 3. Margin arithmetic at W=32 and W=64.
Outcome margin_arithmetic() {
  // oracle: 100 Ohm x (76.07 uA - 32 x 1.89 uA)
  const double expected_mv = 100.0 * (76.07 - 32 * 1.89) * 1e-3;
  const double m32 = xbar::nominal_margin_v(32, 100.0) * 1e3;
  xbar::AnalogConfig c;
  const auto r64 = xbar::margin_analysis(c, 64, device::VariationParams::nominal(), 1, 1);
  const bool pass = std::abs(m32 - 1.559) <= 0.001 && std::abs(m32 - expected_mv) < 1e-9 && !r64.feasible;
  return {pass, "W=32 margin " + fmt("%.4f mV", m32) + "; W=64 margin " + fmt("%.3f mV", r64.nominal_margin_v * 1e3) +
                    (r64.feasible ? " (feasible?)" : " flagged infeasible")};
}

// 4. Noisy XOR energy per datapoint.
Outcome noisy_xor_energy() {
  std::mt19937_64 rng(48);
  // 12 clauses x 48 literals with exactly 48 includes spread at random
  std::vector<std::uint8_t> flat(576, 0);
  std::fill(flat.begin(), flat.begin() + 48, 1);
  std::shuffle(flat.begin(), flat.end(), rng);
  std::vector<BitVector> a;
  std::vector<tm::Polarity> p;
  for (std::size_t j = 0; j < 12; ++j) {
    a.push_back(BitVector::from_bits(std::span(flat).subspan(48 * j, 48)));
    p.push_back(j % 2 == 0 ? tm::Polarity::kPositive : tm::Polarity::kNegative);
  }
  const tm::TMModel model(2, 6, 48, a, p);
  const auto layout = xbar::map_model(model, 32);
  const auto devices = xbar::nominal_devices(layout);
  const xbar::AnalogConfig c;
  Rng xrng(3);
  EventCounts total;
  const std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = tm::BoolSample::from_feature_bits(testing::random_bits(24, rng));
    xbar::crossbar_predict(layout, devices, s, c, xrng, &total);
  }
  const double e_nj = energy::datapoint_energy(MeanEventCounts::from(total, n)) * 1e9;

  // Also report the reference-trained model on its own test data.
  const auto train = noisy_xor({5000, 24, 0.1, 11});
  const auto test = noisy_xor({2000, 24, 0.0, 12});
  const auto trained = tm::train_reference(train, 2, tm::TrainParams{});
  const auto tl = xbar::map_model(trained, 32);
  const auto td = xbar::nominal_devices(tl);
  EventCounts tc;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    hits += xbar::crossbar_predict(tl, td, test.samples[i], c, xrng, &tc) == test.labels[i];
  }
  const double t_nj = energy::datapoint_energy(MeanEventCounts::from(tc, static_cast<double>(test.size()))) * 1e9;
  const auto ts = tm::include_stats(trained);
  return {e_nj >= 0.01 && e_nj <= 0.03,
          "48-include model " + fmt("%.5f nJ", e_nj) + " over 10000 uniform inputs (target [0.01, 0.03]); trained model " +
              std::to_string(ts.includes) + " includes, " + fmt("%.5f nJ", t_nj) + ", accuracy " +
              fmt("%.2f%%", 100.0 * static_cast<double>(hits) / static_cast<double>(test.size()))};
}

// 5. TopJ and reduction factors from published aggregates.
Outcome metric_reproduction() {
  const double f_topj = energy::tops_per_joule(7840000, 23.66e-9);
  const double m_topj = energy::tops_per_joule(3136000, 13.9e-9);
  const double f_red = energy::compare_baseline(23.66e-9, 125.03e-9);
  const double m_red = energy::compare_baseline(13.9e-9, 50.01e-9);
  const bool pass = std::abs(f_topj - 331) <= 1 && std::abs(m_topj - 225.6) <= 0.5 && std::abs(f_red - 5.283) <= 0.002 &&
                    std::abs(m_red - 3.597) <= 0.002;
  return {pass, "F-MNIST TopJ " + fmt("%.2f", f_topj) + ", x" + fmt("%.4f", f_red) + "; MNIST TopJ " +
                    fmt("%.2f", m_topj) + ", x" + fmt("%.4f", m_red)};
}

// 6. Event energies at 35 ns.
Outcome event_energy_units() {
  const double read_fj = device::read_event_energy(false, true, 35.0) * 1e15;
  device::DeviceInstance d = device::DeviceInstance::nominal();
  const double prog_pj = device::program_cell(d, true, device::ProgramPulse::set(35.0)).energy_j * 1e12;
  // oracle: uW x ns = 1e-15 J
  const bool pass = std::abs(read_fj - 14.37 * 35.0) <= 0.01 && std::abs(read_fj - 502.95) <= 0.01 &&
                    std::abs(prog_pj - 7.53) <= 0.01;
  return {pass, "include x '0' read " + fmt("%.3f fJ", read_fj) + ", program-include " + fmt("%.4f pJ", prog_pj)};
}

// 7. D2D sampler range and mean.
Outcome d2d_sampler() {
  const auto v = device::VariationParams::paper_crossbar();
  Rng rng(stream_seed(7, 0));
  double hsum = 0, lsum = 0, hmin = 1e9, hmax = 0, lmin = 1e9, lmax = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto dev = device::sample_d2d(v, rng);
    hsum += dev.r_hrs_kohm();
    lsum += dev.r_lrs_kohm();
    hmin = std::min(hmin, dev.r_hrs_kohm());
    hmax = std::max(hmax, dev.r_hrs_kohm());
    lmin = std::min(lmin, dev.r_lrs_kohm());
    lmax = std::max(lmax, dev.r_lrs_kohm());
  }
  const double hm = hsum / n, lm = lsum / n;
  const bool pass = hmin >= 31 && hmax <= 155 && std::abs(hm / 65.56 - 1) <= 0.02 && lmin >= 1.55 && lmax <= 1.67 &&
                    std::abs(lm / 1.64 - 1) <= 0.01;
  return {pass, "HRS [" + fmt("%.2f", hmin) + ", " + fmt("%.2f", hmax) + "] mean " + fmt("%.3f", hm) + " kOhm; LRS [" +
                    fmt("%.4f", lmin) + ", " + fmt("%.4f", lmax) + "] mean " + fmt("%.4f", lm) + " kOhm"};
}

// 8. C2C walk step bounds over 1000 cycles.
Outcome c2c_walk() {
  mc::ExperimentSpec s;
  s.kind = mc::ExperimentKind::kC2C;
  s.cycles = 1000;
  s.seed = 8;
  const auto r = mc::run_c2c(s);
  std::size_t steps = 0, ok = 0;
  double worst_h = 0, worst_l = 0;
  for (std::size_t i = 1; i < r.hrs_series_kohm.size(); ++i) {
    const double dh = std::abs(r.hrs_series_kohm[i] / r.hrs_series_kohm[i - 1] - 1);
    const double dl = std::abs(r.lrs_series_kohm[i] / r.lrs_series_kohm[i - 1] - 1);
    worst_h = std::max(worst_h, dh);
    worst_l = std::max(worst_l, dl);
    ++steps;
    ok += (dh <= 0.05 + 1e-12 && dl <= 0.01 + 1e-12);
  }
  const bool pass = ok == steps && steps == 999 && r.hrs.stddev > 0 && r.lrs.stddev > 0;
  return {pass, std::to_string(ok) + "/" + std::to_string(steps) + " steps in bounds, worst HRS " +
                    fmt("%.2f%%", 100 * worst_h) + ", worst LRS " + fmt("%.2f%%", 100 * worst_l) + ", std HRS " +
                    fmt("%.3f", r.hrs.stddev) + " LRS " + fmt("%.4f", r.lrs.stddev) + " kOhm"};
}

// 9. Pulse sweep switching threshold and energy ordering.
Outcome pulse_sweep() {
  std::vector<double> d;
  for (int t = 5; t <= 100; t += 5) d.push_back(t);
  const auto rows = mc::run_pulse_sweep(d);
  double first = -1;
  bool threshold_ok = true, increasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].switched && first < 0) first = rows[i].duration_ns;
    threshold_ok = threshold_ok && rows[i].switched == (rows[i].duration_ns >= 35);
    if (i > 0) increasing = increasing && rows[i].energy_j > rows[i - 1].energy_j;
  }
  return {first == 35 && threshold_ok && increasing,
          "first switch at " + fmt("%.0f ns", first) + (increasing ? ", energy strictly increasing" : ", energy NOT increasing")};
}

// 10. Every command twice with the same seed, byte-identical outputs.
Outcome determinism() {
  std::size_t files = 0, differ = 0;
  std::vector<std::string> failed;
  auto run_all = [&](const fs::path& dir) {
    const std::string o = dir.string();
    std::vector<std::vector<std::string>> cmds = {
        {"--seed", "10", "--out", o, "generate", "--train-samples", "2000", "--test-samples", "500"},
        {"--seed", "10", "--out", o, "train", "--dataset", o + "/noisy_xor_train.csv", "--clauses", "12", "--epochs", "60"},
        {"--seed", "10", "--out", o, "simulate", "--model", o + "/model.json", "--dataset", o + "/noisy_xor_test.csv",
         "--trace", "3"},
        {"--seed", "10", "--out", o + "/var", "simulate", "--model", o + "/model.json", "--dataset",
         o + "/noisy_xor_test.csv", "--variation"},
        {"--seed", "10", "--out", o + "/oracle", "simulate", "--model", o + "/model.json", "--dataset",
         o + "/noisy_xor_test.csv", "--oracle"},
        {"--seed", "10", "--out", o + "/paper", "simulate", "--paper-aggregates"},
        {"--seed", "10", "--out", o + "/c2c", "montecarlo", "--kind", "c2c"},
        {"--seed", "10", "--out", o + "/d2d", "montecarlo", "--kind", "d2d", "--trials", "3"},
        {"--seed", "10", "--out", o + "/sweep", "montecarlo", "--kind", "pulse-sweep"},
        {"--seed", "10", "--out", o + "/margin", "montecarlo", "--kind", "margin", "--trials", "2000"},
        {"--seed", "10", "--out", o + "/acc", "montecarlo", "--kind", "accuracy", "--trials", "3", "--model",
         o + "/model.json", "--dataset", o + "/noisy_xor_test.csv"},
        {"--seed", "10", "--out", o + "/report", "report", "--input", o + "/paper/aggregate.csv", "--input",
         o + "/aggregate.csv", "--baselines", std::string(IMBUE_DATA_DIR) + "/baselines.csv"},
    };
    std::vector<int> codes;
    for (const auto& c : cmds) codes.push_back(testing::run_cli(c).code);
    return codes;
  };
  const auto a = testing::fresh_dir("det_a");
  const auto b = testing::fresh_dir("det_b");
  const auto ca = run_all(a);
  const auto cb = run_all(b);
  const bool all_ok = std::all_of(ca.begin(), ca.end(), [](int c) { return c == 0; }) && ca == cb;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a);
    ++files;
    if (!fs::exists(b / rel) || testing::slurp(e.path()) != testing::slurp(b / rel)) {
      ++differ;
      failed.push_back(rel.string());
    }
  }
  std::string detail = std::to_string(files) + " output files from 12 commands, " + std::to_string(differ) + " differ";
  if (!all_ok) detail += ", a command failed";
  for (const auto& f : failed) detail += " [" + f + "]";
  return {all_ok && differ == 0 && files > 0, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"partial-clause brute force", partial_brute_force},
      {"margin arithmetic", margin_arithmetic},
      {"noisy XOR energy", noisy_xor_energy},
      {"metric reproduction", metric_reproduction},
      {"event-energy units", event_energy_units},
      {"D2D sampler", d2d_sampler},
      {"C2C walk", c2c_walk},
      {"pulse sweep", pulse_sweep},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << "[" << (o.pass ? "PASS" : "FAIL") << "] " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
