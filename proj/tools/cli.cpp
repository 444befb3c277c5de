#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "imbue/crossbar.hpp"
#include "imbue/dataset.hpp"
#include "imbue/energy.hpp"
#include "imbue/errors.hpp"
#include "imbue/io.hpp"
#include "imbue/montecarlo.hpp"
#include "imbue/trainer.hpp"

namespace imbue::cli {
namespace fs = std::filesystem;
namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

struct GenerateOptions {
  std::size_t train_samples = 5000;
  std::size_t test_samples = 5000;
  std::size_t features = 24;
  double noise = 0.1;
};

struct TrainOptions {
  std::string dataset;
  std::optional<std::size_t> clauses_total;
  std::optional<std::size_t> clauses_per_class;
  std::optional<std::size_t> epochs;
  std::optional<double> specificity;
  std::optional<int> threshold;
  std::optional<std::size_t> bits_per_feature;
  std::string model_name = "model.json";
};

struct SimulateOptions {
  std::string model;
  std::string dataset;
  std::string name;
  std::optional<std::size_t> column_width;
  std::optional<std::size_t> parallelism;
  bool oracle = false;
  bool paper_aggregates = false;
  bool variation = false;
  std::size_t trace = 0;
  std::string paper_table = std::string(IMBUE_DATA_DIR) + "/paper_aggregates.csv";
};

struct MonteCarloOptions {
  std::string kind;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> cycles;
  std::optional<std::size_t> column_width;
  std::string durations;
  std::string model;
  std::string dataset;
};

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string baselines;
};

io::RunConfig load_config(const GlobalOptions& g) {
  io::RunConfig c = g.config_path.empty() ? io::RunConfig{} : io::read_config(g.config_path);
  if (g.seed) {
    c.seed = g.seed;
    c.experiment.seed = g.seed;
  }
  return c;
}

fs::path out_dir(const GlobalOptions& g, const io::RunConfig& c) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (c.out_dir) return *c.out_dir;
  return ".";
}

std::string pick(const std::string& flag, const std::optional<std::string>& cfg, const char* what) {
  if (!flag.empty()) return flag;
  if (cfg) return *cfg;
  throw ConfigError(std::string("no ") + what + " given (use --" + what + " or [Run] " + what + ")");
}

std::uint64_t seed_or_default(const io::RunConfig& c) { return c.seed.value_or(1); }

// ------------------------------------------------------------------ generate

int cmd_generate(const GlobalOptions& g, const GenerateOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  const auto dir = out_dir(g, cfg);
  const auto seed = seed_or_default(cfg);
  const auto train = noisy_xor({o.train_samples, o.features, o.noise, stream_seed(seed, 0)});
  const auto test = noisy_xor({o.test_samples, o.features, 0.0, stream_seed(seed, 1)});
  io::write_dataset(dir / "noisy_xor_train.csv", io::dataset_from_labeled(train));
  io::write_dataset(dir / "noisy_xor_test.csv", io::dataset_from_labeled(test));
  out << "wrote " << (dir / "noisy_xor_train.csv").string() << " (" << train.size() << " samples, label noise "
      << o.noise << ")\n";
  out << "wrote " << (dir / "noisy_xor_test.csv").string() << " (" << test.size() << " samples, noise-free)\n";
  return kExitOk;
}

// --------------------------------------------------------------------- train

int cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  const auto dataset_path = pick(o.dataset, cfg.dataset_path, "dataset");
  const auto file = io::read_dataset(dataset_path);
  if (file.size() == 0) throw ConfigError(dataset_path + ": dataset is empty");

  std::optional<tm::Thresholds> thresholds;
  if (file.kind == io::DatasetKind::kRaw) {
    thresholds = tm::quantile_thresholds(file.raw.rows, o.bits_per_feature.value_or(cfg.bits_per_feature));
  }
  const auto data = io::to_labeled(file, thresholds);
  const std::size_t classes = std::max<std::size_t>(2, data.num_classes());

  tm::TrainParams p = cfg.train;
  p.seed = seed_or_default(cfg);
  if (o.clauses_per_class) p.clauses_per_class = *o.clauses_per_class;
  const auto total = o.clauses_total ? o.clauses_total : cfg.clauses_total;
  if (total) {
    if (*total % classes != 0) {
      throw ConfigError("clause total " + std::to_string(*total) + " is not divisible by " + std::to_string(classes) +
                        " classes");
    }
    p.clauses_per_class = *total / classes;
  }
  if (o.epochs) p.epochs = *o.epochs;
  if (o.specificity) p.specificity = *o.specificity;
  if (o.threshold) p.threshold = *o.threshold;

  io::ModelFile mf{tm::train_reference(data, classes, p), thresholds};
  const auto path = out_dir(g, cfg) / o.model_name;
  io::write_model(path, mf);

  const auto stats = tm::include_stats(mf.model);
  const double acc = accuracy(data, [&](const tm::BoolSample& s) { return tm::infer(s, mf.model); });
  out << "model: " << path.string() << '\n';
  out << "classes: " << mf.model.num_classes() << ", clauses total: " << mf.model.clause_count()
      << ", literals: " << mf.model.literal_count() << '\n';
  out << "TA cells: " << stats.ta_cells << ", includes: " << stats.includes << " ("
      << io::format_fixed(100.0 * stats.ratio, 2) << "%)\n";
  out << "training accuracy: " << io::format_fixed(100.0 * acc, 2) << "%\n";
  return kExitOk;
}

// ------------------------------------------------------------------ simulate

std::string dataset_name(const SimulateOptions& o, const std::string& dataset_path) {
  if (!o.name.empty()) return o.name;
  return fs::path(dataset_path).stem().string();
}

struct PaperRow {
  std::string dataset;
  std::size_t classes = 0;
  std::size_t clauses_total = 0;
  std::uint64_t ta_cells = 0;
  std::uint64_t includes = 0;
  std::uint64_t csas = 0;
  double accuracy_pct = 0.0;
  double energy_nj = 0.0;
};

std::vector<PaperRow> read_paper_rows(const std::string& path) {
  std::istringstream in(io::read_text(path));
  std::string line;
  std::vector<PaperRow> rows;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw ParseError(path + ":" + std::to_string(n) + ": expected 8 fields");
    try {
      rows.push_back({f[0], std::stoul(f[1]), std::stoul(f[2]), std::stoull(f[3]), std::stoull(f[4]), std::stoull(f[5]),
                      std::stod(f[6]), std::stod(f[7])});
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(n) + ": malformed number");
    }
  }
  return rows;
}

int simulate_paper_aggregates(const GlobalOptions& g, const SimulateOptions& o, const io::RunConfig& cfg,
                              std::ostream& out) {
  const auto rows = read_paper_rows(o.paper_table);
  const std::size_t width = o.column_width.value_or(cfg.analog.column_width);
  auto schedule = cfg.schedule;
  if (o.parallelism) schedule.parallelism = *o.parallelism;
  std::vector<energy::EnergyReport> reports;
  for (const auto& r : rows) {
    const std::uint64_t literals = r.ta_cells / r.clauses_total;
    const std::uint64_t columns = r.clauses_total * ((literals + width - 1) / width);
    reports.push_back(energy::make_report(r.dataset, r.classes, r.clauses_total, r.ta_cells, r.includes, r.csas,
                                          columns, r.energy_nj * 1e-9, energy::datapoint_latency(columns, schedule),
                                          r.accuracy_pct / 100.0));
  }
  const auto dir = out_dir(g, cfg);
  std::ostringstream csv;
  io::write_aggregate_csv(csv, reports);
  io::write_text(dir / "aggregate.csv", csv.str());
  for (const auto& r : reports) {
    // Estimate from the include count alone, every cell read once.
    const auto counts = energy::analytic_counts(r.includes, r.ta_cells, r.csas, cfg.literal_zero_fraction);
    const double analytic = energy::datapoint_energy(counts, cfg.energy);
    out << r.dataset << ": energy/datapoint " << io::format_sig(r.energy_j * 1e9, 12) << " nJ (analytic, literal-0 "
        << "fraction " << io::format_sig(cfg.literal_zero_fraction, 6) << ": " << io::format_sig(analytic * 1e9, 6)
        << " nJ), TopJ^-1 " << io::format_fixed(r.tops_per_joule, 2) << ", latency "
        << io::format_sig(r.latency_s * 1e9, 12) << " ns\n";
  }
  out << "aggregate: " << (dir / "aggregate.csv").string() << '\n';
  return kExitOk;
}

int cmd_simulate(const GlobalOptions& g, const SimulateOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  if (o.paper_aggregates) return simulate_paper_aggregates(g, o, cfg, out);

  const auto model_path = pick(o.model, cfg.model_path, "model");
  const auto dataset_path = pick(o.dataset, cfg.dataset_path, "dataset");
  const auto mf = io::read_model(model_path);
  const auto data = io::to_labeled(io::read_dataset(dataset_path), mf.thresholds);
  for (const auto& s : data.samples) {
    if (s.size() != mf.model.literal_count()) {
      throw ConfigError("dataset has " + std::to_string(s.size()) + " literals, model expects " +
                        std::to_string(mf.model.literal_count()));
    }
  }
  const auto dir = out_dir(g, cfg);
  const auto name = dataset_name(o, dataset_path);

  if (o.oracle) {
    std::ostringstream csv;
    csv << "index,label,predicted\n";
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto pred = tm::infer(data.samples[i], mf.model);
      hits += pred == data.labels[i] ? 1 : 0;
      csv << i << ',' << data.labels[i] << ',' << pred << '\n';
    }
    io::write_text(dir / "oracle_predictions.csv", csv.str());
    const double acc = data.size() ? static_cast<double>(hits) / static_cast<double>(data.size()) : 0.0;
    out << "oracle accuracy: " << io::format_fixed(100.0 * acc, 2) << "% over " << data.size() << " datapoints\n";
    return kExitOk;
  }

  auto analog = cfg.analog;
  if (o.column_width) {
    analog.column_width = *o.column_width;
    if (!cfg.analog.ref_volt_v) analog.ref_volt_v.reset();
  }
  analog.validate();
  auto schedule = cfg.schedule;
  if (o.parallelism) schedule.parallelism = *o.parallelism;

  const auto layout = xbar::map_model(mf.model, analog.column_width);
  const auto seed = seed_or_default(cfg);
  Rng device_rng = make_stream(seed, 0);
  const bool varied = o.variation;
  const auto devices = varied ? xbar::sample_devices(layout, cfg.variation.value_or(device::VariationParams::paper_1t1r()),
                                                     device_rng)
                              : xbar::nominal_devices(layout);
  const bool must_match = !varied && analog.csa_offset_sigma_v == 0.0;

  Rng rng = make_stream(seed, 1);
  std::ostringstream per, traces;
  per << "index,label,predicted,oracle,include_lit0,exclude_lit0,include_lit1,exclude_lit1,csa_evals,energy_fJ\n";
  EventCounts total;
  std::size_t hits = 0;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto trace = xbar::crossbar_infer(layout, devices, data.samples[i], analog, rng);
    const auto oracle = tm::infer(data.samples[i], mf.model);
    if (trace.predicted != oracle) ++mismatches;
    hits += trace.predicted == data.labels[i] ? 1 : 0;
    total += trace.events;
    const auto& e = trace.events;
    per << i << ',' << data.labels[i] << ',' << trace.predicted << ',' << oracle << ',' << e.include_literal0 << ','
        << e.exclude_literal0 << ',' << e.include_literal1 << ',' << e.exclude_literal1 << ',' << e.csa_evaluations
        << ',' << io::format_sig(energy::datapoint_energy(e, cfg.energy) * 1e15, 12) << '\n';
    if (i < o.trace) io::write_trace(traces, i, trace);
  }
  if (must_match && mismatches != 0) {
    throw InvariantViolation(std::to_string(mismatches) +
                             " datapoints disagree with the digital oracle under nominal devices");
  }

  const double n = static_cast<double>(std::max<std::size_t>(1, data.size()));
  const auto mean = MeanEventCounts::from(total, n);
  const double e = energy::datapoint_energy(mean, cfg.energy);
  const double latency = energy::datapoint_latency(layout, schedule);
  const double acc = data.size() ? static_cast<double>(hits) / n : 0.0;
  const auto stats = tm::include_stats(mf.model);

  io::write_text(dir / "per_datapoint.csv", per.str());
  {
    std::ostringstream lay;
    io::write_layout_csv(lay, layout);
    io::write_text(dir / "layout.csv", lay.str());
  }
  if (o.trace > 0) io::write_text(dir / "traces.txt", traces.str());

  out << "datapoints: " << data.size() << ", columns: " << layout.column_count() << " (W=" << analog.column_width
      << "), CSAs if packed: " << layout.packed_csa_count() << '\n';
  out << "accuracy: " << io::format_fixed(100.0 * acc, 2) << "% (oracle disagreements: " << mismatches << ")\n";
  if (e > 0.0) {
    const auto report = energy::make_report(name, mf.model.num_classes(), mf.model.clause_count(), stats.ta_cells,
                                            stats.includes, layout.packed_csa_count(), layout.column_count(), e,
                                            latency, acc);
    std::ostringstream agg;
    io::write_aggregate_csv(agg, std::span(&report, 1));
    io::write_text(dir / "aggregate.csv", agg.str());
    out << "energy/datapoint: " << io::format_sig(e * 1e9, 12) << " nJ\n";
    out << "latency/datapoint: " << io::format_sig(latency * 1e9, 12) << " ns\n";
    out << "TopJ^-1: " << io::format_fixed(report.tops_per_joule, 2) << '\n';
  } else {
    out << "energy/datapoint: 0 nJ (TopJ^-1 undefined; no aggregate written)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- montecarlo

std::vector<double> parse_durations(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("durations: '" + part + "' is not a number");
    }
  }
  return out;
}

void write_summary(std::ostream& out, const std::string& name, const mc::Histogram& h) {
  out << name << ": n=" << h.samples << " mean=" << io::format_fixed(h.mean, 4) << " kOhm min="
      << io::format_fixed(h.min, 4) << " max=" << io::format_fixed(h.max, 4) << " std=" << io::format_fixed(h.stddev, 4)
      << '\n';
}

int cmd_montecarlo(const GlobalOptions& g, const MonteCarloOptions& o, std::ostream& out) {
  auto cfg = load_config(g);
  auto spec = cfg.experiment;
  if (!o.kind.empty()) spec.kind = mc::parse_kind(o.kind);
  if (o.trials) spec.trials = *o.trials;
  if (o.cycles) spec.cycles = *o.cycles;
  if (o.column_width) {
    spec.analog.column_width = *o.column_width;
    if (!cfg.analog.ref_volt_v) spec.analog.ref_volt_v.reset();
  }
  if (!o.durations.empty()) spec.durations_ns = parse_durations(o.durations);
  if (spec.kind == mc::ExperimentKind::kPulseSweep && spec.durations_ns.empty()) {
    for (int d = 5; d <= 100; d += 5) spec.durations_ns.push_back(d);
  }
  if (spec.kind == mc::ExperimentKind::kMargin && spec.trials == 1 && !o.trials) spec.trials = 10000;
  spec.validate();

  const auto dir = out_dir(g, cfg);
  std::ostringstream summary;
  summary << "kind: " << mc::to_string(spec.kind) << "\nseed: " << *spec.seed << '\n';
  switch (spec.kind) {
    case mc::ExperimentKind::kC2C: {
      const auto r = mc::run_c2c(spec);
      std::ostringstream csv;
      io::write_histogram_csv(csv, "hrs", r.hrs);
      std::ostringstream csv2;
      io::write_histogram_csv(csv2, "lrs", r.lrs);
      io::write_text(dir / "c2c_hrs_hist.csv", csv.str());
      io::write_text(dir / "c2c_lrs_hist.csv", csv2.str());
      std::ostringstream series;
      series << "cycle,hrs_kohm,lrs_kohm\n";
      for (std::size_t i = 0; i < r.hrs_series_kohm.size(); ++i) {
        series << i << ',' << io::format_double(r.hrs_series_kohm[i]) << ',' << io::format_double(r.lrs_series_kohm[i])
               << '\n';
      }
      io::write_text(dir / "c2c_series.csv", series.str());
      summary << "cycles: " << spec.cycles << " x trials: " << spec.trials << '\n';
      write_summary(summary, "HRS", r.hrs);
      write_summary(summary, "LRS", r.lrs);
      break;
    }
    case mc::ExperimentKind::kD2D: {
      const auto r = mc::run_d2d(spec);
      std::ostringstream csv, csv2, devs;
      io::write_histogram_csv(csv, "hrs", r.hrs);
      io::write_histogram_csv(csv2, "lrs", r.lrs);
      io::write_text(dir / "d2d_hrs_hist.csv", csv.str());
      io::write_text(dir / "d2d_lrs_hist.csv", csv2.str());
      devs << "cell_id,r_lrs_kohm,r_hrs_kohm\n";
      for (std::size_t i = 0; i < r.hrs_kohm.size(); ++i) {
        devs << i << ',' << io::format_double(r.lrs_kohm[i]) << ',' << io::format_double(r.hrs_kohm[i]) << '\n';
      }
      io::write_text(dir / "d2d_devices.csv", devs.str());
      summary << "devices: " << spec.rows << "x" << spec.cols << " x trials: " << spec.trials << '\n';
      write_summary(summary, "HRS", r.hrs);
      write_summary(summary, "LRS", r.lrs);
      break;
    }
    case mc::ExperimentKind::kPulseSweep: {
      const auto rows = mc::run_pulse_sweep(spec.durations_ns, spec.resolved_variation());
      std::ostringstream csv;
      csv << "duration_ns,switched,energy_pJ,final_resistance_kohm\n";
      std::optional<double> first;
      for (const auto& r : rows) {
        csv << io::format_double(r.duration_ns) << ',' << (r.switched ? 1 : 0) << ','
            << io::format_sig(r.energy_j * 1e12, 12) << ',' << io::format_double(r.final_resistance_kohm) << '\n';
        if (r.switched && !first) first = r.duration_ns;
      }
      io::write_text(dir / "pulse_sweep.csv", csv.str());
      summary << "switching threshold: " << (first ? io::format_double(*first) + " ns" : std::string("not reached"))
              << '\n';
      break;
    }
    case mc::ExperimentKind::kMargin: {
      const auto r = mc::run_margin_stress(spec);
      const auto& m = r.report;
      std::ostringstream csv;
      csv << "column_width,reference_mV,nominal_margin_mV,feasible,trials,false_fires,false_fire_rate,"
             "false_fire_ci_low,false_fire_ci_high,misses,miss_rate,miss_ci_low,miss_ci_high\n";
      csv << m.width << ',' << io::format_sig(m.reference_v * 1e3, 12) << ',' << io::format_sig(m.nominal_margin_v * 1e3, 12)
          << ',' << (m.feasible ? 1 : 0) << ',' << m.trials << ',' << m.false_fires << ','
          << io::format_double(m.false_fire_rate()) << ',' << io::format_double(r.false_fire_ci.low) << ','
          << io::format_double(r.false_fire_ci.high) << ',' << m.misses << ',' << io::format_double(m.miss_rate()) << ','
          << io::format_double(r.miss_ci.low) << ',' << io::format_double(r.miss_ci.high) << '\n';
      io::write_text(dir / "margin.csv", csv.str());
      summary << "column width: " << m.width << "\nnominal margin: " << io::format_fixed(m.nominal_margin_v * 1e3, 4)
              << " mV" << (m.feasible ? "" : " (infeasible)") << "\nfalse-fire rate: "
              << io::format_fixed(m.false_fire_rate(), 6) << " [" << io::format_fixed(r.false_fire_ci.low, 6) << ", "
              << io::format_fixed(r.false_fire_ci.high, 6) << "]\nmiss rate: " << io::format_fixed(m.miss_rate(), 6)
              << " [" << io::format_fixed(r.miss_ci.low, 6) << ", " << io::format_fixed(r.miss_ci.high, 6) << "]\n";
      break;
    }
    case mc::ExperimentKind::kAccuracy: {
      const auto mf = io::read_model(pick(o.model, cfg.model_path, "model"));
      const auto data = io::to_labeled(io::read_dataset(pick(o.dataset, cfg.dataset_path, "dataset")), mf.thresholds);
      const auto r = mc::run_accuracy_under_variation(mf.model, data, spec);
      std::ostringstream csv;
      csv << "trial,accuracy_pct\n";
      for (std::size_t t = 0; t < r.trial_accuracy.size(); ++t) {
        csv << t << ',' << io::format_fixed(100.0 * r.trial_accuracy[t], 4) << '\n';
      }
      io::write_text(dir / "accuracy_trials.csv", csv.str());
      summary << "digital accuracy: " << io::format_fixed(100.0 * r.digital_accuracy, 4) << "%\nmean: "
              << io::format_fixed(100.0 * r.mean, 4) << "% min: " << io::format_fixed(100.0 * r.min, 4)
              << "% max: " << io::format_fixed(100.0 * r.max, 4) << "%\n";
      break;
    }
  }
  io::write_text(dir / "summary.txt", summary.str());
  out << summary.str();
  return kExitOk;
}

// -------------------------------------------------------------------- report

int cmd_report(const GlobalOptions& g, const ReportOptions& o, std::ostream& out) {
  const auto cfg = load_config(g);
  std::vector<energy::EnergyReport> rows;
  for (const auto& in : o.inputs) {
    auto r = io::read_aggregate_csv(in);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  std::vector<io::Baseline> baselines;
  if (!o.baselines.empty()) baselines = io::read_baselines(o.baselines);

  std::vector<std::string> energy_systems, topj_systems;
  for (const auto& b : baselines) {
    auto& list = b.metric == io::Baseline::Metric::kEnergy ? energy_systems : topj_systems;
    if (std::find(list.begin(), list.end(), b.system) == list.end()) list.push_back(b.system);
  }
  auto find = [&](const std::string& dataset, const std::string& system, io::Baseline::Metric m) -> const io::Baseline* {
    for (const auto& b : baselines) {
      if (b.dataset == dataset && b.system == system && b.metric == m) return &b;
    }
    return nullptr;
  };
  auto slug = [](std::string s) {
    for (auto& c : s) c = (c == ' ' || c == '-') ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };

  std::ostringstream csv;
  csv << "dataset,classes,clauses_total,ta_cells,includes,includes_pct,csas,accuracy_pct,energy_nJ,topj_per_joule";
  for (const auto& s : energy_systems) csv << ',' << slug(s) << "_energy_nJ," << slug(s) << "_reduction_x";
  for (const auto& s : topj_systems) csv << ',' << slug(s) << "_topj_per_joule,vs_" << slug(s) << "_x";
  csv << '\n';
  for (const auto& r : rows) {
    csv << r.dataset << ',' << r.classes << ',' << r.clauses_total << ',' << r.ta_cells << ',' << r.includes << ','
        << io::format_fixed(100.0 * r.include_ratio(), 2) << ',' << r.csas << ','
        << (r.accuracy ? io::format_fixed(100.0 * *r.accuracy, 2) : std::string{}) << ','
        << io::format_sig(r.energy_j * 1e9, 12) << ',' << io::format_fixed(r.tops_per_joule, 2);
    for (const auto& s : energy_systems) {
      if (const auto* b = find(r.dataset, s, io::Baseline::Metric::kEnergy)) {
        csv << ',' << io::format_sig(b->value * 1e9, 12) << ','
            << io::format_fixed(energy::compare_baseline(r.energy_j, b->value), 3);
      } else {
        csv << ",,";
      }
    }
    for (const auto& s : topj_systems) {
      if (const auto* b = find(r.dataset, s, io::Baseline::Metric::kTopsPerJoule)) {
        csv << ',' << io::format_fixed(b->value, 2) << ',' << io::format_fixed(r.tops_per_joule / b->value, 2);
      } else {
        csv << ",,";
      }
    }
    csv << '\n';
  }
  const auto dir = out_dir(g, cfg);
  io::write_text(dir / "report.csv", csv.str());
  out << csv.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"In-memory Tsetlin Machine inference simulator", "imbue"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "INI run configuration");
  app.add_option("--seed", g.seed, "Seed for every random stream");
  app.add_option("--out", g.out_dir, "Output directory");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write noisy XOR train/test datasets");
  generate->add_option("--train-samples", gen.train_samples);
  generate->add_option("--test-samples", gen.test_samples);
  generate->add_option("--features", gen.features, "Boolean features (first two are the XOR operands)");
  generate->add_option("--noise", gen.noise, "Label flip probability for the training set");

  TrainOptions tr;
  auto* train = app.add_subcommand("train", "Train a reference TM and write a model file");
  train->add_option("--dataset", tr.dataset, "Dataset file");
  train->add_option("--clauses", tr.clauses_total, "Total clauses across all classes");
  train->add_option("--clauses-per-class", tr.clauses_per_class);
  train->add_option("--epochs", tr.epochs);
  train->add_option("--specificity", tr.specificity, "s");
  train->add_option("--threshold", tr.threshold, "T");
  train->add_option("--bits-per-feature", tr.bits_per_feature, "Thermometer bits for raw datasets");
  train->add_option("--model-name", tr.model_name, "Output file name inside --out");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run crossbar inference and estimate energy");
  simulate->add_option("--model", sim.model);
  simulate->add_option("--dataset", sim.dataset);
  simulate->add_option("--name", sim.name, "Dataset name for the aggregate row");
  simulate->add_option("--column-width", sim.column_width, "TA cells per partial-clause column");
  simulate->add_option("--parallelism", sim.parallelism, "Columns read per cycle (0 = all)");
  simulate->add_flag("--oracle", sim.oracle, "Digital TM inference only");
  simulate->add_flag("--paper-aggregates", sim.paper_aggregates, "Use published aggregate rows instead of a model");
  simulate->add_option("--paper-table", sim.paper_table, "Aggregate rows file for --paper-aggregates");
  simulate->add_flag("--variation", sim.variation, "Sample D2D devices instead of nominal ones");
  simulate->add_option("--trace", sim.trace, "Write traces for the first N datapoints");

  MonteCarloOptions mco;
  auto* montecarlo = app.add_subcommand("montecarlo", "Run a variation experiment");
  montecarlo->add_option("--kind", mco.kind, "c2c | d2d | pulse-sweep | margin | accuracy");
  montecarlo->add_option("--trials", mco.trials);
  montecarlo->add_option("--cycles", mco.cycles);
  montecarlo->add_option("--column-width", mco.column_width);
  montecarlo->add_option("--durations", mco.durations, "Comma-separated pulse durations in ns");
  montecarlo->add_option("--model", mco.model);
  montecarlo->add_option("--dataset", mco.dataset);

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Merge aggregate files into a comparison table");
  report->add_option("--input", rep.inputs, "Aggregate CSV (repeatable)")->required();
  report->add_option("--baselines", rep.baselines, "Baseline constants file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*generate) return cmd_generate(g, gen, out);
    if (*train) return cmd_train(g, tr, out);
    if (*simulate) return cmd_simulate(g, sim, out);
    if (*montecarlo) return cmd_montecarlo(g, mco, out);
    if (*report) return cmd_report(g, rep, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace imbue::cli
