#include "imbue/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "imbue/errors.hpp"
#include "json.hpp"

namespace imbue::io {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& origin, std::size_t line) { return origin + ":" + std::to_string(line) + ": "; }

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty()) throw ParseError(context + "expected a number, got '" + t + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw ParseError(context + "expected a non-negative integer, got '" + t + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_sig(double v, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": file not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << text;
}

// ---------------------------------------------------------------- model file

std::string actions_to_hex(const BitVector& actions) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string hex((actions.size() + 3) / 4, '0');
  for (std::size_t d = 0; d < hex.size(); ++d) {
    unsigned nib = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t k = 4 * d + b;
      if (k < actions.size() && actions.get(k)) nib |= 1U << b;
    }
    hex[d] = kDigits[nib];
  }
  return hex;
}

BitVector actions_from_hex(const std::string& hex, std::size_t literal_count) {
  if (hex.size() != (literal_count + 3) / 4) {
    throw ParseError("action string has " + std::to_string(hex.size()) + " hex digits, expected " +
                     std::to_string((literal_count + 3) / 4));
  }
  BitVector v(literal_count);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = hex[d];
    unsigned nib = 0;
    if (c >= '0' && c <= '9') {
      nib = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nib = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw ParseError(std::string("invalid hex digit '") + c + "' in action string");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t k = 4 * d + b;
      if ((nib >> b) & 1U) {
        if (k >= literal_count) throw ParseError("action string sets bits past the literal count");
        v.set(k, true);
      }
    }
  }
  return v;
}

std::string model_to_string(const ModelFile& file) {
  const auto& m = file.model;
  Json j;
  j["schema"] = kModelSchema;
  j["num_classes"] = m.num_classes();
  j["clauses_per_class"] = m.clauses_per_class();
  j["literal_count"] = m.literal_count();
  Json pol = Json::array();
  for (auto p : m.all_polarities()) pol.push_back(static_cast<int>(p));
  j["polarity"] = pol;
  Json act = Json::array();
  for (const auto& a : m.all_actions()) act.push_back(actions_to_hex(a));
  j["actions"] = act;
  if (file.thresholds) j["thresholds"] = file.thresholds->per_feature();
  return j.dump(1) + "\n";
}

ModelFile model_from_string(const std::string& text, const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  try {
    if (j.value("schema", std::string{}) != kModelSchema) {
      throw ParseError(origin + ": missing or unsupported schema tag (expected " + kModelSchema + ")");
    }
    const auto m = j.at("num_classes").get<std::size_t>();
    const auto jc = j.at("clauses_per_class").get<std::size_t>();
    const auto k = j.at("literal_count").get<std::size_t>();
    std::vector<tm::Polarity> pol;
    for (const auto& p : j.at("polarity")) {
      const int v = p.get<int>();
      if (v != 1 && v != -1) throw ParseError(origin + ": polarity entries must be +1 or -1");
      pol.push_back(static_cast<tm::Polarity>(v));
    }
    std::vector<BitVector> actions;
    for (const auto& a : j.at("actions")) actions.push_back(actions_from_hex(a.get<std::string>(), k));
    ModelFile f;
    f.model = tm::TMModel(m, jc, k, std::move(actions), std::move(pol));
    if (j.contains("thresholds")) {
      f.thresholds = tm::Thresholds(j.at("thresholds").get<std::vector<std::vector<double>>>());
    }
    return f;
  } catch (const Json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(origin, 0) == 0) throw;
    throw ParseError(origin + ": " + msg);
  }
}

void write_model(const std::filesystem::path& path, const ModelFile& file) { write_text(path, model_to_string(file)); }

ModelFile read_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError(path.string() + ": model not found");
  return model_from_string(read_text(path), path.string());
}

// -------------------------------------------------------------- dataset file

std::string dataset_to_string(const DatasetFile& file) {
  std::ostringstream out;
  const bool bits = file.kind == DatasetKind::kBits;
  out << kDatasetSchema << ' ' << (bits ? "bits" : "raw") << '\n';
  const std::size_t features = bits ? (file.bits.empty() ? 0 : file.bits.front().size())
                                    : (file.raw.rows.empty() ? 0 : file.raw.rows.front().size());
  out << "label";
  for (std::size_t f = 0; f < features; ++f) out << ",f" << f;
  out << '\n';
  for (std::size_t i = 0; i < file.labels.size(); ++i) {
    out << file.labels[i];
    if (bits) {
      for (auto b : file.bits[i]) out << ',' << static_cast<int>(b);
    } else {
      for (double v : file.raw.rows[i]) out << ',' << format_double(v);
    }
    out << '\n';
  }
  return out.str();
}

DatasetFile dataset_from_string(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 1;
  if (!std::getline(in, line)) throw ParseError(where(origin, 1) + "empty dataset file");
  line = trim(line);
  DatasetFile f;
  if (line == std::string(kDatasetSchema) + " bits") {
    f.kind = DatasetKind::kBits;
  } else if (line == std::string(kDatasetSchema) + " raw") {
    f.kind = DatasetKind::kRaw;
  } else {
    throw ParseError(where(origin, 1) + "expected '" + kDatasetSchema + " bits|raw'");
  }
  if (!std::getline(in, line)) throw ParseError(where(origin, 2) + "missing header row");
  ++n;
  const auto header = split(trim(line), ',');
  if (header.empty() || trim(header[0]) != "label") throw ParseError(where(origin, n) + "header must start with 'label'");
  const std::size_t features = header.size() - 1;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw ParseError(where(origin, n) + "expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    }
    f.labels.push_back(parse_uint(cells[0], where(origin, n)));
    if (f.kind == DatasetKind::kBits) {
      std::vector<std::uint8_t> bits(features);
      for (std::size_t i = 0; i < features; ++i) {
        const auto v = parse_uint(cells[i + 1], where(origin, n));
        if (v > 1) throw ParseError(where(origin, n) + "bit fields must be 0 or 1");
        bits[i] = static_cast<std::uint8_t>(v);
      }
      f.bits.push_back(std::move(bits));
    } else {
      std::vector<double> row(features);
      for (std::size_t i = 0; i < features; ++i) row[i] = parse_double(cells[i + 1], where(origin, n));
      f.raw.rows.push_back(std::move(row));
    }
  }
  f.raw.labels = f.labels;
  return f;
}

void write_dataset(const std::filesystem::path& path, const DatasetFile& file) {
  write_text(path, dataset_to_string(file));
}

DatasetFile read_dataset(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError(path.string() + ": dataset not found");
  return dataset_from_string(read_text(path), path.string());
}

DatasetFile dataset_from_labeled(const LabeledSet& set) {
  DatasetFile f;
  f.kind = DatasetKind::kBits;
  f.labels = set.labels;
  f.bits.reserve(set.size());
  for (const auto& s : set.samples) {
    auto all = s.literals().to_bits();
    all.resize(s.feature_bit_count());
    f.bits.push_back(std::move(all));
  }
  return f;
}

LabeledSet to_labeled(const DatasetFile& file, const std::optional<tm::Thresholds>& thresholds) {
  if (file.kind == DatasetKind::kBits) {
    LabeledSet out;
    out.labels = file.labels;
    out.samples.reserve(file.bits.size());
    for (const auto& b : file.bits) out.samples.push_back(tm::BoolSample::from_feature_bits(b));
    return out;
  }
  if (!thresholds) throw ConfigError("raw dataset needs booleanization thresholds");
  return booleanize_set(file.raw, *thresholds);
}

// ------------------------------------------------------------------- config

namespace {

using Ptree = boost::property_tree::ptree;

class Section {
 public:
  Section(const Ptree* tree, std::string name, std::string origin)
      : tree_(tree), name_(std::move(name)), origin_(std::move(origin)) {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (!value.empty()) throw ParseError(origin_ + ": nested key " + name_ + "." + key + " is not supported");
    }
  }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (tree_ == nullptr) return std::nullopt;
    auto v = tree_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  void number(const std::string& key, double& out) {
    if (auto t = text(key)) out = parse_double(*t, context(key));
  }
  void number(const std::string& key, std::optional<double>& out) {
    if (auto t = text(key)) out = parse_double(*t, context(key));
  }
  template <typename T>
  void integer(const std::string& key, T& out) {
    if (auto t = text(key)) out = static_cast<T>(parse_uint(*t, context(key)));
  }
  template <typename T>
  void integer(const std::string& key, std::optional<T>& out) {
    if (auto t = text(key)) out = static_cast<T>(parse_uint(*t, context(key)));
  }

  void reject_unknown() const {
    if (tree_ == nullptr) return;
    for (const auto& [key, value] : *tree_) {
      if (!used_.contains(key)) throw ConfigError(origin_ + ": unknown key " + name_ + "." + key);
    }
  }

  std::string context(const std::string& key) const { return origin_ + ": " + name_ + "." + key + ": "; }

 private:
  const Ptree* tree_;
  std::string name_;
  std::string origin_;
  std::set<std::string> used_;
};

void read_state(Section& s, const std::string& prefix, device::StateDistribution& d) {
  s.number(prefix + "_mean_kohm", d.mean_kohm);
  s.number(prefix + "_min_kohm", d.min_kohm);
  s.number(prefix + "_max_kohm", d.max_kohm);
  s.number(prefix + "_sigma_kohm", d.sigma_kohm);
  s.number(prefix + "_c2c_step", d.c2c_step);
  s.number(prefix + "_c2c_band", d.c2c_band);
}

}  // namespace

RunConfig config_from_string(const std::string& text, const std::string& origin) {
  Ptree root;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  static const std::set<std::string> kSections = {"Run",          "AnalogConfig", "VariationParams", "ScheduleConfig",
                                                  "EnergyTable", "ExperimentSpec", "Train"};
  for (const auto& [name, sub] : root) {
    if (sub.empty()) throw ConfigError(origin + ": key '" + name + "' must be inside a section");
    if (!kSections.contains(name)) throw ConfigError(origin + ": unknown section [" + name + "]");
  }
  auto section = [&](const std::string& name) {
    auto child = root.get_child_optional(name);
    return Section(child ? &*child : nullptr, name, origin);
  };

  RunConfig c;
  {
    auto s = section("Run");
    s.integer("seed", c.seed);
    if (auto v = s.text("model")) c.model_path = *v;
    if (auto v = s.text("dataset")) c.dataset_path = *v;
    if (auto v = s.text("out")) c.out_dir = *v;
    s.reject_unknown();
  }
  {
    auto s = section("AnalogConfig");
    auto& a = c.analog;
    s.number("v_literal0", a.volts.literal0_v);
    s.number("v_literal1", a.volts.literal1_v);
    s.number("r_sense_ohm", a.r_sense_ohm);
    s.number("ref_volt_v", a.ref_volt_v);
    s.integer("column_width", a.column_width);
    s.number("t_read_ns", a.t_read_ns);
    s.number("t_sense_ns", a.t_sense_ns);
    s.number("t_discharge_ns", a.t_discharge_ns);
    s.number("csa_offset_sigma_v", a.csa_offset_sigma_v);
    s.reject_unknown();
    if (a.column_width == 0) throw ConfigError(s.context("column_width") + "must be >= 1");
    if (!(a.r_sense_ohm > 0.0)) throw ConfigError(s.context("r_sense_ohm") + "must be positive");
    if (a.csa_offset_sigma_v < 0.0) throw ConfigError(s.context("csa_offset_sigma_v") + "must be non-negative");
    if (!(a.t_read_ns > 0.0)) throw ConfigError(s.context("t_read_ns") + "must be positive");
  }
  {
    auto s = section("VariationParams");
    std::optional<std::string> preset = s.text("preset");
    double scale = 1.0;
    s.number("scale", scale);
    device::VariationParams v;
    bool any = preset.has_value() || root.get_optional<std::string>("VariationParams.scale").has_value();
    if (!preset || *preset == "1t1r") {
      v = device::VariationParams::paper_1t1r();
    } else if (*preset == "crossbar") {
      v = device::VariationParams::paper_crossbar();
    } else if (*preset == "nominal") {
      v = device::VariationParams::nominal();
    } else {
      throw ConfigError(s.context("preset") + "expected 1t1r, crossbar or nominal");
    }
    read_state(s, "lrs", v.lrs);
    read_state(s, "hrs", v.hrs);
    s.reject_unknown();
    for (const char* k : {"lrs_mean_kohm", "lrs_min_kohm", "lrs_max_kohm", "lrs_sigma_kohm", "lrs_c2c_step",
                          "lrs_c2c_band", "hrs_mean_kohm", "hrs_min_kohm", "hrs_max_kohm", "hrs_sigma_kohm",
                          "hrs_c2c_step", "hrs_c2c_band"}) {
      if (root.get_optional<std::string>(std::string("VariationParams.") + k)) any = true;
    }
    if (scale < 0.0) throw ConfigError(s.context("scale") + "must be non-negative");
    if (any) {
      v = v.scaled(scale);
      try {
        v.validate();
      } catch (const ConfigError& e) {
        throw ConfigError(origin + ": VariationParams: " + e.what());
      }
      c.variation = v;
    }
  }
  {
    auto s = section("ScheduleConfig");
    s.integer("parallelism", c.schedule.parallelism);
    s.number("cycle_ns", c.schedule.cycle_ns);
    s.reject_unknown();
  }
  {
    auto s = section("EnergyTable");
    auto& p = c.energy.power;
    s.number("program_exclude_uw", p.program_exclude_uw);
    s.number("program_include_uw", p.program_include_uw);
    s.number("include_literal0_uw", p.include_literal0_uw);
    s.number("exclude_literal0_uw", p.exclude_literal0_uw);
    s.number("otherwise_uw", p.otherwise_uw);
    s.number("csa_energy_j", c.energy.csa_energy_j);
    s.number("literal_zero_fraction", c.literal_zero_fraction);
    s.reject_unknown();
  }
  c.energy.t_read_ns = c.analog.t_read_ns;
  c.energy.t_sense_ns = c.analog.t_sense_ns;
  c.energy.t_discharge_ns = c.analog.t_discharge_ns;
  try {
    c.energy.validate();
    c.schedule.validate(c.energy);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (c.literal_zero_fraction < 0.0 || c.literal_zero_fraction > 1.0) {
    throw ConfigError(origin + ": EnergyTable.literal_zero_fraction: must be in [0, 1]");
  }
  {
    auto s = section("ExperimentSpec");
    auto& e = c.experiment;
    if (auto k = s.text("kind")) e.kind = mc::parse_kind(*k);
    s.integer("trials", e.trials);
    s.integer("cycles", e.cycles);
    s.integer("rows", e.rows);
    s.integer("cols", e.cols);
    s.integer("bins", e.bins);
    s.integer("seed", e.seed);
    if (auto d = s.text("durations_ns")) {
      e.durations_ns.clear();
      for (const auto& part : split(*d, ',')) e.durations_ns.push_back(parse_double(part, s.context("durations_ns")));
    }
    s.reject_unknown();
  }
  c.experiment.analog = c.analog;
  c.experiment.variation = c.variation;
  if (!c.experiment.seed) c.experiment.seed = c.seed;
  {
    auto s = section("Train");
    auto& t = c.train;
    s.integer("clauses_total", c.clauses_total);
    s.integer("clauses_per_class", t.clauses_per_class);
    s.number("specificity", t.specificity);
    if (auto v = s.text("threshold")) t.threshold = static_cast<int>(parse_uint(*v, s.context("threshold")));
    if (auto v = s.text("states_per_action")) {
      t.states_per_action = static_cast<int>(parse_uint(*v, s.context("states_per_action")));
    }
    s.integer("epochs", t.epochs);
    s.integer("bits_per_feature", c.bits_per_feature);
    s.reject_unknown();
  }
  return c;
}

RunConfig read_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError(path.string() + ": config not found");
  return config_from_string(read_text(path), path.string());
}

// -------------------------------------------------------------- CSV exports

void write_layout_csv(std::ostream& out, const xbar::CrossbarLayout& layout) {
  out << "column_id,cell_slot,class,clause,partial,literal_index,action\n";
  for (std::size_t c = 0; c < layout.column_count(); ++c) {
    const auto& col = layout.column(c);
    for (std::size_t s = 0; s < col.size(); ++s) {
      const auto cell = layout.cell(c, s);
      out << c << ',' << s << ',' << cell.cls << ',' << cell.clause << ',' << col.partial << ',' << cell.literal << ','
          << (cell.include ? "include" : "exclude") << '\n';
    }
  }
}

void write_devices_csv(std::ostream& out, std::span<const device::DeviceInstance> devices) {
  out << "cell_id,r_lrs_kohm,r_hrs_kohm\n";
  for (std::size_t i = 0; i < devices.size(); ++i) {
    out << i << ',' << format_double(devices[i].r_lrs_kohm()) << ',' << format_double(devices[i].r_hrs_kohm()) << '\n';
  }
}

void write_trace(std::ostream& out, std::size_t index, const xbar::InferenceTrace& t) {
  auto bits = [&out](const char* name, const std::vector<std::uint8_t>& v) {
    out << name << ':';
    for (auto b : v) out << ' ' << static_cast<int>(b);
    out << '\n';
  };
  out << "datapoint " << index << '\n';
  out << "column_current_uA:";
  for (double c : t.column_current_ua) out << ' ' << format_sig(c, 9);
  out << '\n';
  bits("csa", t.csa_bits);
  bits("partial", t.partial_bits);
  bits("clause", t.clause_bits);
  out << "class_sums:";
  for (int s : t.class_sums) out << ' ' << s;
  out << "\npredicted: " << t.predicted << '\n';
  const auto& e = t.events;
  out << "events: include_lit0=" << e.include_literal0 << " exclude_lit0=" << e.exclude_literal0
      << " include_lit1=" << e.include_literal1 << " exclude_lit1=" << e.exclude_literal1
      << " csa=" << e.csa_evaluations << "\n\n";
}

void write_histogram_csv(std::ostream& out, const std::string& name, const mc::Histogram& h) {
  out << "series,bin,lower_kohm,upper_kohm,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << name << ',' << i << ',' << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ','
        << h.counts[i] << '\n';
  }
}

// ------------------------------------------------------------- aggregates

namespace {

constexpr const char* kAggregateHeader =
    "dataset,classes,clauses_total,ta_cells,includes,includes_pct,csas,columns,accuracy_pct,energy_nJ,latency_ns,"
    "topj_per_joule";

}  // namespace

void write_aggregate_csv(std::ostream& out, std::span<const energy::EnergyReport> reports) {
  out << kAggregateSchema << '\n' << kAggregateHeader << '\n';
  for (const auto& r : reports) {
    out << r.dataset << ',' << r.classes << ',' << r.clauses_total << ',' << r.ta_cells << ',' << r.includes << ','
        << format_fixed(100.0 * r.include_ratio(), 4) << ',' << r.csas << ',' << r.columns << ','
        << (r.accuracy ? format_fixed(100.0 * *r.accuracy, 4) : std::string{}) << ',' << format_sig(r.energy_j * 1e9, 12)
        << ',' << format_sig(r.latency_s * 1e9, 12) << ',' << format_fixed(r.tops_per_joule, 4) << '\n';
  }
}

std::vector<energy::EnergyReport> read_aggregate_csv(const std::filesystem::path& path) {
  const std::string origin = path.string();
  if (!std::filesystem::exists(path)) throw ConfigError(origin + ": aggregate file not found");
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line) || trim(line) != kAggregateSchema) {
    throw ParseError(where(origin, 1) + "expected '" + kAggregateSchema + "'");
  }
  ++n;
  if (!std::getline(in, line) || trim(line) != kAggregateHeader) {
    throw ParseError(where(origin, 2) + "unexpected header row");
  }
  ++n;
  std::vector<energy::EnergyReport> out;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw ParseError(where(origin, n) + "expected 12 fields, got " + std::to_string(f.size()));
    const auto ctx = where(origin, n);
    std::optional<double> acc;
    if (!trim(f[8]).empty()) acc = parse_double(f[8], ctx) / 100.0;
    try {
      out.push_back(energy::make_report(trim(f[0]), parse_uint(f[1], ctx), parse_uint(f[2], ctx), parse_uint(f[3], ctx),
                                        parse_uint(f[4], ctx), parse_uint(f[6], ctx), parse_uint(f[7], ctx),
                                        parse_double(f[9], ctx) * 1e-9, parse_double(f[10], ctx) * 1e-9, acc));
    } catch (const MetricError& e) {
      throw ParseError(ctx + e.what());
    }
  }
  return out;
}

std::vector<Baseline> read_baselines(const std::filesystem::path& path) {
  const std::string origin = path.string();
  if (!std::filesystem::exists(path)) throw ConfigError(origin + ": baseline file not found");
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t n = 0;
  bool header = false;
  std::vector<Baseline> out;
  while (std::getline(in, line)) {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      if (t != "dataset,system,metric,value,source") throw ParseError(where(origin, n) + "unexpected header row");
      header = true;
      continue;
    }
    const auto f = split(t, ',');
    if (f.size() != 5) throw ParseError(where(origin, n) + "expected 5 fields");
    Baseline b;
    b.dataset = trim(f[0]);
    b.system = trim(f[1]);
    const auto metric = trim(f[2]);
    const double v = parse_double(f[3], where(origin, n));
    if (metric == "energy_nJ") {
      b.metric = Baseline::Metric::kEnergy;
      b.value = v * 1e-9;
    } else if (metric == "topj_per_joule") {
      b.metric = Baseline::Metric::kTopsPerJoule;
      b.value = v;
    } else {
      throw ParseError(where(origin, n) + "metric must be energy_nJ or topj_per_joule");
    }
    if (!(b.value > 0.0)) throw ParseError(where(origin, n) + "baseline value must be positive");
    b.source = trim(f[4]);
    out.push_back(std::move(b));
  }
  if (!header) throw ParseError(where(origin, n) + "missing header row");
  return out;
}

}  // namespace imbue::io
