#pragma once

// Text file formats: model files (versioned JSON), dataset files (CSV with a
// schema line), run configuration (INI), and CSV exports.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imbue/crossbar.hpp"
#include "imbue/dataset.hpp"
#include "imbue/energy.hpp"
#include "imbue/montecarlo.hpp"
#include "imbue/tm_core.hpp"
#include "imbue/trainer.hpp"

namespace imbue::io {

inline constexpr const char* kModelSchema = "imbue-tm-model/1";
inline constexpr const char* kDatasetSchema = "# imbue-dataset/1";
inline constexpr const char* kAggregateSchema = "# imbue-aggregate/1";

/// Shortest round-trip decimal form.
std::string format_double(double v);
/// At most `digits` significant digits, trailing zeros dropped.
std::string format_sig(double v, int digits);
/// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

/// Hex encoding of an action vector: digit d holds literals 4d..4d+3, bit
/// (k mod 4) of the digit is literal k. Lower-case, ceil(K / 4) digits.
std::string actions_to_hex(const BitVector& actions);
BitVector actions_from_hex(const std::string& hex, std::size_t literal_count);

struct ModelFile {
  tm::TMModel model;
  std::optional<tm::Thresholds> thresholds;  // present when trained on raw data
};

std::string model_to_string(const ModelFile& file);
ModelFile model_from_string(const std::string& text, const std::string& origin = "<string>");
void write_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile read_model(const std::filesystem::path& path);

enum class DatasetKind { kBits, kRaw };

struct DatasetFile {
  DatasetKind kind = DatasetKind::kBits;
  std::vector<std::vector<std::uint8_t>> bits;  // feature bits (complements not stored)
  RawSet raw;
  std::vector<std::size_t> labels;

  std::size_t size() const { return labels.size(); }
};

/// Schema line, header `label,f0,...`, one record per line.
std::string dataset_to_string(const DatasetFile& file);
DatasetFile dataset_from_string(const std::string& text, const std::string& origin = "<string>");
void write_dataset(const std::filesystem::path& path, const DatasetFile& file);
DatasetFile read_dataset(const std::filesystem::path& path);

/// Feature bits of a booleanized set (drops the complement half).
DatasetFile dataset_from_labeled(const LabeledSet& set);
/// Booleanizes with the given thresholds when the file holds raw values.
LabeledSet to_labeled(const DatasetFile& file, const std::optional<tm::Thresholds>& thresholds);

/// Everything a CLI run can be configured with. Sections of the INI file:
/// [Run], [AnalogConfig], [VariationParams], [ScheduleConfig], [EnergyTable],
/// [ExperimentSpec], [Train].
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> model_path;
  std::optional<std::string> dataset_path;
  std::optional<std::string> out_dir;
  xbar::AnalogConfig analog;
  std::optional<device::VariationParams> variation;
  energy::ScheduleConfig schedule;
  energy::EnergyTable energy;
  mc::ExperimentSpec experiment;
  tm::TrainParams train;
  std::optional<std::size_t> clauses_total;
  std::size_t bits_per_feature = 4;
  double literal_zero_fraction = 0.5;
};

/// Parses an INI file. Unknown keys are errors; values are validated.
RunConfig read_config(const std::filesystem::path& path);
RunConfig config_from_string(const std::string& text, const std::string& origin = "<string>");

// CSV exports. Numeric columns carry their unit in the header.
void write_layout_csv(std::ostream& out, const xbar::CrossbarLayout& layout);
void write_devices_csv(std::ostream& out, std::span<const device::DeviceInstance> devices);
void write_trace(std::ostream& out, std::size_t index, const xbar::InferenceTrace& trace);
void write_histogram_csv(std::ostream& out, const std::string& name, const mc::Histogram& h);

/// Table-III-style aggregate rows.
void write_aggregate_csv(std::ostream& out, std::span<const energy::EnergyReport> reports);
std::vector<energy::EnergyReport> read_aggregate_csv(const std::filesystem::path& path);

/// Published reference figure for another system on a dataset.
struct Baseline {
  enum class Metric { kEnergy, kTopsPerJoule };
  std::string dataset;
  std::string system;
  Metric metric = Metric::kEnergy;
  double value = 0.0;  // joules per datapoint, or TopJ^-1
  std::string source;
};

std::vector<Baseline> read_baselines(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace imbue::io
