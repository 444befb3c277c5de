#include "imbue/dataset.hpp"

#include <algorithm>

#include "imbue/errors.hpp"
#include "imbue/rng.hpp"

namespace imbue {

std::size_t LabeledSet::num_classes() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

LabeledSet booleanize_set(const RawSet& raw, const tm::Thresholds& thresholds) {
  if (raw.rows.size() != raw.labels.size()) throw ConfigError("raw dataset rows and labels differ in length");
  LabeledSet out;
  out.samples.reserve(raw.rows.size());
  for (const auto& row : raw.rows) out.samples.push_back(tm::booleanize(row, thresholds));
  out.labels = raw.labels;
  return out;
}

LabeledSet noisy_xor(const NoisyXorParams& params) {
  if (params.features < 2) throw ConfigError("noisy XOR needs at least 2 features");
  if (params.label_noise < 0.0 || params.label_noise > 1.0) throw ConfigError("label noise must be in [0, 1]");
  Rng rng(params.seed);
  std::bernoulli_distribution flip(params.label_noise);
  LabeledSet out;
  out.samples.reserve(params.samples);
  out.labels.reserve(params.samples);
  std::vector<std::uint8_t> bits(params.features);
  for (std::size_t n = 0; n < params.samples; ++n) {
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
    std::size_t label = bits[0] ^ bits[1];
    if (params.label_noise > 0.0 && flip(rng)) label ^= 1U;
    out.samples.push_back(tm::BoolSample::from_feature_bits(bits));
    out.labels.push_back(label);
  }
  return out;
}

LabeledSet xor_exhaustive(std::size_t features) {
  if (features < 2 || features > 24) throw ConfigError("exhaustive XOR supports 2..24 features");
  LabeledSet out;
  const std::uint64_t total = std::uint64_t{1} << features;
  out.samples.reserve(total);
  out.labels.reserve(total);
  std::vector<std::uint8_t> bits(features);
  for (std::uint64_t v = 0; v < total; ++v) {
    for (std::size_t f = 0; f < features; ++f) bits[f] = static_cast<std::uint8_t>((v >> f) & 1U);
    out.samples.push_back(tm::BoolSample::from_feature_bits(bits));
    out.labels.push_back(bits[0] ^ bits[1]);
  }
  return out;
}

}  // namespace imbue
