#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "imbue/tm_core.hpp"

namespace imbue {

/// Booleanized samples with integer labels.
struct LabeledSet {
  std::vector<tm::BoolSample> samples;
  std::vector<std::size_t> labels;

  std::size_t size() const { return samples.size(); }
  /// max(label) + 1, or 0 when empty.
  std::size_t num_classes() const;
};

/// Raw real-valued samples with integer labels, before booleanization.
struct RawSet {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
};

LabeledSet booleanize_set(const RawSet& raw, const tm::Thresholds& thresholds);

struct NoisyXorParams {
  std::size_t samples = 5000;
  std::size_t features = 24;  // first two are the XOR operands, the rest are noise
  double label_noise = 0.0;   // probability of flipping each label
  std::uint64_t seed = 1;
};

/// Uniform random feature bits; label = f0 XOR f1, optionally flipped.
LabeledSet noisy_xor(const NoisyXorParams& params);

/// Every one of the 2^features noise-free inputs, in counting order.
LabeledSet xor_exhaustive(std::size_t features);

/// Fraction of samples whose label matches `predict(sample)`.
template <typename Predict>
double accuracy(const LabeledSet& data, Predict&& predict) {
  if (data.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (predict(data.samples[i]) == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace imbue
