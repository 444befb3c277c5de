#pragma once

#include <cstddef>
#include <cstdint>

#include "imbue/dataset.hpp"
#include "imbue/tm_core.hpp"

namespace imbue::tm {

/// Hyperparameters for the vanilla Type I / Type II feedback trainer.
/// Defaults are tuned for the 2-class, 12-clause noisy XOR shape.
struct TrainParams {
  std::size_t clauses_per_class = 6;
  double specificity = 3.0;  // s
  int threshold = 6;         // T
  int states_per_action = 100;
  std::size_t epochs = 200;
  std::uint64_t seed = 1;
};

/// Trains a TM on booleanized data. Deterministic for a given seed. All TAs
/// start on the exclude side of the boundary, so zero epochs yields an
/// all-exclude model. Throws ConfigError on an empty dataset, odd clause
/// count, or non-positive hyperparameters.
TMModel train_reference(const LabeledSet& data, std::size_t num_classes, const TrainParams& params);

}  // namespace imbue::tm
