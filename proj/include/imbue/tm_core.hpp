#pragma once

// Digital Tsetlin Machine reference: booleanization, clause evaluation,
// polarity-weighted class sums and argmax. This is the ground truth the
// crossbar simulation is checked against.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imbue/bit_vector.hpp"

namespace imbue::tm {

/// Literal vector of length K: K/2 feature bits followed by their complements.
class BoolSample {
 public:
  BoolSample() = default;

  /// Builds the literal vector from feature bits by appending complements.
  static BoolSample from_feature_bits(std::span<const std::uint8_t> bits);

  /// Wraps an existing literal vector. Throws ConfigError if K is odd or the
  /// second half is not the complement of the first.
  static BoolSample from_literals(BitVector literals);

  const BitVector& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  std::size_t feature_bit_count() const { return literals_.size() / 2; }
  bool literal(std::size_t k) const { return literals_.get(k); }

  friend bool operator==(const BoolSample&, const BoolSample&) = default;

 private:
  explicit BoolSample(BitVector literals) : literals_(std::move(literals)) {}
  BitVector literals_;
};

/// Per-feature ascending thresholds for thermometer encoding.
class Thresholds {
 public:
  Thresholds() = default;
  /// Throws ConfigError unless every list is non-empty and strictly increasing.
  explicit Thresholds(std::vector<std::vector<double>> per_feature);

  std::size_t feature_count() const { return per_feature_.size(); }
  /// Total number of feature bits (sum of list lengths).
  std::size_t bit_count() const;
  const std::vector<std::vector<double>>& per_feature() const { return per_feature_; }

  friend bool operator==(const Thresholds&, const Thresholds&) = default;

 private:
  std::vector<std::vector<double>> per_feature_;
};

/// Thermometer booleanization: bit = 1 iff raw >= threshold, one bit per
/// threshold, then complements appended.
BoolSample booleanize(std::span<const double> raw, const Thresholds& thresholds);

/// Derives `bits_per_feature` thresholds per feature from empirical quantiles
/// of `rows`. Duplicate quantiles are collapsed, so a constant feature gets a
/// single threshold.
Thresholds quantile_thresholds(std::span<const std::vector<double>> rows,
                               std::size_t bits_per_feature);

/// Output of a clause with no include actions.
enum class EmptyClause {
  kTrue,   // literal conjunction: empty clause outputs 1 (hardware behavior)
  kFalse,  // common software convention at inference time
};

/// clause = AND_k (literal_k OR NOT include_k).
bool clause_eval(const BoolSample& sample, const BitVector& actions,
                 EmptyClause empty = EmptyClause::kTrue);

enum class Polarity : std::int8_t { kNegative = -1, kPositive = 1 };

/// Trained TM: m classes, J clauses per class (J/2 of each polarity), K literals.
class TMModel {
 public:
  TMModel() = default;

  /// All-exclude model. Even clause indices are positive, odd negative.
  TMModel(std::size_t num_classes, std::size_t clauses_per_class, std::size_t literal_count);

  /// Validates shapes and the polarity balance; throws ConfigError.
  TMModel(std::size_t num_classes, std::size_t clauses_per_class, std::size_t literal_count,
          std::vector<BitVector> actions, std::vector<Polarity> polarity);

  std::size_t num_classes() const { return num_classes_; }
  std::size_t clauses_per_class() const { return clauses_per_class_; }
  std::size_t literal_count() const { return literal_count_; }
  std::size_t clause_count() const { return num_classes_ * clauses_per_class_; }
  std::size_t ta_cell_count() const { return clause_count() * literal_count_; }

  const BitVector& actions(std::size_t cls, std::size_t clause) const {
    return actions_[cls * clauses_per_class_ + clause];
  }
  Polarity polarity(std::size_t cls, std::size_t clause) const {
    return polarity_[cls * clauses_per_class_ + clause];
  }
  std::span<const BitVector> all_actions() const { return actions_; }
  std::span<const Polarity> all_polarities() const { return polarity_; }

  friend bool operator==(const TMModel&, const TMModel&) = default;

 private:
  std::size_t num_classes_ = 0;
  std::size_t clauses_per_class_ = 0;
  std::size_t literal_count_ = 0;
  std::vector<BitVector> actions_;
  std::vector<Polarity> polarity_;
};

using ClassSums = std::vector<int>;

ClassSums class_sums(const BoolSample& sample, const TMModel& model,
                     EmptyClause empty = EmptyClause::kTrue);

/// Argmax; ties go to the lowest class index.
std::size_t infer(std::span<const int> sums);
std::size_t infer(const BoolSample& sample, const TMModel& model,
                  EmptyClause empty = EmptyClause::kTrue);

struct IncludeStats {
  std::uint64_t includes = 0;
  std::uint64_t ta_cells = 0;
  double ratio = 0.0;  // includes / ta_cells
};

IncludeStats include_stats(const TMModel& model);
IncludeStats include_stats(std::uint64_t includes, std::uint64_t ta_cells);

}  // namespace imbue::tm
