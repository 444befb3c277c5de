#include "imbue/tm_core.hpp"

#include <algorithm>
#include <string>

#include "imbue/errors.hpp"

namespace imbue::tm {

BoolSample BoolSample::from_feature_bits(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  BitVector literals(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    literals.set(i, bits[i] != 0);
    literals.set(i + n, bits[i] == 0);
  }
  return BoolSample(std::move(literals));
}

BoolSample BoolSample::from_literals(BitVector literals) {
  const std::size_t k = literals.size();
  if (k % 2 != 0) {
    throw ConfigError("literal vector length " + std::to_string(k) + " is odd");
  }
  const std::size_t half = k / 2;
  for (std::size_t i = 0; i < half; ++i) {
    if (literals.get(i) == literals.get(i + half)) {
      throw ConfigError("literal " + std::to_string(i + half) + " is not the complement of literal " +
                        std::to_string(i));
    }
  }
  return BoolSample(std::move(literals));
}

Thresholds::Thresholds(std::vector<std::vector<double>> per_feature)
    : per_feature_(std::move(per_feature)) {
  for (std::size_t f = 0; f < per_feature_.size(); ++f) {
    const auto& t = per_feature_[f];
    if (t.empty()) throw ConfigError("feature " + std::to_string(f) + " has no thresholds");
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) {
        throw ConfigError("thresholds of feature " + std::to_string(f) + " are not strictly increasing");
      }
    }
  }
}

std::size_t Thresholds::bit_count() const {
  std::size_t n = 0;
  for (const auto& t : per_feature_) n += t.size();
  return n;
}

BoolSample booleanize(std::span<const double> raw, const Thresholds& thresholds) {
  if (raw.size() != thresholds.feature_count()) {
    throw ConfigError("sample has " + std::to_string(raw.size()) + " features, thresholds expect " +
                      std::to_string(thresholds.feature_count()));
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(thresholds.bit_count());
  for (std::size_t f = 0; f < raw.size(); ++f) {
    for (double t : thresholds.per_feature()[f]) bits.push_back(raw[f] >= t ? 1 : 0);
  }
  return BoolSample::from_feature_bits(bits);
}

Thresholds quantile_thresholds(std::span<const std::vector<double>> rows, std::size_t bits_per_feature) {
  if (rows.empty()) throw ConfigError("cannot derive thresholds from an empty dataset");
  if (bits_per_feature == 0) throw ConfigError("bits_per_feature must be >= 1");
  const std::size_t features = rows.front().size();
  std::vector<std::vector<double>> out(features);
  std::vector<double> column(rows.size());
  for (std::size_t f = 0; f < features; ++f) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != features) throw ConfigError("ragged raw dataset at row " + std::to_string(r));
      column[r] = rows[r][f];
    }
    std::sort(column.begin(), column.end());
    auto& t = out[f];
    for (std::size_t i = 1; i <= bits_per_feature; ++i) {
      const auto idx = (i * column.size()) / (bits_per_feature + 1);
      const double q = column[std::min(idx, column.size() - 1)];
      if (t.empty() || q > t.back()) t.push_back(q);
    }
  }
  return Thresholds(std::move(out));
}

bool clause_eval(const BoolSample& sample, const BitVector& actions, EmptyClause empty) {
  if (sample.size() != actions.size()) {
    throw ConfigError("clause has " + std::to_string(actions.size()) + " actions, sample has " +
                      std::to_string(sample.size()) + " literals");
  }
  if (empty == EmptyClause::kFalse && actions.count() == 0) return false;
  return !actions.any_set_where_clear(sample.literals());
}

TMModel::TMModel(std::size_t num_classes, std::size_t clauses_per_class, std::size_t literal_count)
    : TMModel(num_classes, clauses_per_class, literal_count,
              std::vector<BitVector>(num_classes * clauses_per_class, BitVector(literal_count)), [&] {
                std::vector<Polarity> p(num_classes * clauses_per_class);
                for (std::size_t i = 0; i < p.size(); ++i) {
                  p[i] = (i % clauses_per_class) % 2 == 0 ? Polarity::kPositive : Polarity::kNegative;
                }
                return p;
              }()) {}

TMModel::TMModel(std::size_t num_classes, std::size_t clauses_per_class, std::size_t literal_count,
                 std::vector<BitVector> actions, std::vector<Polarity> polarity)
    : num_classes_(num_classes),
      clauses_per_class_(clauses_per_class),
      literal_count_(literal_count),
      actions_(std::move(actions)),
      polarity_(std::move(polarity)) {
  if (num_classes_ == 0) throw ConfigError("model needs at least one class");
  if (clauses_per_class_ == 0 || clauses_per_class_ % 2 != 0) {
    throw ConfigError("clauses per class must be even and positive, got " + std::to_string(clauses_per_class_));
  }
  if (literal_count_ == 0 || literal_count_ % 2 != 0) {
    throw ConfigError("literal count must be even and positive, got " + std::to_string(literal_count_));
  }
  const std::size_t n = num_classes_ * clauses_per_class_;
  if (actions_.size() != n || polarity_.size() != n) {
    throw ConfigError("model expects " + std::to_string(n) + " clauses");
  }
  for (const auto& a : actions_) {
    if (a.size() != literal_count_) throw ConfigError("action vector length does not match literal count");
  }
  for (std::size_t c = 0; c < num_classes_; ++c) {
    std::size_t positive = 0;
    for (std::size_t j = 0; j < clauses_per_class_; ++j) {
      const auto p = polarity_[c * clauses_per_class_ + j];
      if (p != Polarity::kPositive && p != Polarity::kNegative) throw ConfigError("invalid polarity value");
      if (p == Polarity::kPositive) ++positive;
    }
    if (2 * positive != clauses_per_class_) {
      throw ConfigError("class " + std::to_string(c) + " does not have equal positive and negative clauses");
    }
  }
}

ClassSums class_sums(const BoolSample& sample, const TMModel& model, EmptyClause empty) {
  if (sample.size() != model.literal_count()) {
    throw ConfigError("sample has " + std::to_string(sample.size()) + " literals, model expects " +
                      std::to_string(model.literal_count()));
  }
  ClassSums sums(model.num_classes(), 0);
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    for (std::size_t j = 0; j < model.clauses_per_class(); ++j) {
      if (clause_eval(sample, model.actions(c, j), empty)) sums[c] += static_cast<int>(model.polarity(c, j));
    }
  }
  return sums;
}

std::size_t infer(std::span<const int> sums) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < sums.size(); ++c) {
    if (sums[c] > sums[best]) best = c;
  }
  return best;
}

std::size_t infer(const BoolSample& sample, const TMModel& model, EmptyClause empty) {
  return infer(class_sums(sample, model, empty));
}

IncludeStats include_stats(const TMModel& model) {
  std::uint64_t includes = 0;
  for (const auto& a : model.all_actions()) includes += a.count();
  return include_stats(includes, model.ta_cell_count());
}

IncludeStats include_stats(std::uint64_t includes, std::uint64_t ta_cells) {
  IncludeStats s;
  s.includes = includes;
  s.ta_cells = ta_cells;
  s.ratio = ta_cells == 0 ? 0.0 : static_cast<double>(includes) / static_cast<double>(ta_cells);
  return s;
}

}  // namespace imbue::tm
