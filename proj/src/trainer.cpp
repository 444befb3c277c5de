#include "imbue/trainer.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "imbue/errors.hpp"
#include "imbue/rng.hpp"

namespace imbue::tm {
namespace {

class Trainer {
 public:
  Trainer(std::size_t classes, std::size_t clauses, std::size_t literals, const TrainParams& p)
      : classes_(classes),
        clauses_(clauses),
        literals_(literals),
        params_(p),
        states_(classes * clauses * literals, p.states_per_action),
        rng_(p.seed) {}

  void update(const BoolSample& x, std::size_t target) {
    feedback(x, target, true);
    if (classes_ < 2) return;
    std::uniform_int_distribution<std::size_t> other(0, classes_ - 2);
    std::size_t q = other(rng_);
    if (q >= target) ++q;
    feedback(x, q, false);
  }

  TMModel model() const {
    std::vector<BitVector> actions(classes_ * clauses_, BitVector(literals_));
    std::vector<Polarity> polarity(classes_ * clauses_);
    for (std::size_t i = 0; i < classes_ * clauses_; ++i) {
      for (std::size_t k = 0; k < literals_; ++k) actions[i].set(k, include(i, k));
      polarity[i] = positive(i % clauses_) ? Polarity::kPositive : Polarity::kNegative;
    }
    return TMModel(classes_, clauses_, literals_, std::move(actions), std::move(polarity));
  }

  Rng& rng() { return rng_; }

 private:
  static bool positive(std::size_t clause) { return clause % 2 == 0; }

  int& state(std::size_t clause_id, std::size_t k) { return states_[clause_id * literals_ + k]; }
  bool include(std::size_t clause_id, std::size_t k) const {
    return states_[clause_id * literals_ + k] > params_.states_per_action;
  }

  bool clause_output(std::size_t clause_id, const BoolSample& x) const {
    for (std::size_t k = 0; k < literals_; ++k) {
      if (include(clause_id, k) && !x.literal(k)) return false;
    }
    return true;
  }

  bool chance(double p) { return std::generate_canonical<double, 53>(rng_) < p; }

  void feedback(const BoolSample& x, std::size_t cls, bool is_target) {
    std::vector<std::uint8_t> out(clauses_);
    int sum = 0;
    for (std::size_t j = 0; j < clauses_; ++j) {
      out[j] = clause_output(cls * clauses_ + j, x) ? 1 : 0;
      if (out[j]) sum += positive(j) ? 1 : -1;
    }
    const int t = params_.threshold;
    sum = std::clamp(sum, -t, t);
    const double p = is_target ? (t - sum) / (2.0 * t) : (t + sum) / (2.0 * t);
    for (std::size_t j = 0; j < clauses_; ++j) {
      if (!chance(p)) continue;
      const bool type_one = positive(j) == is_target;
      if (type_one) {
        type_i(cls * clauses_ + j, x, out[j] != 0);
      } else {
        type_ii(cls * clauses_ + j, x, out[j] != 0);
      }
    }
  }

  void type_i(std::size_t id, const BoolSample& x, bool fired) {
    const double s = params_.specificity;
    const int top = 2 * params_.states_per_action;
    for (std::size_t k = 0; k < literals_; ++k) {
      int& st = state(id, k);
      if (fired && x.literal(k)) {
        if (chance((s - 1.0) / s) && st < top) ++st;
      } else if (chance(1.0 / s) && st > 1) {
        --st;
      }
    }
  }

  void type_ii(std::size_t id, const BoolSample& x, bool fired) {
    if (!fired) return;
    for (std::size_t k = 0; k < literals_; ++k) {
      if (!x.literal(k) && !include(id, k)) ++state(id, k);
    }
  }

  std::size_t classes_;
  std::size_t clauses_;
  std::size_t literals_;
  TrainParams params_;
  std::vector<int> states_;
  Rng rng_;
};

}  // namespace

TMModel train_reference(const LabeledSet& data, std::size_t num_classes, const TrainParams& params) {
  if (data.size() == 0) throw ConfigError("training dataset is empty");
  if (data.labels.size() != data.samples.size()) throw ConfigError("dataset samples and labels differ in length");
  if (params.clauses_per_class == 0 || params.clauses_per_class % 2 != 0) {
    throw ConfigError("clauses per class must be even and positive, got " + std::to_string(params.clauses_per_class));
  }
  if (params.specificity <= 1.0) throw ConfigError("specificity s must be > 1");
  if (params.threshold <= 0) throw ConfigError("threshold T must be positive");
  if (params.states_per_action <= 0) throw ConfigError("states per action must be positive");
  if (num_classes == 0 || data.num_classes() > num_classes) throw ConfigError("labels exceed the class count");

  const std::size_t literals = data.samples.front().size();
  for (const auto& s : data.samples) {
    if (s.size() != literals) throw ConfigError("samples have inconsistent literal counts");
  }

  Trainer trainer(num_classes, params.clauses_per_class, literals, params);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t e = 0; e < params.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), trainer.rng());
    for (auto i : order) trainer.update(data.samples[i], data.labels[i]);
  }
  return trainer.model();
}

}  // namespace imbue::tm
