#include <algorithm>
#include <random>

#include "doctest.h"
#include "imbue/dataset.hpp"
#include "imbue/errors.hpp"
#include "imbue/tm_core.hpp"
#include "imbue/trainer.hpp"
#include "test_util.hpp"

using namespace imbue;
using namespace imbue::tm;
using imbue::testing::as_bools;
using imbue::testing::oracle_clause;

namespace {

BoolSample lits(std::vector<std::uint8_t> v) { return BoolSample::from_literals(BitVector::from_bits(v)); }
BitVector acts(std::vector<std::uint8_t> v) { return BitVector::from_bits(v); }

std::vector<std::uint8_t> bits_of(const BitVector& v) { return v.to_bits(); }

}  // namespace

TEST_CASE("thermometer booleanization") {
  const Thresholds th({{1.5, 3.5, 5.5, 7.5}});
  const std::vector<double> mid{4.6};
  CHECK(bits_of(booleanize(mid, th).literals()) == std::vector<std::uint8_t>{1, 1, 0, 0, 0, 0, 1, 1});
  const std::vector<double> high{9.9};
  CHECK(bits_of(booleanize(high, th).literals()) == std::vector<std::uint8_t>{1, 1, 1, 1, 0, 0, 0, 0});

  const Thresholds one(std::vector<std::vector<double>>{{1.0}});
  const std::vector<double> low{0.0};
  CHECK(bits_of(booleanize(low, one).literals()) == std::vector<std::uint8_t>{0, 1});

  const std::vector<double> wrong{1.0, 2.0};
  CHECK_THROWS_AS(booleanize(wrong, th), ConfigError);
}

TEST_CASE("thresholds must be strictly increasing") {
  CHECK_THROWS_AS(Thresholds({{2.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(Thresholds({{1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(Thresholds(std::vector<std::vector<double>>{std::vector<double>{}}), ConfigError);
  CHECK(Thresholds({{1.0, 2.0}, {0.5}}).bit_count() == 3);
}

TEST_CASE("quantile thresholds collapse duplicates") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 100; ++i) rows.push_back({static_cast<double>(i), 3.0});
  const auto th = quantile_thresholds(rows, 4);
  REQUIRE(th.feature_count() == 2);
  CHECK(th.per_feature()[0].size() == 4);
  CHECK(th.per_feature()[1].size() == 1);
  CHECK(std::is_sorted(th.per_feature()[0].begin(), th.per_feature()[0].end()));
}

TEST_CASE("complement consistency of booleanized samples") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const Thresholds th({{2.0, 4.0, 6.0}, {1.0, 9.0}, {5.0}});
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> raw{u(rng), u(rng), u(rng)};
    const auto s = booleanize(raw, th);
    const std::size_t half = s.size() / 2;
    for (std::size_t i = 0; i < half; ++i) CHECK(s.literal(i + half) == !s.literal(i));
  }
}

TEST_CASE("from_literals rejects inconsistent vectors") {
  CHECK_THROWS_AS(lits({1, 1}), ConfigError);
  CHECK_THROWS_AS(lits({1, 0, 0}), ConfigError);
  CHECK_NOTHROW(lits({1, 0, 0, 1}));
}

TEST_CASE("clause_eval examples") {
  CHECK(clause_eval(lits({1, 0}), acts({1, 0})));
  CHECK_FALSE(clause_eval(lits({0, 1}), acts({1, 0})));
  // The spec's all-exclude example uses a raw pair; the complement rule
  // forces a consistent sample here, and both literal values must give 1.
  CHECK(clause_eval(lits({0, 1}), acts({0, 0})));
  CHECK(clause_eval(lits({1, 0}), acts({0, 0})));
  CHECK_FALSE(clause_eval(lits({1, 0}), acts({0, 0}), EmptyClause::kFalse));
  CHECK_THROWS_AS(clause_eval(lits({1, 0}), acts({0, 0, 0})), ConfigError);
}

TEST_CASE("clause formula brute force for K <= 8") {
  for (std::size_t features = 1; features <= 4; ++features) {
    const std::size_t k = 2 * features;
    for (std::uint32_t x = 0; x < (1U << features); ++x) {
      std::vector<std::uint8_t> fb(features);
      for (std::size_t i = 0; i < features; ++i) fb[i] = (x >> i) & 1U;
      const auto sample = BoolSample::from_feature_bits(fb);
      const auto l = as_bools(sample.literals());
      for (std::uint32_t a = 0; a < (1U << k); ++a) {
        std::vector<std::uint8_t> ab(k);
        for (std::size_t i = 0; i < k; ++i) ab[i] = (a >> i) & 1U;
        const auto actions = acts(ab);
        REQUIRE(clause_eval(sample, actions) == oracle_clause(l, as_bools(actions)));
      }
    }
  }
}

TEST_CASE("class sums and argmax") {
  // one +, one -, both all-exclude so both fire
  TMModel cancel(1, 2, 4);
  CHECK(class_sums(lits({1, 0, 0, 1}), cancel) == ClassSums{0});

  std::vector<BitVector> a;
  std::vector<Polarity> p;
  for (int j = 0; j < 12; ++j) {
    const bool positive = j % 2 == 0;
    // positive clauses include literal 0 (which is 1), negative include literal 2 (which is 0)
    a.push_back(positive ? acts({1, 0, 0, 0}) : acts({0, 0, 1, 0}));
    p.push_back(positive ? Polarity::kPositive : Polarity::kNegative);
  }
  const TMModel bound(1, 12, 4, a, p);
  CHECK(class_sums(lits({1, 0, 0, 1}), bound) == ClassSums{6});

  const std::vector<int> s1{3, -1};
  const std::vector<int> s2{2, 2};
  const std::vector<int> s3{-4, 1, 1};
  CHECK(infer(s1) == 0);
  CHECK(infer(s2) == 0);
  CHECK(infer(s3) == 1);
}

TEST_CASE("class sums bounded and clause order irrelevant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = testing::random_model(3, 8, 12, 0.15, rng);
    // same clauses, reversed order within each class (keeps J/2 per polarity)
    std::vector<BitVector> a;
    std::vector<Polarity> p;
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t j = 8; j-- > 0;) {
        a.push_back(model.actions(c, j));
        p.push_back(model.polarity(c, j));
      }
    }
    const TMModel permuted(3, 8, 12, a, p);
    for (int s = 0; s < 50; ++s) {
      const auto sample = BoolSample::from_feature_bits(testing::random_bits(6, rng));
      for (int v : class_sums(sample, model)) {
        CHECK(v >= -4);
        CHECK(v <= 4);
      }
      CHECK(infer(sample, model) == infer(sample, permuted));
      CHECK(infer(sample, model) == testing::oracle_predict(model, sample));
    }
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(TMModel(0, 2, 4), ConfigError);
  CHECK_THROWS_AS(TMModel(1, 3, 4), ConfigError);
  CHECK_THROWS_AS(TMModel(1, 2, 3), ConfigError);
  std::vector<BitVector> a(2, BitVector(4));
  std::vector<Polarity> both_pos(2, Polarity::kPositive);
  CHECK_THROWS_AS(TMModel(1, 2, 4, a, both_pos), ConfigError);
  std::vector<Polarity> ok{Polarity::kPositive, Polarity::kNegative};
  std::vector<BitVector> short_a(1, BitVector(4));
  CHECK_THROWS_AS(TMModel(1, 2, 4, short_a, ok), ConfigError);
}

TEST_CASE("include statistics") {
  const auto mnist = include_stats(18927, 3136000);
  CHECK(100.0 * mnist.ratio == doctest::Approx(0.6).epsilon(0.01));
  const TMModel empty(2, 6, 48);
  CHECK(include_stats(empty).includes == 0);
  CHECK(include_stats(empty).ratio == 0.0);

  std::vector<BitVector> a;
  std::vector<Polarity> p;
  for (int j = 0; j < 12; ++j) {
    BitVector v(48);
    for (std::size_t k = 0; k < 48; ++k) v.set(k, true);
    a.push_back(v);
    p.push_back(j % 2 == 0 ? Polarity::kPositive : Polarity::kNegative);
  }
  const auto full = include_stats(TMModel(2, 6, 48, a, p));
  CHECK(full.includes == 576);
  CHECK(full.ratio == 1.0);
}

TEST_CASE("noisy xor generator") {
  const auto d = noisy_xor({200, 6, 0.0, 3});
  CHECK(d.size() == 200);
  CHECK(d.num_classes() == 2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d.labels[i] == static_cast<std::size_t>(d.samples[i].literal(0) != d.samples[i].literal(1)));
  }
  const auto noisy = noisy_xor({2000, 6, 0.2, 3});
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    flipped += noisy.labels[i] != static_cast<std::size_t>(noisy.samples[i].literal(0) != noisy.samples[i].literal(1));
  }
  CHECK(flipped > 300);
  CHECK(flipped < 500);
  CHECK(xor_exhaustive(4).size() == 16);
}

TEST_CASE("reference trainer") {
  const auto data = noisy_xor({1000, 12, 0.0, 9});
  TrainParams p;
  p.epochs = 0;
  const auto blank = train_reference(data, 2, p);
  CHECK(include_stats(blank).includes == 0);

  p.epochs = 3;
  CHECK(train_reference(data, 2, p) == train_reference(data, 2, p));

  p.clauses_per_class = 5;
  CHECK_THROWS_AS(train_reference(data, 2, p), ConfigError);
  CHECK_THROWS_AS(train_reference(LabeledSet{}, 2, TrainParams{}), ConfigError);
}

TEST_CASE("trained noisy xor model") {
  const auto train = noisy_xor({5000, 24, 0.1, 21});
  TrainParams p;
  p.seed = 4;
  const auto model = train_reference(train, 2, p);
  CHECK(model.clause_count() == 12);
  CHECK(model.ta_cell_count() == 576);

  // 24 features is too many for an exhaustive sweep here, so take every
  // assignment of the two operands plus the first 8 noise bits.
  std::size_t agree = 0;
  std::size_t total = 0;
  for (std::uint32_t x = 0; x < (1U << 10); ++x) {
    std::vector<std::uint8_t> fb(24, 0);
    for (std::size_t i = 0; i < 10; ++i) fb[i] = (x >> i) & 1U;
    const auto s = BoolSample::from_feature_bits(fb);
    const std::size_t label = fb[0] ^ fb[1];
    agree += infer(s, model) == label;
    ++total;
  }
  for (const auto& fb : {std::vector<std::uint8_t>{1, 0}, std::vector<std::uint8_t>{0, 1}}) {
    std::vector<std::uint8_t> bits(24, 0);
    bits[0] = fb[0];
    bits[1] = fb[1];
    const auto sums = class_sums(BoolSample::from_feature_bits(bits), model);
    CHECK(sums[1] > sums[0]);
  }
  CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.95);

  // The trainer lands below the 8.3% include ratio of the larger reference
  // models; the ratio is checked for order of magnitude only.
  const auto stats = include_stats(model);
  CHECK(stats.ratio > 0.02);
  CHECK(stats.ratio < 0.15);
}
