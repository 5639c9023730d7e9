//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ligvec/embedding.hpp"

#include <cmath>
#include <array>
#include <random>

#include <gtest/gtest.h>

#include "ligvec/corpus_io.hpp"
#include "test_support.hpp"

namespace ligvec {
namespace {

double cosine_f(std::span<const float> a, std::span<const float> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

// Sentences drawn from two disjoint topics {a1,a2,a3} and {b1,b2,b3}.
TrainingCorpus two_topic_corpus(std::size_t sentences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TrainingCorpus corpus;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::string topic = s % 2 == 0 ? "a" : "b";
    Sentence sentence;
    for (int i = 0; i < 6; ++i) sentence.push_back(topic + std::to_string(1 + rng() % 3));
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

TEST(Vocabulary, CountsAndIndex) {
  auto v = build_vocab({{"a", "b", "a"}}, 1);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.words[0], "a");
  EXPECT_EQ(v.counts[0], 2u);
  EXPECT_EQ(v.words[1], "b");
  EXPECT_EQ(v.counts[1], 1u);
  EXPECT_EQ(v.find("b"), 1u);
}

TEST(Vocabulary, MinCount) {
  auto v = build_vocab({{"a", "b", "a"}}, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.words[0], "a");
  EXPECT_THROW(build_vocab({{"a", "b", "a"}}, 3), Error);
}

TEST(Vocabulary, TiesAreLexicographic) {
  auto v = build_vocab({{"c", "b", "a", "b"}}, 1);
  EXPECT_EQ(v.words, (std::vector<std::string>{"b", "a", "c"}));
}

TEST(Vocabulary, EmptyCorpus) { EXPECT_THROW(build_vocab({}, 1), Error); }

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dimension = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.window = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.negatives = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(PairLoss, MatchesDefinition) {
  std::vector<double> v{0.3, -0.2}, u{0.5, 0.1}, n{-0.4, 0.7};
  std::vector<std::span<const double>> negs{n};
  double expected = -std::log(1 / (1 + std::exp(-(0.15 - 0.02)))) -
                    std::log(1 / (1 + std::exp(-0.12 - 0.14)));
  EXPECT_NEAR(sgns_pair_loss<double>(v, u, negs), expected, 1e-12);
}

TEST(PairLoss, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 0.5);
  const double h = 1e-5;
  for (int point = 0; point < 10; ++point) {
    const std::size_t d = 6, k = 3;
    std::vector<double> v(d), u(d);
    std::vector<std::vector<double>> negs(k, std::vector<double>(d));
    for (auto &x : v) x = normal(rng);
    for (auto &x : u) x = normal(rng);
    for (auto &n : negs)
      for (auto &x : n) x = normal(rng);
    auto loss = [&] {
      std::vector<std::span<const double>> spans(negs.begin(), negs.end());
      return sgns_pair_loss<double>(v, u, spans);
    };
    std::vector<std::span<const double>> spans(negs.begin(), negs.end());
    auto g = sgns_pair_gradient<double>(v, u, spans);

    auto check = [&](std::vector<double> &param, const std::vector<double> &analytic) {
      std::vector<double> numeric(d);
      for (std::size_t i = 0; i < d; ++i) {
        double keep = param[i];
        param[i] = keep + h;
        double up = loss();
        param[i] = keep - h;
        double down = loss();
        param[i] = keep;
        numeric[i] = (up - down) / (2 * h);
      }
      double diff = 0, na = 0, nn = 0;
      for (std::size_t i = 0; i < d; ++i) {
        diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
        na += analytic[i] * analytic[i];
        nn += numeric[i] * numeric[i];
      }
      EXPECT_LE(std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-12}), 1e-4);
    };
    check(v, g.center);
    check(u, g.context);
    for (std::size_t j = 0; j < k; ++j) check(negs[j], g.negatives[j]);
  }
}

TEST(LogSigmoid, StableForLargeArguments) {
  EXPECT_NEAR(log_sigmoid(-800.0), -800.0, 1e-9);
  EXPECT_NEAR(log_sigmoid(800.0), 0.0, 1e-300);
  EXPECT_NEAR(sigmoid(0.0), 0.5, 1e-15);
}

TEST(SkipGram, TwoTopicSeparation) {
  TrainConfig c;
  c.dimension = 20;
  c.epochs = 5;
  c.seed = 7;
  auto model = train(two_topic_corpus(2000, 5), c);
  const std::vector<std::string> a{"a1", "a2", "a3"}, b{"b1", "b2", "b3"};
  double within = 0, cross = 0;
  int nw = 0, nc = 0;
  for (const auto &group : {a, b}) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        within += cosine_f(*model.lookup(group[i]), *model.lookup(group[j]));
        ++nw;
      }
    }
  }
  for (const auto &x : a) {
    for (const auto &y : b) {
      cross += cosine_f(*model.lookup(x), *model.lookup(y));
      ++nc;
    }
  }
  EXPECT_GT(within / nw - cross / nc, 0.2);
}

TEST(SkipGram, LossDecreases) {
  TrainConfig c;
  c.dimension = 10;
  c.epochs = 5;
  SkipGramTrainer trainer(two_topic_corpus(500, 1), c);
  trainer.train_epoch();
  double first = trainer.last_epoch_loss();
  trainer.train();
  EXPECT_LT(trainer.last_epoch_loss(), first);
  EXPECT_THROW(trainer.train_epoch(), Error);
}

TEST(SkipGram, FixedBatchLossDecreasesInFirstEpoch) {
  TrainConfig c;
  c.dimension = 10;
  c.epochs = 5;
  SkipGramTrainer trainer(two_topic_corpus(500, 6), c);
  const auto &v = trainer.vocabulary();
  std::vector<std::array<std::size_t, 3>> batch;
  for (const auto &[x, y, z] : {std::array<const char *, 3>{"a1", "a2", "b1"},
                                {"b2", "b3", "a3"}, {"a3", "a1", "b2"}}) {
    batch.push_back({*v.find(x), *v.find(y), *v.find(z)});
  }
  auto batch_loss = [&] {
    double total = 0;
    for (const auto &[center, context, negative] : batch) {
      std::array<std::size_t, 1> negs{negative};
      total += trainer.pair_loss(center, context, negs);
    }
    return total;
  };
  double before = batch_loss();
  trainer.train_epoch();
  EXPECT_LT(batch_loss(), before);
}

TEST(SkipGram, VocabularyIndependentOfWorkers) {
  TrainConfig one, four;
  one.dimension = four.dimension = 8;
  four.workers = 4;
  auto corpus = two_topic_corpus(200, 3);
  auto a = train(corpus, one), b = train(corpus, four);
  EXPECT_EQ(a.words(), b.words());
  EXPECT_EQ(a.dimension(), b.dimension());
}

TEST(SkipGram, SingleWorkerIsByteReproducible) {
  testing::TempDir dir;
  TrainConfig c;
  c.dimension = 16;
  c.seed = 7;
  auto corpus = two_topic_corpus(300, 2);
  io::save_model(dir / "a.txt", train(corpus, c));
  io::save_model(dir / "b.txt", train(corpus, c));
  EXPECT_EQ(testing::slurp(dir / "a.txt"), testing::slurp(dir / "b.txt"));
  c.seed = 8;
  io::save_model(dir / "c.txt", train(corpus, c));
  EXPECT_NE(testing::slurp(dir / "a.txt"), testing::slurp(dir / "c.txt"));
}

TEST(SkipGram, ParallelWorkersProduceFiniteVectors) {
  TrainConfig c;
  c.dimension = 8;
  c.workers = 4;
  auto model = train(two_topic_corpus(400, 4), c);
  EXPECT_EQ(model.size(), 6u);
  for (std::size_t i = 0; i < model.size(); ++i) {
    for (float x : model.vector(i)) EXPECT_TRUE(std::isfinite(x));
  }
}

TEST(SkipGram, NegativeSamplingFollowsUnigramPower) {
  TrainingCorpus corpus{{"a", "a", "a", "a", "a", "a", "a", "a", "b"}};
  TrainConfig c;
  c.dimension = 2;
  SkipGramTrainer trainer(corpus, c);
  std::mt19937_64 rng(9);
  std::size_t hits_a = 0;
  const std::size_t draws = 200000;
  for (std::size_t i = 0; i < draws; ++i) hits_a += trainer.sample_negative(rng) == 0;
  double expected = std::pow(8.0, 0.75) / (std::pow(8.0, 0.75) + 1.0);
  EXPECT_NEAR(static_cast<double>(hits_a) / draws, expected, 0.01);
}

TEST(SkipGram, MetadataRecordsSettings) {
  TrainConfig c;
  c.dimension = 4;
  c.seed = 11;
  ModelMetadata meta;
  meta.token_kind = TokenKind::smiles_word;
  meta.word_length = 8;
  auto model = train({{"x", "y"}}, c, meta);
  EXPECT_EQ(model.metadata.training.at("seed"), "11");
  EXPECT_EQ(model.metadata.training.at("dimension"), "4");
  EXPECT_EQ(model.metadata.word_length, 8);
}

TEST(Lookup, PresentAndAbsent) {
  testing::TempDir dir;
  EmbeddingModel m(1);
  std::vector<float> v{1.5f};
  m.add("w", v);
  ASSERT_TRUE(lookup(m, "w"));
  EXPECT_EQ((*lookup(m, "w"))[0], 1.5f);
  EXPECT_FALSE(lookup(m, "zz"));
  io::save_model(dir / "m.txt", m);
  auto back = io::load_model(dir / "m.txt");
  EXPECT_EQ((*lookup(back, "w"))[0], 1.5f);
}

}  // namespace
}  // namespace ligvec
