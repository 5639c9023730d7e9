//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ligvec/representation.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

namespace ligvec {
namespace {

using Rows = std::vector<std::vector<double>>;

EmbeddingModel model_of(std::size_t dim,
                        const std::vector<std::pair<std::string, std::vector<float>>> &entries,
                        std::optional<TokenKind> kind = std::nullopt, int word_length = 0) {
  EmbeddingModel m(dim);
  for (const auto &[w, v] : entries) m.add(w, v);
  m.metadata.token_kind = kind;
  m.metadata.word_length = word_length;
  return m;
}

void expect_vec_near(const std::vector<double> &got, const std::vector<double> &want,
                     double tol = 1e-12) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "i=" << i;
}

TEST(AvgPool, HandValues) {
  expect_vec_near(avg_pool(Rows{{0, 2}, {2, 0}}), {1, 1});
  expect_vec_near(avg_pool(Rows{{0.5, -3}}), {0.5, -3});
  expect_vec_near(avg_pool(Rows{{2, 0}, {0, 2}}), {1, 1});
}

TEST(AvgPool, Errors) {
  EXPECT_THROW(avg_pool(Rows{}), Error);
  EXPECT_THROW(avg_pool(Rows{{1, 2}, {1}}), Error);
}

TEST(MinMaxPool, HandValues) {
  expect_vec_near(minmax_pool(Rows{{0, 2}, {2, 0}}), {0, 0, 2, 2});
  expect_vec_near(minmax_pool(Rows{{0.5, -3}}), {0.5, -3, 0.5, -3});
}

TEST(Pooling, RandomizedProperties) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 8, d = 1 + rng() % 6;
    Rows rows(n, std::vector<double>(d));
    for (auto &r : rows)
      for (auto &x : r) x = normal(rng);
    auto avg = avg_pool(rows);
    auto mm = minmax_pool(rows);
    Rows shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    expect_vec_near(avg_pool(shuffled), avg, 1e-12);
    EXPECT_EQ(minmax_pool(shuffled), mm);
    ASSERT_EQ(mm.size(), 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      EXPECT_LE(mm[i], mm[d + i]);
      EXPECT_LE(mm[i], avg[i] + 1e-12);
      EXPECT_GE(mm[d + i], avg[i] - 1e-12);
    }
  }
}

TEST(LigandVector, SingleWindow) {
  auto m = model_of(2, {{"CCO", {0.25f, -1.0f}}});
  auto v = ligand_vector("CCO", m, TokenKind::smiles_word);
  expect_vec_near(v.values, {0.25, -1.0});
  EXPECT_EQ(v.oov_count, 0u);
  EXPECT_EQ(v.provenance, Provenance::smilesvec_word);
}

TEST(LigandVector, OutOfVocabularyDropped) {
  // "CCCCO" with k = 4 gives windows CCCC and CCCO.
  auto m = model_of(2, {{"CCCC", {1.0f, 3.0f}}});
  auto v = ligand_vector("CCCCO", m, TokenKind::smiles_word, Pooling::average, 4);
  expect_vec_near(v.values, {1.0, 3.0});
  EXPECT_EQ(v.oov_count, 1u);
}

TEST(LigandVector, CharacterMean) {
  auto m = model_of(2, {{"C", {1, 0}}, {"O", {0, 1}}});
  auto v = ligand_vector("CCO", m, TokenKind::smiles_char);
  expect_vec_near(v.values, {2.0 / 3.0, 1.0 / 3.0});
}

TEST(LigandVector, NoCoverage) {
  auto m = model_of(2, {{"N", {1, 0}}});
  EXPECT_THROW(ligand_vector("CCO", m, TokenKind::smiles_char), NoCoverageError);
}

TEST(LigandVector, ModelKindMismatch) {
  auto m = model_of(2, {{"C", {1, 0}}}, TokenKind::protein_char);
  EXPECT_THROW(ligand_vector("CCO", m, TokenKind::smiles_char), ConfigError);
  EXPECT_THROW(ligand_vector("CCO", m, TokenKind::protein_char), ConfigError);
}

TEST(LigandVector, UsesModelWordLength) {
  auto m = model_of(1, {{"CCCC", {2.0f}}}, TokenKind::smiles_word, 4);
  auto v = ligand_vector("CCCCC", m, TokenKind::smiles_word);
  expect_vec_near(v.values, {2.0});
}

TEST(SequenceVector, NineResiduesPoolSevenWords) {
  // Give each of the 7 words a distinct one-hot so the mean reveals the count.
  const std::vector<std::string> words{"MKV", "LAT", "GQW", "KVL", "ATG", "VLA", "TGQ"};
  std::vector<std::pair<std::string, std::vector<float>>> entries;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<float> v(7, 0.0f);
    v[i] = 1.0f;
    entries.emplace_back(words[i], v);
  }
  auto m = model_of(7, entries);
  auto v = protein_vector_from_sequence("MKVLATGQW", m, TokenKind::protein_word);
  expect_vec_near(v.values, std::vector<double>(7, 1.0 / 7.0));
  EXPECT_EQ(v.oov_count, 0u);
}

TEST(SequenceVector, ConstantModel) {
  std::vector<std::pair<std::string, std::vector<float>>> entries;
  for (const char *w : {"MKV", "LAT", "GQW", "KVL", "ATG", "VLA", "TGQ"}) {
    entries.emplace_back(w, std::vector<float>{0.5f, -2.0f});
  }
  auto m = model_of(2, entries);
  expect_vec_near(protein_vector_from_sequence("MKVLATGQW", m, TokenKind::protein_word).values,
                  {0.5, -2.0});
}

TEST(SequenceVector, MinMaxDoublesLength) {
  EmbeddingModel m(100);
  std::mt19937 rng(1);
  for (const char *w : {"MKV", "LAT", "GQW", "KVL", "ATG", "VLA", "TGQ"}) {
    std::vector<float> v(100);
    for (auto &x : v) x = static_cast<float>(rng() % 100) / 10.0f;
    m.add(w, v);
  }
  auto v = protein_vector_from_sequence("MKVLATGQW", m, TokenKind::protein_word, Pooling::minmax);
  EXPECT_EQ(v.values.size(), 200u);
  EXPECT_EQ(v.pooling, Pooling::minmax);
}

TEST(SequenceVector, CharacterMode) {
  auto m = model_of(2, {{"M", {1, 0}}, {"K", {0, 1}}});
  expect_vec_near(protein_vector_from_sequence("MKK", m, TokenKind::protein_char).values,
                  {1.0 / 3.0, 2.0 / 3.0});
}

TEST(LigandAverage, HandValues) {
  EntityVector a{"", {0, 2}}, b{"", {2, 0}};
  expect_vec_near(protein_vector_from_ligands({a}).values, {0, 2});
  expect_vec_near(protein_vector_from_ligands({a, b}).values, {1, 1});
  EXPECT_EQ(protein_vector_from_ligands({a, b}).provenance, Provenance::ligand_avg);
}

TEST(LigandAverage, EmptyMentionsFiltering) {
  try {
    protein_vector_from_ligands({});
    FAIL() << "expected Error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("ligand binding information"), std::string::npos);
  }
}

TEST(FingerprintAverage, HandValues) {
  expect_vec_near(protein_vector_from_fingerprints({{1, 0, 1}, {1, 1, 0}}).values, {1.0, 0.5, 0.5});
  expect_vec_near(protein_vector_from_fingerprints({{0, 1, 1}}).values, {0, 1, 1});
  expect_vec_near(protein_vector_from_fingerprints({{0, 0}, {0, 0}}).values, {0, 0});
  EXPECT_THROW(protein_vector_from_fingerprints({}), Error);
}

TEST(Pooling, ParseNames) {
  EXPECT_EQ(parse_pooling("avg"), Pooling::average);
  EXPECT_EQ(parse_pooling("minmax"), Pooling::minmax);
  EXPECT_THROW(parse_pooling("sum"), ConfigError);
}

}  // namespace
}  // namespace ligvec
