//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ligvec/corpus_io.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace ligvec {
namespace {
using testing::TempDir;

TEST(SmilesCorpus, ReadsOnePerLine) {
  TempDir dir;
  EXPECT_EQ(io::load_smiles_corpus(dir.write("a.smi", "CCO\nc1ccccc1\n")),
            (std::vector<std::string>{"CCO", "c1ccccc1"}));
  EXPECT_TRUE(io::load_smiles_corpus(dir.write("b.smi", "")).empty());
  EXPECT_EQ(io::load_smiles_corpus(dir.write("c.smi", "CCO\n\nCCN\n")),
            (std::vector<std::string>{"CCO", "CCN"}));
}

TEST(SmilesCorpus, CrlfAndWhitespace) {
  TempDir dir;
  EXPECT_EQ(io::load_smiles_corpus(dir.write("a.smi", "CCO\r\nCCN\r\n")),
            (std::vector<std::string>{"CCO", "CCN"}));
  try {
    io::load_smiles_corpus(dir.write("b.smi", "CCO\nC CO\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(SmilesCorpus, MissingFile) {
  EXPECT_THROW(io::load_smiles_corpus("/nonexistent/ligvec/corpus.smi"), Error);
}

TEST(Interactions, Parse) {
  TempDir dir;
  auto t = io::load_interactions(dir.write("i.tsv", "p1\tL1\tCCO\np1\tL2\tCCN\n"));
  ASSERT_EQ(t.size(), 1u);
  ASSERT_EQ(t["p1"].size(), 2u);
  EXPECT_EQ(t["p1"][0], (LigandRecord{"L1", "CCO"}));
  EXPECT_EQ(t["p1"][1], (LigandRecord{"L2", "CCN"}));
}

TEST(Interactions, DuplicateRowKeptOnce) {
  TempDir dir;
  auto t = io::load_interactions(dir.write("i.tsv", "p1\tL1\tCCO\np1\tL1\tCCO\n"));
  EXPECT_EQ(t["p1"].size(), 1u);
}

TEST(Interactions, ColumnCountError) {
  TempDir dir;
  try {
    io::load_interactions(dir.write("i.tsv", "p1\tL1\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Interactions, RoundTrip) {
  TempDir dir;
  InteractionTable t{{"p1", {{"L1", "CCO"}, {"L2", "CCN"}}}, {"p2", {{"L1", "CCO"}}}};
  io::save_interactions(dir / "i.tsv", t);
  EXPECT_EQ(io::load_interactions(dir / "i.tsv"), t);
}

TEST(GoldStandard, SccsLevels) {
  TempDir dir;
  auto g = io::load_gold_standard(dir.write("g.tsv", "p1\tb.1.1.4\n"));
  EXPECT_EQ(g.at("p1").family, "b.1.1.4");
  EXPECT_EQ(g.at("p1").superfamily, "b.1.1");
}

TEST(GoldStandard, SingletonFilter) {
  GoldStandard g{{"p1", io::parse_sccs("a.1.1.1")},
                 {"p2", io::parse_sccs("a.1.1.2")},
                 {"p3", io::parse_sccs("a.1.1.2")}};
  auto kept = io::remove_singletons(g);
  EXPECT_EQ(kept.size(), 2u);
  EXPECT_TRUE(kept.contains("p2"));
  EXPECT_TRUE(kept.contains("p3"));
}

TEST(GoldStandard, SuperfamilySingletonDropped) {
  GoldStandard g{{"p1", io::parse_sccs("a.1.1.1")},
                 {"p2", io::parse_sccs("a.1.1.1")},
                 {"p3", io::parse_sccs("b.2.1.1")},
                 {"p4", io::parse_sccs("b.2.1.1")},
                 {"p5", io::parse_sccs("c.3.1.1")}};
  auto kept = io::remove_singletons(g);
  EXPECT_EQ(kept.size(), 4u);
  EXPECT_FALSE(kept.contains("p5"));
}

TEST(GoldStandard, MalformedCode) {
  TempDir dir;
  try {
    io::load_gold_standard(dir.write("g.tsv", "p1\tb\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Model, RoundTripExactText) {
  TempDir dir;
  EmbeddingModel m(2);
  std::vector<float> v{0.5f, -1.0f};
  m.add("CCO", v);
  io::save_model(dir / "m.txt", m);
  EXPECT_EQ(testing::slurp(dir / "m.txt"), "1 2\nCCO 0.5 -1\n");
  EXPECT_EQ(io::load_model(dir / "m.txt"), m);
}

TEST(Model, MetadataSidecar) {
  TempDir dir;
  EmbeddingModel m(1);
  std::vector<float> v{0.25f};
  m.add("a", v);
  m.metadata.token_kind = TokenKind::smiles_word;
  m.metadata.word_length = 8;
  m.metadata.corpus_tag = "toy";
  m.metadata.training = {{"seed", "7"}};
  io::save_model(dir / "m.txt", m);
  auto back = io::load_model(dir / "m.txt");
  EXPECT_EQ(back.metadata, m.metadata);
}

TEST(Model, HeaderBodyMismatch) {
  TempDir dir;
  EXPECT_THROW(io::load_model(dir.write("m.txt", "2 2\nCCO 0.5 -1\n")), ParseError);
}

TEST(Model, EmptyVocabularyIsLegal) {
  TempDir dir;
  auto m = io::load_model(dir.write("m.txt", "0 100\n"));
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(m.dimension(), 100u);
}

TEST(Model, FloatsRoundTripBitExact) {
  TempDir dir;
  EmbeddingModel m(3);
  std::vector<float> v{0.1f, 1.0f / 3.0f, -7.123456e-8f};
  m.add("w", v);
  io::save_model(dir / "m.txt", m);
  EXPECT_EQ(io::load_model(dir / "m.txt"), m);
}

TEST(Similarity, RoundTrip) {
  TempDir dir;
  SimilarityMatrix s;
  s.insert("a", "b", 0.5);
  io::save_similarity(dir / "s.tsv", s);
  auto back = io::load_similarity(dir / "s.tsv");
  EXPECT_EQ(back.get("b", "a"), 0.5);
  EXPECT_EQ(back, s);
}

TEST(Similarity, ConflictingDuplicate) {
  TempDir dir;
  EXPECT_THROW(io::load_similarity(dir.write("s.tsv", "b\ta\t0.5\na\tb\t0.4\n")), ParseError);
}

TEST(Similarity, RepeatedIdenticalEntryAccepted) {
  TempDir dir;
  auto s = io::load_similarity(dir.write("s.tsv", "b\ta\t0.5\na\tb\t0.5\n"));
  EXPECT_EQ(s.size(), 1u);
}

TEST(Clusters, Format) {
  Clustering c{{{"a", "b"}, {"c"}}};
  EXPECT_EQ(io::format_clusters(c), "0\ta\n0\tb\n1\tc\n");
}

TEST(Clusters, RoundTrip) {
  TempDir dir;
  Clustering c{{{"a", "b"}, {"c"}}};
  io::save_clusters(dir / "c.tsv", c);
  EXPECT_EQ(io::load_clusters(dir / "c.tsv"), c);
}

TEST(Vectors, RoundTrip) {
  TempDir dir;
  std::vector<io::VectorRow> rows{{"p1", {0.1, -2.5}}, {"p2", {1.0 / 3.0, 0}}};
  io::save_vectors(dir / "v.tsv", rows);
  auto back = io::load_vectors(dir / "v.tsv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, "p1");
  EXPECT_EQ(back[1].values, rows[1].values);
}

TEST(Tokens, RoundTrip) {
  TempDir dir;
  std::vector<io::TokenRow> rows{{"p1", {"C(C1CCCC", "(C1CCCCC"}}, {"p2", {"CCO"}}};
  io::save_tokens(dir / "t.tsv", rows);
  auto back = io::load_tokens(dir / "t.tsv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].tokens, rows[0].tokens);
  EXPECT_EQ(back[1].tokens, rows[1].tokens);
}

TEST(Fingerprints, ParseAndWidth) {
  TempDir dir;
  auto fp = io::load_fingerprints(dir.write("f.tsv", "L1\t101\nL2\t110\n"));
  EXPECT_EQ(fp.width, 3u);
  EXPECT_EQ(fp.bits.at("L2"), (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_THROW(io::load_fingerprints(dir.write("g.tsv", "L1\t101\nL2\t11\n")), ParseError);
  EXPECT_THROW(io::load_fingerprints(dir.write("h.tsv", "L1\t1x1\n")), ParseError);
}

TEST(Sequences, FastaAndTsv) {
  TempDir dir;
  auto fa = io::load_sequences(dir.write("s.fa", ">p1 desc\nMKV\nlat\n>p2\nGQW\n"));
  EXPECT_EQ(fa.at("p1"), "MKVLAT");
  EXPECT_EQ(fa.at("p2"), "GQW");
  auto tsv = io::load_sequences(dir.write("s.tsv", "p1\tMKV\n"));
  EXPECT_EQ(tsv.at("p1"), "MKV");
}

TEST(AtomicWrite, ReplacesContent) {
  TempDir dir;
  io::write_file_atomic(dir / "x", "one");
  io::write_file_atomic(dir / "x", "two");
  EXPECT_EQ(testing::slurp(dir / "x"), "two");
  std::size_t files = 0;
  for ([[maybe_unused]] auto &e : std::filesystem::directory_iterator(dir.path())) ++files;
  EXPECT_EQ(files, 1u);
}

}  // namespace
}  // namespace ligvec
