//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "ligvec/pipeline.hpp"

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace ligvec {
namespace {

const fs::path kToy = LIGVEC_TOY_DIR;

PipelineConfig toy_config(const fs::path &out) {
  auto cfg = PipelineConfig::load(kToy / "pipeline.conf");
  cfg.output_dir = out;
  cfg.grid = {0.0, 1.0, 0.01};
  return cfg;
}

TEST(PipelineConfig, ParsesKeysCommentsAndRelativePaths) {
  auto cfg = PipelineConfig::parse(
      "# comment\n"
      "interactions = data/i.tsv\n"
      "gold=/abs/gold.tsv   # trailing\n"
      "\n"
      "method = protvec\n"
      "pooling = minmax\n"
      "dim = 16\n"
      "sweep_preset = blast\n",
      "/base");
  EXPECT_EQ(cfg.interactions, fs::path("/base/data/i.tsv"));
  EXPECT_EQ(cfg.gold, fs::path("/abs/gold.tsv"));
  EXPECT_EQ(cfg.method, Method::protvec);
  EXPECT_EQ(cfg.pooling, Pooling::minmax);
  EXPECT_EQ(cfg.train.dimension, 16u);
  EXPECT_EQ(cfg.grid.size(), 2001u);
  EXPECT_EQ(cfg.token_kind(), TokenKind::protein_word);
}

TEST(PipelineConfig, ErrorsCarryLineNumbers) {
  try {
    PipelineConfig::parse("method = smilesvec\n\nnonsense line\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    PipelineConfig::parse("dim = 8\nflavour = mint\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(PipelineConfig::parse("dim = many\n"), ParseError);
  EXPECT_THROW(PipelineConfig::parse("tokens = bytes\n"), ParseError);
}

TEST(PipelineConfig, LaterSettingsOverrideAndEmptyClears) {
  auto cfg = PipelineConfig::parse("corpus = a.smi\nseed = 3\n", "/x");
  cfg.set("seed", "11");
  cfg.set("corpus", "");
  EXPECT_EQ(cfg.train.seed, 11u);
  EXPECT_TRUE(cfg.corpus.empty());
}

TEST(PipelineConfig, Validation) {
  PipelineConfig cfg;
  cfg.interactions = "i.tsv";
  EXPECT_THROW(cfg.validate(), ConfigError);  // no gold
  cfg.gold = "g.tsv";
  EXPECT_NO_THROW(cfg.validate());
  cfg.pooling = Pooling::minmax;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.pooling = Pooling::average;
  cfg.method = Method::protvec;
  EXPECT_THROW(cfg.validate(), ConfigError);  // no sequences
  cfg.method = Method::fingerprint;
  EXPECT_THROW(cfg.validate(), ConfigError);  // no fingerprints
  cfg.method = Method::smilesvec;
  cfg.train.dimension = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.train.dimension = 10;
  cfg.word_length = 40;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.word_length = 8;
  cfg.interactions.clear();
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(PipelineConfig, EffectiveSettingsEchoTraining) {
  auto cfg = PipelineConfig::load(kToy / "pipeline.conf");
  auto j = cfg.effective();
  EXPECT_EQ(j["method"], "smilesvec");
  EXPECT_EQ(j["training"]["seed"], "7");
  EXPECT_EQ(j["sweep"]["points"], 1001);
}

TEST(SelectProteins, IntersectionAndSingletons) {
  InteractionTable inter{{"a", {{"l1", "CC"}}}, {"b", {{"l1", "CC"}}}, {"c", {{"l2", "CN"}}},
                         {"z", {{"l3", "CO"}}}};
  GoldStandard gold{{"a", {"x.1.1.1", "x.1.1"}},
                    {"b", {"x.1.1.1", "x.1.1"}},
                    {"c", {"x.1.1.2", "x.1.1"}},
                    {"q", {"y.1.1.1", "y.1.1"}}};
  EXPECT_EQ(select_proteins(&inter, &gold, nullptr, false), (std::set<std::string>{"a", "b", "c"}));
  EXPECT_EQ(select_proteins(&inter, &gold, nullptr, true), (std::set<std::string>{"a", "b"}));
}

TEST(Pipeline, ToyRunWritesArtifactsAndRecoversFamilies) {
  testing::TempDir dir;
  auto res = run_pipeline(toy_config(dir / "out"));
  EXPECT_EQ(res.proteins, 30u);
  EXPECT_GE(res.f_measure, 0.9);
  for (auto name : {"run.json", "model.txt", "model.txt.meta.json", "vectors.tsv", "similarity.tsv",
                    "sweep_curve.tsv", "sweep.json", "clusters.tsv", "clusters.tsv.meta.json",
                    "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
    EXPECT_TRUE(res.artifacts.contains(name)) << name;
  }
  auto report = nlohmann::json::parse(testing::slurp(dir / "out" / "report.json"));
  EXPECT_DOUBLE_EQ(report["f_measure"].get<double>(), res.f_measure);
  auto run = nlohmann::json::parse(testing::slurp(dir / "out" / "run.json"));
  EXPECT_EQ(run["training"]["dimension"], "100");
  auto curve = io::read_lines(dir / "out" / "sweep_curve.tsv");
  EXPECT_EQ(curve.size(), 1u + 101u);
}

TEST(Pipeline, RerunIsByteIdentical) {
  testing::TempDir dir;
  run_pipeline(toy_config(dir / "a"));
  run_pipeline(toy_config(dir / "b"));
  // run.json is left out: it echoes the output directory.
  for (auto name : {"model.txt", "vectors.tsv", "similarity.tsv", "sweep_curve.tsv", "sweep.json",
                    "clusters.tsv", "report.json"}) {
    EXPECT_EQ(testing::slurp(dir / "a" / name), testing::slurp(dir / "b" / name)) << name;
  }
}

TEST(Pipeline, WordFrequencyMethodNeedsNoTraining) {
  testing::TempDir dir;
  auto cfg = toy_config(dir / "out");
  cfg.method = Method::smiles_wordfreq;
  auto res = run_pipeline(cfg);
  EXPECT_GE(res.f_measure, 0.9);
  EXPECT_TRUE(fs::exists(dir / "out" / "tokens.tsv"));
  EXPECT_FALSE(fs::exists(dir / "out" / "model.txt"));
}

TEST(Pipeline, StageErrorsNameTheStage) {
  testing::TempDir dir;
  auto cfg = toy_config(dir / "out");
  cfg.gold = dir / "missing_gold.tsv";
  try {
    run_pipeline(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError &e) {
    EXPECT_EQ(e.stage(), "load");
  }
  cfg = toy_config(dir / "out");
  cfg.corpus = dir / "missing.smi";
  try {
    run_pipeline(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError &e) {
    EXPECT_EQ(e.stage(), "train");
  }
  cfg = toy_config(dir / "out");
  cfg.gold.clear();
  try {
    run_pipeline(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError &e) {
    EXPECT_EQ(e.stage(), "config");
  }
}

int sh(const std::string &cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

TEST(Pipeline, ManualCliStagesMatchPipeline) {
  testing::TempDir dir;
  auto cfg = toy_config(dir / "pipe");
  auto res = run_pipeline(cfg);
  const std::string cli = LIGVEC_CLI;
  const std::string toy = kToy.string();
  const fs::path m = dir / "manual";
  fs::create_directories(m);
  auto q = [](const fs::path &p) { return "'" + p.string() + "'"; };

  ASSERT_EQ(sh(cli + " train --kind smiles_word --k 8 --corpus " + q(kToy / "corpus.smi") +
               " --dim 100 --window 5 --negatives 5 --epochs 5 --lr 0.025 --min-count 1 --seed 7"
               " --workers 1 --out " + q(m / "model.txt")), 0);
  ASSERT_EQ(sh(cli + " represent --method smilesvec --tokens word --pooling avg --model " +
               q(m / "model.txt") + " --interactions " + q(kToy / "interactions.tsv") + " --gold " +
               q(kToy / "gold.tsv") + " --out " + q(m / "vectors.tsv")), 0);
  ASSERT_EQ(sh(cli + " similarity --method cosine --vectors " + q(m / "vectors.tsv") + " --out " +
               q(m / "similarity.tsv")), 0);
  ASSERT_EQ(sh(cli + " sweep --similarity " + q(m / "similarity.tsv") + " --gold " +
               q(kToy / "gold.tsv") + " --algo transclust --level family --lo 0 --hi 1 --step 0.01"
               " --curve " + q(m / "sweep_curve.tsv") + " --summary " + q(m / "sweep.json")), 0);
  std::ostringstream threshold;
  threshold.precision(17);
  threshold << res.best_threshold;
  ASSERT_EQ(sh(cli + " cluster --similarity " + q(m / "similarity.tsv") +
               " --algo transclust --threshold " + threshold.str() + " --out " + q(m / "clusters.tsv")), 0);
  ASSERT_EQ(sh(cli + " evaluate --clusters " + q(m / "clusters.tsv") + " --gold " +
               q(kToy / "gold.tsv") + " --level family --out " + q(m / "report.json")), 0);

  for (auto name : {"model.txt", "vectors.tsv", "similarity.tsv", "sweep_curve.tsv", "sweep.json",
                    "clusters.tsv", "report.json"}) {
    EXPECT_EQ(testing::slurp(m / name), testing::slurp(dir / "pipe" / name)) << name;
  }
}

TEST(Cli, PipelineCommandReportsResult) {
  testing::TempDir dir;
  const std::string cmd = std::string(LIGVEC_CLI) + " pipeline --config '" +
                          (kToy / "pipeline.conf").string() + "' --output-dir '" +
                          (dir / "out").string() + "' --set sweep_step=0.01 --set method=smiles_wordfreq";
  EXPECT_EQ(sh(cmd), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
  EXPECT_NE(sh(std::string(LIGVEC_CLI) + " pipeline --config '" + (kToy / "pipeline.conf").string() +
               "' --set bogus=1"), 0);
}

}  // namespace
}  // namespace ligvec
