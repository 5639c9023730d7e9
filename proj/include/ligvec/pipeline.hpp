//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// File-level stages and the end-to-end pipeline built from them. Every stage
// reads its inputs from disk and writes its artifacts to disk, so running
// the CLI subcommands one by one reproduces `pipeline` byte for byte.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ligvec/acquisition.hpp"
#include "ligvec/clustering.hpp"
#include "ligvec/corpus_io.hpp"
#include "ligvec/embedding.hpp"
#include "ligvec/error.hpp"
#include "ligvec/evaluation.hpp"
#include "ligvec/representation.hpp"
#include "ligvec/similarity.hpp"
#include "ligvec/tokenizer.hpp"
#include "ligvec/types.hpp"

namespace ligvec {
namespace fs = std::filesystem;

/// How proteins are compared.
enum class Method { smilesvec, fingerprint, protvec, smiles_wordfreq, protein_wordfreq };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::smilesvec: return "smilesvec";
    case Method::fingerprint: return "fingerprint";
    case Method::protvec: return "protvec";
    case Method::smiles_wordfreq: return "smiles_wordfreq";
    case Method::protein_wordfreq: return "protein_wordfreq";
  }
  return "unknown";
}

inline Method parse_method(std::string_view text) {
  for (Method m : {Method::smilesvec, Method::fingerprint, Method::protvec, Method::smiles_wordfreq,
                   Method::protein_wordfreq}) {
    if (text == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(text) + "'");
}

inline bool uses_embedding(Method m) { return m == Method::smilesvec || m == Method::protvec; }
inline bool uses_sequences(Method m) { return m == Method::protvec || m == Method::protein_wordfreq; }
inline bool uses_word_counts(Method m) {
  return m == Method::smiles_wordfreq || m == Method::protein_wordfreq;
}

// ---------------------------------------------------------------------------
// Protein selection

/// Proteins with at least one ligand that are labelled in the gold standard
/// (and have a sequence, when sequences are given). Optionally drops members
/// of single-protein families and super-families within that set.
inline std::set<std::string> select_proteins(const InteractionTable *interactions,
                                             const GoldStandard *gold,
                                             const std::map<std::string, std::string> *sequences,
                                             bool drop_singletons) {
  std::set<std::string> ids;
  bool seeded = false;
  auto intersect = [&](const std::set<std::string> &other) {
    if (!seeded) {
      ids = other;
      seeded = true;
      return;
    }
    std::erase_if(ids, [&](const std::string &id) { return !other.contains(id); });
  };
  if (interactions) {
    std::set<std::string> s;
    for (const auto &[id, ligands] : *interactions) {
      if (!ligands.empty()) s.insert(id);
    }
    intersect(s);
  }
  if (sequences) {
    std::set<std::string> s;
    for (const auto &[id, seq] : *sequences) s.insert(id);
    intersect(s);
  }
  if (gold) {
    std::set<std::string> s;
    for (const auto &[id, labels] : *gold) s.insert(id);
    intersect(s);
    if (drop_singletons) {
      GoldStandard subset;
      for (const auto &id : ids) subset.emplace(id, gold->at(id));
      subset = io::remove_singletons(std::move(subset));
      std::set<std::string> kept;
      for (const auto &[id, labels] : subset) kept.insert(id);
      ids = std::move(kept);
    }
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Stages

struct StageLog {
  std::vector<std::string> warnings;
};

inline TokenizationSpec token_spec(TokenKind kind, std::size_t word_length) {
  TokenizationSpec spec{kind, kind == TokenKind::smiles_word    ? word_length
                              : kind == TokenKind::protein_word ? kProteinWordLength
                                                                : 1};
  spec.validate();
  return spec;
}

/// Tokenizes `texts` (SMILES or sequences) and trains an embedding model.
inline EmbeddingModel train_stage(const std::vector<std::string> &texts, const TokenizationSpec &spec,
                                  const TrainConfig &config, const std::string &corpus_tag,
                                  const fs::path &out_model) {
  TrainingCorpus corpus;
  for (const auto &t : texts) {
    for (auto &s : sentences_for(t, spec)) corpus.push_back(std::move(s));
  }
  ModelMetadata meta;
  meta.token_kind = spec.kind;
  meta.word_length = spec.kind == TokenKind::smiles_word || spec.kind == TokenKind::protein_word
                         ? static_cast<int>(spec.k)
                         : 0;
  meta.corpus_tag = corpus_tag;
  auto model = train(corpus, config, std::move(meta));
  if (!out_model.empty()) io::save_model(out_model, model);
  return model;
}

/// Texts to train on: the corpus file if given, otherwise the ligand SMILES
/// (SMILES kinds) or protein sequences (protein kinds).
inline std::vector<std::string> training_texts(TokenKind kind, const fs::path &corpus,
                                               const InteractionTable *interactions,
                                               const std::map<std::string, std::string> *sequences) {
  const bool protein = kind == TokenKind::protein_word || kind == TokenKind::protein_char;
  if (!corpus.empty()) {
    if (protein) {
      std::vector<std::string> out;
      for (auto &[id, seq] : io::load_sequences(corpus)) out.push_back(seq);
      return out;
    }
    return io::load_smiles_corpus(corpus);
  }
  std::vector<std::string> out;
  if (protein) {
    if (!sequences) throw ConfigError("protein embeddings need a corpus or sequences file");
    for (const auto &[id, seq] : *sequences) out.push_back(seq);
  } else {
    if (!interactions) throw ConfigError("SMILES embeddings need a corpus or interactions file");
    std::set<std::string> seen;
    for (const auto &[protein_id, ligands] : *interactions) {
      for (const auto &l : ligands) {
        if (seen.insert(l.id).second) out.push_back(l.smiles);
      }
    }
  }
  return out;
}

struct RepresentInputs {
  Method method = Method::smilesvec;
  TokenKind token_kind = TokenKind::smiles_word;
  Pooling pooling = Pooling::average;
  const InteractionTable *interactions = nullptr;
  const EmbeddingModel *model = nullptr;
  const FingerprintTable *fingerprints = nullptr;
  const std::map<std::string, std::string> *sequences = nullptr;
  const std::set<std::string> *proteins = nullptr;  // restrict to these ids when set
};

/// Protein vectors for the vector-based methods, in protein id order.
/// Proteins without any usable ligand or token are dropped with a warning.
inline std::vector<io::VectorRow> represent_stage(const RepresentInputs &in, StageLog &log) {
  std::vector<io::VectorRow> rows;
  auto wanted = [&](const std::string &id) { return !in.proteins || in.proteins->contains(id); };
  switch (in.method) {
    case Method::smilesvec: {
      if (!in.interactions || !in.model) throw ConfigError("smilesvec needs interactions and a model");
      if (in.pooling != Pooling::average) {
        throw ConfigError("ligand-based protein vectors support average pooling only");
      }
      std::map<std::string, std::optional<EntityVector>> ligand_cache;
      for (const auto &[protein, ligands] : *in.interactions) {
        if (!wanted(protein)) continue;
        std::vector<EntityVector> vectors;
        for (const auto &l : ligands) {
          auto [it, inserted] = ligand_cache.try_emplace(l.id);
          if (inserted) {
            try {
              it->second = ligand_vector(l.smiles, *in.model, in.token_kind, Pooling::average);
            } catch (const NoCoverageError &) {
              log.warnings.push_back("ligand " + l.id + ": no token in model vocabulary");
            }
          }
          if (it->second) vectors.push_back(*it->second);
        }
        if (vectors.empty()) {
          log.warnings.push_back("protein " + protein + " dropped: no ligand vector");
          continue;
        }
        rows.push_back({protein, protein_vector_from_ligands(vectors).values});
      }
      break;
    }
    case Method::fingerprint: {
      if (!in.interactions || !in.fingerprints) {
        throw ConfigError("fingerprint method needs interactions and a fingerprint table");
      }
      for (const auto &[protein, ligands] : *in.interactions) {
        if (!wanted(protein)) continue;
        std::vector<std::vector<std::uint8_t>> fps;
        for (const auto &l : ligands) {
          auto it = in.fingerprints->bits.find(l.id);
          if (it != in.fingerprints->bits.end()) fps.push_back(it->second);
        }
        if (fps.empty()) {
          log.warnings.push_back("protein " + protein + " dropped: no ligand fingerprint");
          continue;
        }
        rows.push_back({protein, protein_vector_from_fingerprints(fps).values});
      }
      break;
    }
    case Method::protvec: {
      if (!in.sequences || !in.model) throw ConfigError("protvec needs sequences and a model");
      for (const auto &[protein, seq] : *in.sequences) {
        if (!wanted(protein)) continue;
        try {
          rows.push_back(
              {protein, protein_vector_from_sequence(seq, *in.model, in.token_kind, in.pooling).values});
        } catch (const Error &e) {
          log.warnings.push_back("protein " + protein + " dropped: " + e.what());
        }
      }
      break;
    }
    default:
      throw ConfigError("method " + std::string(to_string(in.method)) + " does not produce vectors");
  }
  return rows;
}

/// Per-protein word multisets for the word-frequency methods.
inline std::vector<io::TokenRow> tokenize_stage(Method method, std::size_t word_length,
                                                const InteractionTable *interactions,
                                                const std::map<std::string, std::string> *sequences,
                                                const std::set<std::string> *proteins) {
  auto wanted = [&](const std::string &id) { return !proteins || proteins->contains(id); };
  std::vector<io::TokenRow> rows;
  if (method == Method::smiles_wordfreq) {
    if (!interactions) throw ConfigError("SMILES word frequency needs interactions");
    for (const auto &[protein, ligands] : *interactions) {
      if (!wanted(protein) || ligands.empty()) continue;
      io::TokenRow row{protein, {}};
      for (const auto &l : ligands) {
        for (auto &w : smiles_words(l.smiles, word_length)) row.tokens.push_back(std::move(w));
      }
      rows.push_back(std::move(row));
    }
  } else if (method == Method::protein_wordfreq) {
    if (!sequences) throw ConfigError("protein word frequency needs sequences");
    for (const auto &[protein, seq] : *sequences) {
      if (!wanted(protein)) continue;
      rows.push_back({protein, tokenize(seq, {TokenKind::protein_word, kProteinWordLength})});
    }
  } else {
    throw ConfigError("method " + std::string(to_string(method)) + " does not use word counts");
  }
  return rows;
}

inline SimilarityMatrix cosine_similarity_stage(const std::vector<io::VectorRow> &rows,
                                                const std::set<IdPair> *pairs, std::size_t workers) {
  std::vector<Entity<std::vector<double>>> entities;
  for (const auto &r : rows) entities.push_back({r.id, r.values});
  return build_similarity_matrix(
      entities, [](const std::vector<double> &a, const std::vector<double> &b) { return cosine(a, b); },
      pairs, workers);
}

inline SimilarityMatrix wordfreq_similarity_stage(const std::vector<io::TokenRow> &rows,
                                                  const std::set<IdPair> *pairs,
                                                  std::size_t workers) {
  std::vector<Entity<WordCounts>> entities;
  for (const auto &r : rows) entities.push_back({r.id, count_words(r.tokens)});
  return build_similarity_matrix(entities, word_frequency_similarity, pairs, workers);
}

struct ClusterRun {
  Algorithm algorithm = Algorithm::transclust;
  double threshold = 0;
  MclConfig mcl;
  // MCL on the unfiltered graph when false; the threshold is ignored then.
  bool mcl_uses_threshold = true;
};

inline nlohmann::ordered_json mcl_json(const MclConfig &c) {
  nlohmann::ordered_json j;
  j["inflation"] = c.inflation;
  j["expansion"] = c.expansion;
  j["prune"] = c.prune;
  j["max_iterations"] = c.max_iterations;
  j["epsilon"] = c.epsilon;
  j["self_loops"] = c.self_loops == SelfLoopPolicy::max_incident ? "max_incident" : "unit";
  return j;
}

/// Clusters and writes "<out>" plus the run-metadata sidecar "<out>.meta.json".
inline Clustering cluster_stage(const SimilarityMatrix &matrix, const ClusterRun &run,
                                const fs::path &out) {
  nlohmann::ordered_json meta;
  meta["algorithm"] = std::string(to_string(run.algorithm));
  meta["orientation"] = matrix.orientation() == Orientation::higher_is_similar ? "higher_is_similar"
                                                                               : "lower_is_similar";
  meta["proteins"] = matrix.ids().size();
  Clustering clustering;
  if (run.algorithm == Algorithm::transclust) {
    auto r = transclust(matrix, run.threshold);
    clustering = std::move(r.clustering);
    meta["threshold"] = run.threshold;
    meta["cost"] = r.cost;
    meta["seed_cost"] = r.seed_cost;
    meta["vertex_moves"] = r.moves;
    meta["merges"] = r.merges;
  } else {
    auto input = run.mcl_uses_threshold ? threshold_filter(matrix, run.threshold) : matrix;
    auto r = mcl(input, run.mcl);
    clustering = std::move(r.clustering);
    if (run.mcl_uses_threshold) meta["threshold"] = run.threshold;
    meta["mcl"] = mcl_json(run.mcl);
    meta["iterations"] = r.iterations;
    meta["residual"] = r.residual;
  }
  validate_partition(clustering, matrix.ids());
  auto stats = cluster_stats(clustering);
  meta["clusters"] = stats.clusters;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto &[size, count] : stats.size_histogram) hist[std::to_string(size)] = count;
  meta["size_histogram"] = hist;
  if (!out.empty()) {
    io::save_clusters(out, clustering);
    fs::path meta_path = out;
    meta_path += ".meta.json";
    io::write_file_atomic(meta_path, meta.dump(2) + '\n');
  }
  return clustering;
}

inline nlohmann::ordered_json report_json(const FMeasureReport &report, Level level,
                                          const Clustering &clustering) {
  nlohmann::ordered_json j;
  j["level"] = std::string(to_string(level));
  j["f_measure"] = report.f;
  j["proteins"] = report.proteins;
  j["clusters"] = clustering.size();
  j["families"] = report.families.size();
  auto fams = nlohmann::ordered_json::array();
  for (const auto &f : report.families) {
    nlohmann::ordered_json e;
    e["label"] = f.label;
    e["size"] = f.size;
    e["best_cluster"] = f.best_cluster;
    e["precision"] = f.precision;
    e["recall"] = f.recall;
    e["f"] = f.f;
    fams.push_back(e);
  }
  j["per_family"] = fams;
  return j;
}

inline FMeasureReport evaluate_stage(const Clustering &clustering, const GoldStandard &gold,
                                     Level level, const fs::path &out_json) {
  auto report = fmeasure(clustering, gold, level);
  if (!out_json.empty()) {
    io::write_file_atomic(out_json, report_json(report, level, clustering).dump(2) + '\n');
  }
  return report;
}

inline SweepResult sweep_stage(const SimilarityMatrix &matrix, const GoldStandard &gold,
                               Algorithm algo, Level level, const SweepGrid &grid,
                               const MclConfig &mcl_config, std::size_t workers,
                               const fs::path &out_curve, const fs::path &out_summary) {
  auto result = threshold_sweep(matrix, gold, algo, level, grid, mcl_config, workers);
  if (!out_curve.empty()) {
    std::string tsv = "threshold\tf_measure\tclusters\n";
    for (const auto &p : result.curve) {
      tsv += io::format_real(p.threshold) + '\t' + io::format_real(p.f) + '\t' +
             std::to_string(p.clusters) + '\n';
    }
    io::write_file_atomic(out_curve, tsv);
  }
  if (!out_summary.empty()) {
    nlohmann::ordered_json j;
    j["algorithm"] = std::string(to_string(algo));
    j["level"] = std::string(to_string(level));
    j["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}, {"points", grid.size()}};
    if (algo == Algorithm::mcl) j["mcl"] = mcl_json(mcl_config);
    j["best_threshold"] = result.best_threshold;
    j["best_f_measure"] = result.best_f;
    j["best_clusters"] = result.best_clusters;
    io::write_file_atomic(out_summary, j.dump(2) + '\n');
  }
  return result;
}

inline nlohmann::ordered_json correlate_json(const PearsonResult &r) {
  nlohmann::ordered_json j;
  j["pearson"] = r.r;
  j["common_pairs"] = r.common_pairs;
  j["only_in_first"] = r.only_in_first;
  j["only_in_second"] = r.only_in_second;
  return j;
}

// ---------------------------------------------------------------------------
// Declarative pipeline

/// key = value settings; '#' starts a comment. Relative paths resolve
/// against the config file's directory.
struct PipelineConfig {
  fs::path interactions, gold, corpus, sequences, fingerprints, pairs, domains, correlate_with;
  fs::path output_dir = "ligvec_out";
  Method method = Method::smilesvec;
  std::string tokens = "word";  // word | char
  std::size_t word_length = kDefaultSmilesWordLength;
  Pooling pooling = Pooling::average;
  Algorithm algorithm = Algorithm::transclust;
  Level level = Level::family;
  SweepGrid grid = SweepGrid::unit();
  bool remove_singletons = false;
  std::string corpus_tag;
  Orientation correlate_orientation = Orientation::higher_is_similar;
  TrainConfig train;
  MclConfig mcl;
  std::size_t threads = 1;

  TokenKind token_kind() const {
    bool word = tokens == "word";
    if (method == Method::protvec) return word ? TokenKind::protein_word : TokenKind::protein_char;
    return word ? TokenKind::smiles_word : TokenKind::smiles_char;
  }

  void set(const std::string &key, const std::string &value, const fs::path &base = {}) {
    auto path = [&](const std::string &v) {
      fs::path p(v);
      return p.is_relative() && !base.empty() && !v.empty() ? base / p : p;
    };
    auto number = [&](const std::string &v) {
      double out = 0;
      if (!io::parse_real(std::string_view(v), out)) {
        throw ConfigError("setting '" + key + "' expects a number, got '" + v + "'");
      }
      return out;
    };
    auto count = [&](const std::string &v) {
      std::size_t out = 0;
      if (!io::parse_size(v, out)) {
        throw ConfigError("setting '" + key + "' expects a non-negative integer, got '" + v + "'");
      }
      return out;
    };
    auto flag = [&](const std::string &v) {
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      throw ConfigError("setting '" + key + "' expects true/false, got '" + v + "'");
    };
    if (key == "interactions") interactions = path(value);
    else if (key == "gold") gold = path(value);
    else if (key == "corpus") corpus = path(value);
    else if (key == "sequences") sequences = path(value);
    else if (key == "fingerprints") fingerprints = path(value);
    else if (key == "pairs") pairs = path(value);
    else if (key == "domains") domains = path(value);
    else if (key == "correlate_with") correlate_with = path(value);
    else if (key == "correlate_orientation")
      correlate_orientation = value == "lower" ? Orientation::lower_is_similar : Orientation::higher_is_similar;
    else if (key == "output_dir") output_dir = path(value);
    else if (key == "method") method = parse_method(value);
    else if (key == "tokens") {
      if (value != "word" && value != "char") throw ConfigError("tokens must be 'word' or 'char'");
      tokens = value;
    } else if (key == "word_length") word_length = count(value);
    else if (key == "pooling") pooling = parse_pooling(value);
    else if (key == "algorithm") algorithm = parse_algorithm(value);
    else if (key == "level") level = parse_level(value);
    else if (key == "sweep_preset") grid = SweepGrid::preset(value);
    else if (key == "sweep_lo") grid.lo = number(value);
    else if (key == "sweep_hi") grid.hi = number(value);
    else if (key == "sweep_step") grid.step = number(value);
    else if (key == "remove_singletons") remove_singletons = flag(value);
    else if (key == "corpus_tag") corpus_tag = value;
    else if (key == "dim") train.dimension = count(value);
    else if (key == "window") train.window = count(value);
    else if (key == "negatives") train.negatives = count(value);
    else if (key == "epochs") train.epochs = count(value);
    else if (key == "lr") train.learning_rate = number(value);
    else if (key == "min_count") train.min_count = count(value);
    else if (key == "subsample") train.subsample = number(value);
    else if (key == "seed") train.seed = count(value);
    else if (key == "workers") train.workers = count(value);
    else if (key == "threads") threads = std::max<std::size_t>(1, count(value));
    else if (key == "inflation") mcl.inflation = number(value);
    else if (key == "expansion") mcl.expansion = static_cast<unsigned>(count(value));
    else if (key == "prune") mcl.prune = number(value);
    else if (key == "max_iterations") mcl.max_iterations = count(value);
    else if (key == "epsilon") mcl.epsilon = number(value);
    else throw ConfigError("unknown setting '" + key + "'");
  }

  static PipelineConfig parse(const std::string &text, const fs::path &base = {}) {
    PipelineConfig cfg;
    std::size_t line_no = 0;
    for (auto line : io::split(text, '\n')) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = io::trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("pipeline config", line_no, "expected 'key = value'");
      }
      try {
        cfg.set(std::string(io::trim(line.substr(0, eq))), std::string(io::trim(line.substr(eq + 1))),
                base);
      } catch (const ConfigError &e) {
        throw ParseError("pipeline config", line_no, e.what());
      }
    }
    return cfg;
  }

  static PipelineConfig load(const fs::path &path) {
    return parse(io::read_file(path), path.parent_path());
  }

  void validate() const {
    if (uses_embedding(method)) {
      token_spec(token_kind(), word_length);
      train.validate();
    }
    if (method == Method::smiles_wordfreq) token_spec(TokenKind::smiles_word, word_length);
    if (pooling == Pooling::minmax && method != Method::protvec) {
      throw ConfigError("min/max pooling is available for protvec only");
    }
    if (gold.empty()) throw ConfigError("pipeline needs a gold standard ('gold')");
    if (uses_sequences(method) && sequences.empty()) {
      throw ConfigError("method " + std::string(to_string(method)) + " needs 'sequences'");
    }
    if (method == Method::fingerprint && fingerprints.empty()) {
      throw ConfigError("method fingerprint needs 'fingerprints'");
    }
    if (interactions.empty() && domains.empty()) {
      throw ConfigError("pipeline needs 'interactions' (or 'domains' to fetch them)");
    }
    grid.validate();
    mcl.validate();
  }

  /// Effective settings, echoed into run metadata.
  nlohmann::ordered_json effective() const {
    nlohmann::ordered_json j;
    auto p = [](const fs::path &x) { return x.generic_string(); };
    j["interactions"] = p(interactions);
    j["gold"] = p(gold);
    j["corpus"] = p(corpus);
    j["sequences"] = p(sequences);
    j["fingerprints"] = p(fingerprints);
    j["pairs"] = p(pairs);
    j["domains"] = p(domains);
    j["output_dir"] = p(output_dir);
    j["method"] = std::string(to_string(method));
    j["tokens"] = tokens;
    j["word_length"] = word_length;
    j["pooling"] = std::string(to_string(pooling));
    j["algorithm"] = std::string(to_string(algorithm));
    j["level"] = std::string(to_string(level));
    j["sweep"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}, {"points", grid.size()}};
    j["remove_singletons"] = remove_singletons;
    j["corpus_tag"] = corpus_tag;
    if (uses_embedding(method)) j["training"] = train.describe();
    if (algorithm == Algorithm::mcl) j["mcl"] = mcl_json(mcl);
    j["threads"] = threads;
    return j;
  }
};

struct PipelineResult {
  std::size_t proteins = 0;
  double best_threshold = 0;
  double f_measure = 0;
  std::size_t clusters = 0;
  std::vector<std::string> warnings;
  std::map<std::string, fs::path> artifacts;
};

/// Stage name carried by errors from run_pipeline.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string &what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string &stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Runs fetch (optional) -> train -> represent/tokenize -> similarity ->
/// sweep -> cluster at the best threshold -> evaluate -> correlate (optional).
inline PipelineResult run_pipeline(const PipelineConfig &cfg, Transport *transport = nullptr) {
  std::string stage = "config";
  try {
    cfg.validate();
    PipelineResult res;
    const fs::path &out = cfg.output_dir;
    fs::create_directories(out);
    auto artifact = [&](const std::string &name) {
      res.artifacts[name] = out / name;
      return out / name;
    };
    io::write_file_atomic(artifact("run.json"), cfg.effective().dump(2) + '\n');

    InteractionTable interactions;
    stage = "fetch";
    if (cfg.interactions.empty()) {
      if (!transport) throw ConfigError("fetching interactions needs a transport");
      std::vector<std::string> domains;
      for (auto &line : io::read_lines(cfg.domains)) {
        auto id = io::trim(line);
        if (!id.empty()) domains.emplace_back(id);
      }
      AcquisitionClient client(AcquisitionConfig::from_environment(), *transport);
      auto fetched = client.acquire(domains, cfg.threads);
      for (const auto &r : fetched) {
        if (!r.error.empty()) res.warnings.push_back(r.domain_id + ": " + r.error);
        else if (r.ligands.empty()) res.warnings.push_back(r.domain_id + ": no ligands");
      }
      interactions = to_interactions(fetched);
      io::save_interactions(artifact("interactions.tsv"), interactions);
    } else {
      stage = "load";
      interactions = io::load_interactions(cfg.interactions);
    }

    stage = "load";
    GoldStandard gold = io::load_gold_standard(cfg.gold);
    std::optional<std::map<std::string, std::string>> sequences;
    if (!cfg.sequences.empty()) sequences = io::load_sequences(cfg.sequences);
    std::optional<FingerprintTable> fingerprints;
    if (cfg.method == Method::fingerprint) fingerprints = io::load_fingerprints(cfg.fingerprints);
    std::optional<std::set<IdPair>> pairs;
    if (!cfg.pairs.empty()) pairs = io::load_pairs(cfg.pairs);

    auto proteins = select_proteins(&interactions, &gold,
                                    uses_sequences(cfg.method) ? &*sequences : nullptr,
                                    cfg.remove_singletons);
    res.proteins = proteins.size();
    if (proteins.size() < 2) throw Error("fewer than two proteins remain after filtering");

    std::optional<EmbeddingModel> model;
    if (uses_embedding(cfg.method)) {
      stage = "train";
      auto spec = token_spec(cfg.token_kind(), cfg.word_length);
      auto texts = training_texts(spec.kind, cfg.corpus, &interactions,
                                  sequences ? &*sequences : nullptr);
      model = train_stage(texts, spec, cfg.train, cfg.corpus_tag, artifact("model.txt"));
      res.artifacts["model.txt.meta.json"] = io::metadata_path(out / "model.txt");
    }

    SimilarityMatrix matrix;
    StageLog log;
    if (uses_word_counts(cfg.method)) {
      stage = "tokenize";
      auto rows = tokenize_stage(cfg.method, cfg.word_length, &interactions,
                                 sequences ? &*sequences : nullptr, &proteins);
      io::save_tokens(artifact("tokens.tsv"), rows);
      stage = "similarity";
      matrix = wordfreq_similarity_stage(rows, pairs ? &*pairs : nullptr, cfg.threads);
    } else {
      stage = "represent";
      RepresentInputs in;
      in.method = cfg.method;
      in.token_kind = cfg.token_kind();
      in.pooling = cfg.pooling;
      in.interactions = &interactions;
      in.model = model ? &*model : nullptr;
      in.fingerprints = fingerprints ? &*fingerprints : nullptr;
      in.sequences = sequences ? &*sequences : nullptr;
      in.proteins = &proteins;
      auto rows = represent_stage(in, log);
      io::save_vectors(artifact("vectors.tsv"), rows);
      stage = "similarity";
      matrix = cosine_similarity_stage(rows, pairs ? &*pairs : nullptr, cfg.threads);
    }
    res.warnings.insert(res.warnings.end(), log.warnings.begin(), log.warnings.end());
    io::save_similarity(artifact("similarity.tsv"), matrix);

    stage = "sweep";
    auto sweep = sweep_stage(matrix, gold, cfg.algorithm, cfg.level, cfg.grid, cfg.mcl, cfg.threads,
                             artifact("sweep_curve.tsv"), artifact("sweep.json"));

    stage = "cluster";
    ClusterRun run{cfg.algorithm, sweep.best_threshold, cfg.mcl, true};
    auto clustering = cluster_stage(matrix, run, artifact("clusters.tsv"));
    res.artifacts["clusters.tsv.meta.json"] = out / "clusters.tsv.meta.json";

    stage = "evaluate";
    auto report = evaluate_stage(clustering, gold, cfg.level, artifact("report.json"));
    res.best_threshold = sweep.best_threshold;
    res.f_measure = report.f;
    res.clusters = clustering.size();

    if (!cfg.correlate_with.empty()) {
      stage = "correlate";
      auto other = io::load_similarity(cfg.correlate_with, cfg.correlate_orientation);
      io::write_file_atomic(artifact("correlation.json"),
                            correlate_json(pearson(matrix, other)).dump(2) + '\n');
    }
    if (!res.warnings.empty()) {
      std::string text;
      for (const auto &w : res.warnings) text += w + '\n';
      io::write_file_atomic(artifact("warnings.txt"), text);
    }
    return res;
  } catch (const StageError &) {
    throw;
  } catch (const std::exception &e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace ligvec
