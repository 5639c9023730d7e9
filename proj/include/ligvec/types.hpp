//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ligvec/error.hpp"

namespace ligvec {

struct LigandRecord {
  std::string id;
  std::string smiles;

  friend bool operator==(const LigandRecord &, const LigandRecord &) = default;
};

struct ProteinRecord {
  std::string id;
  std::optional<std::string> sequence;
  std::vector<std::string> ligand_ids;
};

/// Protein id -> interacting ligands, in first-seen order per protein.
using InteractionTable = std::map<std::string, std::vector<LigandRecord>>;

enum class TokenKind { smiles_word, smiles_char, protein_word, protein_char };

inline std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::smiles_word: return "smiles_word";
    case TokenKind::smiles_char: return "smiles_char";
    case TokenKind::protein_word: return "protein_word";
    case TokenKind::protein_char: return "protein_char";
  }
  return "unknown";
}

inline TokenKind parse_token_kind(std::string_view text) {
  if (text == "smiles_word") return TokenKind::smiles_word;
  if (text == "smiles_char") return TokenKind::smiles_char;
  if (text == "protein_word") return TokenKind::protein_word;
  if (text == "protein_char") return TokenKind::protein_char;
  throw ConfigError("unknown token kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Gold standard

enum class Level { family, superfamily };

inline std::string_view to_string(Level level) {
  return level == Level::family ? "family" : "superfamily";
}

inline Level parse_level(std::string_view text) {
  if (text == "family") return Level::family;
  if (text == "superfamily" || text == "super-family") return Level::superfamily;
  throw ConfigError("unknown level '" + std::string(text) + "'");
}

struct GoldLabels {
  std::string family;       // full dotted code, e.g. b.1.1.4
  std::string superfamily;  // family code without its last component, e.g. b.1.1

  const std::string &at(Level level) const {
    return level == Level::family ? family : superfamily;
  }

  friend bool operator==(const GoldLabels &, const GoldLabels &) = default;
};

using GoldStandard = std::map<std::string, GoldLabels>;

// ---------------------------------------------------------------------------
// Embedding model

struct ModelMetadata {
  std::optional<TokenKind> token_kind;
  int word_length = 0;  // 0 for character models
  std::string corpus_tag;
  // Effective training settings, echoed for provenance.
  std::map<std::string, std::string> training;

  friend bool operator==(const ModelMetadata &, const ModelMetadata &) = default;
};

/// Word -> dense float vector, all of one dimension. Words keep insertion
/// order, which is the vocabulary index order.
class EmbeddingModel {
 public:
  explicit EmbeddingModel(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw ConfigError("embedding dimension must be positive");
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  const std::vector<std::string> &words() const noexcept { return words_; }

  void add(std::string word, std::span<const float> values) {
    if (values.size() != dimension_) {
      throw Error("vector for '" + word + "' has length " + std::to_string(values.size()) +
                  ", model dimension is " + std::to_string(dimension_));
    }
    if (index_.contains(word)) throw Error("duplicate word '" + word + "' in model");
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    data_.insert(data_.end(), values.begin(), values.end());
  }

  std::optional<std::size_t> index_of(std::string_view word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const float> vector(std::size_t index) const {
    return {data_.data() + index * dimension_, dimension_};
  }

  std::optional<std::span<const float>> lookup(std::string_view word) const {
    auto idx = index_of(word);
    if (!idx) return std::nullopt;
    return vector(*idx);
  }

  ModelMetadata metadata;

  /// Exact on words and order; bitwise on floats.
  friend bool operator==(const EmbeddingModel &a, const EmbeddingModel &b) {
    if (a.dimension_ != b.dimension_ || a.words_ != b.words_ || a.metadata != b.metadata) {
      return false;
    }
    for (std::size_t i = 0; i < a.data_.size(); ++i) {
      if (std::bit_cast<std::uint32_t>(a.data_[i]) != std::bit_cast<std::uint32_t>(b.data_[i])) {
        return false;
      }
    }
    return true;
  }

 private:
  std::size_t dimension_;
  std::vector<std::string> words_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<float> data_;
};

// ---------------------------------------------------------------------------
// Similarity matrix

enum class Orientation { higher_is_similar, lower_is_similar };

using IdPair = std::pair<std::string, std::string>;

inline IdPair ordered_pair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

/// Sparse symmetric score table keyed by ordered id pairs.
class SimilarityMatrix {
 public:
  explicit SimilarityMatrix(Orientation orientation = Orientation::higher_is_similar)
      : orientation_(orientation) {}

  Orientation orientation() const noexcept { return orientation_; }

  /// Inserts a score; re-inserting a pair with a different score is an error.
  void insert(const std::string &a, const std::string &b, double score) {
    auto key = ordered_pair(a, b);
    auto [it, inserted] = entries_.emplace(key, score);
    if (!inserted && it->second != score) {
      throw Error("conflicting scores for pair (" + key.first + ", " + key.second + ")");
    }
    ids_.insert(key.first);
    ids_.insert(key.second);
  }

  /// Registers an id that may have no scored pairs.
  void add_id(const std::string &id) { ids_.insert(id); }

  std::optional<double> get(const std::string &a, const std::string &b) const {
    auto it = entries_.find(ordered_pair(a, b));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<IdPair, double> &entries() const noexcept { return entries_; }
  const std::set<std::string> &ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return entries_.size(); }

  friend bool operator==(const SimilarityMatrix &, const SimilarityMatrix &) = default;

 private:
  Orientation orientation_;
  std::map<IdPair, double> entries_;
  std::set<std::string> ids_;
};

// ---------------------------------------------------------------------------
// Clustering

struct Clustering {
  std::vector<std::vector<std::string>> clusters;

  std::size_t size() const noexcept { return clusters.size(); }

  friend bool operator==(const Clustering &, const Clustering &) = default;
};

/// Throws unless `clustering` is a partition of exactly `ids` with no empty cluster.
inline void validate_partition(const Clustering &clustering, const std::set<std::string> &ids) {
  std::set<std::string> seen;
  for (const auto &cluster : clustering.clusters) {
    if (cluster.empty()) throw Error("clustering contains an empty cluster");
    for (const auto &id : cluster) {
      if (!ids.contains(id)) throw Error("clustering contains unknown id '" + id + "'");
      if (!seen.insert(id).second) throw Error("id '" + id + "' appears in two clusters");
    }
  }
  if (seen.size() != ids.size()) throw Error("clustering does not cover every id");
}

// ---------------------------------------------------------------------------
// Fingerprints

/// Ligand id -> bit-vector; every row has the table's width.
struct FingerprintTable {
  std::size_t width = 0;
  std::map<std::string, std::vector<std::uint8_t>> bits;
};

}  // namespace ligvec
