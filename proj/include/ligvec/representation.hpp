//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ligvec/error.hpp"
#include "ligvec/tokenizer.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

enum class Provenance {
  protvec_word,
  protvec_char,
  smilesvec_word,
  smilesvec_char,
  ligand_avg,
  fingerprint_avg
};

enum class Pooling { average, minmax };

inline std::string_view to_string(Pooling pooling) {
  return pooling == Pooling::average ? "average" : "minmax";
}

inline Pooling parse_pooling(std::string_view text) {
  if (text == "average" || text == "avg") return Pooling::average;
  if (text == "minmax") return Pooling::minmax;
  throw ConfigError("unknown pooling '" + std::string(text) + "'");
}

struct EntityVector {
  std::string id;
  std::vector<double> values;
  Provenance provenance = Provenance::smilesvec_word;
  Pooling pooling = Pooling::average;
  std::size_t oov_count = 0;  // tokens dropped for lack of a vector
};

// ---------------------------------------------------------------------------
// Pooling

namespace detail {

template <typename Range>
std::size_t common_length(const std::vector<Range> &vectors) {
  if (vectors.empty()) throw Error("cannot pool an empty list of vectors");
  const std::size_t d = std::size(vectors.front());
  for (const auto &v : vectors) {
    if (std::size(v) != d) throw Error("cannot pool vectors of different lengths");
  }
  return d;
}

}  // namespace detail

/// Elementwise mean.
template <typename Range>
std::vector<double> avg_pool(const std::vector<Range> &vectors) {
  const std::size_t d = detail::common_length(vectors);
  std::vector<double> out(d, 0.0);
  for (const auto &v : vectors) {
    std::size_t i = 0;
    for (auto x : v) out[i++] += static_cast<double>(x);
  }
  const double n = static_cast<double>(vectors.size());
  for (auto &x : out) x /= n;
  return out;
}

/// Per-feature minima followed by per-feature maxima (length 2d).
template <typename Range>
std::vector<double> minmax_pool(const std::vector<Range> &vectors) {
  const std::size_t d = detail::common_length(vectors);
  std::vector<double> out(2 * d);
  bool first = true;
  for (const auto &v : vectors) {
    std::size_t i = 0;
    for (auto raw : v) {
      double x = static_cast<double>(raw);
      if (first) {
        out[i] = out[d + i] = x;
      } else {
        out[i] = std::min(out[i], x);
        out[d + i] = std::max(out[d + i], x);
      }
      ++i;
    }
    first = false;
  }
  return out;
}

template <typename Range>
std::vector<double> pool(const std::vector<Range> &vectors, Pooling pooling) {
  return pooling == Pooling::average ? avg_pool(vectors) : minmax_pool(vectors);
}

// ---------------------------------------------------------------------------
// Entity vectors from an embedding model

namespace detail {

inline void check_kind(const EmbeddingModel &model, TokenKind kind) {
  if (model.metadata.token_kind && *model.metadata.token_kind != kind) {
    throw ConfigError("model was trained on " + std::string(to_string(*model.metadata.token_kind)) +
                      " tokens, requested " + std::string(to_string(kind)));
  }
}

inline EntityVector pool_tokens(const std::vector<std::string> &tokens, const EmbeddingModel &model,
                                Pooling pooling, Provenance provenance, std::string_view what) {
  std::vector<std::span<const float>> found;
  found.reserve(tokens.size());
  std::size_t oov = 0;
  for (const auto &tok : tokens) {
    if (auto v = model.lookup(tok)) {
      found.push_back(*v);
    } else {
      ++oov;
    }
  }
  if (found.empty()) {
    throw NoCoverageError("none of the " + std::to_string(tokens.size()) + " tokens of " +
                          std::string(what) + " is in the model vocabulary");
  }
  return {std::string(), pool(found, pooling), provenance, pooling, oov};
}

}  // namespace detail

/// SMILESVec: mean of the vectors of a ligand's in-vocabulary chemical words
/// (or characters). Out-of-vocabulary tokens are dropped from the mean.
inline EntityVector ligand_vector(std::string_view smiles, const EmbeddingModel &model,
                                  TokenKind kind, Pooling pooling = Pooling::average,
                                  std::size_t word_length = kDefaultSmilesWordLength) {
  if (kind != TokenKind::smiles_word && kind != TokenKind::smiles_char) {
    throw ConfigError("ligand vectors need a SMILES token kind");
  }
  detail::check_kind(model, kind);
  if (kind == TokenKind::smiles_word && model.metadata.word_length > 0) {
    word_length = static_cast<std::size_t>(model.metadata.word_length);
  }
  auto tokens = kind == TokenKind::smiles_word ? smiles_words(smiles, word_length)
                                               : smiles_chars(smiles);
  return detail::pool_tokens(tokens, model, pooling,
                             kind == TokenKind::smiles_word ? Provenance::smilesvec_word
                                                            : Provenance::smilesvec_char,
                             "SMILES '" + std::string(smiles) + "'");
}

/// ProtVec: word mode pools jointly over all three reading frames.
inline EntityVector protein_vector_from_sequence(std::string_view sequence,
                                                 const EmbeddingModel &model, TokenKind kind,
                                                 Pooling pooling = Pooling::average) {
  if (kind != TokenKind::protein_word && kind != TokenKind::protein_char) {
    throw ConfigError("sequence vectors need a protein token kind");
  }
  detail::check_kind(model, kind);
  auto tokens = tokenize(sequence, {kind, kind == TokenKind::protein_word ? kProteinWordLength : 1});
  return detail::pool_tokens(tokens, model, pooling,
                             kind == TokenKind::protein_word ? Provenance::protvec_word
                                                             : Provenance::protvec_char,
                             "protein sequence");
}

/// Mean of the ligand vectors of one protein.
inline EntityVector protein_vector_from_ligands(const std::vector<EntityVector> &ligands) {
  if (ligands.empty()) {
    throw Error("protein has no ligand vectors; proteins without ligand binding information "
                "must be filtered out");
  }
  std::vector<std::span<const double>> rows;
  rows.reserve(ligands.size());
  for (const auto &l : ligands) rows.emplace_back(l.values);
  return {std::string(), avg_pool(rows), Provenance::ligand_avg, Pooling::average, 0};
}

/// Mean bit value per feature over the fingerprints of one protein's ligands.
inline EntityVector protein_vector_from_fingerprints(
    const std::vector<std::vector<std::uint8_t>> &fingerprints) {
  if (fingerprints.empty()) throw Error("protein has no ligand fingerprints");
  return {std::string(), avg_pool(fingerprints), Provenance::fingerprint_avg, Pooling::average, 0};
}

}  // namespace ligvec
