//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ligvec/error.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

inline constexpr std::size_t kDefaultSmilesWordLength = 8;
inline constexpr std::size_t kProteinWordLength = 3;
inline constexpr std::size_t kMinSmilesWordLength = 4;
inline constexpr std::size_t kMaxSmilesWordLength = 12;

struct TokenizationSpec {
  TokenKind kind = TokenKind::smiles_word;
  std::size_t k = kDefaultSmilesWordLength;

  void validate() const {
    if (k < 1) throw ConfigError("word length must be at least 1");
    if (kind == TokenKind::smiles_word && (k < kMinSmilesWordLength || k > kMaxSmilesWordLength)) {
      throw ConfigError("SMILES word length " + std::to_string(k) + " outside [" +
                        std::to_string(kMinSmilesWordLength) + ", " +
                        std::to_string(kMaxSmilesWordLength) + "]");
    }
    if (kind == TokenKind::protein_word && k != kProteinWordLength) {
      throw ConfigError("protein words are fixed at length 3");
    }
  }
};

/// Overlapping windows of length k, stride 1. A SMILES shorter than k is a
/// single word.
inline std::vector<std::string> smiles_words(std::string_view smiles,
                                             std::size_t k = kDefaultSmilesWordLength) {
  if (smiles.empty()) throw Error("cannot tokenize an empty SMILES");
  if (k == 0) throw ConfigError("word length must be at least 1");
  if (smiles.size() <= k) return {std::string(smiles)};
  std::vector<std::string> words;
  words.reserve(smiles.size() - k + 1);
  for (std::size_t i = 0; i + k <= smiles.size(); ++i) words.emplace_back(smiles.substr(i, k));
  return words;
}

inline std::vector<std::string> smiles_chars(std::string_view smiles) {
  if (smiles.empty()) throw Error("cannot tokenize an empty SMILES");
  std::vector<std::string> out;
  out.reserve(smiles.size());
  for (char c : smiles) out.emplace_back(1, c);
  return out;
}

/// Three reading frames of non-overlapping 3-mers starting at offsets 0, 1
/// and 2. Trailing partial words are dropped.
inline std::array<std::vector<std::string>, 3> protein_words(std::string_view sequence) {
  if (sequence.size() < kProteinWordLength) {
    throw Error("protein sequence of length " + std::to_string(sequence.size()) +
                " is shorter than one word");
  }
  std::array<std::vector<std::string>, 3> frames;
  for (std::size_t offset = 0; offset < 3; ++offset) {
    for (std::size_t i = offset; i + kProteinWordLength <= sequence.size(); i += kProteinWordLength) {
      frames[offset].emplace_back(sequence.substr(i, kProteinWordLength));
    }
  }
  return frames;
}

inline std::vector<std::string> protein_chars(std::string_view sequence) {
  if (sequence.empty()) throw Error("cannot tokenize an empty protein sequence");
  std::vector<std::string> out;
  out.reserve(sequence.size());
  for (char c : sequence) out.emplace_back(1, c);
  return out;
}

/// Flat token list for one entity. Protein words are the three frames
/// concatenated in offset order.
inline std::vector<std::string> tokenize(std::string_view text, const TokenizationSpec &spec) {
  switch (spec.kind) {
    case TokenKind::smiles_word: return smiles_words(text, spec.k);
    case TokenKind::smiles_char: return smiles_chars(text);
    case TokenKind::protein_char: return protein_chars(text);
    case TokenKind::protein_word: {
      std::vector<std::string> out;
      for (auto &frame : protein_words(text)) {
        out.insert(out.end(), std::make_move_iterator(frame.begin()),
                   std::make_move_iterator(frame.end()));
      }
      return out;
    }
  }
  return {};
}

/// Training sentences for one entity: one per SMILES, or one per reading
/// frame for protein words (empty frames omitted).
inline std::vector<std::vector<std::string>> sentences_for(std::string_view text,
                                                           const TokenizationSpec &spec) {
  if (spec.kind == TokenKind::protein_word) {
    std::vector<std::vector<std::string>> out;
    for (auto &frame : protein_words(text)) {
      if (!frame.empty()) out.push_back(std::move(frame));
    }
    return out;
  }
  return {tokenize(text, spec)};
}

inline std::set<std::string> unique_chars(const std::vector<std::string> &corpus) {
  std::set<std::string> out;
  for (const auto &s : corpus) {
    for (char c : s) out.emplace(1, c);
  }
  return out;
}

}  // namespace ligvec
