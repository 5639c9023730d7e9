//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ligvec/error.hpp"
#include "ligvec/tokenizer.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("cosine of vectors with lengths " + std::to_string(a.size()) + " and " +
                std::to_string(b.size()));
  }
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) throw Error("cosine similarity is undefined for a zero vector");
  double c = ab / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(c, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Word-frequency similarity

using WordCounts = std::map<std::string, std::size_t>;

inline WordCounts count_words(const std::vector<std::string> &tokens) {
  WordCounts counts;
  for (const auto &t : tokens) ++counts[t];
  return counts;
}

/// Mean over the union vocabulary of 1 - |N1 - N2| / (N1 + N2).
inline double word_frequency_similarity(const WordCounts &a, const WordCounts &b) {
  std::size_t unique = 0;
  double total = 0;
  auto ia = a.begin(), ib = b.begin();
  auto term = [](double n1, double n2) { return 1.0 - std::abs(n1 - n2) / (n1 + n2); };
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      if (ia->second) ++unique;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      if (ib->second) ++unique;
      ++ib;
    } else {
      if (ia->second + ib->second) {
        ++unique;
        total += term(static_cast<double>(ia->second), static_cast<double>(ib->second));
      }
      ++ia;
      ++ib;
    }
  }
  if (unique == 0) throw Error("word-frequency similarity of two empty word sets");
  return total / static_cast<double>(unique);
}

/// Chemical-word multiset over all ligands of one protein.
inline WordCounts smiles_word_counts(const std::vector<LigandRecord> &ligands,
                                     std::size_t k = kDefaultSmilesWordLength) {
  if (ligands.empty()) throw Error("protein has no ligands");
  WordCounts counts;
  for (const auto &l : ligands) {
    for (auto &w : smiles_words(l.smiles, k)) ++counts[std::move(w)];
  }
  return counts;
}

inline double smiles_word_frequency_similarity(const std::vector<LigandRecord> &a,
                                               const std::vector<LigandRecord> &b,
                                               std::size_t k = kDefaultSmilesWordLength) {
  return word_frequency_similarity(smiles_word_counts(a, k), smiles_word_counts(b, k));
}

/// Protein-word multiset over the three reading frames.
inline WordCounts protein_word_counts(std::string_view sequence) {
  return count_words(tokenize(sequence, {TokenKind::protein_word, kProteinWordLength}));
}

// ---------------------------------------------------------------------------
// Matrix assembly

template <typename T>
struct Entity {
  std::string id;
  T value;
};

/// Scores every unordered pair of entities (or only the pairs in
/// `restrict_to`, when given). Pairs are computed on `workers` threads and
/// inserted in a fixed order, so the result does not depend on scheduling.
template <typename T, typename Scorer>
SimilarityMatrix build_similarity_matrix(const std::vector<Entity<T>> &entities, Scorer &&score,
                                         const std::set<IdPair> *restrict_to = nullptr,
                                         std::size_t workers = 1) {
  if (entities.size() < 2) throw Error("a similarity matrix needs at least two entities");
  std::set<std::string> seen;
  for (const auto &e : entities) {
    if (!seen.insert(e.id).second) throw Error("duplicate entity id '" + e.id + "'");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = i + 1; j < entities.size(); ++j) {
      if (restrict_to && !restrict_to->contains(ordered_pair(entities[i].id, entities[j].id))) {
        continue;
      }
      pairs.emplace_back(i, j);
    }
  }
  std::vector<double> scores(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      try {
        scores[p] = score(entities[pairs[p].first].value, entities[pairs[p].second].value);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, pairs.size()));
  if (workers == 1) {
    run(0, pairs.size());
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back(run, pairs.size() * w / workers, pairs.size() * (w + 1) / workers);
    }
  }
  SimilarityMatrix matrix(Orientation::higher_is_similar);
  for (const auto &e : entities) matrix.add_id(e.id);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto &a = entities[pairs[p].first].id;
    const auto &b = entities[pairs[p].second].id;
    if (errors[p]) {
      try {
        std::rethrow_exception(errors[p]);
      } catch (const std::exception &e) {
        throw Error("scoring pair (" + a + ", " + b + ") failed: " + e.what());
      }
    }
    matrix.insert(a, b, scores[p]);
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Correlation between two matrices

struct PearsonResult {
  double r = 0;
  std::size_t common_pairs = 0;
  std::size_t only_in_first = 0;
  std::size_t only_in_second = 0;
};

/// Pearson correlation of raw scores over the pairs both matrices contain.
inline PearsonResult pearson(const SimilarityMatrix &a, const SimilarityMatrix &b) {
  PearsonResult res;
  std::vector<double> xs, ys;
  for (const auto &[pair, score] : a.entries()) {
    auto other = b.entries().find(pair);
    if (other == b.entries().end()) {
      ++res.only_in_first;
      continue;
    }
    xs.push_back(score);
    ys.push_back(other->second);
  }
  res.common_pairs = xs.size();
  res.only_in_second = b.size() - res.common_pairs;
  if (xs.size() < 2) throw Error("Pearson correlation needs at least two common pairs");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error("Pearson correlation undefined for zero-variance scores");
  res.r = std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
  return res;
}

}  // namespace ligvec
