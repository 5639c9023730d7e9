//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ligvec/clustering.hpp"
#include "ligvec/error.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

// ---------------------------------------------------------------------------
// Best-match F-measure

struct FamilyScore {
  std::string label;
  std::size_t size = 0;          // n_f
  std::size_t best_cluster = 0;  // index into the clustering
  double precision = 0;
  double recall = 0;
  double f = 0;
};

struct FMeasureReport {
  double f = 0;
  std::size_t proteins = 0;  // n
  std::vector<FamilyScore> families;  // label order
};

/// F = (1/n) sum_f n_f max_g 2 p_fg r_fg / (p_fg + r_fg), with
/// p_fg = n_fg / n_g and r_fg = n_fg / n_f. Ties in max_g go to the lower
/// cluster index.
inline FMeasureReport fmeasure(const Clustering &clustering, const GoldStandard &gold, Level level) {
  if (clustering.clusters.empty()) throw Error("cannot evaluate an empty clustering");
  std::map<std::string, std::size_t> family_size;
  // overlap[family][cluster] = n_fg
  std::map<std::string, std::map<std::size_t, std::size_t>> overlap;
  std::size_t n = 0;
  for (std::size_t g = 0; g < clustering.clusters.size(); ++g) {
    for (const auto &id : clustering.clusters[g]) {
      auto it = gold.find(id);
      if (it == gold.end()) {
        throw Error("protein '" + id + "' has no " + std::string(to_string(level)) + " label");
      }
      const auto &label = it->second.at(level);
      ++family_size[label];
      ++overlap[label][g];
      ++n;
    }
  }
  if (n == 0) throw Error("cannot evaluate a clustering without proteins");

  FMeasureReport report;
  report.proteins = n;
  double weighted = 0;
  for (const auto &[label, nf] : family_size) {
    FamilyScore best{label, nf, 0, 0, 0, -1};
    for (const auto &[g, nfg] : overlap[label]) {
      double p = static_cast<double>(nfg) / static_cast<double>(clustering.clusters[g].size());
      double r = static_cast<double>(nfg) / static_cast<double>(nf);
      double f = 2 * p * r / (p + r);
      if (f > best.f) best = {label, nf, g, p, r, f};
    }
    weighted += static_cast<double>(nf) * best.f;
    report.families.push_back(best);
  }
  report.f = weighted / static_cast<double>(n);
  return report;
}

// ---------------------------------------------------------------------------
// Threshold sweep

enum class Algorithm { transclust, mcl };

inline std::string_view to_string(Algorithm algo) {
  return algo == Algorithm::transclust ? "transclust" : "mcl";
}

inline Algorithm parse_algorithm(std::string_view text) {
  if (text == "transclust") return Algorithm::transclust;
  if (text == "mcl") return Algorithm::mcl;
  throw ConfigError("unknown clustering algorithm '" + std::string(text) + "'");
}

/// Inclusive grid lo, lo + step, ..., up to hi.
struct SweepGrid {
  double lo = 0;
  double hi = 1;
  double step = 0.001;

  /// Similarities in [0, 1].
  static SweepGrid unit() { return {0.0, 1.0, 0.001}; }
  /// BLAST identity-style scores in [0, 100].
  static SweepGrid blast() { return {0.0, 100.0, 0.05}; }

  static SweepGrid preset(std::string_view name) {
    if (name == "unit") return unit();
    if (name == "blast") return blast();
    throw ConfigError("unknown sweep preset '" + std::string(name) + "'");
  }

  void validate() const {
    if (!(step > 0) || !std::isfinite(step)) throw ConfigError("sweep step must be positive");
    if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ConfigError("sweep range must satisfy lo <= hi");
    }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  }

  double at(std::size_t i) const { return std::min(hi, lo + static_cast<double>(i) * step); }
};

/// Keeps only pairs strictly more similar than `threshold`.
inline SimilarityMatrix threshold_filter(const SimilarityMatrix &matrix, double threshold) {
  SimilarityMatrix out(matrix.orientation());
  for (const auto &id : matrix.ids()) out.add_id(id);
  const bool lower = matrix.orientation() == Orientation::lower_is_similar;
  for (const auto &[pair, score] : matrix.entries()) {
    if (lower ? score < threshold : score > threshold) out.insert(pair.first, pair.second, score);
  }
  return out;
}

/// TransClust uses the threshold directly; MCL runs on the threshold-filtered
/// graph.
inline Clustering cluster_at(const SimilarityMatrix &matrix, Algorithm algo, double threshold,
                             const MclConfig &mcl_config = {}) {
  if (algo == Algorithm::transclust) return transclust(matrix, threshold).clustering;
  return mcl(threshold_filter(matrix, threshold), mcl_config).clustering;
}

struct SweepPoint {
  double threshold = 0;
  double f = 0;
  std::size_t clusters = 0;
};

struct SweepResult {
  double best_threshold = 0;
  double best_f = -1;
  std::size_t best_clusters = 0;
  std::vector<SweepPoint> curve;
};

inline SweepResult threshold_sweep(const SimilarityMatrix &matrix, const GoldStandard &gold,
                                   Algorithm algo, Level level, const SweepGrid &grid,
                                   const MclConfig &mcl_config = {}, std::size_t workers = 1) {
  grid.validate();
  const std::size_t points = grid.size();
  std::vector<SweepPoint> curve(points);
  std::vector<std::exception_ptr> errors(points);
  auto run = [&](std::size_t w, std::size_t stride) {
    for (std::size_t i = w; i < points; i += stride) {
      try {
        double t = grid.at(i);
        auto clustering = cluster_at(matrix, algo, t, mcl_config);
        curve[i] = {t, fmeasure(clustering, gold, level).f, clustering.size()};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, points));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w, workers);
  }
  SweepResult result;
  for (std::size_t i = 0; i < points; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception &e) {
        throw Error("sweep failed at threshold " + std::to_string(grid.at(i)) + ": " + e.what());
      }
    }
    if (curve[i].f > result.best_f) {
      result.best_f = curve[i].f;
      result.best_threshold = curve[i].threshold;
      result.best_clusters = curve[i].clusters;
    }
  }
  result.curve = std::move(curve);
  return result;
}

}  // namespace ligvec
