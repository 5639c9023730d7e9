//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ligvec/error.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

// ---------------------------------------------------------------------------
// Dense oriented view of a sparse matrix

/// Scores over the sorted id set of a matrix, oriented so that higher means
/// more similar. Pairs absent from the matrix take `missing`.
struct DenseScores {
  std::vector<std::string> ids;
  std::vector<double> scores;  // row-major n x n; diagonal unused
  double missing = 0;

  std::size_t size() const noexcept { return ids.size(); }
  double operator()(std::size_t i, std::size_t j) const { return scores[i * ids.size() + j]; }
};

/// Lower-is-similar scores are negated. Missing pairs default to the least
/// similar observed score.
inline DenseScores densify(const SimilarityMatrix &matrix,
                           std::optional<double> missing = std::nullopt) {
  DenseScores dense;
  dense.ids.assign(matrix.ids().begin(), matrix.ids().end());
  const std::size_t n = dense.ids.size();
  const double sign = matrix.orientation() == Orientation::lower_is_similar ? -1.0 : 1.0;
  double least = std::numeric_limits<double>::infinity();
  for (const auto &[pair, score] : matrix.entries()) {
    if (pair.first != pair.second) least = std::min(least, sign * score);
  }
  if (missing) {
    dense.missing = *missing;
  } else {
    dense.missing = std::isfinite(least) ? least : 0.0;
  }
  dense.scores.assign(n * n, dense.missing);
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) slot.emplace(dense.ids[i], i);
  for (const auto &[pair, score] : matrix.entries()) {
    std::size_t a = slot.at(pair.first), b = slot.at(pair.second);
    dense.scores[a * n + b] = dense.scores[b * n + a] = sign * score;
  }
  return dense;
}

namespace detail {

inline Clustering to_clustering(const std::vector<std::string> &ids,
                                const std::vector<std::size_t> &label) {
  // Clusters ordered by their smallest member; members in id order.
  std::map<std::size_t, std::size_t> order;
  Clustering out;
  for (std::size_t v = 0; v < ids.size(); ++v) {
    auto [it, inserted] = order.emplace(label[v], out.clusters.size());
    if (inserted) out.clusters.emplace_back();
    out.clusters[it->second].push_back(ids[v]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cluster editing with a similarity threshold

/// Editing cost of a labelling: within-cluster pairs below the threshold
/// cost (t - s), cross-cluster pairs above it cost (s - t).
inline double editing_cost(const DenseScores &dense, double threshold,
                           const std::vector<std::size_t> &label) {
  double cost = 0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (std::size_t j = i + 1; j < dense.size(); ++j) {
      double s = dense(i, j);
      if (label[i] == label[j]) {
        if (s < threshold) cost += threshold - s;
      } else if (s > threshold) {
        cost += s - threshold;
      }
    }
  }
  return cost;
}

struct TransClustResult {
  Clustering clustering;
  double cost = 0;
  double seed_cost = 0;
  std::size_t moves = 0;
  std::size_t merges = 0;
};

namespace detail {

// Row-major pair weights w = s - t; positive weights reward co-clustering.
struct EditingWeights {
  std::size_t n = 0;
  std::vector<double> w;
  double operator()(std::size_t i, std::size_t j) const { return w[i * n + j]; }
};

/// Components of the graph with edges of weight above `cut`, labelled by
/// their smallest vertex.
inline std::vector<std::size_t> components_above(const EditingWeights &w, double cut) {
  std::vector<std::size_t> parent(w.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < w.n; ++i) {
    for (std::size_t j = i + 1; j < w.n; ++j) {
      if (w(i, j) > cut) {
        auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::size_t> label(w.n);
  for (std::size_t v = 0; v < w.n; ++v) label[v] = find(v);
  return label;
}

/// Grows clusters one at a time, each from the free vertex with the largest
/// positive weight (the first from `first`, when given), adding the vertex
/// with the best positive net gain until none is left.
inline std::vector<std::size_t> greedy_cliques(const EditingWeights &w,
                                               std::optional<std::size_t> first = std::nullopt) {
  const std::size_t n = w.n;
  constexpr auto kFree = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(n, kFree);
  for (std::size_t assigned = 0; assigned < n;) {
    std::size_t seed = kFree;
    if (first && assigned == 0) {
      seed = *first;
    } else {
      double seed_score = -std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] != kFree) continue;
        double score = 0;
        for (std::size_t u = 0; u < n; ++u) {
          if (u != v && label[u] == kFree) score += std::max(0.0, w(v, u));
        }
        if (score > seed_score) {
          seed_score = score;
          seed = v;
        }
      }
    }
    std::vector<std::size_t> members{seed};
    label[seed] = seed;
    ++assigned;
    for (bool grew = true; grew;) {
      grew = false;
      std::size_t best = kFree;
      double best_gain = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] != kFree) continue;
        double gain = 0;
        for (auto m : members) gain += w(v, m);
        if (gain > best_gain) {
          best_gain = gain;
          best = v;
        }
      }
      if (best != kFree) {
        label[best] = seed;
        members.push_back(best);
        ++assigned;
        grew = true;
      }
    }
  }
  return label;
}

/// Single-vertex moves and whole-cluster merges until neither helps.
/// Labels are vertex ids, so a free label always exists for a new singleton.
inline void local_search(const EditingWeights &w, std::vector<std::size_t> &label,
                         std::size_t &moves, std::size_t &merges) {
  const std::size_t n = w.n;
  constexpr double kTol = 1e-12;
  std::vector<double> gain(n);
  std::vector<std::size_t> members(n);
  bool improved = true;
  while (improved) {
    improved = false;

    for (std::size_t v = 0; v < n; ++v) {
      std::fill(gain.begin(), gain.end(), 0.0);
      std::fill(members.begin(), members.end(), 0);
      for (std::size_t u = 0; u < n; ++u) {
        ++members[label[u]];
        if (u != v) gain[label[u]] += w(v, u);
      }
      const std::size_t own = label[v];
      double best_delta = 0;
      std::optional<std::size_t> best_target;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == own || members[c] == 0) continue;
        double delta = gain[own] - gain[c];
        if (delta < best_delta - kTol) {
          best_delta = delta;
          best_target = c;
        }
      }
      if (members[own] > 1 && gain[own] < best_delta - kTol) {
        best_delta = gain[own];
        auto free_label = std::find(members.begin(), members.end(), 0) - members.begin();
        best_target = static_cast<std::size_t>(free_label);
      }
      if (best_target) {
        label[v] = *best_target;
        ++moves;
        improved = true;
      }
    }

    // Whole-cluster merges, lowest label pair first; ties favour merging.
    bool merged = true;
    while (merged) {
      merged = false;
      std::vector<std::size_t> labels(label.begin(), label.end());
      std::sort(labels.begin(), labels.end());
      labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
      std::map<std::size_t, std::size_t> pos;
      for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = i;
      const std::size_t k = labels.size();
      std::vector<double> between(k * k, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          std::size_t a = pos[label[i]], b = pos[label[j]];
          if (a == b) continue;
          between[std::min(a, b) * k + std::max(a, b)] += w(i, j);
        }
      }
      for (std::size_t a = 0; a < k && !merged; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
          if (-between[a * k + b] <= kTol) {
            for (auto &l : label) {
              if (l == labels[b]) l = labels[a];
            }
            ++merges;
            merged = improved = true;
            break;
          }
        }
      }
    }
  }
}

}  // namespace detail

/// Cluster editing by local search. The primary run seeds with the connected
/// components of the graph of pairs scoring above `threshold`; further runs
/// start from all singletons, from components at stricter cuts and from
/// greedy cliques, and the best result is then perturbed by kicks. The
/// lowest cost wins, earlier runs on ties, so the result never costs more
/// than the primary run.
/// Local search applies single-vertex moves (to another cluster or a new
/// singleton, ascending vertex order, strict decreases only) and
/// whole-cluster merges that do not increase cost.
/// For a lower-is-similar matrix the threshold is given in the original
/// units and negated along with the scores.
inline TransClustResult transclust(const SimilarityMatrix &matrix, double threshold,
                                   std::optional<double> missing = std::nullopt) {
  if (matrix.ids().empty()) throw Error("cannot cluster an empty similarity matrix");
  if (!std::isfinite(threshold)) throw ConfigError("threshold must be finite");
  const DenseScores dense = densify(matrix, missing);
  const double t = matrix.orientation() == Orientation::lower_is_similar ? -threshold : threshold;
  const std::size_t n = dense.size();

  detail::EditingWeights w{n, std::vector<double>(n * n, 0.0)};
  std::vector<double> positive;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      w.w[i * n + j] = dense(i, j) - t;
      if (i < j && w.w[i * n + j] > 0) positive.push_back(w.w[i * n + j]);
    }
  }
  std::sort(positive.begin(), positive.end());

  std::vector<std::vector<std::size_t>> seeds;
  seeds.push_back(detail::components_above(w, 0.0));
  std::vector<std::size_t> singletons(n);
  std::iota(singletons.begin(), singletons.end(), 0);
  seeds.push_back(singletons);
  // Stricter cuts at up to 16 quantiles of the positive weights.
  const std::size_t cuts = std::min<std::size_t>(16, positive.size());
  for (std::size_t q = 0; q < cuts; ++q) {
    seeds.push_back(detail::components_above(w, positive[positive.size() * q / cuts]));
  }
  seeds.push_back(detail::greedy_cliques(w));
  // Extra restarts and kicks share a budget of about 2e6 pair updates, so
  // small inputs get a thorough search and large ones stay fast.
  const std::size_t budget =
      std::clamp<std::size_t>(2'000'000 / std::max<std::size_t>(1, n * n), 4, 4096);

  // Greedy cliques started from the best-connected vertices.
  std::vector<std::pair<double, std::size_t>> hubs;
  for (std::size_t v = 0; v < n; ++v) {
    double score = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) score += std::max(0.0, w(v, u));
    }
    if (score > 0) hubs.emplace_back(-score, v);
  }
  std::sort(hubs.begin(), hubs.end());
  hubs.resize(std::min({hubs.size(), std::size_t{64}, budget}));
  for (const auto &[score, v] : hubs) seeds.push_back(detail::greedy_cliques(w, v));

  TransClustResult result;
  result.seed_cost = editing_cost(dense, t, seeds.front());
  std::optional<std::vector<std::size_t>> best;
  for (auto &label : seeds) {
    std::size_t moves = 0, merges = 0;
    detail::local_search(w, label, moves, merges);
    double cost = editing_cost(dense, t, label);
    if (!best || cost < result.cost - 1e-12) {
      best = label;
      result.cost = cost;
      result.moves = moves;
      result.merges = merges;
    }
  }
  // Kicks: force one vertex into a cluster it has a positive link to (or
  // split it off with its allies), re-run the local search and keep the
  // outcome if it is cheaper.
  const std::size_t kMaxKicks = budget;
  std::size_t kicks = 0;
  for (bool better = true; better && kicks < kMaxKicks;) {
    better = false;
    for (std::size_t v = 0; v < n && !better && kicks < kMaxKicks; ++v) {
      std::set<std::size_t> targets;
      std::vector<char> used(n, 0);
      for (std::size_t u = 0; u < n; ++u) {
        used[(*best)[u]] = 1;
        if (u != v && w(v, u) > 0 && (*best)[u] != (*best)[v]) targets.insert((*best)[u]);
      }
      // A fresh label splits v off into a singleton.
      auto fresh = static_cast<std::size_t>(std::find(used.begin(), used.end(), 0) - used.begin());
      if (fresh < n) targets.insert(fresh);
      // Last candidate: split v's cluster, growing the new part greedily
      // from v with members that prefer it.
      std::vector<std::size_t> candidates(targets.begin(), targets.end());
      candidates.push_back(n);
      for (auto c : candidates) {
        if (++kicks > kMaxKicks) break;
        auto label = *best;
        if (c < n) {
          label[v] = c;
        } else {
          if (fresh >= n) continue;
          const std::size_t own = label[v];
          label[v] = fresh;
          for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t u = 0; u < n; ++u) {
              if (label[u] != own) continue;
              double pull = 0;
              for (std::size_t x = 0; x < n; ++x) {
                if (x == u) continue;
                if (label[x] == fresh) pull += w(u, x);
                else if (label[x] == own) pull -= w(u, x);
              }
              if (pull > 0) {
                label[u] = fresh;
                grew = true;
              }
            }
          }
        }
        std::size_t moves = 0, merges = 0;
        detail::local_search(w, label, moves, merges);
        double cost = editing_cost(dense, t, label);
        if (cost < result.cost - 1e-12) {
          best = std::move(label);
          result.cost = cost;
          result.moves += moves + 1;
          result.merges += merges;
          better = true;
          break;
        }
      }
    }
  }

  result.clustering = detail::to_clustering(dense.ids, *best);
  return result;
}

// ---------------------------------------------------------------------------
// Markov clustering

enum class SelfLoopPolicy { max_incident, unit };

struct MclConfig {
  double inflation = 2.0;
  unsigned expansion = 2;
  double prune = 1e-5;
  std::size_t max_iterations = 200;
  double epsilon = 1e-9;
  SelfLoopPolicy self_loops = SelfLoopPolicy::max_incident;

  void validate() const {
    if (!(inflation >= 1.0)) throw ConfigError("MCL inflation must be at least 1");
    if (expansion < 1) throw ConfigError("MCL expansion power must be at least 1");
    if (!(prune >= 0.0 && prune < 1.0)) throw ConfigError("MCL pruning threshold must be in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("MCL epsilon must be positive");
    if (max_iterations < 1) throw ConfigError("MCL needs at least one iteration");
  }
};

struct MclResult {
  Clustering clustering;
  std::size_t iterations = 0;
  double residual = 0;
  // Largest |column sum - 1| seen after any inflation step.
  double max_column_deviation = 0;
};

/// Column-sparse stochastic matrix; each column holds (row, value) sorted by row.
class FlowMatrix {
 public:
  using Column = std::vector<std::pair<std::uint32_t, double>>;

  explicit FlowMatrix(std::size_t n) : cols_(n) {}

  std::size_t size() const noexcept { return cols_.size(); }
  Column &column(std::size_t j) { return cols_[j]; }
  const Column &column(std::size_t j) const { return cols_[j]; }

  double at(std::size_t i, std::size_t j) const {
    const auto &c = cols_[j];
    auto it = std::lower_bound(c.begin(), c.end(), std::make_pair(static_cast<std::uint32_t>(i), -1.0),
                               [](const auto &a, const auto &b) { return a.first < b.first; });
    return it != c.end() && it->first == i ? it->second : 0.0;
  }

  void normalize_columns() {
    for (auto &c : cols_) {
      double s = 0;
      for (auto &e : c) s += e.second;
      if (s > 0) {
        for (auto &e : c) e.second /= s;
      }
    }
  }

  double max_column_deviation() const {
    double dev = 0;
    for (const auto &c : cols_) {
      if (c.empty()) continue;
      double s = 0;
      for (const auto &e : c) s += e.second;
      dev = std::max(dev, std::abs(s - 1.0));
    }
    return dev;
  }

  FlowMatrix multiply(const FlowMatrix &rhs) const {
    const std::size_t n = size();
    FlowMatrix out(n);
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<char> mark(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      touched.clear();
      for (const auto &[k, bkj] : rhs.cols_[j]) {
        for (const auto &[i, aik] : cols_[k]) {
          if (!mark[i]) {
            mark[i] = 1;
            touched.push_back(i);
          }
          acc[i] += aik * bkj;
        }
      }
      std::sort(touched.begin(), touched.end());
      auto &col = out.cols_[j];
      col.reserve(touched.size());
      for (auto i : touched) {
        col.emplace_back(i, acc[i]);
        acc[i] = 0;
        mark[i] = 0;
      }
    }
    return out;
  }

  void inflate(double r) {
    for (auto &c : cols_) {
      for (auto &e : c) e.second = std::pow(e.second, r);
    }
  }

  /// Drops entries below `threshold`, always keeping each column's largest.
  void prune(double threshold) {
    for (auto &c : cols_) {
      if (c.empty()) continue;
      auto top = std::max_element(c.begin(), c.end(),
                                  [](const auto &a, const auto &b) { return a.second < b.second; });
      std::uint32_t keep = top->first;
      std::erase_if(c, [&](const auto &e) { return e.second < threshold && e.first != keep; });
    }
  }

  static double max_difference(const FlowMatrix &a, const FlowMatrix &b) {
    double diff = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const auto &x = a.cols_[j];
      const auto &y = b.cols_[j];
      std::size_t p = 0, q = 0;
      while (p < x.size() || q < y.size()) {
        if (q == y.size() || (p < x.size() && x[p].first < y[q].first)) {
          diff = std::max(diff, std::abs(x[p++].second));
        } else if (p == x.size() || y[q].first < x[p].first) {
          diff = std::max(diff, std::abs(y[q++].second));
        } else {
          diff = std::max(diff, std::abs(x[p++].second - y[q++].second));
        }
      }
    }
    return diff;
  }

 private:
  std::vector<Column> cols_;
};

/// Builds the column-stochastic flow matrix of a similarity graph, adding
/// self-loops per `policy` (isolated nodes get weight 1).
inline FlowMatrix mcl_flow_matrix(const DenseScores &dense, SelfLoopPolicy policy) {
  const std::size_t n = dense.size();
  FlowMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto &col = m.column(j);
    double max_w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      double s = dense(i, j);
      if (s < 0) {
        throw Error("MCL needs non-negative similarities; pair (" + dense.ids[i] + ", " +
                    dense.ids[j] + ") scores " + std::to_string(s));
      }
      if (s > 0) max_w = std::max(max_w, s);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = i == j ? (policy == SelfLoopPolicy::unit || max_w == 0 ? 1.0 : max_w) : dense(i, j);
      if (s > 0) col.emplace_back(static_cast<std::uint32_t>(i), s);
    }
  }
  m.normalize_columns();
  return m;
}

/// Reads clusters off a converged flow matrix. Attractors (non-zero diagonal)
/// that flow into each other form one cluster; every other node joins the
/// cluster of the attractor sending it the most flow, ties to the smaller id.
inline std::vector<std::size_t> mcl_interpret(const FlowMatrix &m, double epsilon) {
  const std::size_t n = m.size();
  std::vector<char> attractor(n, 0);
  for (std::size_t i = 0; i < n; ++i) attractor[i] = m.at(i, i) >= epsilon;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (!attractor[j]) continue;
    for (const auto &[i, v] : m.column(j)) {
      if (i != j && attractor[i] && v > 0) {
        auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::size_t> label(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (attractor[j]) {
      label[j] = find(j);
      continue;
    }
    std::optional<std::size_t> best;
    double best_flow = 0;
    for (const auto &[i, v] : m.column(j)) {
      if (attractor[i] && v > best_flow) {
        best_flow = v;
        best = i;
      }
    }
    label[j] = best ? find(*best) : j;
  }
  return label;
}

/// Lower-is-similar matrices are shifted to (max - score) first.
inline MclResult mcl(const SimilarityMatrix &matrix, const MclConfig &config = {}) {
  config.validate();
  if (matrix.ids().empty()) throw Error("cannot cluster an empty similarity matrix");
  DenseScores dense;
  if (matrix.orientation() == Orientation::lower_is_similar) {
    double top = 0;
    bool any = false;
    for (const auto &[pair, score] : matrix.entries()) {
      if (pair.first == pair.second) continue;
      top = any ? std::max(top, score) : score;
      any = true;
    }
    SimilarityMatrix shifted(Orientation::higher_is_similar);
    for (const auto &id : matrix.ids()) shifted.add_id(id);
    for (const auto &[pair, score] : matrix.entries()) {
      if (pair.first != pair.second) shifted.insert(pair.first, pair.second, top - score);
    }
    dense = densify(shifted, 0.0);
  } else {
    dense = densify(matrix, 0.0);
  }

  MclResult result;
  FlowMatrix m = mcl_flow_matrix(dense, config.self_loops);
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    FlowMatrix next = m;
    for (unsigned e = 1; e < config.expansion; ++e) next = next.multiply(m);
    next.inflate(config.inflation);
    next.normalize_columns();
    result.max_column_deviation = std::max(result.max_column_deviation, next.max_column_deviation());
    next.prune(config.prune);
    next.normalize_columns();
    result.max_column_deviation = std::max(result.max_column_deviation, next.max_column_deviation());
    residual = FlowMatrix::max_difference(next, m);
    m = std::move(next);
    result.iterations = it;
    if (residual < config.epsilon) break;
  }
  result.residual = residual;
  if (!(residual < config.epsilon)) {
    throw ConvergenceError("MCL did not converge in " + std::to_string(config.max_iterations) +
                               " iterations",
                           residual);
  }
  result.clustering = detail::to_clustering(dense.ids, mcl_interpret(m, config.epsilon));
  return result;
}

// ---------------------------------------------------------------------------

struct ClusterStats {
  std::size_t clusters = 0;
  std::size_t members = 0;
  std::map<std::size_t, std::size_t> size_histogram;  // cluster size -> count
};

inline ClusterStats cluster_stats(const Clustering &clustering) {
  ClusterStats stats;
  stats.clusters = clustering.clusters.size();
  for (const auto &c : clustering.clusters) {
    stats.members += c.size();
    ++stats.size_histogram[c.size()];
  }
  return stats;
}

}  // namespace ligvec
