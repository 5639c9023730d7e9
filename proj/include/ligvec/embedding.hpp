//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Skip-gram word embeddings trained with negative sampling.
//
// For a centre word w with input vector v and a context word c with output
// vector u_c, each training pair minimises
//
//   L = -log sigmoid(u_c . v) - sum_n log sigmoid(-u_n . v)
//
// where the negatives n are drawn from the unigram distribution raised to
// the 3/4 power. The published embeddings are the input vectors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ligvec/error.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

using Sentence = std::vector<std::string>;
using TrainingCorpus = std::vector<Sentence>;

struct TrainConfig {
  std::size_t dimension = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to lr * 1e-4
  std::size_t min_count = 1;
  double subsample = 0.0;  // 0 disables frequent-word subsampling
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  void validate() const {
    if (dimension < 1) throw ConfigError("dimension must be at least 1");
    if (window < 1) throw ConfigError("window must be at least 1");
    if (negatives < 1) throw ConfigError("negatives must be at least 1");
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
      throw ConfigError("learning rate must be positive");
    }
    if (min_count < 1) throw ConfigError("min_count must be at least 1");
    if (!(subsample >= 0)) throw ConfigError("subsample threshold must be non-negative");
    if (workers < 1) throw ConfigError("workers must be at least 1");
  }

  std::map<std::string, std::string> describe() const {
    auto real = [](double v) {
      std::ostringstream ss;
      ss << v;
      return ss.str();
    };
    return {{"architecture", "skipgram_negative_sampling"},
            {"dimension", std::to_string(dimension)},
            {"window", std::to_string(window)},
            {"negatives", std::to_string(negatives)},
            {"epochs", std::to_string(epochs)},
            {"learning_rate", real(learning_rate)},
            {"min_count", std::to_string(min_count)},
            {"subsample", real(subsample)},
            {"seed", std::to_string(seed)},
            {"workers", std::to_string(workers)},
            {"negative_distribution", "unigram^0.75"}};
  }
};

// ---------------------------------------------------------------------------
// Vocabulary

struct Vocabulary {
  std::vector<std::string> words;      // index order: count desc, then lexicographic
  std::vector<std::uint64_t> counts;
  std::map<std::string, std::size_t, std::less<>> index;

  std::size_t size() const noexcept { return words.size(); }

  std::optional<std::size_t> find(std::string_view word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

inline Vocabulary build_vocab(const TrainingCorpus &corpus, std::size_t min_count) {
  if (corpus.empty()) throw Error("training corpus is empty");
  std::map<std::string, std::uint64_t> counts;
  for (const auto &sentence : corpus) {
    for (const auto &tok : sentence) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto &[word, count] : counts) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw Error("vocabulary is empty after applying min_count " + std::to_string(min_count));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  Vocabulary vocab;
  for (auto &[word, count] : kept) {
    vocab.index.emplace(word, vocab.words.size());
    vocab.words.push_back(word);
    vocab.counts.push_back(count);
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Pair loss and its gradient

template <typename T>
T sigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  T e = std::exp(x);
  return e / (T(1) + e);
}

/// log(sigmoid(x)) without overflow for large |x|.
template <typename T>
T log_sigmoid(T x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T sgns_pair_loss(std::span<const T> center, std::span<const T> context,
                 const std::vector<std::span<const T>> &negatives) {
  T loss = -log_sigmoid(dot(context, center));
  for (auto neg : negatives) loss -= log_sigmoid(-dot(neg, center));
  return loss;
}

template <typename T>
struct PairGradient {
  std::vector<T> center;
  std::vector<T> context;
  std::vector<std::vector<T>> negatives;
};

template <typename T>
PairGradient<T> sgns_pair_gradient(std::span<const T> center, std::span<const T> context,
                                   const std::vector<std::span<const T>> &negatives) {
  const std::size_t d = center.size();
  PairGradient<T> g{std::vector<T>(d, 0), std::vector<T>(d, 0), {}};
  // d/dx -log sigmoid(x) = sigmoid(x) - 1; d/dx -log sigmoid(-x) = sigmoid(x)
  T coef = sigmoid(dot(context, center)) - T(1);
  for (std::size_t i = 0; i < d; ++i) {
    g.center[i] += coef * context[i];
    g.context[i] = coef * center[i];
  }
  for (auto neg : negatives) {
    T c = sigmoid(dot(neg, center));
    std::vector<T> gn(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.center[i] += c * neg[i];
      gn[i] = c * center[i];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Trainer

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries unlike std::uniform_real_distribution.
inline double unit_real(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <bool Shared>
inline float load(const float &x) {
  if constexpr (Shared) {
    return std::atomic_ref<float>(const_cast<float &>(x)).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Shared>
inline void add(float &x, float delta) {
  if constexpr (Shared) {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

}  // namespace detail

class SkipGramTrainer {
 public:
  SkipGramTrainer(const TrainingCorpus &corpus, TrainConfig config)
      : config_(std::move(config)) {
    config_.validate();
    vocab_ = build_vocab(corpus, config_.min_count);
    for (const auto &sentence : corpus) {
      std::vector<std::uint32_t> encoded;
      encoded.reserve(sentence.size());
      for (const auto &tok : sentence) {
        if (auto idx = vocab_.find(tok)) encoded.push_back(static_cast<std::uint32_t>(*idx));
      }
      if (!encoded.empty()) {
        train_words_ += encoded.size();
        sentences_.push_back(std::move(encoded));
      }
    }
    build_noise_table();
    init_weights();
  }

  const Vocabulary &vocabulary() const noexcept { return vocab_; }
  const TrainConfig &config() const noexcept { return config_; }
  std::size_t epochs_done() const noexcept { return epochs_done_; }
  std::size_t dimension() const noexcept { return config_.dimension; }

  std::span<const float> input_vector(std::size_t word) const {
    return {input_.data() + word * config_.dimension, config_.dimension};
  }
  std::span<const float> output_vector(std::size_t word) const {
    return {output_.data() + word * config_.dimension, config_.dimension};
  }

  /// Mean training loss over the pairs visited in the last epoch.
  double last_epoch_loss() const noexcept { return last_epoch_loss_; }

  /// Loss of one (centre, context, negatives) pair under the current weights.
  double pair_loss(std::size_t center, std::size_t context,
                   std::span<const std::size_t> negatives) const {
    std::vector<double> v(input_vector(center).begin(), input_vector(center).end());
    std::vector<double> u(output_vector(context).begin(), output_vector(context).end());
    std::vector<std::vector<double>> negs;
    for (auto n : negatives) negs.emplace_back(output_vector(n).begin(), output_vector(n).end());
    std::vector<std::span<const double>> neg_spans(negs.begin(), negs.end());
    return sgns_pair_loss<double>(v, u, neg_spans);
  }

  /// Draws a negative sample index from the unigram^0.75 table.
  std::size_t sample_negative(std::mt19937_64 &rng) const {
    double r = detail::unit_real(rng) * noise_cdf_.back();
    auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), r);
    return std::min<std::size_t>(it - noise_cdf_.begin(), noise_cdf_.size() - 1);
  }

  void train_epoch() {
    if (epochs_done_ >= config_.epochs) throw Error("all configured epochs already trained");
    const std::size_t workers = std::min(config_.workers, std::max<std::size_t>(1, sentences_.size()));
    std::vector<double> loss(workers, 0.0);
    std::vector<std::uint64_t> pairs(workers, 0);
    auto shard = [&](std::size_t w) {
      std::size_t begin = sentences_.size() * w / workers;
      std::size_t end = sentences_.size() * (w + 1) / workers;
      std::mt19937_64 rng(config_.seed + 0x9E3779B97F4A7C15ull * (epochs_done_ * workers + w + 1));
      if (workers == 1) {
        run_shard<false>(begin, end, rng, loss[w], pairs[w]);
      } else {
        run_shard<true>(begin, end, rng, loss[w], pairs[w]);
      }
    };
    if (workers == 1) {
      shard(0);
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(shard, w);
    }
    double total_loss = 0;
    std::uint64_t total_pairs = 0;
    for (std::size_t w = 0; w < workers; ++w) {
      total_loss += loss[w];
      total_pairs += pairs[w];
    }
    last_epoch_loss_ = total_pairs ? total_loss / static_cast<double>(total_pairs) : 0.0;
    ++epochs_done_;
  }

  void train() {
    while (epochs_done_ < config_.epochs) train_epoch();
  }

  EmbeddingModel model(ModelMetadata metadata = {}) const {
    EmbeddingModel m(config_.dimension);
    for (std::size_t i = 0; i < vocab_.size(); ++i) m.add(vocab_.words[i], input_vector(i));
    metadata.training = config_.describe();
    m.metadata = std::move(metadata);
    return m;
  }

 private:
  void build_noise_table() {
    noise_cdf_.resize(vocab_.size());
    double acc = 0;
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      acc += std::pow(static_cast<double>(vocab_.counts[i]), 0.75);
      noise_cdf_[i] = acc;
    }
  }

  void init_weights() {
    const std::size_t n = vocab_.size() * config_.dimension;
    input_.resize(n);
    output_.assign(n, 0.0f);
    std::mt19937_64 rng(config_.seed);
    for (auto &x : input_) {
      x = static_cast<float>((detail::unit_real(rng) - 0.5) / static_cast<double>(config_.dimension));
    }
    total_count_ = 0;
    for (auto c : vocab_.counts) total_count_ += c;
  }

  double current_rate() const {
    double total = static_cast<double>(config_.epochs) * static_cast<double>(train_words_) + 1.0;
    double progress = static_cast<double>(words_seen_.load(std::memory_order_relaxed)) / total;
    return config_.learning_rate * std::max(1.0 - progress, 1e-4);
  }

  bool keep(std::uint32_t word, std::mt19937_64 &rng) const {
    if (config_.subsample <= 0) return true;
    double f = static_cast<double>(vocab_.counts[word]);
    double t = config_.subsample * static_cast<double>(total_count_);
    double p = (std::sqrt(f / t) + 1.0) * t / f;
    return p >= 1.0 || detail::unit_real(rng) < p;
  }

  template <bool Shared>
  void run_shard(std::size_t begin, std::size_t end, std::mt19937_64 &rng, double &loss,
                 std::uint64_t &pairs) {
    const std::size_t d = config_.dimension;
    std::vector<float> center_grad(d);
    std::vector<float> center(d);
    std::vector<std::uint32_t> kept;
    for (std::size_t s = begin; s < end; ++s) {
      const auto &sentence = sentences_[s];
      const float rate = static_cast<float>(current_rate());
      words_seen_.fetch_add(sentence.size(), std::memory_order_relaxed);
      kept.clear();
      for (auto w : sentence) {
        if (keep(w, rng)) kept.push_back(w);
      }
      for (std::size_t pos = 0; pos < kept.size(); ++pos) {
        // Dynamic window: effective radius uniform in [1, window].
        std::size_t radius = config_.window - static_cast<std::size_t>(rng() % config_.window);
        std::size_t lo = pos >= radius ? pos - radius : 0;
        std::size_t hi = std::min(kept.size() - 1, pos + radius);
        const std::size_t word = kept[pos];
        for (std::size_t cpos = lo; cpos <= hi; ++cpos) {
          if (cpos == pos) continue;
          const std::size_t context = kept[cpos];
          float *v = input_.data() + word * d;
          for (std::size_t i = 0; i < d; ++i) center[i] = detail::load<Shared>(v[i]);
          std::fill(center_grad.begin(), center_grad.end(), 0.0f);
          loss += update<Shared>(center, center_grad, context, 1.0f, rate);
          for (std::size_t n = 0; n < config_.negatives; ++n) {
            std::size_t neg = sample_negative(rng);
            if (neg == context) continue;
            loss += update<Shared>(center, center_grad, neg, 0.0f, rate);
          }
          for (std::size_t i = 0; i < d; ++i) detail::add<Shared>(v[i], center_grad[i]);
          ++pairs;
        }
      }
    }
  }

  // One logistic term: gradient step on the output vector of `target` and
  // accumulation of the centre-vector step. Returns the term's loss.
  template <bool Shared>
  double update(std::span<const float> center, std::span<float> center_grad, std::size_t target,
                float label, float rate) {
    const std::size_t d = config_.dimension;
    float *u = output_.data() + target * d;
    float f = 0;
    for (std::size_t i = 0; i < d; ++i) f += center[i] * detail::load<Shared>(u[i]);
    float g = (label - sigmoid(f)) * rate;
    for (std::size_t i = 0; i < d; ++i) {
      float ui = detail::load<Shared>(u[i]);
      center_grad[i] += g * ui;
      detail::add<Shared>(u[i], g * center[i]);
    }
    double x = static_cast<double>(f);
    return label > 0 ? -log_sigmoid(x) : -log_sigmoid(-x);
  }

  TrainConfig config_;
  Vocabulary vocab_;
  std::vector<std::vector<std::uint32_t>> sentences_;
  std::uint64_t train_words_ = 0;
  std::uint64_t total_count_ = 0;
  std::vector<double> noise_cdf_;
  std::vector<float> input_;
  std::vector<float> output_;
  std::atomic<std::uint64_t> words_seen_{0};
  std::size_t epochs_done_ = 0;
  double last_epoch_loss_ = 0;
};

inline EmbeddingModel train(const TrainingCorpus &corpus, const TrainConfig &config,
                            ModelMetadata metadata = {}) {
  SkipGramTrainer trainer(corpus, config);
  trainer.train();
  return trainer.model(std::move(metadata));
}

inline std::optional<std::span<const float>> lookup(const EmbeddingModel &model,
                                                    std::string_view word) {
  return model.lookup(word);
}

}  // namespace ligvec
