//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Readers and writers for every file-based artifact. All formats are UTF-8,
// LF-terminated, tab- or space-separated text.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ligvec/error.hpp"
#include "ligvec/types.hpp"

namespace ligvec {
namespace io {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Text helpers

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Splits on runs of blanks, dropping empty fields.
inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), is_space);
}

/// Reads all lines with trailing CR stripped. Throws if unreadable.
inline std::vector<std::string> read_lines(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error("error while reading '" + path.string() + "'");
  return lines;
}

inline std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary sibling and renames it over `path`.
inline void write_file_atomic(const fs::path &path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("error while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

// Shortest decimal strings that parse back to the same value.
template <typename Float>
std::string format_real(Float value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("float formatting failed");
  return std::string(buf, ptr);
}

template <typename Float>
bool parse_real(std::string_view text, Float &out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline bool parse_size(std::string_view text, std::size_t &out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

// ---------------------------------------------------------------------------
// SMILES corpus: one SMILES per line

inline std::vector<std::string> parse_smiles_corpus(const std::vector<std::string> &lines,
                                                    const std::string &source) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto s = trim(lines[i]);
    if (s.empty()) continue;
    if (has_whitespace(s)) throw ParseError(source, i + 1, "SMILES contains whitespace");
    out.emplace_back(s);
  }
  return out;
}

inline std::vector<std::string> load_smiles_corpus(const fs::path &path) {
  return parse_smiles_corpus(read_lines(path), path.string());
}

// ---------------------------------------------------------------------------
// Interactions: protein_id<TAB>ligand_id<TAB>smiles

inline InteractionTable load_interactions(const fs::path &path) {
  InteractionTable table;
  std::set<std::pair<std::string, std::string>> seen;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 3) {
      throw ParseError(path.string(), i + 1,
                       "expected 3 tab-separated columns, found " + std::to_string(cols.size()));
    }
    std::string protein(trim(cols[0])), ligand(trim(cols[1])), smiles(trim(cols[2]));
    if (protein.empty() || ligand.empty() || smiles.empty()) {
      throw ParseError(path.string(), i + 1, "empty field");
    }
    if (has_whitespace(smiles)) throw ParseError(path.string(), i + 1, "SMILES contains whitespace");
    if (!seen.emplace(protein, ligand).second) continue;
    table[protein].push_back({std::move(ligand), std::move(smiles)});
  }
  return table;
}

inline std::string format_interactions(const InteractionTable &table) {
  std::string out;
  for (const auto &[protein, ligands] : table) {
    for (const auto &ligand : ligands) {
      out += protein + '\t' + ligand.id + '\t' + ligand.smiles + '\n';
    }
  }
  return out;
}

inline void save_interactions(const fs::path &path, const InteractionTable &table) {
  write_file_atomic(path, format_interactions(table));
}

// ---------------------------------------------------------------------------
// Gold standard: protein_id<TAB>sccs

/// Splits a dotted SCOPe code into family and super-family labels.
inline GoldLabels parse_sccs(std::string_view code) {
  auto parts = split(code, '.');
  if (parts.size() < 2 || std::any_of(parts.begin(), parts.end(),
                                      [](std::string_view p) { return p.empty(); })) {
    throw Error("classification code '" + std::string(code) +
                "' needs at least two non-empty dotted components");
  }
  auto last_dot = code.rfind('.');
  return {std::string(code), std::string(code.substr(0, last_dot))};
}

/// Drops proteins whose family, then whose super-family, has a single member.
inline GoldStandard remove_singletons(GoldStandard gold) {
  for (Level level : {Level::family, Level::superfamily}) {
    std::map<std::string, std::size_t> counts;
    for (const auto &[id, labels] : gold) ++counts[labels.at(level)];
    std::erase_if(gold, [&](const auto &kv) { return counts[kv.second.at(level)] < 2; });
  }
  return gold;
}

inline GoldStandard load_gold_standard(const fs::path &path, bool drop_singletons = false) {
  GoldStandard gold;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 2) {
      throw ParseError(path.string(), i + 1,
                       "expected 2 tab-separated columns, found " + std::to_string(cols.size()));
    }
    std::string id(trim(cols[0]));
    GoldLabels labels;
    try {
      labels = parse_sccs(trim(cols[1]));
    } catch (const Error &e) {
      throw ParseError(path.string(), i + 1, e.what());
    }
    auto [it, inserted] = gold.emplace(id, labels);
    if (!inserted && it->second != labels) {
      throw ParseError(path.string(), i + 1, "protein '" + id + "' has two different labels");
    }
  }
  return drop_singletons ? remove_singletons(std::move(gold)) : gold;
}

// ---------------------------------------------------------------------------
// Embedding model. Line 1 "vocab_size dimension", then "word v1 ... v_dim".
// Metadata goes to a JSON sidecar "<path>.meta.json".

inline fs::path metadata_path(const fs::path &model_path) {
  fs::path p = model_path;
  p += ".meta.json";
  return p;
}

inline std::string format_model(const EmbeddingModel &model) {
  std::string out = std::to_string(model.size()) + ' ' + std::to_string(model.dimension()) + '\n';
  for (std::size_t i = 0; i < model.size(); ++i) {
    out += model.words()[i];
    for (float v : model.vector(i)) {
      out += ' ';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json metadata_to_json(const ModelMetadata &meta) {
  nlohmann::ordered_json j;
  j["token_kind"] = meta.token_kind ? std::string(to_string(*meta.token_kind)) : std::string();
  j["word_length"] = meta.word_length;
  j["corpus_tag"] = meta.corpus_tag;
  j["training"] = meta.training;
  return j;
}

inline ModelMetadata metadata_from_json(const nlohmann::json &j) {
  ModelMetadata meta;
  auto kind = j.value("token_kind", std::string());
  if (!kind.empty()) meta.token_kind = parse_token_kind(kind);
  meta.word_length = j.value("word_length", 0);
  meta.corpus_tag = j.value("corpus_tag", std::string());
  meta.training = j.value("training", std::map<std::string, std::string>{});
  return meta;
}

inline void save_model(const fs::path &path, const EmbeddingModel &model) {
  write_file_atomic(path, format_model(model));
  write_file_atomic(metadata_path(path), metadata_to_json(model.metadata).dump(2) + '\n');
}

inline EmbeddingModel parse_model(const std::vector<std::string> &lines, const std::string &source) {
  if (lines.empty()) throw ParseError(source, 1, "missing header line");
  auto header = split_ws(lines[0]);
  std::size_t vocab = 0, dim = 0;
  if (header.size() != 2 || !parse_size(header[0], vocab) || !parse_size(header[1], dim) ||
      dim == 0) {
    throw ParseError(source, 1, "header must be 'vocab_size dimension'");
  }
  EmbeddingModel model(dim);
  std::vector<float> values(dim);
  std::size_t body = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    ++body;
    if (body > vocab) {
      throw ParseError(source, i + 1, "header declares " + std::to_string(vocab) + " words");
    }
    auto fields = split_ws(lines[i]);
    if (fields.size() != dim + 1) {
      throw ParseError(source, i + 1,
                       "expected word plus " + std::to_string(dim) + " values, found " +
                           std::to_string(fields.size() - 1));
    }
    for (std::size_t d = 0; d < dim; ++d) {
      if (!parse_real(fields[d + 1], values[d])) {
        throw ParseError(source, i + 1, "bad number '" + std::string(fields[d + 1]) + "'");
      }
    }
    try {
      model.add(std::string(fields[0]), values);
    } catch (const Error &e) {
      throw ParseError(source, i + 1, e.what());
    }
  }
  if (body != vocab) {
    throw ParseError(source, 0, "header declares " + std::to_string(vocab) + " words, body has " +
                                    std::to_string(body));
  }
  return model;
}

inline EmbeddingModel load_model(const fs::path &path) {
  auto model = parse_model(read_lines(path), path.string());
  auto meta = metadata_path(path);
  if (fs::exists(meta)) {
    try {
      model.metadata = metadata_from_json(nlohmann::json::parse(read_file(meta)));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(meta.string(), 0, e.what());
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Similarity matrix: idA<TAB>idB<TAB>score with idA <= idB

inline std::string format_similarity(const SimilarityMatrix &matrix) {
  std::string out;
  for (const auto &[pair, score] : matrix.entries()) {
    out += pair.first + '\t' + pair.second + '\t' + format_real(score) + '\n';
  }
  return out;
}

inline void save_similarity(const fs::path &path, const SimilarityMatrix &matrix) {
  write_file_atomic(path, format_similarity(matrix));
}

inline SimilarityMatrix load_similarity(const fs::path &path,
                                        Orientation orientation = Orientation::higher_is_similar) {
  SimilarityMatrix matrix(orientation);
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    double score = 0;
    if (cols.size() != 3 || !parse_real(trim(cols[2]), score)) {
      throw ParseError(path.string(), i + 1, "expected 'idA<TAB>idB<TAB>score'");
    }
    try {
      matrix.insert(std::string(trim(cols[0])), std::string(trim(cols[1])), score);
    } catch (const Error &e) {
      throw ParseError(path.string(), i + 1, e.what());
    }
  }
  return matrix;
}

/// Pair restriction list: idA<TAB>idB per line (extra columns ignored).
inline std::set<IdPair> load_pairs(const fs::path &path) {
  std::set<IdPair> pairs;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split_ws(lines[i]);
    if (cols.size() < 2) throw ParseError(path.string(), i + 1, "expected two ids");
    pairs.insert(ordered_pair(std::string(cols[0]), std::string(cols[1])));
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Clusters: cluster_index<TAB>protein_id, indices from 0 in first-seen order

inline std::string format_clusters(const Clustering &clustering) {
  std::string out;
  for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
    for (const auto &id : clustering.clusters[c]) out += std::to_string(c) + '\t' + id + '\n';
  }
  return out;
}

inline void save_clusters(const fs::path &path, const Clustering &clustering) {
  write_file_atomic(path, format_clusters(clustering));
}

inline Clustering load_clusters(const fs::path &path) {
  Clustering clustering;
  std::map<std::string, std::size_t> slot;
  std::set<std::string> seen;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(path.string(), i + 1, "expected 'cluster<TAB>id'");
    std::string label(trim(cols[0])), id(trim(cols[1]));
    if (!seen.insert(id).second) {
      throw ParseError(path.string(), i + 1, "id '" + id + "' listed twice");
    }
    auto [it, inserted] = slot.emplace(label, clustering.clusters.size());
    if (inserted) clustering.clusters.emplace_back();
    clustering.clusters[it->second].push_back(std::move(id));
  }
  return clustering;
}

// ---------------------------------------------------------------------------
// Vector tables: id<TAB>v1 ... v_d

struct VectorRow {
  std::string id;
  std::vector<double> values;

  friend bool operator==(const VectorRow &, const VectorRow &) = default;
};

inline std::string format_vectors(const std::vector<VectorRow> &rows) {
  std::string out;
  for (const auto &row : rows) {
    out += row.id;
    out += '\t';
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (i) out += ' ';
      out += format_real(row.values[i]);
    }
    out += '\n';
  }
  return out;
}

inline void save_vectors(const fs::path &path, const std::vector<VectorRow> &rows) {
  write_file_atomic(path, format_vectors(rows));
}

inline std::vector<VectorRow> load_vectors(const fs::path &path) {
  std::vector<VectorRow> rows;
  std::set<std::string> ids;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(path.string(), i + 1, "expected 'id<TAB>values'");
    VectorRow row{std::string(trim(cols[0])), {}};
    for (auto field : split_ws(cols[1])) {
      double v = 0;
      if (!parse_real(field, v)) {
        throw ParseError(path.string(), i + 1, "bad number '" + std::string(field) + "'");
      }
      row.values.push_back(v);
    }
    if (row.values.empty()) throw ParseError(path.string(), i + 1, "empty vector");
    if (!rows.empty() && rows.front().values.size() != row.values.size()) {
      throw ParseError(path.string(), i + 1, "vector length differs from first row");
    }
    if (!ids.insert(row.id).second) {
      throw ParseError(path.string(), i + 1, "duplicate id '" + row.id + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Token tables: id<TAB>tok1 tok2 ... (a per-entity word multiset)

struct TokenRow {
  std::string id;
  std::vector<std::string> tokens;

  friend bool operator==(const TokenRow &, const TokenRow &) = default;
};

inline std::string format_tokens(const std::vector<TokenRow> &rows) {
  std::string out;
  for (const auto &row : rows) {
    out += row.id;
    out += '\t';
    for (std::size_t i = 0; i < row.tokens.size(); ++i) {
      if (i) out += ' ';
      out += row.tokens[i];
    }
    out += '\n';
  }
  return out;
}

inline void save_tokens(const fs::path &path, const std::vector<TokenRow> &rows) {
  write_file_atomic(path, format_tokens(rows));
}

inline std::vector<TokenRow> load_tokens(const fs::path &path) {
  std::vector<TokenRow> rows;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(path.string(), i + 1, "expected 'id<TAB>tokens'");
    TokenRow row{std::string(trim(cols[0])), {}};
    for (auto tok : split_ws(cols[1])) row.tokens.emplace_back(tok);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Fingerprints: ligand_id<TAB>0101...

inline FingerprintTable load_fingerprints(const fs::path &path) {
  FingerprintTable table;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(path.string(), i + 1, "expected 'id<TAB>bits'");
    auto text = trim(cols[1]);
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw ParseError(path.string(), i + 1, "bit string must be 0/1");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (bits.empty()) throw ParseError(path.string(), i + 1, "empty bit string");
    if (table.width == 0) table.width = bits.size();
    if (bits.size() != table.width) {
      throw ParseError(path.string(), i + 1,
                       "width " + std::to_string(bits.size()) + " differs from table width " +
                           std::to_string(table.width));
    }
    std::string id(trim(cols[0]));
    if (!table.bits.emplace(id, std::move(bits)).second) {
      throw ParseError(path.string(), i + 1, "duplicate ligand id '" + id + "'");
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Protein sequences: FASTA (first char '>') or id<TAB>sequence

inline std::map<std::string, std::string> load_sequences(const fs::path &path) {
  std::map<std::string, std::string> seqs;
  auto lines = read_lines(path);
  auto first = std::find_if(lines.begin(), lines.end(),
                            [](const std::string &l) { return !trim(l).empty(); });
  bool fasta = first != lines.end() && trim(*first).front() == '>';
  std::string current;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (fasta) {
      if (line.front() == '>') {
        auto fields = split_ws(line.substr(1));
        if (fields.empty()) throw ParseError(path.string(), i + 1, "FASTA header without id");
        current = std::string(fields[0]);
        if (seqs.contains(current)) {
          throw ParseError(path.string(), i + 1, "duplicate sequence id '" + current + "'");
        }
        seqs[current];
      } else {
        for (char c : line) {
          if (!is_space(c)) seqs[current] += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
      }
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != 2) throw ParseError(path.string(), i + 1, "expected 'id<TAB>sequence'");
    std::string seq(trim(cols[1]));
    std::transform(seq.begin(), seq.end(), seq.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (!seqs.emplace(std::string(trim(cols[0])), std::move(seq)).second) {
      throw ParseError(path.string(), i + 1, "duplicate sequence id");
    }
  }
  for (const auto &[id, seq] : seqs) {
    if (seq.empty()) throw ParseError(path.string(), 0, "sequence '" + id + "' is empty");
  }
  return seqs;
}

}  // namespace io
}  // namespace ligvec
