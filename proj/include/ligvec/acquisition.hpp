//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Retrieval of protein-ligand interactions from web services:
//
//   domain id --(mapping service)--> UniProt accession
//             --(ChEMBL target search)--> target ids
//             --(ChEMBL activities, paginated)--> ligand ids + canonical SMILES
//
// Network access goes through the Transport interface, so everything here
// runs offline against a mock. Response bodies are cached verbatim on disk.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ligvec/corpus_io.hpp"
#include "ligvec/error.hpp"
#include "ligvec/types.hpp"

namespace ligvec {

struct AcquisitionConfig {
  // GET {mapping_url}/{domain_id} answers {"<domain_id>": ["<accession>", ...]}.
  std::string mapping_url;
  std::string chembl_url = "https://www.ebi.ac.uk/chembl/api/data";
  std::filesystem::path cache_dir;  // empty: in-memory cache only
  double timeout_seconds = 30.0;
  unsigned max_retries = 3;
  std::size_t page_size = 1000;

  void validate() const {
    if (!(timeout_seconds > 0)) throw ConfigError("request timeout must be positive");
    if (page_size == 0) throw ConfigError("page size must be positive");
  }

  /// Overrides fields from LIGVEC_MAPPING_URL, LIGVEC_CHEMBL_URL,
  /// LIGVEC_CACHE_DIR, LIGVEC_TIMEOUT and LIGVEC_RETRIES when set.
  static AcquisitionConfig from_environment() { return from_environment(AcquisitionConfig()); }

  static AcquisitionConfig from_environment(AcquisitionConfig base) {
    auto env = [](const char *name) -> std::optional<std::string> {
      const char *v = std::getenv(name);
      if (!v || !*v) return std::nullopt;
      return std::string(v);
    };
    if (auto v = env("LIGVEC_MAPPING_URL")) base.mapping_url = *v;
    if (auto v = env("LIGVEC_CHEMBL_URL")) base.chembl_url = *v;
    if (auto v = env("LIGVEC_CACHE_DIR")) base.cache_dir = *v;
    try {
      if (auto v = env("LIGVEC_TIMEOUT")) base.timeout_seconds = std::stod(*v);
      if (auto v = env("LIGVEC_RETRIES")) base.max_retries = static_cast<unsigned>(std::stoul(*v));
    } catch (const std::exception &) {
      throw ConfigError("LIGVEC_TIMEOUT / LIGVEC_RETRIES must be numeric");
    }
    base.validate();
    return base;
  }
};

/// Performs one GET and returns the body. Throws TransportError on failure.
/// Implementations used with more than one worker must be thread-safe.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string get(const std::string &url, double timeout_seconds) = 0;
};

struct LigandFetch {
  std::vector<LigandRecord> ligands;
  std::size_t dropped_without_smiles = 0;
  std::size_t pages = 0;
};

struct ProteinAcquisition {
  std::string domain_id;
  std::optional<std::string> accession;
  std::vector<LigandRecord> ligands;
  std::size_t dropped_without_smiles = 0;
  std::string error;  // non-empty when the protein was skipped
};

namespace detail {

/// Origin ("scheme://host[:port]") of an absolute URL.
inline std::string url_origin(const std::string &url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) return {};
  auto path = url.find('/', scheme + 3);
  return path == std::string::npos ? url : url.substr(0, path);
}

inline std::string cache_key(std::string_view raw) {
  std::string key;
  for (char c : raw) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_' || c == '.';
    key += ok ? c : '_';
  }
  return key;
}

inline std::string url_encode(std::string_view raw) {
  static const char *hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : raw) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

}  // namespace detail

class AcquisitionClient {
 public:
  AcquisitionClient(AcquisitionConfig config, Transport &transport)
      : config_(std::move(config)), transport_(transport) {
    config_.validate();
  }

  const AcquisitionConfig &config() const noexcept { return config_; }

  /// Number of requests that reached the transport (cache misses).
  std::size_t transport_calls() const {
    std::lock_guard lock(mutex_);
    return transport_calls_;
  }

  /// First accession mapped to `domain_id`. Throws NotFoundError when none.
  std::string resolve_accession(const std::string &domain_id) {
    if (config_.mapping_url.empty()) throw ConfigError("no mapping service URL configured");
    std::string url = config_.mapping_url + "/" + detail::url_encode(domain_id);
    std::string body = fetch(url, "mapping/" + detail::cache_key(domain_id) + ".json", domain_id);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception &e) {
      throw Error("mapping response for '" + domain_id + "' is not JSON: " + e.what());
    }
    if (j.is_object() && j.contains(domain_id)) {
      const auto &v = j[domain_id];
      if (v.is_string() && !v.get<std::string>().empty()) return v.get<std::string>();
      if (v.is_array()) {
        for (const auto &acc : v) {
          if (acc.is_string() && !acc.get<std::string>().empty()) return acc.get<std::string>();
        }
      }
    }
    throw NotFoundError("no UniProt accession found for '" + domain_id + "'");
  }

  /// All ligands with a canonical SMILES reported for targets of `accession`,
  /// deduplicated by ligand id in first-seen order.
  LigandFetch fetch_ligands(const std::string &accession) {
    LigandFetch out;
    std::set<std::string> seen;
    const std::string prefix = detail::cache_key(accession) + "/";

    std::vector<std::string> targets;
    std::string url = config_.chembl_url + "/target.json?target_components__accession=" +
                      detail::url_encode(accession) + "&limit=" + std::to_string(config_.page_size);
    for (std::size_t page = 0; !url.empty(); ++page) {
      auto j = parse(fetch(url, prefix + "targets_" + std::to_string(page) + ".json", accession),
                     accession);
      for (const auto &t : j.value("targets", nlohmann::json::array())) {
        auto id = t.value("target_chembl_id", std::string());
        if (!id.empty() && std::find(targets.begin(), targets.end(), id) == targets.end()) {
          targets.push_back(id);
        }
      }
      url = next_page(j);
    }

    for (const auto &target : targets) {
      url = config_.chembl_url + "/activity.json?target_chembl_id=" + detail::url_encode(target) +
            "&limit=" + std::to_string(config_.page_size) + "&offset=0";
      for (std::size_t page = 0; !url.empty(); ++page) {
        auto j = parse(fetch(url,
                             prefix + "activity_" + detail::cache_key(target) + "_" +
                                 std::to_string(page) + ".json",
                             accession),
                       accession);
        ++out.pages;
        for (const auto &rec : j.value("activities", nlohmann::json::array())) {
          auto id = rec.value("molecule_chembl_id", std::string());
          std::string smiles;
          if (rec.contains("canonical_smiles") && rec["canonical_smiles"].is_string()) {
            smiles = std::string(io::trim(rec["canonical_smiles"].get<std::string>()));
          }
          if (id.empty() || smiles.empty() || io::has_whitespace(smiles)) {
            ++out.dropped_without_smiles;
            continue;
          }
          if (seen.insert(id).second) out.ligands.push_back({id, smiles});
        }
        url = next_page(j);
      }
    }
    return out;
  }

  /// Runs the whole chain for each domain. Failures are recorded per
  /// protein; proteins with no ligands are reported with an empty list.
  std::vector<ProteinAcquisition> acquire(const std::vector<std::string> &domain_ids,
                                          std::size_t workers = 1) {
    std::vector<ProteinAcquisition> results(domain_ids.size());
    auto run = [&](std::size_t w, std::size_t stride) {
      for (std::size_t i = w; i < domain_ids.size(); i += stride) {
        auto &r = results[i];
        r.domain_id = domain_ids[i];
        try {
          r.accession = resolve_accession(r.domain_id);
          auto fetched = fetch_ligands(*r.accession);
          r.ligands = std::move(fetched.ligands);
          r.dropped_without_smiles = fetched.dropped_without_smiles;
        } catch (const std::exception &e) {
          r.error = e.what();
        }
      }
    };
    workers = std::max<std::size_t>(1, std::min(workers, domain_ids.size()));
    if (workers == 1) {
      run(0, 1);
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w, workers);
    }
    return results;
  }

 private:
  static nlohmann::json parse(const std::string &body, const std::string &accession) {
    try {
      return nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception &e) {
      throw Error("malformed ChEMBL response for '" + accession + "': " + e.what());
    }
  }

  std::string next_page(const nlohmann::json &j) const {
    if (!j.contains("page_meta") || !j["page_meta"].is_object()) return {};
    const auto &next = j["page_meta"]["next"];
    if (!next.is_string()) return {};
    auto link = next.get<std::string>();
    if (link.empty()) return {};
    if (link.rfind("http", 0) == 0) return link;
    return detail::url_origin(config_.chembl_url) + link;
  }

  std::string fetch(const std::string &url, const std::string &key, const std::string &subject) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = memory_.find(key); it != memory_.end()) return it->second;
    }
    if (!config_.cache_dir.empty()) {
      auto path = config_.cache_dir / key;
      if (std::filesystem::exists(path)) {
        auto body = io::read_file(path);
        std::lock_guard lock(mutex_);
        memory_.emplace(key, body);
        return body;
      }
    }
    std::string body;
    std::string last_error;
    bool ok = false;
    for (unsigned attempt = 0; attempt <= config_.max_retries && !ok; ++attempt) {
      try {
        {
          std::lock_guard lock(mutex_);
          ++transport_calls_;
        }
        body = transport_.get(url, config_.timeout_seconds);
        ok = true;
      } catch (const TransportError &e) {
        last_error = e.what();
      }
    }
    if (!ok) {
      throw TransportError("request for '" + subject + "' failed after " +
                           std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
    }
    if (!config_.cache_dir.empty()) io::write_file_atomic(config_.cache_dir / key, body);
    std::lock_guard lock(mutex_);
    memory_.emplace(key, body);
    return body;
  }

  AcquisitionConfig config_;
  Transport &transport_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> memory_;
  std::size_t transport_calls_ = 0;
};

/// Interaction table of the proteins that yielded at least one ligand.
inline InteractionTable to_interactions(const std::vector<ProteinAcquisition> &results) {
  InteractionTable table;
  for (const auto &r : results) {
    if (r.error.empty() && !r.ligands.empty()) table[r.domain_id] = r.ligands;
  }
  return table;
}

}  // namespace ligvec
