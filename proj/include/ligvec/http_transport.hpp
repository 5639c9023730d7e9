//
// ligvec - Copyright 2026 The ligvec Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Live HTTP(S) transport backed by cpp-httplib. HTTPS needs the including
// target to define CPPHTTPLIB_OPENSSL_SUPPORT and link OpenSSL.

#include <chrono>
#include <cmath>
#include <string>

#include <httplib.h>

#include "ligvec/acquisition.hpp"
#include "ligvec/error.hpp"

namespace ligvec {

class HttpTransport : public Transport {
 public:
  std::string get(const std::string &url, double timeout_seconds) override {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw TransportError("not an absolute URL: " + url);
    auto path_start = url.find('/', scheme + 3);
    std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    auto timeout = std::chrono::milliseconds(static_cast<long long>(std::ceil(timeout_seconds * 1000)));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_follow_location(true);
    httplib::Headers headers{{"Accept", "application/json"}};
    auto res = client.Get(path, headers);
    if (!res) throw TransportError("GET " + url + ": " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw TransportError("GET " + url + ": HTTP status " + std::to_string(res->status));
    }
    return res->body;
  }
};

}  // namespace ligvec
