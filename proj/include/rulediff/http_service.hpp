#pragma once

#include <memory>
#include <string>
#include <thread>

#include "rulediff/service.hpp"

namespace rulediff {

// HTTP front end over validate_message.
//
//   POST /api/messages/validation
//     200 + JSON array [{"ruleId","version","result"}]  per-rule results
//     200 + empty body                                   pre-aggregation gate
//     500 + empty body                                   date gate / rule error
//     400                                                malformed JSON
//   GET /health -> 200 "ok"
//
// Registry, schema, and fault config are immutable after construction;
// requests share no mutable state.
class ServiceServer {
 public:
  ServiceServer(std::vector<Rule> registry, Schema schema, FaultConfig cfg);
  ~ServiceServer();

  ServiceServer(const ServiceServer&) = delete;
  ServiceServer& operator=(const ServiceServer&) = delete;

  // Binds and serves on a background thread; port 0 picks an ephemeral
  // port. Returns the bound port. Throws ConfigError when binding fails.
  int start(const std::string& host, int port);

  // Serves on the calling thread until stop() or process exit.
  void run_blocking(const std::string& host, int port);

  void stop();

  int port() const { return port_; }
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

// Thin client for the validation endpoint.
class ServiceClient {
 public:
  explicit ServiceClient(const std::string& base_url);
  ~ServiceClient();

  struct CallResult {
    bool transport_error = false;
    std::string error;
    int status = 0;
    // decoded body; meaningful only for status 200
    ServiceResponse response;
  };

  CallResult validate(const nlohmann::json& message);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rulediff
