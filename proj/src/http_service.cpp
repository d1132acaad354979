#include "rulediff/http_service.hpp"

#include "httplib.h"

namespace rulediff {

namespace {

nlohmann::json results_to_json(const std::vector<RuleResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"ruleId", r.id},
                   {"version", r.version},
                   {"result", to_string(r.result)}});
  }
  return arr;
}

}  // namespace

struct ServiceServer::Impl {
  Impl(std::vector<Rule> registry_, Schema schema_, FaultConfig cfg_)
      : registry(std::move(registry_)),
        schema(std::move(schema_)),
        cfg(std::move(cfg_)) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server.Post("/api/messages/validation",
                [this](const httplib::Request& req, httplib::Response& res) {
                  handle_validation(req, res);
                });
  }

  void handle_validation(const httplib::Request& req, httplib::Response& res) {
    nlohmann::json message = nlohmann::json::parse(req.body, nullptr, false);
    if (message.is_discarded() || !message.is_object()) {
      res.status = 400;
      res.set_content("request body must be a JSON object", "text/plain");
      return;
    }
    ServiceResponse out = validate_message(message, registry, schema, cfg);
    switch (out.kind) {
      case ServiceResponse::Kind::Http500:
        res.status = 500;
        break;
      case ServiceResponse::Kind::EmptyResponse:
        res.status = 200;
        break;
      case ServiceResponse::Kind::PerRule:
        res.status = 200;
        res.set_content(results_to_json(out.results).dump(), "application/json");
        break;
    }
  }

  std::vector<Rule> registry;
  Schema schema;
  FaultConfig cfg;
  httplib::Server server;
};

ServiceServer::ServiceServer(std::vector<Rule> registry, Schema schema,
                             FaultConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(registry), std::move(schema),
                                   std::move(cfg))) {}

ServiceServer::~ServiceServer() { stop(); }

int ServiceServer::start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ < 0) throw ConfigError("cannot bind to an ephemeral port");
  } else {
    if (!impl_->server.bind_to_port(host, port))
      throw ConfigError("cannot bind to port " + std::to_string(port));
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void ServiceServer::run_blocking(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  if (!impl_->server.listen(host, port))
    throw ConfigError("cannot serve on " + host + ":" + std::to_string(port));
}

void ServiceServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string ServiceServer::base_url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

struct ServiceClient::Impl {
  explicit Impl(const std::string& base_url) : client(base_url) {
    client.set_connection_timeout(5);
    client.set_read_timeout(30);
  }

  httplib::Client client;
};

ServiceClient::ServiceClient(const std::string& base_url)
    : impl_(std::make_unique<Impl>(base_url)) {}

ServiceClient::~ServiceClient() = default;

ServiceClient::CallResult ServiceClient::validate(const nlohmann::json& message) {
  CallResult out;
  auto res = impl_->client.Post("/api/messages/validation", message.dump(),
                                "application/json");
  if (!res) {
    out.transport_error = true;
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  if (res->status == 500) {
    out.response.kind = ServiceResponse::Kind::Http500;
    return out;
  }
  if (res->status != 200) {
    out.transport_error = true;
    out.error = "unexpected HTTP status " + std::to_string(res->status);
    return out;
  }
  if (res->body.empty()) {
    out.response.kind = ServiceResponse::Kind::EmptyResponse;
    return out;
  }
  nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_array()) {
    out.transport_error = true;
    out.error = "malformed response body";
    return out;
  }
  out.response.kind = ServiceResponse::Kind::PerRule;
  for (const auto& item : body) {
    RuleResult r;
    r.id = item.at("ruleId").get<std::string>();
    r.version = item.at("version").get<int>();
    auto parsed = parse_service_result(item.at("result").get<std::string>());
    if (!parsed) {
      out.transport_error = true;
      out.error = "unknown result value in response";
      return out;
    }
    r.result = *parsed;
    out.response.results.push_back(std::move(r));
  }
  return out;
}

}  // namespace rulediff
