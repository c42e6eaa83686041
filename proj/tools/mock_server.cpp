#include "mock_server.hpp"

#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace genex {

MockScoreServer::MockScoreServer(std::map<std::string, BackendPtr> routes, std::chrono::milliseconds slow_delay)
    : routes_(std::move(routes)), slow_delay_(slow_delay), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

MockScoreServer::~MockScoreServer() { stop(); }

void MockScoreServer::install_routes() {
  server_->set_keep_alive_timeout(1);
  server_->Post(R"((.*)/v1/score)", [this](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard lock(mu_);
      bodies_.push_back(req.body);
    }
    std::string prefix = req.matches[1];
    std::string fault;
    for (const char* f : {"/short", "/error", "/slow", "/garbage"}) {
      if (prefix == f) fault = f;
    }
    if (fault == "/error") {
      res.status = 500;
      res.set_content("{\"error\": \"injected\"}", "application/json");
      return;
    }
    if (fault == "/garbage") {
      res.set_content("not json", "text/plain");
      return;
    }
    if (fault == "/slow") std::this_thread::sleep_for(slow_delay_);

    auto route = routes_.find(fault.empty() ? prefix : "");
    if (route == routes_.end()) {
      res.status = 404;
      return;
    }
    ScoreQuery q;
    try {
      auto j = nlohmann::json::parse(req.body);
      q.prompt = j.at("prompt").get<TokenSeq>();
      q.emitted = j.at("emitted").get<TokenSeq>();
      q.allowed = j.at("allowed").get<TokenSeq>();
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
      return;
    }
    auto scores = route->second->score(q);
    if (fault == "/short" && !scores.empty()) scores.pop_back();
    res.set_content(nlohmann::json{{"scores", scores}}.dump(), "application/json");
  });
}

int MockScoreServer::start(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
  } else if (server_->bind_to_port("127.0.0.1", port)) {
    port_ = port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw std::runtime_error("mock server: cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void MockScoreServer::listen_blocking(const std::string& host, int port) {
  port_ = port;
  if (!server_->listen(host, port)) throw std::runtime_error("mock server: cannot listen on " + host);
}

void MockScoreServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockScoreServer::url(const std::string& prefix) const {
  return "http://127.0.0.1:" + std::to_string(port_) + prefix;
}

std::vector<std::string> MockScoreServer::request_bodies() const {
  std::lock_guard lock(mu_);
  return bodies_;
}

void MockScoreServer::clear_requests() {
  std::lock_guard lock(mu_);
  bodies_.clear();
}

}  // namespace genex
