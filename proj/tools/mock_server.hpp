#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "genex/backends.hpp"

namespace httplib {
class Server;
}

namespace genex {

/// Local HTTP server speaking the `/v1/score` protocol. Each path prefix maps to a
/// backend: `<prefix>/v1/score` is answered by that backend's scores. Fault
/// injection prefixes wrap the "" backend:
///   /short   one score fewer than allowed
///   /error   HTTP 500
///   /slow    sleeps `slow_delay` before answering
///   /garbage non-JSON body
class MockScoreServer {
 public:
  explicit MockScoreServer(std::map<std::string, BackendPtr> routes,
                           std::chrono::milliseconds slow_delay = std::chrono::milliseconds(500));
  ~MockScoreServer();

  MockScoreServer(const MockScoreServer&) = delete;
  MockScoreServer& operator=(const MockScoreServer&) = delete;

  /// Binds 127.0.0.1 (port 0 picks a free one), starts serving, returns the port.
  int start(int port = 0);
  /// Blocks serving on the calling thread.
  void listen_blocking(const std::string& host, int port);
  void stop();

  std::string url(const std::string& prefix = "") const;
  std::vector<std::string> request_bodies() const;
  void clear_requests();

 private:
  void install_routes();

  std::map<std::string, BackendPtr> routes_;
  std::chrono::milliseconds slow_delay_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::vector<std::string> bodies_;
};

}  // namespace genex
