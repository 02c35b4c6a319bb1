#pragma once

#include <memory>
#include <string>
#include <thread>

#include "reel/server/service.hpp"

namespace reel::server {

/// HTTP/1.1 frontend for a VodService.
///
///   POST   /v1/spec                     create, returns {"spec_id", "playlist"}
///   POST   /v1/spec/{id}/part           push frames
///   DELETE /v1/spec/{id}                delete
///   GET    /v1/spec/{id}/status         spec status JSON
///   GET    /v1/status                   server counters
///   GET    /vod/{id}/playlist.m3u8      event-stream manifest
///   GET    /vod/{id}/segment-{n}.tvc    rendered segment
///
/// Errors carry the ServiceError JSON body and status code.
class HttpServer {
 public:
  HttpServer(VodService& service, std::string bind, std::uint16_t port, std::uint32_t threads = 8);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free one) and serves on a background thread.
  /// Throws std::runtime_error if the address cannot be bound.
  void start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  void bind_port();

  struct Impl;
  std::unique_ptr<Impl> impl_;
  VodService& service_;
  std::string bind_;
  std::uint16_t port_;
  std::thread thread_;
};

}  // namespace reel::server
