#include "reel/server/http.hpp"

#include <httplib.h>

#include <charconv>

namespace reel::server {

using nlohmann::json;

struct HttpServer::Impl {
  httplib::Server http;
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

template <class F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      if (e.status() == 404 && e.body().contains("retry_after"))
        res.set_header("Retry-After", std::to_string(e.body()["retry_after"].get<int>()));
      send_json(res, e.status(), e.body());
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", "InternalError"}, {"detail", e.what()}});
    }
  };
}

json parse_body(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw ServiceError(400, {{"error", "BadRequest"}, {"detail", "body is not valid JSON"}});
  return j;
}

}  // namespace

HttpServer::HttpServer(VodService& service, std::string bind, std::uint16_t port, std::uint32_t threads)
    : impl_(std::make_unique<Impl>()), service_(service), bind_(std::move(bind)), port_(port) {
  auto& s = impl_->http;
  s.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  s.Post("/v1/spec", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto r = service_.create_spec(parse_body(req));
           send_json(res, 201, {{"spec_id", r.spec_id}, {"playlist", r.playlist_url}});
         }));
  s.Post(R"(/v1/spec/([^/]+)/part)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto r = service_.push_part(req.matches[1], parse_body(req));
           send_json(res, 200,
                     {{"accepted", r.accepted},
                      {"frames_written", r.frames_written},
                      {"terminated", r.terminated},
                      {"segments", r.segments}});
         }));
  s.Delete(R"(/v1/spec/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             service_.delete_spec(req.matches[1]);
             send_json(res, 200, {{"deleted", std::string(req.matches[1])}});
           }));
  s.Get(R"(/v1/spec/([^/]+)/status)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, service_.status(req.matches[1]));
        }));
  s.Get("/v1/status", guarded([this](const httplib::Request&, httplib::Response& res) {
          send_json(res, 200, service_.counters().to_json());
        }));
  s.Get(R"(/vod/([^/]+)/playlist\.m3u8)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          res.set_header("Cache-Control", "no-cache");
          res.set_content(service_.playlist(req.matches[1]), "application/vnd.apple.mpegurl");
        }));
  s.Get(R"(/vod/([^/]+)/segment-(\d+)\.tvc)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const std::string num = req.matches[2];
          std::uint64_t n = 0;
          const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
          if (ec != std::errc() || p != num.data() + num.size())
            throw ServiceError(404, {{"error", "SegmentNotAvailable"}, {"detail", "bad segment number"}});
          const auto r = service_.segment(req.matches[1], n);
          res.set_header("X-Reel-Cache", r.cache_hit ? "hit" : "miss");
          res.set_content(std::string(r.bytes->begin(), r.bytes->end()), "video/x-tvc");
        }));
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_json(res, res.status, {{"error", "NotFound"}, {"detail", "no such endpoint"}});
  });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind_port() {
  auto& s = impl_->http;
  if (port_ == 0) {
    const int p = s.bind_to_any_port(bind_);
    if (p < 0) throw std::runtime_error("cannot bind " + bind_);
    port_ = static_cast<std::uint16_t>(p);
  } else if (!s.bind_to_port(bind_, port_)) {
    throw std::runtime_error("cannot bind " + bind_ + ":" + std::to_string(port_));
  }
}

void HttpServer::start() {
  bind_port();
  thread_ = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
}

void HttpServer::run() {
  bind_port();
  impl_->http.listen_after_bind();
}

void HttpServer::stop() {
  impl_->http.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace reel::server
