#include <httplib.h>

#include "doctest.h"
#include "fixtures.hpp"
#include "reel/codec/file_source.hpp"
#include "reel/codec/synthetic.hpp"
#include "reel/server/http.hpp"

using namespace reel;
using namespace reel::server;
using namespace reel::testing;
using nlohmann::json;

namespace {

const FrameType kType{16, 8, PixelFormat::Rgb8};

struct Running {
  TempDir dir;
  ServerConfig config;
  std::unique_ptr<VodService> service;
  std::unique_ptr<HttpServer> server;
  std::unique_ptr<httplib::Client> client;

  Running() {
    config.data_dir = dir.file("data");
    config.media_dir = dir.path();
    write_file(dir.file("in.tvc"), synthetic_stream(kType, 120, 10, false));
    service = std::make_unique<VodService>(config);
    server = std::make_unique<HttpServer>(*service, "127.0.0.1", 0, 4);
    server->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", server->port());
  }
  ~Running() { server->stop(); }

  httplib::Result post(const std::string& path, const json& body) {
    return client->Post(path, body.dump(), "application/json");
  }
};

json identity_part(std::uint32_t first, std::uint32_t n, bool terminal) {
  NodeTable t;
  std::vector<NodeId> roots;
  for (std::uint32_t f = first; f < first + n; ++f) roots.push_back(t.source("in", f));
  return make_part(t, roots, terminal);
}

}  // namespace

TEST_CASE("create, push, poll and fetch over HTTP") {
  Running r;
  auto res = r.post("/v1/spec", make_create(kType, {{"in", "in.tvc"}}));
  REQUIRE(res);
  REQUIRE(res->status == 201);
  const auto created = json::parse(res->body);
  const std::string id = created["spec_id"];
  CHECK(created["playlist"] == "/vod/" + id + "/playlist.m3u8");

  res = r.post("/v1/spec/" + id + "/part", identity_part(0, 90, false));
  REQUIRE(res->status == 200);
  CHECK(json::parse(res->body)["frames_written"] == 90);
  CHECK(json::parse(res->body)["segments"] == 1);

  res = r.client->Get("/vod/" + id + "/playlist.m3u8");
  REQUIRE(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/vnd.apple.mpegurl");
  CHECK(res->get_header_value("Cache-Control") == "no-cache");
  CHECK(res->body.find("segment-0.tvc") != std::string::npos);
  CHECK(res->body.find("segment-1.tvc") == std::string::npos);

  res = r.client->Get("/vod/" + id + "/segment-0.tvc");
  REQUIRE(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "video/x-tvc");
  CHECK(res->get_header_value("X-Reel-Cache") == "miss");
  const std::vector<std::uint8_t> bytes(res->body.begin(), res->body.end());
  CHECK(decode_all(bytes).size() == 60);
  res = r.client->Get("/vod/" + id + "/segment-0.tvc");
  CHECK(res->get_header_value("X-Reel-Cache") == "hit");

  res = r.client->Get("/vod/" + id + "/segment-1.tvc");
  CHECK(res->status == 404);
  CHECK(res->get_header_value("Retry-After") == "1");
  CHECK(json::parse(res->body)["error"] == "SegmentNotAvailable");

  res = r.client->Get("/v1/spec/" + id + "/status");
  CHECK(json::parse(res->body)["frames_written"] == 90);
  res = r.client->Get("/v1/status");
  REQUIRE(res->status == 200);
  const auto counters = json::parse(res->body);
  CHECK(counters["specs"] == 1);
  CHECK(counters.contains("segment_cache"));
  CHECK(counters.contains("block_cache"));

  res = r.post("/v1/spec/" + id + "/part", identity_part(90, 10, true));
  CHECK(json::parse(res->body)["terminated"] == true);
  res = r.client->Get("/vod/" + id + "/playlist.m3u8");
  CHECK(res->body.find("#EXT-X-ENDLIST") != std::string::npos);

  res = r.client->Delete("/v1/spec/" + id);
  CHECK(res->status == 200);
  res = r.client->Delete("/v1/spec/" + id);
  CHECK(res->status == 404);
  CHECK(json::parse(res->body)["error"] == "UnknownSpec");
}

TEST_CASE("HTTP error bodies") {
  Running r;
  auto res = r.client->Post("/v1/spec", "{nope", "application/json");
  CHECK(res->status == 400);
  CHECK(json::parse(res->body)["error"] == "BadRequest");

  const std::string id = json::parse(r.post("/v1/spec", make_create(kType, {{"in", "in.tvc"}}))->body)["spec_id"];
  NodeTable t;
  const NodeId bad = t.call("crop", {t.source("in", 0), Value(0), Value(0), Value(4), Value(4)});
  res = r.post("/v1/spec/" + id + "/part", make_part(t, {bad}, false));
  CHECK(res->status == 422);
  const auto body = json::parse(res->body);
  CHECK(body["error"] == "TypeError");
  CHECK(body["frame"] == 0);

  res = r.post("/v1/spec/" + id + "/part", json{{"frames", json::array()}, {"start", 7}});
  CHECK(res->status == 409);
  res = r.post("/v1/spec/zzz/part", identity_part(0, 1, false));
  CHECK(res->status == 404);
  res = r.client->Get("/vod/zzz/playlist.m3u8");
  CHECK(res->status == 404);
  res = r.client->Get("/nowhere");
  CHECK(res->status == 404);
  CHECK(json::parse(res->body)["error"] == "NotFound");
}
